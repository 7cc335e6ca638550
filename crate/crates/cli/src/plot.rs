//! Gnuplot scripts that read the CSV files written next to them.

use std::fmt::Write as _;

use usvpath_core::{ConfigError, GuidanceLaw, ScenarioConfig};

const PREAMBLE: &str = "set datafile separator ','\nset key autotitle columnhead\nset grid\nset terminal pngcairo size 1000,700\n";

/// Reference path sampled every 0.5 m.
pub fn path_csv(config: &ScenarioConfig) -> Result<String, ConfigError> {
    let path = config.path.build()?;
    let mut out = String::from("north,east\n");
    for seg in path.segments() {
        let len = seg.length();
        let n = (len / 0.5).ceil().max(1.0) as usize;
        for i in 0..=n {
            let (p, _) = seg.point_at(len * i as f64 / n as f64);
            let _ = writeln!(out, "{:?},{:?}", p[0], p[1]);
        }
    }
    Ok(out)
}

pub fn run_script(with_path: bool) -> String {
    let mut s = String::from(PREAMBLE);
    s.push_str("set output 'trajectory.png'\nset size ratio -1\nset xlabel 'east [m]'\nset ylabel 'north [m]'\n");
    if with_path {
        s.push_str("plot 'path.csv' using 'east':'north' with lines dashtype 2 title 'path', \\\n     'log.csv' using 'east':'north' with lines title 'vehicle'\n");
    } else {
        s.push_str("plot 'log.csv' using 'east':'north' with lines title 'vehicle'\n");
    }
    s.push_str("set output 'cross_track.png'\nset size noratio\nset xlabel 't [s]'\nset ylabel 'y_e [m]'\n");
    s.push_str("plot 'log.csv' using 't':'y_e' with lines title 'y_e'\n");
    s.push_str("set output 'sideslip.png'\nset ylabel '[rad]'\n");
    s.push_str("plot 'log.csv' using 't':'beta' with lines title 'beta', 'log.csv' using 't':'beta_hat' with lines title 'beta_hat'\n");
    s
}

pub fn compare_script(laws: &[GuidanceLaw], with_path: bool) -> String {
    let mut s = String::from(PREAMBLE);
    let series = |col_x: &str, col_y: &str| {
        laws.iter()
            .map(|l| format!("'log_{l}.csv' using '{col_x}':'{col_y}' with lines title '{l}'"))
            .collect::<Vec<_>>()
            .join(", \\\n     ")
    };
    s.push_str("set output 'trajectory.png'\nset size ratio -1\nset xlabel 'east [m]'\nset ylabel 'north [m]'\nplot ");
    if with_path {
        s.push_str("'path.csv' using 'east':'north' with lines dashtype 2 title 'path', \\\n     ");
    }
    s.push_str(&series("east", "north"));
    s.push_str("\nset output 'cross_track.png'\nset size noratio\nset xlabel 't [s]'\nset ylabel 'y_e [m]'\nplot ");
    s.push_str(&series("t", "y_e"));
    s.push('\n');
    s
}

pub fn sweep_script(key: &str) -> String {
    let mut s = String::from(PREAMBLE);
    let _ = write!(
        s,
        "set output 'sweep.png'\nset xlabel '{key}'\nset ylabel '[m]'\nplot 'sweep.csv' using 1:'rms_cross_track' with linespoints title 'rms y_e', \\\n     'sweep.csv' using 1:'overshoot_after_turns' with linespoints title 'overshoot'\n"
    );
    s
}
