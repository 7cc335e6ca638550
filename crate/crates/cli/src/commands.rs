use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use usvpath_core::sim::{
    apply_overrides, compute_metrics, config::parse_override, metrics_csv_fields, run_batch, run_scenario,
    sweep_csv, PlantKind, METRICS_HEADER,
};
use usvpath_core::{ConfigError, GuidanceLaw, ScenarioConfig, SimError, StabilityError};

use crate::plot;
use crate::CommonArgs;

pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_DIVERGENCE: u8 = 2;
pub const EXIT_STABILITY: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let code = match e {
            SimError::Config(_) => EXIT_CONFIG,
            SimError::Geometry(_) | SimError::NonFinite { .. } => EXIT_DIVERGENCE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<StabilityError> for Failure {
    fn from(e: StabilityError) -> Self {
        Self {
            code: EXIT_STABILITY,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

fn load_config(args: &CommonArgs) -> Result<ScenarioConfig, Failure> {
    let base = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    let overrides = args
        .overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()?;
    let config = apply_overrides(&base, &overrides)?;
    Ok(config)
}

fn write(out: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    let path = out.join(name);
    fs::write(&path, contents).map_err(|e| io_failure(&path, e))
}

fn metrics_table_header() -> String {
    format!("scenario,law,{METRICS_HEADER}\n")
}

pub fn run(args: &CommonArgs, verbosity: u8) -> Result<(), Failure> {
    let config = load_config(args)?;
    let log = run_scenario(&config)?;
    let metrics = compute_metrics(&log, &config.sim.metrics);
    write(&args.out, "log.csv", &log.to_csv_string())?;
    let mut table = metrics_table_header();
    let _ = writeln!(table, "{},{},{}", config.name, log.law, metrics_csv_fields(&metrics));
    write(&args.out, "metrics.csv", &table)?;
    if args.emit_plot_script {
        if config.sim.plant == PlantKind::Full {
            write(&args.out, "path.csv", &plot::path_csv(&config)?)?;
        }
        write(&args.out, "plot.gp", &plot::run_script(config.sim.plant == PlantKind::Full))?;
    }
    if verbosity >= 1 {
        println!("{} / {}: {} rows", config.name, log.law, log.len());
        println!("rms |y_e|        {:.4} m", metrics.rms_cross_track);
        println!("max |y_e|        {:.4} m", metrics.max_abs_cross_track);
        println!("post-turn peak   {:.4} m", metrics.overshoot_after_turns);
        match metrics.convergence_time {
            Some(t) => println!("converged at     {t:.2} s"),
            None => println!("converged at     -"),
        }
        println!("steady |y_e|     {:.4} m", metrics.steady_state_cross_track);
    }
    if verbosity >= 2 {
        println!("wrote {}", args.out.display());
    }
    Ok(())
}

fn parse_laws(names: &[String]) -> Result<Vec<GuidanceLaw>, Failure> {
    let laws = names
        .iter()
        .map(|n| n.trim())
        .filter(|n| !n.is_empty())
        .map(GuidanceLaw::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    if laws.is_empty() {
        return Err(ConfigError::invalid("laws", "at least one guidance law is required").into());
    }
    Ok(laws)
}

pub fn compare(args: &CommonArgs, laws: &[String], jobs: usize, verbosity: u8) -> Result<(), Failure> {
    let laws = parse_laws(laws)?;
    let config = load_config(args)?;
    let comparison = usvpath_core::sim::compare(&config, &laws, jobs)?;
    for log in &comparison.logs {
        write(&args.out, &format!("log_{}.csv", log.law), &log.to_csv_string())?;
    }
    write(&args.out, "comparison.csv", &comparison.to_csv_string())?;
    if args.emit_plot_script {
        if config.sim.plant == PlantKind::Full {
            write(&args.out, "path.csv", &plot::path_csv(&config)?)?;
        }
        write(&args.out, "plot.gp", &plot::compare_script(&laws, config.sim.plant == PlantKind::Full))?;
    }
    if verbosity >= 1 {
        print!("{}", comparison.summary_table());
    }
    Ok(())
}

pub fn sweep(args: &CommonArgs, key: &str, values: &[String], jobs: usize, verbosity: u8) -> Result<(), Failure> {
    let config = load_config(args)?;
    let values: Vec<String> = values.iter().map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
    let rows = usvpath_core::sim::sweep(&config, key, &values, jobs)?;
    let csv = sweep_csv(key, &rows);
    write(&args.out, "sweep.csv", &csv)?;
    if args.emit_plot_script {
        write(&args.out, "plot.gp", &plot::sweep_script(key))?;
    }
    if verbosity >= 1 {
        println!("{:<16} {:>10} {:>10} {:>10} {:>10}", key.rsplit('.').next().unwrap_or(key), "rms [m]", "ovs [m]", "t_conv [s]", "steady [m]");
        for row in &rows {
            let m = &row.metrics;
            let conv = m.convergence_time.map(|t| format!("{t:.2}")).unwrap_or_else(|| "-".into());
            println!(
                "{:<16} {:>10.4} {:>10.4} {:>10} {:>10.4}",
                row.value, m.rms_cross_track, m.overshoot_after_turns, conv, m.steady_state_cross_track
            );
        }
    }
    Ok(())
}

pub fn verify_stability(args: &CommonArgs, jobs: usize, verbosity: u8) -> Result<(), Failure> {
    let mut config = load_config(args)?;
    config.sim.plant = PlantKind::Nominal;
    config.validate()?;
    let grid = &config.sim.stability;
    let cases: Vec<(f64, f64)> = grid
        .true_betas
        .iter()
        .flat_map(|b| grid.initial_cross_tracks.iter().map(move |y| (*b, *y)))
        .collect();
    if cases.is_empty() {
        return Err(ConfigError::invalid("sim.stability", "needs at least one true_beta and one initial_cross_track").into());
    }
    let configs: Vec<ScenarioConfig> = cases
        .iter()
        .map(|(beta, y0)| {
            let mut c = config.clone();
            c.sim.nominal.true_beta = *beta;
            c.sim.nominal.initial_cross_track = *y0;
            c
        })
        .collect();

    let criteria = grid.criteria;
    let mut csv = String::from(
        "true_beta,initial_cross_track,samples,decrease_fraction,decay_rate,decay_r_squared,final_cross_track,final_field_error,final_beta_error,passed\n",
    );
    let mut failed = Vec::new();
    for ((beta, y0), log) in cases.iter().zip(run_batch(&configs, jobs)) {
        let report = usvpath_core::sim::verify_stability(&log?, &criteria)?;
        let fit = report.decay;
        let _ = writeln!(
            csv,
            "{beta:?},{y0:?},{},{:?},{},{},{:?},{:?},{:?},{}",
            report.samples,
            report.decrease_fraction(),
            fit.map(|f| format!("{:?}", f.rate)).unwrap_or_default(),
            fit.map(|f| format!("{:?}", f.r_squared)).unwrap_or_default(),
            report.final_cross_track,
            report.final_field_error,
            report.final_beta_error,
            report.passed()
        );
        if verbosity >= 2 || (verbosity >= 1 && !report.passed()) {
            println!("-- beta = {beta}, y_e(0) = {y0}\n{report}\n");
        }
        if !report.passed() {
            failed.push(format!("beta = {beta}, y_e(0) = {y0}: {}", report.failures().join("; ")));
        }
    }
    write(&args.out, "stability.csv", &csv)?;
    if failed.is_empty() {
        if verbosity >= 1 {
            println!("stability check passed for {} runs", cases.len());
        }
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_STABILITY,
            message: format!("stability check failed for {} of {} runs:\n  {}", failed.len(), cases.len(), failed.join("\n  ")),
        })
    }
}
