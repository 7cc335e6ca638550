//! Parallel runs. Results always come back in input order, so output does not depend
//! on the number of worker threads.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{ConfigError, SimError};
use crate::guidance::GuidanceLaw;
use crate::sim::config::{apply_overrides, ScenarioConfig};
use crate::sim::log::{fmt_f64, SimLog};
use crate::sim::metrics::{compute_metrics, Metrics};
use crate::sim::runner::run_scenario;

/// Runs every config on a pool of `jobs` threads (`0` lets rayon choose).
pub fn run_batch(configs: &[ScenarioConfig], jobs: usize) -> Vec<Result<SimLog, SimError>> {
    let work = || configs.par_iter().map(run_scenario).collect();
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => configs.iter().map(run_scenario).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub law: GuidanceLaw,
    pub baseline: bool,
    pub metrics: Metrics,
    /// 1 is best. Ties share the better rank.
    pub rank_rms: usize,
    pub rank_overshoot: usize,
    /// Runs that never converged rank after all that did.
    pub rank_convergence: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub logs: Vec<SimLog>,
    pub rows: Vec<ComparisonRow>,
}

/// Runs `config` once per law, with everything else identical.
pub fn compare(config: &ScenarioConfig, laws: &[GuidanceLaw], jobs: usize) -> Result<Comparison, SimError> {
    if laws.is_empty() {
        return Err(ConfigError::invalid("laws", "at least one guidance law is required").into());
    }
    let configs: Vec<ScenarioConfig> = laws
        .iter()
        .map(|law| {
            let mut c = config.clone();
            c.guidance.law = *law;
            c
        })
        .collect();
    let logs = run_batch(&configs, jobs).into_iter().collect::<Result<Vec<_>, _>>()?;
    let metrics: Vec<Metrics> = logs.iter().map(|l| compute_metrics(l, &config.sim.metrics)).collect();

    let rms: Vec<f64> = metrics.iter().map(|m| m.rms_cross_track).collect();
    let overshoot: Vec<f64> = metrics.iter().map(|m| m.overshoot_after_turns).collect();
    let convergence: Vec<f64> = metrics
        .iter()
        .map(|m| m.convergence_time.unwrap_or(f64::INFINITY))
        .collect();
    let rows = laws
        .iter()
        .zip(&metrics)
        .enumerate()
        .map(|(i, (law, m))| ComparisonRow {
            law: *law,
            baseline: law.is_baseline(),
            metrics: *m,
            rank_rms: rank(&rms, i),
            rank_overshoot: rank(&overshoot, i),
            rank_convergence: rank(&convergence, i),
        })
        .collect();
    Ok(Comparison { logs, rows })
}

fn rank(values: &[f64], i: usize) -> usize {
    1 + values.iter().filter(|v| v.total_cmp(&values[i]).is_lt()).count()
}

pub const METRICS_HEADER: &str =
    "rms_cross_track,max_abs_cross_track,overshoot_after_turns,convergence_time,iae,steady_state_cross_track,decay_rate,decay_r_squared";

/// Comma-separated metric values matching [`METRICS_HEADER`]; missing values are empty.
pub fn metrics_csv_fields(m: &Metrics) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{}",
        fmt_f64(m.rms_cross_track),
        fmt_f64(m.max_abs_cross_track),
        fmt_f64(m.overshoot_after_turns),
        opt(m.convergence_time),
        fmt_f64(m.iae),
        fmt_f64(m.steady_state_cross_track),
        opt(m.decay.map(|d| d.rate)),
        opt(m.decay.map(|d| d.r_squared)),
    )
}

impl Comparison {
    pub fn to_csv_string(&self) -> String {
        let mut out = format!("law,baseline,{METRICS_HEADER},rank_rms,rank_overshoot,rank_convergence\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.law,
                row.baseline,
                metrics_csv_fields(&row.metrics),
                row.rank_rms,
                row.rank_overshoot,
                row.rank_convergence
            );
        }
        out
    }

    /// Fixed-width table for terminal output.
    pub fn summary_table(&self) -> String {
        let mut out = format!(
            "{:<8} {:>9} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
            "law", "rms [m]", "max [m]", "ovs [m]", "t_conv [s]", "iae [m s]", "steady [m]"
        );
        for row in &self.rows {
            let m = &row.metrics;
            let conv = m.convergence_time.map(|t| format!("{t:.2}")).unwrap_or_else(|| "-".into());
            let tag = if row.baseline { "*" } else { "" };
            let _ = writeln!(
                out,
                "{:<8} {:>9.4} {:>10.4} {:>10.4} {:>10} {:>10.3} {:>10.4}",
                format!("{}{tag}", row.law),
                m.rms_cross_track,
                m.max_abs_cross_track,
                m.overshoot_after_turns,
                conv,
                m.iae,
                m.steady_state_cross_track
            );
        }
        out.push_str("* baseline law\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub metrics: Metrics,
}

/// Runs `config` once per value of the dotted parameter `key`.
pub fn sweep(config: &ScenarioConfig, key: &str, values: &[String], jobs: usize) -> Result<Vec<SweepRow>, SimError> {
    if values.is_empty() {
        return Err(ConfigError::invalid("sweep.values", "at least one value is required").into());
    }
    let configs = values
        .iter()
        .map(|v| apply_overrides(config, &[(key.to_string(), v.clone())]))
        .collect::<Result<Vec<_>, _>>()?;
    run_batch(&configs, jobs)
        .into_iter()
        .zip(values.iter().zip(&configs))
        .map(|(log, (value, cfg))| {
            Ok(SweepRow {
                value: value.clone(),
                metrics: compute_metrics(&log?, &cfg.sim.metrics),
            })
        })
        .collect()
}

pub fn sweep_csv(key: &str, rows: &[SweepRow]) -> String {
    let mut out = format!("{key},{METRICS_HEADER}\n");
    for row in rows {
        let _ = writeln!(out, "{},{}", csv_quote(&row.value), metrics_csv_fields(&row.metrics));
    }
    out
}

fn csv_quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
