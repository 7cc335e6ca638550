//! Scalar tracking metrics derived from a [`SimLog`].

use crate::sim::config::MetricsSettings;
use crate::sim::log::SimLog;

/// Least-squares fit of `log g(t) = log C - λt`, where `g` is the running upper
/// envelope `g(t_i) = max_{j ≥ i} |x_j|`. For a monotone decay the envelope is the
/// signal itself; for an oscillating decay it bridges the zero crossings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    /// Decay rate λ, 1/s. Negative means growth.
    pub rate: f64,
    /// Envelope amplitude C at `t = 0`.
    pub amplitude: f64,
    /// Coefficient of determination of the log-linear fit.
    pub r_squared: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rms_cross_track: f64,
    pub max_abs_cross_track: f64,
    /// Largest |y_e| within the overshoot window after any segment switch.
    pub overshoot_after_turns: f64,
    /// First time after which |y_e| stays below ε for the dwell window; `None` if the
    /// run never converged.
    pub convergence_time: Option<f64>,
    /// ∫|y_e| dt by the trapezoid rule.
    pub iae: f64,
    /// Mean |y_e| over the trailing steady-state window.
    pub steady_state_cross_track: f64,
    pub decay: Option<ExpFit>,
}

pub fn fit_exponential_envelope(times: &[f64], values: &[f64], floor: f64) -> Option<ExpFit> {
    assert_eq!(times.len(), values.len());
    let mut envelope = vec![0.0; values.len()];
    let mut running = 0.0f64;
    for i in (0..values.len()).rev() {
        running = running.max(values[i].abs());
        envelope[i] = running;
    }
    let points: Vec<(f64, f64)> = times
        .iter()
        .zip(&envelope)
        .filter(|(_, g)| **g > floor)
        .map(|(t, g)| (*t, g.ln()))
        .collect();
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mean_t = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let stt: f64 = points.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    if stt == 0.0 {
        return None;
    }
    let sty: f64 = points.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    let slope = sty / stt;
    let intercept = mean_y - slope * mean_t;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(ExpFit {
        rate: -slope,
        amplitude: intercept.exp(),
        r_squared,
        samples: n,
    })
}

pub fn compute_metrics(log: &SimLog, settings: &MetricsSettings) -> Metrics {
    let rows = &log.rows;
    if rows.is_empty() {
        return Metrics {
            rms_cross_track: 0.0,
            max_abs_cross_track: 0.0,
            overshoot_after_turns: 0.0,
            convergence_time: None,
            iae: 0.0,
            steady_state_cross_track: 0.0,
            decay: None,
        };
    }
    let abs: Vec<f64> = rows.iter().map(|r| r.cross_track.abs()).collect();
    let n = rows.len() as f64;
    let rms_cross_track = (abs.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    let max_abs_cross_track = abs.iter().copied().fold(0.0, f64::max);

    let iae = rows
        .windows(2)
        .zip(abs.windows(2))
        .map(|(r, e)| 0.5 * (e[0] + e[1]) * (r[1].t - r[0].t))
        .sum();

    let mut overshoot_after_turns = 0.0f64;
    for i in 1..rows.len() {
        if rows[i].segment != rows[i - 1].segment {
            let until = rows[i].t + settings.overshoot_window;
            let peak = rows[i..]
                .iter()
                .zip(&abs[i..])
                .take_while(|(r, _)| r.t <= until)
                .map(|(_, e)| *e)
                .fold(0.0, f64::max);
            overshoot_after_turns = overshoot_after_turns.max(peak);
        }
    }

    let t_end = rows[rows.len() - 1].t;
    let mut convergence_time = None;
    let mut run_start: Option<usize> = None;
    for j in 0..rows.len() {
        if abs[j] < settings.convergence_epsilon {
            let s = *run_start.get_or_insert(j);
            if rows[j].t - rows[s].t >= settings.dwell {
                convergence_time = Some(rows[s].t);
                break;
            }
        } else {
            run_start = None;
        }
    }

    let steady_from = t_end - settings.steady_window;
    let steady: Vec<f64> = rows
        .iter()
        .zip(&abs)
        .filter(|(r, _)| r.t >= steady_from)
        .map(|(_, e)| *e)
        .collect();
    let steady_state_cross_track = steady.iter().sum::<f64>() / steady.len() as f64;

    let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let decay = fit_exponential_envelope(&times, &abs, settings.fit_floor);

    Metrics {
        rms_cross_track,
        max_abs_cross_track,
        overshoot_after_turns,
        convergence_time,
        iae,
        steady_state_cross_track,
        decay,
    }
}
