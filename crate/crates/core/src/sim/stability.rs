//! Numerical checks of the closed-loop stability claim along logged trajectories.
//!
//! The Lyapunov candidate is `V = ½(d - r_v)² + (U/2γ)·β̃²` with `β̃ = β - β̂`. Along the
//! nominal dynamics `V̇ = -U(d - r_v)²/√(Δ² + (d - r_v)²) ≤ 0`, so a correct loop shows
//! `V` non-increasing, an exponentially decaying `|d - r_v|`, and `β̂ → β`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::StabilityError;
use crate::sim::log::SimLog;
use crate::sim::metrics::{fit_exponential_envelope, ExpFit};

pub const MIN_SAMPLES: usize = 50;

pub fn lyapunov_value(d: f64, r_v: f64, beta_err: f64, speed: f64, gain: f64) -> f64 {
    let e = d - r_v;
    0.5 * e * e + speed / (2.0 * gain) * beta_err * beta_err
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityCriteria {
    /// Required fraction of non-equilibrium steps with non-increasing `V`.
    pub min_decrease_fraction: f64,
    /// A step counts as non-increasing if `V_{k+1} - V_k ≤ tol·max(V_k, 1)`.
    pub decrease_tolerance: f64,
    pub max_final_field_error: f64,
    pub max_final_beta_error: f64,
    /// Envelope samples below this are excluded from the decay fit.
    pub fit_floor: f64,
}

impl Default for StabilityCriteria {
    fn default() -> Self {
        Self {
            min_decrease_fraction: 0.99,
            decrease_tolerance: 1e-12,
            max_final_field_error: 0.1,
            max_final_beta_error: 0.02,
            fit_floor: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub samples: usize,
    /// Steps where the state was off equilibrium.
    pub checked_steps: usize,
    pub non_increasing_steps: usize,
    pub decay: Option<ExpFit>,
    pub max_field_error: f64,
    pub final_cross_track: f64,
    pub final_field_error: f64,
    pub final_beta_error: f64,
    failures: Vec<String>,
}

impl StabilityReport {
    /// Fraction of off-equilibrium steps with non-increasing `V`; 1 when there are none.
    pub fn decrease_fraction(&self) -> f64 {
        if self.checked_steps == 0 {
            1.0
        } else {
            self.non_increasing_steps as f64 / self.checked_steps as f64
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples                 {}", self.samples)?;
        writeln!(
            f,
            "V non-increasing        {:.4} ({}/{} steps)",
            self.decrease_fraction(),
            self.non_increasing_steps,
            self.checked_steps
        )?;
        match &self.decay {
            Some(fit) => writeln!(
                f,
                "decay rate lambda       {:.6} 1/s (R^2 = {:.4}, {} samples)",
                fit.rate, fit.r_squared, fit.samples
            )?,
            None => writeln!(f, "decay rate lambda       n/a (no transient above floor)")?,
        }
        writeln!(f, "final |y_e|             {:.3e} m", self.final_cross_track.abs())?;
        writeln!(f, "final |d - r_v|         {:.3e} m", self.final_field_error.abs())?;
        writeln!(f, "final |beta - beta_hat| {:.3e} rad", self.final_beta_error.abs())?;
        if self.passed() {
            write!(f, "result                  PASS")
        } else {
            write!(f, "result                  FAIL: {}", self.failures.join("; "))
        }
    }
}

pub fn verify_stability(log: &SimLog, criteria: &StabilityCriteria) -> Result<StabilityReport, StabilityError> {
    let rows = &log.rows;
    if rows.len() < MIN_SAMPLES {
        return Err(StabilityError::InsufficientData {
            samples: rows.len(),
            required: MIN_SAMPLES,
        });
    }

    let mut checked_steps = 0;
    let mut non_increasing_steps = 0;
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let at_equilibrium = a.field_error == 0.0 && a.beta == a.beta_hat;
        if at_equilibrium {
            continue;
        }
        checked_steps += 1;
        if b.lyapunov - a.lyapunov <= criteria.decrease_tolerance * a.lyapunov.max(1.0) {
            non_increasing_steps += 1;
        }
    }

    let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let field: Vec<f64> = rows.iter().map(|r| r.field_error).collect();
    let decay = fit_exponential_envelope(&times, &field, criteria.fit_floor);
    let max_field_error = field.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let last = rows[rows.len() - 1];

    let mut report = StabilityReport {
        samples: rows.len(),
        checked_steps,
        non_increasing_steps,
        decay,
        max_field_error,
        final_cross_track: last.cross_track,
        final_field_error: last.field_error,
        final_beta_error: last.beta - last.beta_hat,
        failures: Vec::new(),
    };

    let mut failures = Vec::new();
    if report.decrease_fraction() < criteria.min_decrease_fraction {
        failures.push(format!(
            "V non-increasing on {:.4} of steps (< {})",
            report.decrease_fraction(),
            criteria.min_decrease_fraction
        ));
    }
    match decay {
        Some(fit) if !(fit.rate > 0.0) => failures.push(format!("decay rate {:.4e} is not positive", fit.rate)),
        None if max_field_error > criteria.fit_floor => failures.push("no decay fit possible".to_string()),
        _ => {}
    }
    if !(report.final_field_error.abs() < criteria.max_final_field_error) {
        failures.push(format!(
            "final |d - r_v| = {:.3e} >= {}",
            report.final_field_error.abs(),
            criteria.max_final_field_error
        ));
    }
    if !(report.final_beta_error.abs() < criteria.max_final_beta_error) {
        failures.push(format!(
            "final |beta error| = {:.3e} >= {}",
            report.final_beta_error.abs(),
            criteria.max_final_beta_error
        ));
    }
    report.failures = failures;
    Ok(report)
}
