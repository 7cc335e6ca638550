//! Reduced closed loop used for Lyapunov checks.
//!
//! Heading is assumed to track `ψ_d` exactly and the speed `U` is constant, so the
//! only states are the field error `e = y_e + (r - r_v)` and the estimate `β̂`:
//!
//! ```text
//! ė  = U·(Δ·β̃ - e) / √(Δ² + e²)
//! β̂̇ = γ·Δ·e / √(Δ² + e²)
//! ```
//!
//! with `β̃ = β - β̂` and a constant true sideslip `β`.

use std::f64::consts::FRAC_PI_2;

use crate::error::SimError;
use crate::guidance::{vector_field_offset, GuidanceLaw, GuidanceParams};
use crate::integrate::rk4_step;
use crate::sim::config::ScenarioConfig;
use crate::sim::log::{LogRow, SimLog};
use crate::sim::stability::lyapunov_value;
use crate::angle::wrap_angle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NominalInputs {
    pub speed: f64,
    pub lookahead: f64,
    pub gain: f64,
    pub beta_max: f64,
}

impl NominalInputs {
    pub fn from_params(speed: f64, params: &GuidanceParams) -> Self {
        Self {
            speed,
            lookahead: params.lookahead_delta,
            gain: params.adaptation_gain,
            beta_max: params.beta_max,
        }
    }
}

/// `(ė, β̂̇)` for field error `error` and estimation error `beta_err = β - β̂`.
pub fn nominal_rates(error: f64, beta_err: f64, inputs: &NominalInputs) -> (f64, f64) {
    let delta = inputs.lookahead;
    let s = delta.hypot(error);
    (
        inputs.speed * (delta * beta_err - error) / s,
        inputs.gain * delta * error / s,
    )
}

/// One RK4 step of the reduced loop; `β̂` is clamped to `±β_max` afterwards.
pub fn nominal_system_step(error: f64, beta_hat: f64, true_beta: f64, inputs: &NominalInputs, dt: f64) -> (f64, f64) {
    let f = |_t: f64, x: &[f64; 2]| {
        let (e_dot, b_dot) = nominal_rates(x[0], true_beta - x[1], inputs);
        [e_dot, b_dot]
    };
    let [e, b] = rk4_step(f, 0.0, &[error, beta_hat], dt);
    (e, b.clamp(-inputs.beta_max, inputs.beta_max))
}

/// Runs the reduced loop from `config.sim.nominal`.
pub fn run_nominal(config: &ScenarioConfig) -> Result<SimLog, SimError> {
    let nominal = &config.sim.nominal;
    let params = &config.guidance.params;
    let inputs = NominalInputs::from_params(nominal.speed, params);
    let dt = config.sim.dt;
    let straight = nominal.arc_radius.is_none();
    let r = nominal.arc_radius.unwrap_or(f64::INFINITY);
    let sign = nominal.direction.sign();
    let offset = if straight { 0.0 } else { sign * vector_field_offset(r, params)? };
    let r_v = r - sign * offset;

    let mut log = SimLog::new(config.name.clone(), GuidanceLaw::Vfalos, dt);
    let mut error = nominal.initial_cross_track + offset;
    let mut beta_hat = nominal.initial_beta_hat;
    // Azimuth around the centre (arc) or distance travelled (straight).
    let mut progress: f64 = 0.0;
    let beta = nominal.true_beta;

    for k in 0..=config.sim.steps() {
        let t = k as f64 * dt;
        if !(error.is_finite() && beta_hat.is_finite()) {
            return Err(SimError::NonFinite {
                quantity: "field error",
                time: t,
            });
        }
        let y_e = error - offset;
        let relative = (error / inputs.lookahead).atan();
        let (north, east, gamma_p, d) = if straight {
            (progress, y_e, 0.0, None)
        } else {
            let d = r + sign * y_e;
            (d * progress.cos(), d * progress.sin(), progress - sign * FRAC_PI_2, Some(d))
        };
        let psi_d = wrap_angle(gamma_p - beta_hat - relative);
        let lyapunov = match d {
            Some(d) => lyapunov_value(sign * d, sign * r_v, beta - beta_hat, inputs.speed, inputs.gain),
            None => lyapunov_value(error, 0.0, beta - beta_hat, inputs.speed, inputs.gain),
        };
        log.rows.push(LogRow {
            t,
            north,
            east,
            yaw: psi_d,
            surge_u: inputs.speed * beta.cos(),
            sway_v: inputs.speed * beta.sin(),
            yaw_rate_r: 0.0,
            cross_track: y_e,
            dist_to_center: d,
            field_error: error,
            beta,
            beta_hat,
            psi_d,
            u_d: inputs.speed,
            tau_u: 0.0,
            tau_r: 0.0,
            f1: 0.0,
            f2: 0.0,
            segment: 0,
            lyapunov,
        });

        let along_speed = inputs.speed * (beta - beta_hat - relative).cos();
        progress += match d {
            Some(d) if d > 0.0 => -sign * dt * along_speed / d,
            Some(_) => 0.0,
            None => dt * along_speed,
        };
        (error, beta_hat) = nominal_system_step(error, beta_hat, beta, &inputs, dt);
    }
    Ok(log)
}
