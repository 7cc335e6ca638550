//! Inner-loop heading and surge-speed controllers.

use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Symmetric output saturation.
    pub output_limit: f64,
    /// Anti-windup clamp on the accumulated error.
    pub integral_limit: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64, output_limit: f64, integral_limit: f64) -> Self {
        Self {
            kp,
            ki,
            kd,
            output_limit,
            integral_limit,
        }
    }

    pub fn validate(&self, name: &str) -> Result<(), ConfigError> {
        for (field, value) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ConfigError::invalid(format!("{name}.{field}"), "must be finite and >= 0"));
            }
        }
        for (field, value) in [("output_limit", self.output_limit), ("integral_limit", self.integral_limit)] {
            if !(value > 0.0) {
                return Err(ConfigError::invalid(format!("{name}.{field}"), "must be > 0"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControllerState {
    pub heading_integral: f64,
    pub speed_integral: f64,
    pub previous_heading_error: f64,
    pub previous_speed_error: f64,
}

/// Heading PID with the derivative taken on the measured yaw rate:
/// `τ_r = kp·e + ki·∫e - kd·r`, `e = wrap(ψ_d - ψ)`.
pub fn heading_control(
    psi_d: f64,
    psi: f64,
    yaw_rate_r: f64,
    state: &ControllerState,
    gains: &PidGains,
    dt: f64,
) -> (f64, ControllerState) {
    let error = wrap_angle(psi_d - psi);
    let integral = (state.heading_integral + error * dt).clamp(-gains.integral_limit, gains.integral_limit);
    let tau_r = gains.kp * error + gains.ki * integral - gains.kd * yaw_rate_r;
    let next = ControllerState {
        heading_integral: integral,
        previous_heading_error: error,
        ..*state
    };
    (saturate(tau_r, gains.output_limit), next)
}

/// Surge-speed PI. `kd` is not used by this loop. With `allow_reverse` unset the
/// output is kept non-negative.
pub fn speed_control(
    u_d: f64,
    u: f64,
    state: &ControllerState,
    gains: &PidGains,
    dt: f64,
    allow_reverse: bool,
) -> (f64, ControllerState) {
    let error = u_d - u;
    let integral = (state.speed_integral + error * dt).clamp(-gains.integral_limit, gains.integral_limit);
    let mut tau_u = saturate(gains.kp * error + gains.ki * integral, gains.output_limit);
    if !allow_reverse {
        tau_u = tau_u.max(0.0);
    }
    let next = ControllerState {
        speed_integral: integral,
        previous_speed_error: error,
        ..*state
    };
    (tau_u, next)
}

fn saturate(value: f64, limit: f64) -> f64 {
    value.clamp(-limit, limit)
}

/// Gains for both loops plus the reverse-thrust switch, as stored in a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlConfig {
    pub heading: PidGains,
    pub speed: PidGains,
    pub allow_reverse: bool,
}

impl Default for ControlConfig {
    // Tuned on the default vessel in closed loop with the guidance laws.
    fn default() -> Self {
        Self {
            heading: PidGains::new(30.0, 1.0, 24.0, 20.0, 0.5),
            speed: PidGains::new(60.0, 15.0, 0.0, 80.0, 5.0),
            allow_reverse: false,
        }
    }
}

impl ControlConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.heading.validate("control.heading")?;
        self.speed.validate("control.speed")
    }
}
