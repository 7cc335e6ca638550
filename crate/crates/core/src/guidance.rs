//! Line-of-sight guidance laws.
//!
//! All laws share the form `ψ_d = γ_p - β̂ - atan(e/Δ)` and differ in what the error
//! `e` is and how the bias term evolves:
//!
//! | law      | error `e`                     | bias                                 |
//! |----------|-------------------------------|--------------------------------------|
//! | `los`    | `y_e`                         | none                                 |
//! | `alos`   | `y_e`                         | `β̂̇ = γΔe/√(Δ²+e²)`                  |
//! | `vfalos` | `y_e + (r - r_v)` on turns    | `β̂̇ = γΔe/√(Δ²+e²)`                  |
//! | `vfilos` | `y_e + (r - r_v)` on turns    | integral of `e` inside the `atan`    |
//! | `tlos`   | `y_e`, with `Δ = Δ(y_e)`      | none                                 |
//!
//! `r_v` is the vector-field radius, a slightly shrunken copy of the path radius that
//! pulls the vehicle towards the inside of a turn.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::{ConfigError, GeometryError};
use crate::path::{ArcDirection, Path, PathSegment, ProjectionResult, TurnRadius};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuidanceLaw {
    Los,
    Alos,
    #[default]
    Vfalos,
    Vfilos,
    Tlos,
}

impl GuidanceLaw {
    pub const ALL: [GuidanceLaw; 5] = [
        GuidanceLaw::Los,
        GuidanceLaw::Alos,
        GuidanceLaw::Vfalos,
        GuidanceLaw::Vfilos,
        GuidanceLaw::Tlos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GuidanceLaw::Los => "los",
            GuidanceLaw::Alos => "alos",
            GuidanceLaw::Vfalos => "vfalos",
            GuidanceLaw::Vfilos => "vfilos",
            GuidanceLaw::Tlos => "tlos",
        }
    }

    /// VFILOS and TLOS are standard-form baselines, not the adaptive law under study.
    pub fn is_baseline(self) -> bool {
        matches!(self, GuidanceLaw::Vfilos | GuidanceLaw::Tlos)
    }
}

impl fmt::Display for GuidanceLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GuidanceLaw {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GuidanceLaw::ALL
            .into_iter()
            .find(|law| law.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| ConfigError::UnknownLaw(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GuidanceParams {
    /// Look-ahead distance Δ, meters.
    pub lookahead_delta: f64,
    /// Adaptation gain γ, 1/s.
    pub adaptation_gain: f64,
    /// Bound on |β̂|, radians.
    pub beta_max: f64,
    /// Vector-field shaping gain k, 1/m.
    pub vf_k: f64,
    /// Vector-field minimum radius r_min, meters. Tighter turns fall back to ALOS.
    pub vf_r_min: f64,
    /// Speed law: maximum allowed cross-track error, meters.
    pub y_max: f64,
    /// Speed law: maximum allowed course error, radians.
    pub chi_max: f64,
    pub u_max: f64,
    pub u_min: f64,
    /// TLOS look-ahead bounds and decay rate (1/m).
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_decay: f64,
    /// ILOS integral gain σ, 1/s.
    pub integral_gain: f64,
    /// ILOS anti-windup bound on the integral state, meters.
    pub integral_limit: f64,
    /// `None` takes the turn radius from the active segment. `Some(s)` estimates it
    /// from the projection point and the path point `s` meters ahead.
    pub radius_lookahead: Option<f64>,
}

impl Default for GuidanceParams {
    fn default() -> Self {
        Self {
            lookahead_delta: 5.0,
            adaptation_gain: 0.05,
            beta_max: FRAC_PI_4,
            vf_k: 1.0,
            vf_r_min: 5.0,
            y_max: 10.0,
            chi_max: FRAC_PI_2,
            u_max: 1.2,
            u_min: 0.3,
            delta_min: 3.0,
            delta_max: 10.0,
            delta_decay: 0.5,
            integral_gain: 0.2,
            integral_limit: 20.0,
            radius_lookahead: None,
        }
    }
}

impl GuidanceParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.check(true)
    }

    /// Like [`validate`](Self::validate) but admits a negative adaptation gain, so a
    /// deliberately destabilised loop can be simulated and shown to fail.
    pub fn validate_allow_negative_gain(&self) -> Result<(), ConfigError> {
        self.check(false)
    }

    fn check(&self, positive_gain: bool) -> Result<(), ConfigError> {
        let positive = [
            ("guidance.lookahead_delta", self.lookahead_delta),
            ("guidance.beta_max", self.beta_max),
            ("guidance.vf_k", self.vf_k),
            ("guidance.vf_r_min", self.vf_r_min),
            ("guidance.y_max", self.y_max),
            ("guidance.chi_max", self.chi_max),
            ("guidance.u_max", self.u_max),
            ("guidance.delta_min", self.delta_min),
            ("guidance.delta_max", self.delta_max),
            ("guidance.delta_decay", self.delta_decay),
            ("guidance.integral_gain", self.integral_gain),
            ("guidance.integral_limit", self.integral_limit),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::invalid(name, "must be finite and > 0"));
            }
        }
        let gain = self.adaptation_gain;
        if !gain.is_finite() || gain == 0.0 || (positive_gain && gain < 0.0) {
            return Err(ConfigError::invalid("guidance.adaptation_gain", "must be finite and > 0"));
        }
        if !(self.u_min.is_finite() && self.u_min >= 0.0) {
            return Err(ConfigError::invalid("guidance.u_min", "must be finite and >= 0"));
        }
        if self.delta_min >= self.delta_max {
            return Err(ConfigError::invalid("guidance.delta_min", "must be below delta_max"));
        }
        if let Some(s) = self.radius_lookahead {
            if !(s.is_finite() && s > 0.0) {
                return Err(ConfigError::invalid("guidance.radius_lookahead", "must be > 0 or null"));
            }
        }
        Ok(())
    }
}

/// Mutable guidance state carried between control ticks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GuidanceState {
    pub law: GuidanceLaw,
    /// Sideslip estimate β̂ (ALOS, VFALOS), radians.
    pub beta_hat: f64,
    /// Integral state (VFILOS), meters.
    pub integral_state: f64,
}

impl GuidanceState {
    pub fn new(law: GuidanceLaw) -> Self {
        Self {
            law,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceCommand {
    /// Desired heading in `(-π, π]`.
    pub psi_d: f64,
    pub u_d: f64,
}

/// Result of one guidance tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceOutput {
    pub psi_d: f64,
    pub state: GuidanceState,
    /// The error the law drives to zero: `y_e + (r - r_v)` on vector-field turns,
    /// `y_e` otherwise.
    pub field_error: f64,
}

pub fn los_heading(gamma_p: f64, y_e: f64, delta: f64, beta: f64) -> f64 {
    wrap_angle(gamma_p - (y_e / delta).atan() - beta)
}

/// `γΔe / √(Δ² + e²)`; bounded in magnitude by `γΔ`.
pub fn adaptation_rate(error: f64, delta: f64, gain: f64) -> f64 {
    gain * delta * error / delta.hypot(error)
}

fn adaptive_step(gamma_p: f64, error: f64, state: &GuidanceState, params: &GuidanceParams, dt: f64) -> (f64, GuidanceState) {
    let delta = params.lookahead_delta;
    let psi_d = wrap_angle(gamma_p - state.beta_hat - (error / delta).atan());
    let rate = adaptation_rate(error, delta, params.adaptation_gain);
    let beta_hat = (state.beta_hat + dt * rate).clamp(-params.beta_max, params.beta_max);
    (psi_d, GuidanceState { beta_hat, ..*state })
}

/// Adaptive LOS: `ψ_d = γ_p - β̂ - atan(y_e/Δ)`, with β̂ advanced by explicit Euler.
pub fn alos_step(gamma_p: f64, y_e: f64, state: &GuidanceState, params: &GuidanceParams, dt: f64) -> (f64, GuidanceState) {
    adaptive_step(gamma_p, y_e, state, params, dt)
}

/// `r - r_v = r_min·(1 - (2/π)·atan(k·r))`, written with `atan(1/(k·r))` so it stays
/// accurate for large radii and is exactly zero for an infinite one.
pub fn vector_field_offset(r: f64, params: &GuidanceParams) -> Result<f64, GeometryError> {
    if !(r >= params.vf_r_min) {
        return Err(GeometryError::TurnTooTight {
            radius: r,
            r_min: params.vf_r_min,
        });
    }
    Ok(params.vf_r_min * std::f64::consts::FRAC_2_PI * (1.0 / (params.vf_k * r)).atan())
}

/// Vector-field radius `r_v = atan(k·r)·(2/π)·r_min + (r - r_min)`.
pub fn vector_field_radius(r: f64, params: &GuidanceParams) -> Result<f64, GeometryError> {
    Ok(r - vector_field_offset(r, params)?)
}

/// VFALOS on an arc, from the vehicle's azimuth `gamma_c` and distance `d` to the centre.
pub fn vfalos_step(
    gamma_c: f64,
    d: f64,
    r: f64,
    direction: ArcDirection,
    state: &GuidanceState,
    params: &GuidanceParams,
    dt: f64,
) -> Result<(f64, GuidanceState), GeometryError> {
    let r_v = vector_field_radius(r, params)?;
    let s = direction.sign();
    let error = s * (d - r_v);
    Ok(adaptive_step(gamma_c - s * FRAC_PI_2, error, state, params, dt))
}

/// VFALOS in cross-track form with an explicit field offset `r - r_v` (already signed
/// for the turn direction).
pub fn vfalos_unified_step(
    gamma_p: f64,
    y_e: f64,
    offset: f64,
    state: &GuidanceState,
    params: &GuidanceParams,
    dt: f64,
) -> (f64, GuidanceState) {
    adaptive_step(gamma_p, y_e + offset, state, params, dt)
}

/// VFALOS in cross-track form. On a straight segment this is exactly [`alos_step`].
pub fn straight_vfalos_step(
    gamma_p: f64,
    y_e: f64,
    radius: TurnRadius,
    state: &GuidanceState,
    params: &GuidanceParams,
    dt: f64,
) -> Result<(f64, GuidanceState), GeometryError> {
    match radius {
        TurnRadius::Straight => Ok(alos_step(gamma_p, y_e, state, params, dt)),
        TurnRadius::Turn { radius, direction } => {
            let offset = direction.sign() * vector_field_offset(radius, params)?;
            Ok(vfalos_unified_step(gamma_p, y_e, offset, state, params, dt))
        }
    }
}

/// Integral LOS: `ψ_d = γ_p - atan((e + σ·y_int)/Δ)`, `ẏ_int = Δe / ((e + σ·y_int)² + Δ²)`.
pub fn ilos_step(gamma_p: f64, y_e: f64, state: &GuidanceState, params: &GuidanceParams, dt: f64) -> (f64, GuidanceState) {
    let delta = params.lookahead_delta;
    let shifted = y_e + params.integral_gain * state.integral_state;
    let psi_d = wrap_angle(gamma_p - (shifted / delta).atan());
    let rate = delta * y_e / (shifted * shifted + delta * delta);
    let limit = params.integral_limit;
    let integral_state = (state.integral_state + dt * rate).clamp(-limit, limit);
    (psi_d, GuidanceState { integral_state, ..*state })
}

/// Time-varying look-ahead `Δ(y_e) = (Δ_max - Δ_min)·exp(-k_Δ|y_e|) + Δ_min`.
pub fn tlos_delta(y_e: f64, params: &GuidanceParams) -> f64 {
    (params.delta_max - params.delta_min) * (-params.delta_decay * y_e.abs()).exp() + params.delta_min
}

pub fn tlos_heading(gamma_p: f64, y_e: f64, params: &GuidanceParams) -> f64 {
    los_heading(gamma_p, y_e, tlos_delta(y_e, params), 0.0)
}

/// Speed distribution `U_d = max(U_max·(1 - |y_e|/y_max - |χ̃|/χ_max) + U_min, U_min)`.
pub fn desired_speed(y_e: f64, chi_err: f64, params: &GuidanceParams) -> f64 {
    let shaped = params.u_max * (1.0 - y_e.abs() / params.y_max - wrap_angle(chi_err).abs() / params.chi_max);
    (shaped + params.u_min).max(params.u_min)
}

/// Turn radius seen by the vector-field laws at the current projection.
fn active_radius(path: &Path, projection: &ProjectionResult, params: &GuidanceParams) -> Result<TurnRadius, GeometryError> {
    match params.radius_lookahead {
        Some(lookahead) => path.estimate_radius(projection, lookahead),
        None => Ok(path.segment(projection.segment_index)?.radius()),
    }
}

impl GuidanceLaw {
    /// One guidance tick for this law at `projection` on `path`.
    pub fn step(
        self,
        path: &Path,
        projection: &ProjectionResult,
        state: &GuidanceState,
        params: &GuidanceParams,
        dt: f64,
    ) -> Result<GuidanceOutput, GeometryError> {
        let gamma_p = projection.tangent_gamma_p;
        let y_e = projection.cross_track_ye;
        let plain = |psi_d, state| GuidanceOutput {
            psi_d,
            state,
            field_error: y_e,
        };
        Ok(match self {
            GuidanceLaw::Los => plain(los_heading(gamma_p, y_e, params.lookahead_delta, 0.0), *state),
            GuidanceLaw::Tlos => plain(tlos_heading(gamma_p, y_e, params), *state),
            GuidanceLaw::Alos => {
                let (psi_d, next) = alos_step(gamma_p, y_e, state, params, dt);
                plain(psi_d, next)
            }
            GuidanceLaw::Vfalos => {
                let Some(offset) = field_offset(active_radius(path, projection, params)?, params) else {
                    let (psi_d, next) = alos_step(gamma_p, y_e, state, params, dt);
                    return Ok(plain(psi_d, next));
                };
                let segment = path.segment(projection.segment_index)?;
                let (psi_d, next) = match (segment, projection.dist_to_center_d, projection.azimuth_gamma_c) {
                    (&PathSegment::Arc { radius, direction, .. }, Some(d), Some(gamma_c))
                        if params.radius_lookahead.is_none() =>
                    {
                        vfalos_step(gamma_c, d, radius, direction, state, params, dt)?
                    }
                    _ => vfalos_unified_step(gamma_p, y_e, offset, state, params, dt),
                };
                GuidanceOutput {
                    psi_d,
                    state: next,
                    field_error: y_e + offset,
                }
            }
            GuidanceLaw::Vfilos => {
                let offset = field_offset(active_radius(path, projection, params)?, params).unwrap_or(0.0);
                let error = y_e + offset;
                let (psi_d, next) = ilos_step(gamma_p, error, state, params, dt);
                GuidanceOutput {
                    psi_d,
                    state: next,
                    field_error: error,
                }
            }
        })
    }
}

/// Signed `r - r_v` for a turn, `0` on a straight, `None` if the turn is too tight.
fn field_offset(radius: TurnRadius, params: &GuidanceParams) -> Option<f64> {
    match radius {
        TurnRadius::Straight => Some(0.0),
        TurnRadius::Turn { radius, direction } => vector_field_offset(radius, params)
            .ok()
            .map(|offset| direction.sign() * offset),
    }
}
