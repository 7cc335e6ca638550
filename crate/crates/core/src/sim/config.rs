//! Scenario files: one JSON document with `vessel`, `path`, `guidance`, `control`,
//! `disturbance` and `sim` sections. Every field has a default, so a file only needs
//! the values it changes.

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::control::ControlConfig;
use crate::disturbance::DisturbanceModel;
use crate::error::ConfigError;
use crate::guidance::{GuidanceLaw, GuidanceParams};
use crate::path::{ArcDirection, PathConfig};
use crate::sim::stability::StabilityCriteria;
use crate::vessel::{VesselConfig, VesselState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub vessel: VesselConfig,
    pub path: PathConfig,
    pub guidance: GuidanceConfig,
    pub control: ControlConfig,
    pub disturbance: DisturbanceModel,
    pub sim: SimSettings,
}

impl Default for ScenarioConfig {
    /// Lawn-mower path with two 15 m semicircular turns and a 0.3 m/s cross current.
    fn default() -> Self {
        Self {
            name: "lawn-mower".to_string(),
            vessel: VesselConfig::default(),
            path: PathConfig::lawn_mower(),
            guidance: GuidanceConfig::default(),
            control: ControlConfig::default(),
            disturbance: DisturbanceModel::ConstantCurrent {
                v_north: 0.0,
                v_east: 0.3,
            },
            sim: SimSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GuidanceConfig {
    pub law: GuidanceLaw,
    pub params: GuidanceParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlantKind {
    /// Full 3-DOF vessel with inner-loop controllers.
    #[default]
    Full,
    /// Reduced cross-track/adaptation dynamics with perfect heading tracking.
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSettings {
    pub dt: f64,
    pub duration: f64,
    pub plant: PlantKind,
    pub initial_state: VesselState,
    /// Half-widths of a uniform perturbation of the initial north, east and yaw,
    /// drawn from `seed`.
    pub initial_jitter: [f64; 3],
    pub seed: u64,
    pub metrics: MetricsSettings,
    pub nominal: NominalSettings,
    pub stability: StabilitySettings,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            dt: 0.01,
            duration: 300.0,
            plant: PlantKind::Full,
            initial_state: VesselState::new(0.0, -5.0, 0.0, 1.0, 0.0, 0.0),
            initial_jitter: [0.0; 3],
            seed: 0,
            metrics: MetricsSettings::default(),
            nominal: NominalSettings::default(),
            stability: StabilitySettings::default(),
        }
    }
}

impl SimSettings {
    /// Number of integration steps; the log holds one more row than this.
    pub fn steps(&self) -> usize {
        if self.duration == 0.0 {
            0
        } else {
            (self.duration / self.dt).round() as usize
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ConfigError::invalid("sim.dt", "must be > 0"));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(ConfigError::invalid("sim.duration", "must be >= 0"));
        }
        if self.duration > 0.0 {
            if self.dt > self.duration {
                return Err(ConfigError::invalid("sim.dt", "must not exceed sim.duration"));
            }
            let ratio = self.duration / self.dt;
            if (ratio - ratio.round()).abs() > 1e-6 * ratio.max(1.0) {
                return Err(ConfigError::invalid("sim.duration", "must be an integer multiple of sim.dt"));
            }
        }
        if self.initial_jitter.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(ConfigError::invalid("sim.initial_jitter", "half-widths must be finite and >= 0"));
        }
        let s = &self.initial_state;
        if [s.north, s.east, s.yaw, s.surge_u, s.sway_v, s.yaw_rate_r]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(ConfigError::invalid("sim.initial_state", "must be finite"));
        }
        self.metrics.validate()?;
        self.nominal.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsSettings {
    /// |y_e| threshold for convergence, meters.
    pub convergence_epsilon: f64,
    /// Time |y_e| must stay below the threshold, seconds.
    pub dwell: f64,
    /// Window after each segment switch in which overshoot is measured, seconds.
    pub overshoot_window: f64,
    /// Trailing window for the steady-state cross-track error, seconds.
    pub steady_window: f64,
    /// Envelope samples below this are excluded from the decay fit, meters.
    pub fit_floor: f64,
}

impl Default for MetricsSettings {
    fn default() -> Self {
        Self {
            convergence_epsilon: 0.5,
            dwell: 5.0,
            overshoot_window: 20.0,
            steady_window: 10.0,
            fit_floor: 1e-3,
        }
    }
}

impl MetricsSettings {
    fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("sim.metrics.convergence_epsilon", self.convergence_epsilon),
            ("sim.metrics.dwell", self.dwell),
            ("sim.metrics.overshoot_window", self.overshoot_window),
            ("sim.metrics.steady_window", self.steady_window),
            ("sim.metrics.fit_floor", self.fit_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::invalid(name, "must be > 0"));
            }
        }
        Ok(())
    }
}

/// Setup of the reduced closed loop used for Lyapunov checks: a vehicle on an arc at
/// constant speed, with a constant true sideslip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NominalSettings {
    pub speed: f64,
    /// Arc radius; `None` for a straight line along north.
    pub arc_radius: Option<f64>,
    pub direction: ArcDirection,
    pub true_beta: f64,
    pub initial_cross_track: f64,
    pub initial_beta_hat: f64,
}

impl Default for NominalSettings {
    fn default() -> Self {
        Self {
            speed: 1.0,
            arc_radius: Some(20.0),
            direction: ArcDirection::Counterclockwise,
            true_beta: 0.2,
            initial_cross_track: 10.0,
            initial_beta_hat: 0.0,
        }
    }
}

impl NominalSettings {
    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(ConfigError::invalid("sim.nominal.speed", "must be > 0"));
        }
        if let Some(r) = self.arc_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ConfigError::invalid("sim.nominal.arc_radius", "must be > 0, or null for a straight line"));
            }
        }
        for (name, v) in [
            ("sim.nominal.true_beta", self.true_beta),
            ("sim.nominal.initial_cross_track", self.initial_cross_track),
            ("sim.nominal.initial_beta_hat", self.initial_beta_hat),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}

/// Grid of nominal runs checked by `verify-stability`, and the pass thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilitySettings {
    pub true_betas: Vec<f64>,
    pub initial_cross_tracks: Vec<f64>,
    pub criteria: StabilityCriteria,
}

impl Default for StabilitySettings {
    fn default() -> Self {
        Self {
            true_betas: vec![-0.2, 0.0, 0.2],
            initial_cross_tracks: vec![-10.0, -1.0, 1.0, 10.0],
            criteria: StabilityCriteria::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<FsPath>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario config serializes")
    }

    /// Validates every section for a full-plant run.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.sim.validate()?;
        match self.sim.plant {
            PlantKind::Full => {
                crate::vessel::VesselParams::new(self.vessel.clone())?;
                self.path.build()?;
                self.guidance.params.validate()?;
                self.control.validate()?;
                self.disturbance.validate()
            }
            PlantKind::Nominal => self.guidance.params.validate_allow_negative_gain(),
        }
    }
}

/// Every dotted key that `--set` accepts for this config.
pub fn valid_keys(config: &ScenarioConfig) -> Vec<String> {
    let value = serde_json::to_value(config).expect("scenario config serializes");
    let mut keys = Vec::new();
    collect_keys(&value, String::new(), &mut keys);
    keys
}

fn collect_keys(value: &Value, prefix: String, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                collect_keys(v, key, out);
            }
        }
        _ => out.push(prefix),
    }
}

/// Splits `key=value`.
pub fn parse_override(text: &str) -> Result<(String, String), ConfigError> {
    match text.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(ConfigError::MalformedOverride(text.to_string())),
    }
}

/// Applies dotted-key overrides. Values are parsed as JSON, falling back to a bare
/// string, so `guidance.law=tlos` and `guidance.params.vf_k=0.5` both work. Numeric
/// path components index into arrays.
pub fn apply_overrides(config: &ScenarioConfig, overrides: &[(String, String)]) -> Result<ScenarioConfig, ConfigError> {
    let mut value = serde_json::to_value(config).expect("scenario config serializes");
    for (key, raw) in overrides {
        let slot = lookup_mut(&mut value, key).ok_or_else(|| ConfigError::UnknownKey {
            key: key.clone(),
            valid: valid_keys(config),
        })?;
        *slot = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
    }
    serde_json::from_value(value).map_err(|e| ConfigError::Parse(e.to_string()))
}

fn lookup_mut<'a>(value: &'a mut Value, key: &str) -> Option<&'a mut Value> {
    key.split('.').try_fold(value, |node, part| match node {
        Value::Object(map) => map.get_mut(part),
        Value::Array(items) => part.parse::<usize>().ok().and_then(move |i| items.get_mut(i)),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_json() {
        let cfg = ScenarioConfig::default();
        let back = ScenarioConfig::from_json_str(&cfg.to_json_pretty()).unwrap();
        assert_eq!(cfg, back);
        cfg.validate().unwrap();
    }

    #[test]
    fn partial_file_uses_defaults() {
        let cfg = ScenarioConfig::from_json_str(r#"{"guidance": {"law": "tlos"}, "sim": {"duration": 10.0}}"#).unwrap();
        assert_eq!(cfg.guidance.law, GuidanceLaw::Tlos);
        assert_eq!(cfg.sim.duration, 10.0);
        assert_eq!(cfg.sim.dt, 0.01);
        assert_eq!(cfg.path, PathConfig::lawn_mower());
    }

    #[test]
    fn path_section_replaces_default_path() {
        let cfg = ScenarioConfig::from_json_str(r#"{"path": {"waypoints": [[0, 0], [50, 0], [50, 50]], "corner_radii": [10]}}"#)
            .unwrap();
        assert!(cfg.path.segments.is_none());
        assert_eq!(cfg.path.switching_radius, 1.0);
        assert_eq!(cfg.path.build().unwrap().len(), 3);
    }

    #[test]
    fn shipped_configs_load() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
        for name in ["lawnmower.json", "waypoints.json", "nominal.json", "straight.json"] {
            let cfg = ScenarioConfig::load(format!("{dir}/{name}")).unwrap();
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let lawn = ScenarioConfig::load(format!("{dir}/lawnmower.json")).unwrap();
        assert_eq!(lawn, ScenarioConfig::default());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ScenarioConfig::from_json_str(r#"{"sim": {"dtt": 0.1}}"#).is_err());
    }

    #[test]
    fn overrides() {
        let cfg = ScenarioConfig::default();
        let out = apply_overrides(
            &cfg,
            &[
                ("guidance.law".into(), "alos".into()),
                ("guidance.params.lookahead_delta".into(), "7.5".into()),
                ("vessel.mass_matrix.0.0".into(), "45".into()),
                ("guidance.params.radius_lookahead".into(), "4".into()),
            ],
        )
        .unwrap();
        assert_eq!(out.guidance.law, GuidanceLaw::Alos);
        assert_eq!(out.guidance.params.lookahead_delta, 7.5);
        assert_eq!(out.vessel.mass_matrix[0][0], 45.0);
        assert_eq!(out.guidance.params.radius_lookahead, Some(4.0));
        assert_eq!(out.control, cfg.control);

        match apply_overrides(&cfg, &[("guidance.params.nope".into(), "1".into())]) {
            Err(ConfigError::UnknownKey { valid, .. }) => {
                assert!(valid.contains(&"guidance.params.lookahead_delta".to_string()))
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_override("novalue").is_err());
        assert_eq!(parse_override("a.b = 3").unwrap(), ("a.b".into(), "3".into()));
    }

    #[test]
    fn timing_validation() {
        let mut s = SimSettings::default();
        s.duration = 0.0;
        assert!(s.validate().is_ok());
        assert_eq!(s.steps(), 0);
        s.duration = 1.005;
        s.dt = 0.01;
        assert!(s.validate().is_err());
        s.duration = 0.005;
        assert!(s.validate().is_err());
        s.duration = 3.0;
        assert_eq!(s.steps(), 300);
    }
}
