//! Environmental disturbances. Currents enter the pose kinematics directly and are
//! the usual source of sideslip; force disturbances act on the rigid-body dynamics.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::{ConfigError, GeometryError};
use crate::vessel::{kinematics_rates, VesselState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    North,
    East,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SinusoidComponent {
    /// m/s, ≥ 0.
    pub amplitude: f64,
    /// s, > 0.
    pub period: f64,
    /// rad.
    pub phase: f64,
    pub axis: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceFrame {
    #[default]
    Body,
    Inertial,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DisturbanceModel {
    #[default]
    None,
    ConstantCurrent {
        v_north: f64,
        v_east: f64,
    },
    TimeVarying {
        base_north: f64,
        base_east: f64,
        components: Vec<SinusoidComponent>,
    },
    /// Constant force `[x, y]` (N) and yaw moment (N·m), in the body or inertial frame.
    ConstantForce {
        force: [f64; 2],
        moment: f64,
        #[serde(default)]
        frame: ForceFrame,
    },
}

impl DisturbanceModel {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::invalid(format!("disturbance.{what}"), "must be finite"))
            }
        };
        match self {
            DisturbanceModel::None => Ok(()),
            DisturbanceModel::ConstantCurrent { v_north, v_east } => {
                finite(*v_north, "v_north")?;
                finite(*v_east, "v_east")
            }
            DisturbanceModel::TimeVarying {
                base_north,
                base_east,
                components,
            } => {
                finite(*base_north, "base_north")?;
                finite(*base_east, "base_east")?;
                for c in components {
                    if !(c.amplitude >= 0.0 && c.amplitude.is_finite()) {
                        return Err(ConfigError::invalid("disturbance.components.amplitude", "must be >= 0"));
                    }
                    if !(c.period > 0.0 && c.period.is_finite()) {
                        return Err(ConfigError::invalid("disturbance.components.period", "must be > 0"));
                    }
                    finite(c.phase, "components.phase")?;
                }
                Ok(())
            }
            DisturbanceModel::ConstantForce { force, moment, .. } => {
                finite(force[0], "force")?;
                finite(force[1], "force")?;
                finite(*moment, "moment")
            }
        }
    }

    /// Body-frame `[X, Y, N]` disturbance load on a vessel with heading `yaw`.
    pub fn body_force(&self, yaw: f64) -> [f64; 3] {
        match *self {
            DisturbanceModel::ConstantForce { force, moment, frame } => match frame {
                ForceFrame::Body => [force[0], force[1], moment],
                ForceFrame::Inertial => {
                    let (sin, cos) = yaw.sin_cos();
                    [
                        cos * force[0] + sin * force[1],
                        -sin * force[0] + cos * force[1],
                        moment,
                    ]
                }
            },
            _ => [0.0; 3],
        }
    }
}

/// Current velocity `(v_north, v_east)` at time `t`.
pub fn current_at(model: &DisturbanceModel, t: f64) -> (f64, f64) {
    match model {
        DisturbanceModel::None | DisturbanceModel::ConstantForce { .. } => (0.0, 0.0),
        DisturbanceModel::ConstantCurrent { v_north, v_east } => (*v_north, *v_east),
        DisturbanceModel::TimeVarying {
            base_north,
            base_east,
            components,
        } => components.iter().fold((*base_north, *base_east), |(n, e), c| {
            let value = c.amplitude * (TAU * t / c.period + c.phase).sin();
            match c.axis {
                Axis::North => (n + value, e),
                Axis::East => (n, e + value),
            }
        }),
    }
}

/// Sideslip `β = wrap(χ - ψ)` where `χ` is the course over ground including current.
pub fn effective_sideslip(state: &VesselState, current: (f64, f64)) -> Result<f64, GeometryError> {
    let k = kinematics_rates(state);
    let (north_dot, east_dot) = (k.north_dot + current.0, k.east_dot + current.1);
    if north_dot == 0.0 && east_dot == 0.0 {
        return Err(GeometryError::UndefinedCourse);
    }
    Ok(wrap_angle(east_dot.atan2(north_dot) - state.yaw))
}
