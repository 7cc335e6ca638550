//! Path following for underactuated differential-thrust surface vehicles.
//!
//! The crate is organised bottom-up:
//!
//! * [`vessel`]: 3-DOF kinematics, rigid-body dynamics and thrust allocation.
//! * [`path`]: line and arc segments, closest-point projection, cross-track error.
//! * [`guidance`]: the line-of-sight family (LOS, ALOS, VFALOS, VFILOS, TLOS) and the
//!   speed-distribution law.
//! * [`control`]: heading and surge-speed PID loops.
//! * [`disturbance`]: currents and force disturbances that produce sideslip.
//! * [`sim`]: the closed loop, logging, tracking metrics and Lyapunov checks.
//!
//! Coordinates are North-East: `x` is north, `y` is east and every angle is measured
//! from north towards east. Seen from above, increasing angle is a clockwise rotation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod control;
pub mod disturbance;
pub mod error;
pub mod guidance;
pub mod integrate;
pub mod path;
pub mod sim;
pub mod vessel;

pub use angle::wrap_angle;
pub use control::{ControllerState, PidGains};
pub use disturbance::{DisturbanceModel, SinusoidComponent};
pub use error::{ConfigError, GeometryError, SimError, StabilityError};
pub use guidance::{GuidanceCommand, GuidanceLaw, GuidanceParams, GuidanceState};
pub use path::{ArcDirection, Path, PathSegment, ProjectionResult, TurnRadius};
pub use sim::{Metrics, ScenarioConfig, SimLog, StabilityReport};
pub use vessel::{ThrustCommand, VesselParams, VesselState};

/// A point in the horizontal plane, `[north, east]` in meters.
pub type Point = [f64; 2];
