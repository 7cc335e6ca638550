//! 3-DOF surface vessel: kinematics, rigid-body dynamics and differential-thrust
//! allocation.
//!
//! ```text
//! η̇ = R(ψ) ν
//! M ν̇ + C(ν) ν + D(ν) ν = [τ_u, 0, τ_r]ᵀ
//! ```
//!
//! with `η = [north, east, ψ]` and `ν = [u, v, r]`. The hull has no sway actuator.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::integrate::rk4_step;
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VesselState {
    pub north: f64,
    pub east: f64,
    /// Heading, kept in `(-π, π]`.
    pub yaw: f64,
    pub surge_u: f64,
    pub sway_v: f64,
    pub yaw_rate_r: f64,
}

impl VesselState {
    pub fn new(north: f64, east: f64, yaw: f64, surge_u: f64, sway_v: f64, yaw_rate_r: f64) -> Self {
        Self {
            north,
            east,
            yaw: wrap_angle(yaw),
            surge_u,
            sway_v,
            yaw_rate_r,
        }
    }

    /// Speed through the water, `U = sqrt(u² + v²)`.
    pub fn speed(&self) -> f64 {
        self.surge_u.hypot(self.sway_v)
    }

    pub fn position(&self) -> [f64; 2] {
        [self.north, self.east]
    }

    pub(crate) fn to_array(self) -> [f64; 6] {
        [
            self.north,
            self.east,
            self.yaw,
            self.surge_u,
            self.sway_v,
            self.yaw_rate_r,
        ]
    }

    /// Rebuilds a state from an integrator vector, wrapping the heading.
    pub(crate) fn from_array(x: [f64; 6]) -> Self {
        Self::new(x[0], x[1], x[2], x[3], x[4], x[5])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseRates {
    pub north_dot: f64,
    pub east_dot: f64,
    pub yaw_dot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityRates {
    pub u_dot: f64,
    pub v_dot: f64,
    pub r_dot: f64,
}

/// Surge force and yaw moment produced by the two propellers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThrustCommand {
    /// Surge force in newtons.
    pub tau_u: f64,
    /// Yaw moment in newton-meters.
    pub tau_r: f64,
}

impl ThrustCommand {
    pub fn new(tau_u: f64, tau_r: f64) -> Self {
        Self { tau_u, tau_r }
    }

    pub fn is_finite(&self) -> bool {
        self.tau_u.is_finite() && self.tau_r.is_finite()
    }

    /// `τ = B·[f1, f2]ᵀ` with `B = [[1, 1], [a/2, -a/2]]`.
    pub fn from_propeller_forces(f1: f64, f2: f64, separation: f64) -> Self {
        Self {
            tau_u: f1 + f2,
            tau_r: 0.5 * separation * (f1 - f2),
        }
    }
}

/// Per-propeller forces after saturation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub f1: f64,
    pub f2: f64,
    /// Set when either propeller hit the thrust limit.
    pub saturated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoriolisModel {
    /// Rigid-body plus added-mass Coriolis/centripetal matrix built from `M`.
    #[default]
    FromMass,
    None,
}

/// Diagonal damping `D(ν) = D_l + D_q·|ν|`, entries ordered surge, sway, yaw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DampingCoeffs {
    pub linear: [f64; 3],
    pub quadratic: [f64; 3],
}

impl Default for DampingCoeffs {
    fn default() -> Self {
        Self {
            linear: [10.0, 40.0, 5.0],
            quadratic: [5.0, 30.0, 2.0],
        }
    }
}

/// Unvalidated vessel description as it appears in a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VesselConfig {
    /// `M = M_RB + M_A`, row-major.
    pub mass_matrix: [[f64; 3]; 3],
    pub damping: DampingCoeffs,
    pub coriolis: CoriolisModel,
    /// Distance between the two propellers, meters.
    pub thruster_separation: f64,
    /// Symmetric per-propeller force limit, newtons.
    pub thrust_limit: f64,
}

impl Default for VesselConfig {
    // A ~1.5 m catamaran-style USV. Values are representative, not identified.
    fn default() -> Self {
        Self {
            mass_matrix: [[40.0, 0.0, 0.0], [0.0, 55.0, 0.0], [0.0, 0.0, 8.0]],
            damping: DampingCoeffs::default(),
            coriolis: CoriolisModel::FromMass,
            thruster_separation: 0.6,
            thrust_limit: 40.0,
        }
    }
}

/// Validated vessel parameters with the inverse mass matrix cached.
#[derive(Debug, Clone, PartialEq)]
pub struct VesselParams {
    config: VesselConfig,
    mass: Matrix3<f64>,
    mass_inv: Matrix3<f64>,
}

impl VesselParams {
    pub fn new(config: VesselConfig) -> Result<Self, ConfigError> {
        let mass = Matrix3::from_fn(|i, j| config.mass_matrix[i][j]);
        if mass.iter().any(|m| !m.is_finite()) {
            return Err(ConfigError::invalid("vessel.mass_matrix", "entries must be finite"));
        }
        let scale = mass.amax().max(1.0);
        if (mass - mass.transpose()).amax() > 1e-12 * scale {
            return Err(ConfigError::invalid("vessel.mass_matrix", "must be symmetric"));
        }
        let chol = mass
            .cholesky()
            .ok_or_else(|| ConfigError::invalid("vessel.mass_matrix", "must be positive definite"))?;
        let mass_inv = chol.inverse();
        for (name, values) in [
            ("vessel.damping.linear", config.damping.linear),
            ("vessel.damping.quadratic", config.damping.quadratic),
        ] {
            if values.iter().any(|d| !d.is_finite() || *d < 0.0) {
                return Err(ConfigError::invalid(name, "coefficients must be finite and >= 0"));
            }
        }
        if !(config.thruster_separation.is_finite() && config.thruster_separation > 0.0) {
            return Err(ConfigError::invalid("vessel.thruster_separation", "must be > 0"));
        }
        if !(config.thrust_limit > 0.0) {
            return Err(ConfigError::invalid("vessel.thrust_limit", "must be > 0"));
        }
        Ok(Self {
            config,
            mass,
            mass_inv,
        })
    }

    /// Diagonal mass and linear damping, no quadratic damping, no Coriolis.
    pub fn diagonal(mass: [f64; 3], linear_damping: [f64; 3]) -> Result<Self, ConfigError> {
        Self::new(VesselConfig {
            mass_matrix: [
                [mass[0], 0.0, 0.0],
                [0.0, mass[1], 0.0],
                [0.0, 0.0, mass[2]],
            ],
            damping: DampingCoeffs {
                linear: linear_damping,
                quadratic: [0.0; 3],
            },
            coriolis: CoriolisModel::None,
            ..VesselConfig::default()
        })
    }

    pub fn config(&self) -> &VesselConfig {
        &self.config
    }

    pub fn mass_matrix(&self) -> &Matrix3<f64> {
        &self.mass
    }

    pub fn thruster_separation(&self) -> f64 {
        self.config.thruster_separation
    }

    pub fn thrust_limit(&self) -> f64 {
        self.config.thrust_limit
    }

    /// Coriolis-centripetal matrix `C(ν)`; skew-symmetric for symmetric `M`.
    pub fn coriolis_matrix(&self, nu: &Vector3<f64>) -> Matrix3<f64> {
        match self.config.coriolis {
            CoriolisModel::None => Matrix3::zeros(),
            CoriolisModel::FromMass => {
                let m_nu = self.mass * nu;
                let (a1, a2) = (m_nu[0], m_nu[1]);
                Matrix3::new(0.0, 0.0, -a2, 0.0, 0.0, a1, a2, -a1, 0.0)
            }
        }
    }

    /// `D(ν)ν` for the diagonal linear-plus-quadratic damping model.
    pub fn damping_force(&self, nu: &Vector3<f64>) -> Vector3<f64> {
        let d = &self.config.damping;
        Vector3::from_fn(|i, _| (d.linear[i] + d.quadratic[i] * nu[i].abs()) * nu[i])
    }

    /// Solves `M ν̇ = τ_full + extra − C(ν)ν − D(ν)ν`.
    pub(crate) fn accelerations(&self, nu: &Vector3<f64>, tau: &ThrustCommand, extra: &Vector3<f64>) -> Vector3<f64> {
        let tau_full = Vector3::new(tau.tau_u, 0.0, tau.tau_r);
        self.mass_inv * (tau_full + extra - self.coriolis_matrix(nu) * nu - self.damping_force(nu))
    }
}

impl TryFrom<VesselConfig> for VesselParams {
    type Error = ConfigError;

    fn try_from(config: VesselConfig) -> Result<Self, Self::Error> {
        Self::new(config)
    }
}

pub fn kinematics_rates(state: &VesselState) -> PoseRates {
    let (sin, cos) = state.yaw.sin_cos();
    PoseRates {
        north_dot: state.surge_u * cos - state.sway_v * sin,
        east_dot: state.surge_u * sin + state.sway_v * cos,
        yaw_dot: state.yaw_rate_r,
    }
}

pub fn dynamics_rates(state: &VesselState, thrust: &ThrustCommand, params: &VesselParams) -> VelocityRates {
    let nu = Vector3::new(state.surge_u, state.sway_v, state.yaw_rate_r);
    let acc = params.accelerations(&nu, thrust, &Vector3::zeros());
    VelocityRates {
        u_dot: acc[0],
        v_dot: acc[1],
        r_dot: acc[2],
    }
}

/// Inverts `τ = B·f` and saturates each propeller to `±thrust_limit`.
pub fn allocate_thrust(thrust: &ThrustCommand, params: &VesselParams) -> Allocation {
    let a = params.thruster_separation();
    let limit = params.thrust_limit();
    let f1 = 0.5 * thrust.tau_u + thrust.tau_r / a;
    let f2 = 0.5 * thrust.tau_u - thrust.tau_r / a;
    let saturated = f1.abs() > limit || f2.abs() > limit;
    Allocation {
        f1: f1.clamp(-limit, limit),
        f2: f2.clamp(-limit, limit),
        saturated,
    }
}

/// Full state derivative `[ṅ, ė, ψ̇, u̇, v̇, ṙ]` with an inertial current `(v_n, v_e)`
/// added to the ground velocity and an extra body-frame load `[X, Y, N]`.
pub fn plant_rates(
    state: &VesselState,
    thrust: &ThrustCommand,
    params: &VesselParams,
    current: (f64, f64),
    load: [f64; 3],
) -> [f64; 6] {
    let pose = kinematics_rates(state);
    let nu = Vector3::new(state.surge_u, state.sway_v, state.yaw_rate_r);
    let acc = params.accelerations(&nu, thrust, &Vector3::from(load));
    [
        pose.north_dot + current.0,
        pose.east_dot + current.1,
        pose.yaw_dot,
        acc[0],
        acc[1],
        acc[2],
    ]
}

/// One RK4 step of the undisturbed plant under constant thrust.
pub fn plant_step(state: &VesselState, thrust: &ThrustCommand, params: &VesselParams, dt: f64) -> VesselState {
    let f = |_t: f64, x: &[f64; 6]| plant_rates(&VesselState::from_array(*x), thrust, params, (0.0, 0.0), [0.0; 3]);
    VesselState::from_array(rk4_step(f, 0.0, &state.to_array(), dt))
}

/// Body surge speed and yaw rate from the two propeller speeds.
pub fn propeller_to_body(u1: f64, u2: f64, separation: f64) -> (f64, f64) {
    ((u1 + u2) / 2.0, (u1 - u2) / separation)
}
