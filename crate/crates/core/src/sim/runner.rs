//! The closed loop: path projection, guidance, speed shaping, heading and speed
//! control, thrust allocation and the vessel plant, advanced with fixed-step RK4.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::wrap_angle;
use crate::control::{heading_control, speed_control, ControllerState};
use crate::disturbance::{current_at, effective_sideslip};
use crate::error::SimError;
use crate::guidance::{desired_speed, GuidanceLaw, GuidanceState};
use crate::integrate::rk4_step;
use crate::sim::config::{PlantKind, ScenarioConfig};
use crate::sim::log::{LogRow, SimLog};
use crate::sim::nominal::run_nominal;
use crate::sim::stability::lyapunov_value;
use crate::vessel::{allocate_thrust, plant_rates, ThrustCommand, VesselParams, VesselState};

/// Runs one scenario to completion. The result depends only on `config`.
///
/// The log holds one row per control tick from `t = 0` to `t = duration`, or up to the
/// tick on which the vehicle reaches the end of the path.
pub fn run_scenario(config: &ScenarioConfig) -> Result<SimLog, SimError> {
    config.validate()?;
    match config.sim.plant {
        PlantKind::Full => run_full(config),
        PlantKind::Nominal => run_nominal(config),
    }
}

fn initial_state(config: &ScenarioConfig) -> VesselState {
    let mut state = config.sim.initial_state;
    let jitter = config.sim.initial_jitter;
    if jitter.iter().any(|w| *w > 0.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(config.sim.seed);
        let mut draw = |w: f64| w * (2.0 * rng.random::<f64>() - 1.0);
        state.north += draw(jitter[0]);
        state.east += draw(jitter[1]);
        state.yaw = wrap_angle(state.yaw + draw(jitter[2]));
    }
    state
}

fn run_full(config: &ScenarioConfig) -> Result<SimLog, SimError> {
    let vessel = VesselParams::new(config.vessel.clone())?;
    let path = config.path.build()?;
    let law = config.guidance.law;
    let params = &config.guidance.params;
    let control = &config.control;
    let disturbance = &config.disturbance;
    let dt = config.sim.dt;
    let adaptive = matches!(law, GuidanceLaw::Alos | GuidanceLaw::Vfalos);

    let mut state = initial_state(config);
    let mut guidance = GuidanceState::new(law);
    let mut controller = ControllerState::default();
    let mut active = 0;
    let mut log = SimLog::new(config.name.clone(), law, dt);

    for k in 0..=config.sim.steps() {
        let t = k as f64 * dt;
        let advance = path.advance_segment(state.position(), active)?;
        active = advance.segment;
        let projection = path.project(state.position(), active)?;
        let output = law.step(&path, &projection, &guidance, params, dt)?;
        let psi_d = output.psi_d;
        if !psi_d.is_finite() {
            return Err(SimError::NonFinite {
                quantity: "desired heading",
                time: t,
            });
        }

        let current = current_at(disturbance, t);
        let beta = effective_sideslip(&state, current).unwrap_or(0.0);
        let course_err = wrap_angle(state.yaw + beta - psi_d - guidance.beta_hat);
        let u_d = desired_speed(projection.cross_track_ye, course_err, params);

        let (tau_r, next_controller) = heading_control(psi_d, state.yaw, state.yaw_rate_r, &controller, &control.heading, dt);
        let (tau_u, next_controller) = speed_control(u_d, state.surge_u, &next_controller, &control.speed, dt, control.allow_reverse);
        let allocation = allocate_thrust(&ThrustCommand::new(tau_u, tau_r), &vessel);
        let applied = ThrustCommand::from_propeller_forces(allocation.f1, allocation.f2, vessel.thruster_separation());
        if !applied.is_finite() {
            return Err(SimError::NonFinite {
                quantity: "thrust",
                time: t,
            });
        }

        let beta_err = if adaptive { beta - guidance.beta_hat } else { 0.0 };
        log.rows.push(LogRow {
            t,
            north: state.north,
            east: state.east,
            yaw: state.yaw,
            surge_u: state.surge_u,
            sway_v: state.sway_v,
            yaw_rate_r: state.yaw_rate_r,
            cross_track: projection.cross_track_ye,
            dist_to_center: projection.dist_to_center_d,
            field_error: output.field_error,
            beta,
            beta_hat: guidance.beta_hat,
            psi_d,
            u_d,
            tau_u: applied.tau_u,
            tau_r: applied.tau_r,
            f1: allocation.f1,
            f2: allocation.f2,
            segment: active,
            lyapunov: lyapunov_value(output.field_error, 0.0, beta_err, state.speed(), params.adaptation_gain),
        });

        if advance.complete || k == config.sim.steps() {
            break;
        }
        guidance = output.state;
        controller = next_controller;

        let rates = |time: f64, x: &[f64; 6]| {
            let s = VesselState::from_array(*x);
            plant_rates(&s, &applied, &vessel, current_at(disturbance, time), disturbance.body_force(s.yaw))
        };
        let next = rk4_step(rates, t, &state.to_array(), dt);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite {
                quantity: "vessel state",
                time: t + dt,
            });
        }
        state = VesselState::from_array(next);
    }
    Ok(log)
}
