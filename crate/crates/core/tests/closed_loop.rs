use usvpath_core::disturbance::DisturbanceModel;
use usvpath_core::path::PathConfig;
use usvpath_core::sim::{run_scenario, PlantKind};
use usvpath_core::{GuidanceLaw, PidGains, ScenarioConfig, VesselState};

fn straight_config() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::default();
    cfg.name = "straight".into();
    cfg.path = PathConfig::straight(500.0);
    cfg.disturbance = DisturbanceModel::None;
    cfg.sim.duration = 120.0;
    cfg
}

#[test]
fn equilibrium_on_straight_line() {
    let mut cfg = straight_config();
    cfg.sim.initial_state = VesselState::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
    for law in GuidanceLaw::ALL {
        cfg.guidance.law = law;
        let log = run_scenario(&cfg).unwrap();
        let worst = log.rows.iter().map(|r| r.cross_track.abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-3, "{law}: {worst}");
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let mut cfg = ScenarioConfig::default();
    cfg.sim.duration = 40.0;
    cfg.sim.initial_jitter = [0.5, 0.5, 0.05];
    cfg.sim.seed = 11;
    let a = run_scenario(&cfg).unwrap().to_csv_string();
    let b = run_scenario(&cfg).unwrap().to_csv_string();
    assert_eq!(a, b);
}

#[test]
fn zero_duration_gives_initial_row() {
    for plant in [PlantKind::Full, PlantKind::Nominal] {
        let mut cfg = ScenarioConfig::default();
        cfg.sim.plant = plant;
        cfg.sim.duration = 0.0;
        let log = run_scenario(&cfg).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log.rows[0].t, 0.0);
    }
}

#[test]
fn diverging_gains_are_reported() {
    let mut cfg = straight_config();
    cfg.control.heading = PidGains::new(1e300, 0.0, 0.0, 1e308, 1.0);
    cfg.vessel.thrust_limit = 1e308;
    let err = run_scenario(&cfg).unwrap_err();
    assert!(err.to_string().contains("non-finite"), "{err}");
}

/// Largest |y_e| gap between the full closed loop and the reduced loop started from
/// the same offset, with the speed held at 1 m/s.
fn nominal_gap(heading_scale: f64) -> f64 {
    let mut full = straight_config();
    full.guidance.law = GuidanceLaw::Alos;
    full.guidance.params.u_max = 1e-9;
    full.guidance.params.u_min = 1.0;
    full.sim.initial_state = VesselState::new(0.0, -3.0, 0.0, 1.0, 0.0, 0.0);
    let h = &mut full.control.heading;
    h.kp *= heading_scale;
    h.kd *= heading_scale.sqrt();
    h.output_limit *= heading_scale;
    full.vessel.thrust_limit *= heading_scale;

    let mut nominal = full.clone();
    nominal.sim.plant = PlantKind::Nominal;
    nominal.sim.nominal.arc_radius = None;
    nominal.sim.nominal.speed = 1.0;
    nominal.sim.nominal.true_beta = 0.0;
    nominal.sim.nominal.initial_cross_track = -3.0;

    let a = run_scenario(&full).unwrap();
    let b = run_scenario(&nominal).unwrap();
    a.rows
        .iter()
        .zip(&b.rows)
        .map(|(x, y)| (x.cross_track - y.cross_track).abs())
        .fold(0.0, f64::max)
}

#[test]
fn full_loop_approaches_nominal_as_heading_gains_grow() {
    let gaps: Vec<f64> = [1.0, 4.0, 16.0].iter().map(|s| nominal_gap(*s)).collect();
    assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
}
