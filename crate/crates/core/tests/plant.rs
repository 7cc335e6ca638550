use proptest::prelude::*;
use usvpath_core::vessel::{dynamics_rates, plant_step, CoriolisModel, DampingCoeffs, VesselConfig};
use usvpath_core::{wrap_angle, ThrustCommand, VesselParams, VesselState};

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x
}

/// `M ν̇ = τ - C(ν)ν - D(ν)ν` written out term by term.
fn oracle_accel(m: [[f64; 3]; 3], lin: [f64; 3], quad: [f64; 3], nu: [f64; 3], tau: [f64; 2]) -> [f64; 3] {
    let mnu: Vec<f64> = (0..3).map(|i| (0..3).map(|j| m[i][j] * nu[j]).sum()).collect();
    let (a1, a2) = (mnu[0], mnu[1]);
    let c_nu = [-a2 * nu[2], a1 * nu[2], a2 * nu[0] - a1 * nu[1]];
    let rhs: Vec<f64> = (0..3)
        .map(|i| {
            let input = [tau[0], 0.0, tau[1]][i];
            input - c_nu[i] - (lin[i] + quad[i] * nu[i].abs()) * nu[i]
        })
        .collect();
    solve3(m, [rhs[0], rhs[1], rhs[2]])
}

fn spd() -> impl Strategy<Value = [[f64; 3]; 3]> {
    (prop::array::uniform9(-3.0f64..3.0), prop::array::uniform3(5.0f64..60.0)).prop_map(|(l, diag)| {
        // A Aᵀ + diag is symmetric positive definite.
        let a = [[l[0], l[1], l[2]], [l[3], l[4], l[5]], [l[6], l[7], l[8]]];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| a[i][k] * a[j][k]).sum::<f64>() + if i == j { diag[i] } else { 0.0 };
            }
        }
        m
    })
}

proptest! {
    #[test]
    fn dynamics_match_elimination_oracle(
        m in spd(),
        lin in prop::array::uniform3(0.0f64..50.0),
        quad in prop::array::uniform3(0.0f64..30.0),
        nu in prop::array::uniform3(-2.0f64..2.0),
        tau in prop::array::uniform2(-50.0f64..50.0),
    ) {
        let params = VesselParams::new(VesselConfig {
            mass_matrix: m,
            damping: DampingCoeffs { linear: lin, quadratic: quad },
            coriolis: CoriolisModel::FromMass,
            ..VesselConfig::default()
        }).unwrap();
        let state = VesselState::new(0.0, 0.0, 0.3, nu[0], nu[1], nu[2]);
        let got = dynamics_rates(&state, &ThrustCommand::new(tau[0], tau[1]), &params);
        let want = oracle_accel(m, lin, quad, nu, tau);
        for (g, w) in [got.u_dot, got.v_dot, got.r_dot].iter().zip(want) {
            prop_assert!((g - w).abs() <= 1e-9 * w.abs().max(1.0), "{g} vs {w}");
        }
    }
}

fn spiral(dt: f64, duration: f64) -> VesselState {
    let params = VesselParams::new(VesselConfig::default()).unwrap();
    let thrust = ThrustCommand::new(20.0, 3.0);
    let mut s = VesselState::new(0.0, 0.0, 0.0, 0.5, 0.0, 0.0);
    for _ in 0..(duration / dt).round() as usize {
        s = plant_step(&s, &thrust, &params, dt);
    }
    s
}

fn distance(a: &VesselState, b: &VesselState) -> f64 {
    [
        a.north - b.north,
        a.east - b.east,
        wrap_angle(a.yaw - b.yaw),
        a.surge_u - b.surge_u,
        a.sway_v - b.sway_v,
        a.yaw_rate_r - b.yaw_rate_r,
    ]
    .iter()
    .map(|d| d * d)
    .sum::<f64>()
    .sqrt()
}

#[test]
fn rk4_error_drops_sixteen_fold_per_halving() {
    let reference = spiral(0.2 / 64.0, 20.0);
    let coarse = distance(&spiral(0.2, 20.0), &reference);
    let fine = distance(&spiral(0.1, 20.0), &reference);
    let ratio = coarse / fine;
    assert!((14.0..=18.0).contains(&ratio), "ratio {ratio}");
}
