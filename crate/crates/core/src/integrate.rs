//! Fixed-step explicit integrators.

/// One classical fourth-order Runge-Kutta step of `ẋ = f(t, x)`.
pub fn rk4_step<const N: usize, F>(f: F, t: f64, x: &[f64; N], dt: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, x);
    let k2 = f(t + 0.5 * dt, &axpy(x, 0.5 * dt, &k1));
    let k3 = f(t + 0.5 * dt, &axpy(x, 0.5 * dt, &k2));
    let k4 = f(t + dt, &axpy(x, dt, &k3));
    let mut out = *x;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// One explicit Euler step of `ẋ = f(t, x)`.
pub fn euler_step<const N: usize, F>(f: F, t: f64, x: &[f64; N], dt: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    axpy(x, dt, &f(t, x))
}

fn axpy<const N: usize>(x: &[f64; N], a: f64, y: &[f64; N]) -> [f64; N] {
    let mut out = *x;
    for i in 0..N {
        out[i] += a * y[i];
    }
    out
}
