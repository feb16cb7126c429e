use crate::error::{Error, Result};

const BISECTION_RELATIVE_TOLERANCE: f64 = 1e-12;

/// Chebyshev polynomial of the second kind `U_n(y)` by forward recurrence.
pub fn chebyshev_u(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * y);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 2.0 * y * cur - prev);
    }
    cur
}

/// `y = cos θ + α sin θ` with `α = Γ / 2δ`.
pub fn band_parameter(gamma_wg: f64, delta_p: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    c + gamma_wg / (2.0 * delta_p) * s
}

/// Transmittance of `n` identical lossless qubits separated by phase
/// `theta`, probed at detuning `delta_p`.
///
/// At `delta_p == 0` the limit 0 is returned.
pub fn chebyshev_transmittance(n: usize, gamma_wg: f64, delta_p: f64, theta: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("chebyshev_transmittance needs at least one qubit"));
    }
    if delta_p == 0.0 {
        return Ok(0.0);
    }
    let alpha = gamma_wg / (2.0 * delta_p);
    let u = chebyshev_u(n - 1, band_parameter(gamma_wg, delta_p, theta));
    Ok(1.0 / (1.0 + alpha * alpha * u * u))
}

/// Detunings where `|y| = 1` on either side of resonance, with
/// `θ = k0d (1 + δ/ω0)`.
pub fn band_edges(n: usize, gamma_wg: f64, k0d: f64, omega0: f64) -> Result<(f64, f64)> {
    band_edges_with_tolerance(n, gamma_wg, k0d, omega0, BISECTION_RELATIVE_TOLERANCE * gamma_wg)
}

/// [`band_edges`] with an explicit absolute bisection tolerance.
pub fn band_edges_with_tolerance(
    n: usize,
    gamma_wg: f64,
    k0d: f64,
    omega0: f64,
    tolerance: f64,
) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::domain("band_edges needs at least one qubit"));
    }
    if !(gamma_wg > 0.0 && omega0 > 0.0 && tolerance > 0.0) {
        return Err(Error::domain("band_edges needs positive Γ, ω0 and tolerance"));
    }
    let f = |d: f64| band_parameter(gamma_wg, d, k0d * (1.0 + d / omega0)).abs() - 1.0;
    // The inner bracket end must stay clear of the α singularity at δ = 0.
    let inner = 1e-6 * gamma_wg;
    let lower = bisect(&f, -2.0 * gamma_wg, -inner, tolerance)?;
    let upper = bisect(&f, inner, 2.0 * gamma_wg, tolerance)?;
    Ok((lower, upper))
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tolerance: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa.signum() == fb.signum() || fa == 0.0 || fb == 0.0 {
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 {
            return Ok(b);
        }
        return Err(Error::NoBand);
    }
    while b - a > tolerance {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
