use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MIN_SPAN_LINEWIDTHS: f64 = 6.0;
const MAX_RADIAL_RESIDUAL: f64 = 0.1;
const MAX_ITERATIONS: usize = 200;

/// Parameters recovered from a single-qubit transmission trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitFit {
    pub gamma_wg: f64,
    pub gamma_nr: f64,
    pub omega_center: f64,
    /// RMS of `|t_model - t_data|` over the grid.
    pub residual: f64,
    /// +1 when `t` runs counter-clockwise with increasing frequency.
    pub orientation: f64,
}

impl SingleQubitFit {
    pub fn total_linewidth(&self) -> f64 {
        self.gamma_wg + self.gamma_nr
    }
}

/// Fits `t = 1 - β / (1 - 2i s (ω - ωc) / Γt)` to complex transmission data.
///
/// An algebraic circle fit seeds `β`, the phase around the circle centre
/// seeds `ωc` and `Γt`, and Levenberg-Marquardt on the complex residuals
/// polishes all three.
pub fn fit_single_qubit(grid: &[f64], t: &[Complex64]) -> Result<SingleQubitFit> {
    if grid.len() != t.len() {
        return Err(Error::FitFailed(format!("{} frequencies but {} samples", grid.len(), t.len())));
    }
    if grid.len() < 8 {
        return Err(Error::FitFailed("need at least 8 samples".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::FitFailed("grid must be strictly increasing".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) || t.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::FitFailed("non-finite input".into()));
    }

    let (center, radius) = fit_circle(t)?;
    let radial_rms = (t.iter().map(|z| ((z - center).norm() - radius).powi(2)).sum::<f64>()
        / t.len() as f64)
        .sqrt();
    if radial_rms > MAX_RADIAL_RESIDUAL * radius {
        return Err(Error::FitFailed(format!(
            "data is not circular: radial residual {radial_rms:.3e} vs radius {radius:.3e}"
        )));
    }

    let (omega_c, gamma_t, orientation) = seed_lineshape(grid, t, center)?;
    let span = grid[grid.len() - 1] - grid[0];
    let mut params = [2.0 * radius, gamma_t, omega_c];
    levenberg_marquardt(grid, t, orientation, &mut params);
    let [beta, gamma_t, omega_c] = params;
    if !(gamma_t > 0.0 && beta > 0.0) {
        return Err(Error::FitFailed("fit converged to a non-physical linewidth".into()));
    }
    if span < MIN_SPAN_LINEWIDTHS * gamma_t {
        return Err(Error::FitFailed(format!(
            "grid spans only {:.2} linewidths, need {MIN_SPAN_LINEWIDTHS}",
            span / gamma_t
        )));
    }
    let beta = beta.min(1.0);
    let residual = (grid
        .iter()
        .zip(t)
        .map(|(&w, z)| (model(beta, gamma_t, omega_c, orientation, w) - z).norm_sqr())
        .sum::<f64>()
        / grid.len() as f64)
        .sqrt();
    Ok(SingleQubitFit {
        gamma_wg: beta * gamma_t,
        gamma_nr: (1.0 - beta) * gamma_t,
        omega_center: omega_c,
        residual,
        orientation,
    })
}

fn model(beta: f64, gamma_t: f64, omega_c: f64, s: f64, w: f64) -> Complex64 {
    let x = 2.0 * (w - omega_c) / gamma_t;
    Complex64::new(1.0, 0.0) - beta / Complex64::new(1.0, -s * x)
}

/// Kasa fit: least squares on `x² + y² + Dx + Ey + F = 0`, centred on the
/// data mean for conditioning.
fn fit_circle(z: &[Complex64]) -> Result<(Complex64, f64)> {
    let mean = z.iter().sum::<Complex64>() / z.len() as f64;
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for p in z {
        let q = p - mean;
        let row = [q.re, q.im, 1.0];
        let rhs = -q.norm_sqr();
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
    }
    let [d, e, f] = solve3(ata, atb).ok_or_else(|| Error::FitFailed("degenerate circle fit".into()))?;
    let r2 = (d * d + e * e) / 4.0 - f;
    if !(r2 > 0.0) {
        return Err(Error::FitFailed("circle fit gave a non-positive radius".into()));
    }
    Ok((mean + Complex64::new(-d / 2.0, -e / 2.0), r2.sqrt()))
}

/// Linear fit of `tan(ψ/2)` against frequency, where `ψ` is the angle of
/// `-(t - centre)`, using the samples within about a linewidth of resonance.
fn seed_lineshape(grid: &[f64], t: &[Complex64], center: Complex64) -> Result<(f64, f64, f64)> {
    let pick = |limit: f64| -> Vec<(f64, f64)> {
        grid.iter()
            .zip(t)
            .filter_map(|(&w, z)| {
                let psi = (-(z - center)).arg();
                (psi.abs() < limit).then(|| (w, (psi / 2.0).tan()))
            })
            .collect()
    };
    let mut pts = pick(2.0 * std::f64::consts::FRAC_PI_3);
    if pts.len() < 3 {
        pts = pick(0.95 * std::f64::consts::PI);
    }
    if pts.len() < 3 {
        return Err(Error::FitFailed("too few samples near resonance".into()));
    }
    let n = pts.len() as f64;
    let mw = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sww: f64 = pts.iter().map(|p| (p.0 - mw).powi(2)).sum();
    let swx: f64 = pts.iter().map(|p| (p.0 - mw) * (p.1 - mx)).sum();
    let slope = swx / sww;
    if !(slope.abs() > 0.0 && slope.is_finite()) {
        return Err(Error::FitFailed("phase does not wind with frequency".into()));
    }
    Ok((mw - mx / slope, 2.0 / slope.abs(), slope.signum()))
}

/// Minimises `Σ |model - data|²` over `(β, Γt, ωc)` in place.
fn levenberg_marquardt(grid: &[f64], data: &[Complex64], s: f64, p: &mut [f64; 3]) {
    // Work in units of the seed linewidth so all three parameters are O(1).
    let scale = p[1];
    let origin = p[2];
    let mut q = [p[0], 1.0, 0.0];
    let cost = |q: &[f64; 3]| -> f64 {
        grid.iter()
            .zip(data)
            .map(|(&w, z)| {
                (model(q[0], q[1] * scale, origin + q[2] * scale, s, w) - z).norm_sqr()
            })
            .sum()
    };
    let mut current = cost(&q);
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERATIONS {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for (&w, z) in grid.iter().zip(data) {
            let x = 2.0 * (w - origin - q[2] * scale) / (q[1] * scale);
            let denom = Complex64::new(1.0, -s * x);
            let res = Complex64::new(1.0, 0.0) - q[0] / denom - z;
            let d_beta = -1.0 / denom;
            let d_x = -q[0] * Complex64::new(0.0, s) / (denom * denom);
            // x = 2 (w - ωc) / Γt in scaled units
            let d_gamma = d_x * (-x / q[1]);
            let d_center = d_x * (-2.0 / q[1]);
            let cols = [d_beta, d_gamma, d_center];
            for i in 0..3 {
                for j in 0..3 {
                    jtj[i][j] += (cols[i].conj() * cols[j]).re;
                }
                jtr[i] += (cols[i].conj() * res).re;
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for (i, row) in a.iter_mut().enumerate() {
                row[i] += lambda * jtj[i][i].max(1e-300);
            }
            let Some(step) = solve3(a, [-jtr[0], -jtr[1], -jtr[2]]) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [q[0] + step[0], q[1] + step[1], q[2] + step[2]];
            let trial_cost = if trial[1] > 0.0 { cost(&trial) } else { f64::INFINITY };
            if trial_cost <= current {
                let size = step.iter().map(|x| x.abs()).fold(0.0, f64::max);
                q = trial;
                current = trial_cost;
                lambda = (lambda / 10.0).max(1e-15);
                improved = size > 1e-14;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    *p = [q[0], q[1] * scale, origin + q[2] * scale];
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 || !a[pivot][col].is_finite() {
            return None;
        }
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
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - tail) / a[i][i];
    }
    Some(x)
}
