//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solver paths it is used to check.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superatom::units::{ghz_to_rad, MHZ};
use superatom::{ArrayModel, ComplexMatrix, WaveguideMedium};

pub const GAMMA: f64 = 10.0 * MHZ;

pub fn omega0() -> f64 {
    ghz_to_rad(6.0)
}

/// Characteristic polynomial coefficients (lowest order first, monic) by
/// the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(a: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = a.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut coeffs = vec![zero; n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = vec![vec![zero; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![zero; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * m[l][j]).sum();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        m = next;
        let trace: Complex64 = (0..n).map(|i| (0..n).map(|l| a[i][l] * m[l][i]).sum::<Complex64>()).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    coeffs
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let denom: Complex64 = (0..n).filter(|&j| j != i).map(|j| zi - roots[j]).product();
            let step = eval(zi) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

/// Greedy matching distance between two eigenvalue multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Gauss-Jordan inverse with full pivoting.
pub fn dense_inverse(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut aug: Vec<Vec<Complex64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| aug[x][col].norm().total_cmp(&aug[y][col].norm())).unwrap();
        aug.swap(col, p);
        let pivot = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= pivot;
        }
        for i in 0..n {
            if i != col {
                let f = aug[i][col];
                for j in 0..2 * n {
                    let sub = f * aug[col][j];
                    aug[i][j] -= sub;
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Coupling entries written out directly from `-i/2 sqrt(G_i G_j) e^{i k0 d_ij}`,
/// in units of `gamma` and relative to `omega_ref`.
pub fn reference_h_eff(model: &ArrayModel, gamma: f64) -> Vec<Vec<Complex64>> {
    let q = model.qubits();
    let k0 = model.medium().k0();
    let n = q.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let coupling = Complex64::new(0.0, -0.5)
                        * (q[i].gamma_wg * q[j].gamma_wg).sqrt()
                        * Complex64::from_polar(1.0, k0 * (q[i].position - q[j].position).abs());
                    let diag = if i == j {
                        Complex64::new(q[i].omega - model.medium().omega_ref, -q[i].gamma_nr / 2.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    (coupling + diag) / gamma
                })
                .collect()
        })
        .collect()
}

/// Random array: N in 1..=max_n, Gamma_i in [0.5, 2] * GAMMA, random spacings,
/// detunings within +-2 GAMMA, and gamma' in [0, 0.2] GAMMA unless lossless.
pub fn random_model(rng: &mut ChaCha8Rng, max_n: usize, lossless: bool) -> ArrayModel {
    let n = rng.random_range(1..=max_n);
    let w0 = omega0();
    let medium = WaveguideMedium::new(superatom::units::CPW_VELOCITY, w0).unwrap();
    let mut x = 0.0;
    let qubits = (0..n)
        .map(|i| {
            if i > 0 {
                x += rng.random_range(0.05..1.5) * medium.lambda0();
            }
            let gnr = if lossless { 0.0 } else { rng.random_range(0.0..0.2) * GAMMA };
            superatom::Qubit::new(
                w0 + rng.random_range(-2.0..2.0) * GAMMA,
                rng.random_range(0.5..2.0) * GAMMA,
                gnr,
                x,
            )
            .unwrap()
        })
        .collect();
    ArrayModel::new(qubits, medium).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Transmission and reflection from an explicitly inverted `omega_p - H_eff`,
/// phases referenced to the first qubit.
pub fn reference_scattering(model: &ArrayModel, omega_p: f64) -> (Complex64, Complex64) {
    let gamma = model.max_gamma_wg();
    let h = reference_h_eff(model, gamma);
    let n = h.len();
    let detuning = (omega_p - model.medium().omega_ref) / gamma;
    let a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex64::new(detuning, 0.0) - h[i][j] } else { -h[i][j] })
                .collect()
        })
        .collect();
    let g = dense_inverse(&a);
    let q = model.qubits();
    let k0 = model.medium().k0();
    let u: Vec<Complex64> = q
        .iter()
        .map(|qb| Complex64::from_polar((qb.gamma_wg / gamma).sqrt(), k0 * (qb.position - q[0].position)))
        .collect();
    let mut forward = Complex64::new(0.0, 0.0);
    let mut backward = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            forward += u[j].conj() * g[j][k] * u[k];
            backward += u[j] * g[j][k] * u[k];
        }
    }
    let half_i = Complex64::new(0.0, 0.5);
    (Complex64::new(1.0, 0.0) - half_i * forward, -half_i * backward)
}

/// `|t|^2` of a single lossless Lorentzian of width `width`.
pub fn lorentzian_transmittance(delta: f64, width: f64) -> f64 {
    delta * delta / (delta * delta + width * width / 4.0)
}
