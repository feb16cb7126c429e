//! Non-Hermitian eigendecomposition: Householder reduction to Hessenberg
//! form, single-shift complex QR to Schur form, then right and left
//! eigenvectors from the triangular factor.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Modes closer than this fraction of `||H - mu I||_F` to another mode are
/// flagged near-degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

const MAX_DIM: usize = 64;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues with biorthonormal right (columns) and left (rows)
/// eigenvectors, `<L_m|R_n> = delta_mn`.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<Complex64>,
    pub right: ComplexMatrix,
    pub left: ComplexMatrix,
    pub near_degenerate: Vec<bool>,
    /// Frobenius norm of the trace-shifted input; the scale for every
    /// tolerance attached to this decomposition.
    pub norm: f64,
}

impl ComplexSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn right_vector(&self, n: usize) -> Vec<Complex64> {
        self.right.column(n)
    }

    pub fn left_vector(&self, n: usize) -> &[Complex64] {
        self.left.row(n)
    }

    /// `-2 Im(omega_n)` for each mode.
    pub fn decay_rates(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|w| -2.0 * w.im).collect()
    }

    pub fn flagged_count(&self) -> usize {
        self.near_degenerate.iter().filter(|&&f| f).count()
    }

    pub fn has_near_degenerate(&self) -> bool {
        self.flagged_count() > 0
    }

    /// `sum_n omega_n |R_n><L_n|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|m| self.eigenvalues[m] * self.right[(i, m)] * self.left[(m, j)])
                .sum()
        })
    }
}

pub fn eigendecompose(h: &ComplexMatrix) -> Result<ComplexSpectrum> {
    if !h.is_square() {
        return Err(Error::domain(format!("eigendecomposition needs a square matrix, got {:?}", h.dims())));
    }
    let n = h.rows();
    if n == 0 || n > MAX_DIM {
        return Err(Error::domain(format!("matrix size must be in 1..={MAX_DIM}, got {n}")));
    }
    if (0..n).any(|i| (0..n).any(|j| !h[(i, j)].is_finite())) {
        return Err(Error::domain("matrix has non-finite entries"));
    }

    // Work on H - mu I so tolerances scale with the spread of the spectrum
    // rather than with the (arbitrary) common frequency offset.
    let mu = h.trace() / n as f64;
    let mut t = h.shifted(mu);
    let norm = t.norm_fro();
    if norm == 0.0 {
        return Ok(ComplexSpectrum {
            eigenvalues: vec![mu; n],
            right: ComplexMatrix::identity(n),
            left: ComplexMatrix::identity(n),
            near_degenerate: vec![n > 1; n],
            norm,
        });
    }

    let mut z = reduce_to_hessenberg(&mut t);
    schur_qr(&mut t, &mut z, norm)?;

    let small = (f64::EPSILON * norm).max(f64::MIN_POSITIVE);
    let mut modes: Vec<(Complex64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut r = right_vector_of_triangular(&t, k, small);
            r = z.mul_vec(&r);
            let rn = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            r.iter_mut().for_each(|c| *c /= rn);

            let w = left_vector_of_triangular(&t, k, small);
            let mut l: Vec<Complex64> = (0..n)
                .map(|m| (0..n).map(|i| w[i] * z[(m, i)].conj()).sum())
                .collect();
            let overlap: Complex64 = l.iter().zip(&r).map(|(a, b)| a * b).sum();
            if overlap.norm() > f64::MIN_POSITIVE {
                l.iter_mut().for_each(|c| *c /= overlap);
            }
            (lambda + mu, r, l)
        })
        .collect();

    modes.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

    let eigenvalues: Vec<Complex64> = modes.iter().map(|m| m.0).collect();
    let right = ComplexMatrix::from_fn(n, n, |i, j| modes[j].1[i]);
    let left = ComplexMatrix::from_fn(n, n, |i, j| modes[i].2[j]);
    let threshold = DEGENERACY_THRESHOLD * norm;
    let near_degenerate = (0..n)
        .map(|i| (0..n).any(|j| j != i && (eigenvalues[i] - eigenvalues[j]).norm() < threshold))
        .collect();

    Ok(ComplexSpectrum {
        eigenvalues,
        right,
        left,
        near_degenerate,
        norm,
    })
}

/// Householder reduction in place; returns the accumulated unitary `Q`
/// with `A = Q H Q^H`.
fn reduce_to_hessenberg(a: &mut ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        let alpha = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * alpha;
        let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= vn);

        // A <- P A, rows k+1.., P = I - 2 v v^H
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(m, vm)| vm.conj() * a[(k + 1 + m, j)]).sum();
            for (m, vm) in v.iter().enumerate() {
                a[(k + 1 + m, j)] -= 2.0 * vm * dot;
            }
        }
        // A <- A P and Q <- Q P, columns k+1..
        for mat in [&mut *a, &mut q] {
            for i in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(m, vm)| mat[(i, k + 1 + m)] * vm).sum();
                for (m, vm) in v.iter().enumerate() {
                    mat[(i, k + 1 + m)] -= 2.0 * dot * vm.conj();
                }
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
    }
    q
}

/// Unitary `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [rho; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn wilkinson_shift(t: &ComplexMatrix, hi: usize) -> Complex64 {
    let a11 = t[(hi - 1, hi - 1)];
    let a12 = t[(hi - 1, hi)];
    let a21 = t[(hi, hi - 1)];
    let a22 = t[(hi, hi)];
    let p = (a11 - a22) * 0.5;
    let bc = a12 * a21;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        a22
    } else {
        a22 - bc / denom
    }
}

/// Reduces upper-Hessenberg `t` to upper-triangular Schur form, updating
/// the Schur vectors `z`.
fn schur_qr(t: &mut ComplexMatrix, z: &mut ComplexMatrix, norm: f64) -> Result<()> {
    let n = t.rows();
    let max_iterations = 30 * n.max(4);
    let mut total = 0usize;
    let mut iter = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = t[(l, l - 1)].norm();
            let mut tst = t[(l - 1, l - 1)].norm() + t[(l, l)].norm();
            if tst == 0.0 {
                tst = norm;
            }
            if sub <= f64::EPSILON * tst {
                t[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > max_iterations {
            return Err(Error::NoConvergence {
                iterations: total,
                residual: t[(hi, hi - 1)].norm() / norm,
            });
        }
        let shift = if iter % 10 == 0 {
            // exceptional shift to break cycles
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(t, hi)
        };

        for k in l..hi {
            let (x, y) = if k == l {
                (t[(l, l)] - shift, t[(l + 1, l)])
            } else {
                (t[(k, k - 1)], t[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let col_start = if k == l { l } else { k - 1 };
            for j in col_start..n {
                let a = t[(k, j)];
                let b = t[(k + 1, j)];
                t[(k, j)] = c * a + s * b;
                t[(k + 1, j)] = -s.conj() * a + c * b;
            }
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let a = t[(i, k)];
                let b = t[(i, k + 1)];
                t[(i, k)] = a * c + b * s.conj();
                t[(i, k + 1)] = -a * s + b * c;
            }
            for i in 0..n {
                let a = z[(i, k)];
                let b = z[(i, k + 1)];
                z[(i, k)] = a * c + b * s.conj();
                z[(i, k + 1)] = -a * s + b * c;
            }
            if k > l {
                t[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    Ok(())
}

/// Solves `(T - t_kk) y = 0` with `y_k = 1`, `y_i = 0` for `i > k`.
fn right_vector_of_triangular(t: &ComplexMatrix, k: usize, small: f64) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut y = vec![ZERO; n];
    y[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let s: Complex64 = ((i + 1)..=k).map(|j| t[(i, j)] * y[j]).sum();
        let mut d = t[(i, i)] - lambda;
        if d.norm() < small {
            d = Complex64::new(small, 0.0);
        }
        y[i] = -s / d;
    }
    y
}

/// Solves `w^T (T - t_kk) = 0` with `w_k = 1`, `w_i = 0` for `i < k`.
fn left_vector_of_triangular(t: &ComplexMatrix, k: usize, small: f64) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut w = vec![ZERO; n];
    w[k] = Complex64::new(1.0, 0.0);
    for i in (k + 1)..n {
        let s: Complex64 = (k..i).map(|j| t[(j, i)] * w[j]).sum();
        let mut d = t[(i, i)] - lambda;
        if d.norm() < small {
            d = Complex64::new(small, 0.0);
        }
        w[i] = -s / d;
    }
    w
}
