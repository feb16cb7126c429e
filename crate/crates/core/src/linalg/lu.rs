use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuDecomposition {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuDecomposition {
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `n * eps * max|a_ij|`; `omega_p` is only used to label the error.
    pub fn new(a: &ComplexMatrix, omega_p: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::domain(format!("LU needs a square matrix, got {:?}", a.dims())));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|ij| a[ij].norm())
            .fold(0.0, f64::max);
        let tiny = n as f64 * f64::EPSILON * scale;

        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_abs > tiny) {
                return Err(Error::Singular { omega_p });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(LuDecomposition { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "dimension mismatch");
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solves `(omega_p I - H) x = v` by a pivoted direct solve.
pub fn resolvent_apply(h: &ComplexMatrix, omega_p: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if !h.is_square() {
        return Err(Error::domain(format!("resolvent needs a square matrix, got {:?}", h.dims())));
    }
    if v.len() != h.rows() {
        return Err(Error::domain(format!(
            "vector length {} does not match matrix size {}",
            v.len(),
            h.rows()
        )));
    }
    if !omega_p.is_finite() {
        return Err(Error::domain("probe frequency must be finite"));
    }
    let n = h.rows();
    let a = ComplexMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { Complex64::new(omega_p, 0.0) } else { Complex64::new(0.0, 0.0) };
        diag - h[(i, j)]
    });
    let x = LuDecomposition::new(&a, omega_p)?.solve(v);
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular { omega_p });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_resolvent() {
        let (w0, gamma) = (3.0, 0.4);
        let h = ComplexMatrix::from_rows(&[vec![c(w0, -gamma / 2.0)]]);
        let x = resolvent_apply(&h, w0, &[c(1.0, 0.0)]).unwrap();
        assert!((x[0] - c(0.0, -2.0 / gamma)).norm() < 1e-14);
    }

    #[test]
    fn shifted_identity() {
        let (w0, gamma) = (5.0, 0.25);
        let h = ComplexMatrix::identity(3).shifted(c(-w0 + 1.0, 0.0));
        let v = vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)];
        let x = resolvent_apply(&h, w0 + gamma, &v).unwrap();
        for (xi, vi) in x.iter().zip(&v) {
            assert!((xi - vi / gamma).norm() < 1e-13);
        }
    }

    #[test]
    fn lossless_eigenvalue_is_singular() {
        let h = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.0)], vec![c(0.5, 0.0), c(1.0, 0.0)]]);
        let err = resolvent_apply(&h, 1.5, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        assert!(err.to_string().contains("shift the probe"));
    }

    #[test]
    fn length_mismatch() {
        let h = ComplexMatrix::identity(2);
        assert!(resolvent_apply(&h, 3.0, &[c(1.0, 0.0)]).is_err());
    }
}
