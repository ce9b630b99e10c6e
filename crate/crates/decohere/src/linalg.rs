//! Dense Hermitian eigensolver for small matrices (cyclic Jacobi with complex
//! rotations) plus the matrix phase exponential built on top of it.
//!
//! This is deliberately independent of every closed-form propagator in the
//! crate: the reference ("oracle") evolution paths funnel through here, so a
//! formula bug and an eigensolver bug cannot cancel.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

fn off_diagonal_norm(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix: returns eigenvalues in ascending
/// order and the unitary `v` whose columns are the matching eigenvectors,
/// with `h = v * diag(eigenvalues) * v^dagger`.
pub fn hermitian_eigen(h: &Array2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>)> {
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return Err(Error::invalid("eigensolver needs a non-empty square matrix"));
    }
    let scale = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    for i in 0..n {
        for j in 0..=i {
            if (h[(i, j)] - h[(j, i)].conj()).norm() > 1e-10 * scale {
                return Err(Error::invalid(format!(
                    "matrix is not Hermitian at ({i}, {j})"
                )));
            }
        }
    }

    let mut a = h.clone();
    let mut v = Array2::<Complex64>::eye(n);
    let tol = 1e-30 * scale;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-14 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= tol {
                    continue;
                }
                // Phase-align the pivot, then a real Jacobi rotation: the
                // combined unitary acts only on columns/rows p and q.
                let phase = apq / b; // e^{i alpha}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let sigma = (app - aqq) / (2.0 * b);
                let t = if sigma >= 0.0 {
                    1.0 / (sigma + (1.0 + sigma * sigma).sqrt())
                } else {
                    -1.0 / (-sigma + (1.0 + sigma * sigma).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let wpp = Complex64::new(c, 0.0);
                let wpq = Complex64::new(-s, 0.0);
                let wqp = phase.conj() * s;
                let wqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * wpp + akq * wqp;
                    a[(k, q)] = akp * wpq + akq * wqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = wpp.conj() * apk + wqp.conj() * aqk;
                    a[(q, k)] = wpq.conj() * apk + wqq.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * wpp + vkq * wqp;
                    v[(k, q)] = vkp * wpq + vkq * wqq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e-14 * scale {
        return Err(Error::numeric(format!(
            "Jacobi eigensolver failed to converge in {MAX_SWEEPS} sweeps \
             (off-diagonal norm {:.3e})",
            off_diagonal_norm(&a)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| eig[i].total_cmp(&eig[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig[i]).collect();
    let mut vectors = Array2::<Complex64>::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new_col)] = v[(k, old_col)];
        }
    }
    Ok((values, vectors))
}

/// `exp(-i * t * h)` for Hermitian `h`, via the eigendecomposition above.
pub fn hermitian_phase_exp(h: &Array2<Complex64>, t: f64) -> Result<Array2<Complex64>> {
    let (values, v) = hermitian_eigen(h)?;
    let n = values.len();
    let mut u = Array2::<Complex64>::zeros((n, n));
    for (col, &lam) in values.iter().enumerate() {
        let ph = Complex64::from_polar(1.0, -lam * t);
        for row in 0..n {
            for k in 0..n {
                u[(row, k)] += v[(row, col)] * ph * v[(k, col)].conj();
            }
        }
    }
    Ok(u)
}

/// Smallest eigenvalue of a Hermitian matrix (diagnostic for positivity).
pub fn min_eigenvalue(h: &Array2<Complex64>) -> Result<f64> {
    Ok(hermitian_eigen(h)?.0[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(values: &[f64], v: &Array2<Complex64>) -> Array2<Complex64> {
        let n = values.len();
        let mut m = Array2::<Complex64>::zeros((n, n));
        for col in 0..n {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[(i, col)] * values[col] * v[(j, col)].conj();
                }
            }
        }
        m
    }

    #[test]
    fn two_level_eigenvalues_are_plus_minus_rabi() {
        // omega*sigma3 + xi*g*sigma2 has eigenvalues +-sqrt(omega^2 + (xi g)^2)
        let (omega, xg) = (3.0, 4.0);
        let h = array![[c(omega, 0.0), c(0.0, -xg)], [c(0.0, xg), c(-omega, 0.0)]];
        let (values, v) = hermitian_eigen(&h).unwrap();
        assert!((values[0] + 5.0).abs() < 1e-12);
        assert!((values[1] - 5.0).abs() < 1e-12);
        let r = reconstruct(&values, &v);
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[(i, j)] - h[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        // deterministic pseudo-random Hermitian via a small LCG
        let n = 7;
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut h = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..i {
                let z = c(next(), next());
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
            h[(i, i)] = c(next(), 0.0);
        }
        let (values, v) = hermitian_eigen(&h).unwrap();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let r = reconstruct(&values, &v);
        for i in 0..n {
            for j in 0..n {
                assert!((r[(i, j)] - h[(i, j)]).norm() < 1e-11);
            }
        }
        // columns orthonormal
        for a in 0..n {
            for b in 0..n {
                let dot: Complex64 = (0..n).map(|k| v[(k, a)].conj() * v[(k, b)]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn phase_exp_of_diagonal() {
        let h = array![[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-2.0, 0.0)]];
        let u = hermitian_phase_exp(&h, 0.7).unwrap();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, -1.4)).norm() < 1e-13);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, 1.4)).norm() < 1e-13);
        assert!(u[(0, 1)].norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, 0.0)]];
        assert!(hermitian_eigen(&h).is_err());
    }
}
