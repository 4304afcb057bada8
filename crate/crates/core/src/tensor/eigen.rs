//! Hermitian eigenvalues by cyclic Jacobi rotations.
//!
//! A Hermitian `n x n` matrix `H = A + iB` is embedded as the real symmetric
//! `2n x 2n` matrix `[[A, -B], [B, A]]`, whose spectrum is the spectrum of `H`
//! with every eigenvalue doubled. Cyclic Jacobi on the embedding converges to
//! roughly machine precision relative to the spectral norm, comfortably inside
//! the 1e-9 target.

use alloc::vec;
use alloc::vec::Vec;


use super::matrix::{ComplexMatrix, HERMITIAN_TOL};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let herr = h.hermiticity_error();
    if herr > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            // Symmetrize so roundoff-level anti-Hermitian parts are dropped.
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[(i + n) * m + j] = z.im;
            a[i * m + (j + n)] = -z.im;
        }
    }
    let mut evs = symmetric_eigenvalues(&mut a, m);
    evs.sort_by(|x, y| x.total_cmp(y));
    // Each eigenvalue appears twice; take every other one.
    Ok(evs.into_iter().step_by(2).collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?[0])
}

fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return vec![0.0; n];
    }
    let stop = f64::EPSILON * f64::EPSILON * total;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if 2.0 * off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn identity_and_diagonal() {
        assert!((min_eigenvalue(&ComplexMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::from_real_diagonal(&[3.0, -2.0, 5.0]);
        let evs = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(evs.len(), 3);
        assert!((evs[0] + 2.0).abs() < 1e-14);
        assert!((evs[1] - 3.0).abs() < 1e-14);
        assert!((evs[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_has_plus_minus_one() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let evs = hermitian_eigenvalues(&y).unwrap();
        assert!((evs[0] + 1.0).abs() < 1e-14 && (evs[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(min_eigenvalue(&m), Err(Error::NotHermitian(_))));
        assert!(matches!(
            min_eigenvalue(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn zero_matrix() {
        let evs = hermitian_eigenvalues(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(evs, vec![0.0; 3]);
    }
}
