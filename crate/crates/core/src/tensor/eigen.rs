//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies a real Givens rotation to the resulting real
//! symmetric 2×2 block. Sweeps continue until the off-diagonal Frobenius
//! norm falls below `1e-13 · ‖H‖_F` or `MAX_SWEEPS` is reached.

use super::{ComplexMatrix, C64};
use crate::error::{invalid, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V Λ V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(h, false).map(|e| e.values)
}

pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    jacobi(h, true)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    if !h.is_square() {
        return invalid(format!("eigensolver needs a square matrix, got {}x{}", h.rows(), h.cols()));
    }
    let scale = h.data().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let herm_err = h.hermiticity_error();
    if herm_err > HERMITIAN_TOL * scale {
        return invalid(format!("matrix is not Hermitian (deviation {herm_err:.3e})"));
    }

    let n = h.rows();
    // symmetrize so roundoff in the input cannot bias the rotations
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(h[(i, i)].re, 0.0)
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * 0.5
        }
    });
    let mut v = if want_vectors { Some(ComplexMatrix::identity(n)) } else { None };

    let norm = a.frobenius_norm();
    if norm > 0.0 {
        let threshold = OFF_DIAGONAL_TOL * norm;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) < threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, v.as_mut(), p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = match v {
        Some(v) => ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]),
        None => ComplexMatrix::zeros(0, 0),
    };
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // negligible pivot relative to both diagonal entries
    if mag < 1e-300 || (app.abs() + aqq.abs() > 0.0 && mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs())) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.rows();
    // A ← A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A ← G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * gpp + vkq * gqp;
            v[(k, q)] = vkp * gpq + vkq * gqq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_sorted() {
        let vals = hermitian_eigenvalues(&ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn maximally_mixed_four() {
        let vals = hermitian_eigenvalues(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert_eq!(vals, vec![0.25; 4]);
    }

    #[test]
    fn pauli_y_spectrum_and_vectors() {
        let y = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        });
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-15);
        let vv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, 0.0));
        assert!(hermitian_eigenvalues(&m).is_err());
        assert!(hermitian_eigenvalues(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn degenerate_block() {
        // two equal eigenvalues with a coupling to a third level
        let m = ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) | (1, 1) => C64::new(1.0, 0.0),
            (2, 2) => C64::new(2.0, 0.0),
            (0, 2) => C64::new(0.0, 0.5),
            (2, 0) => C64::new(0.0, -0.5),
            _ => C64::new(0.0, 0.0),
        });
        let e = hermitian_eigen(&m).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-14);
        let sum: f64 = e.values.iter().sum();
        assert!((sum - 4.0).abs() < 1e-14);
    }
}
