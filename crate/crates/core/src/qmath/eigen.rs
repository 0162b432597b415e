//! Cyclic Jacobi diagonalization of complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the usual real symmetric Jacobi rotation. Storage is
//! the full matrix; the problems handled here stay below a few hundred rows.

use num_complex::Complex64 as C64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the eigenvectors matching `values`.
    pub vectors: Option<ComplexMatrix>,
}

impl EigenSpectrum {
    /// `V diag(values) V^dag`, when eigenvectors are present.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let v = self.vectors.as_ref()?;
        let d = ComplexMatrix::from_real_diag(&self.values);
        v.matmul(&d).ok()?.matmul(&v.adjoint()).ok()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Full spectrum of a Hermitian matrix with eigenvectors.
pub fn herm_eig(m: &ComplexMatrix) -> Result<EigenSpectrum> {
    jacobi(m, true)
}

/// Eigenvalues only; skips accumulating the rotations.
pub fn herm_eigvals(m: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|s| s.values)
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<EigenSpectrum> {
    if !m.is_square() {
        return Err(Error::NotHermitian {
            max_asymmetry: f64::INFINITY,
        });
    }
    let max_asymmetry = m.max_asymmetry();
    if max_asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_asymmetry });
    }

    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let scale = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFF_DIAGONAL_TOL * scale.max(1.0);
    // Pivots this small relative to the matrix cannot move any eigenvalue.
    let negligible = f64::EPSILON * 1e-3 * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= negligible {
                    continue;
                }
                rotate(&mut a, v.as_mut(), p, q, apq, r);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| {
        let mut sorted = ComplexMatrix::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[(row, new_col)] = v[(row, old_col)];
            }
        }
        sorted
    });
    Ok(EigenSpectrum { values, vectors })
}

/// Applies `A <- W^dag A W` (and `V <- V W`) with
/// `W = diag(1, e^{-i phi}) [[c, s], [-s, c]]` on the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize, apq: C64, r: f64) {
    let n = a.rows();
    let phase = apq / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let phase_conj = phase.conj();
    // Columns: A <- A W.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * phase_conj * s;
        a[(k, q)] = akp * s + akq * phase_conj * c;
    }
    // Rows: A <- W^dag A.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * c - vkq * phase_conj * s;
            v[(k, q)] = vkp * s + vkq * phase_conj * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::pauli_x;

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let spec = herm_eig(&ComplexMatrix::from_real_diag(&[0.5, 0.5])).unwrap();
        assert_eq!(spec.values, vec![0.5, 0.5]);
        let spec = herm_eig(&ComplexMatrix::from_real_diag(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(spec.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let spec = herm_eig(&pauli_x()).unwrap();
        assert!((spec.values[0] + 1.0).abs() < 1e-14);
        assert!((spec.values[1] - 1.0).abs() < 1e-14);
        let rebuilt = spec.reconstruct().unwrap();
        assert!(rebuilt.max_abs_diff(&pauli_x()) < 1e-14);
    }

    #[test]
    fn complex_pivot() {
        // [[1, i], [-i, 1]] has spectrum {0, 2}.
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(1.0, 0.0)],
        )
        .unwrap();
        let spec = herm_eig(&m).unwrap();
        assert!(spec.values[0].abs() < 1e-14);
        assert!((spec.values[1] - 2.0).abs() < 1e-14);
        assert!(spec.reconstruct().unwrap().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        match herm_eig(&m) {
            Err(Error::NotHermitian { max_asymmetry }) => assert_eq!(max_asymmetry, 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
