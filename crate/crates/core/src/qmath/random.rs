use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix.
///
/// Gram-Schmidt leaves `R` with a positive real diagonal, which is the phase
/// fix that makes `Q` Haar rather than merely unitary.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<C64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        C64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        if orthonormalize(&mut cols) {
            let mut q = ComplexMatrix::zeros(n, n);
            for (j, col) in cols.iter().enumerate() {
                for (i, &z) in col.iter().enumerate() {
                    q[(i, j)] = z;
                }
            }
            return q;
        }
    }
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        m[(i, i)] = C64::new(d, 0.0);
        for j in (i + 1)..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = C64::new(re, im);
            m[(j, i)] = C64::new(re, -im);
        }
    }
    m
}

/// Modified Gram-Schmidt in place, applied twice for stability.
/// Returns false if the columns are numerically dependent.
fn orthonormalize(cols: &mut [Vec<C64>]) -> bool {
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: C64 = done[k].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, &q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * q;
                }
            }
        }
        let n = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-10 {
            return false;
        }
        cols[j].iter_mut().for_each(|z| *z /= n);
    }
    true
}
