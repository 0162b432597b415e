use super::eigen::herm_eigvals;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Eigenvalues in `[-NEGATIVE_CLAMP, 0)` are rounding noise and count as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-6;

fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits of a probability vector (or density spectrum).
pub fn spectrum_entropy(values: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &x in values {
        if x < -NEGATIVE_CLAMP {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {x:e}")));
        }
        sum -= plogp(x.max(0.0));
    }
    Ok(sum)
}

/// `S(rho) = -tr rho log2 rho`.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::NotDensityMatrix(format!("trace {tr}")));
    }
    spectrum_entropy(&herm_eigvals(rho)?)
}

/// `H(x) = -x log2 x - (1-x) log2 (1-x)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::OutOfDomain {
            value: x,
            domain: "[0, 1]",
        });
    }
    let x = x.clamp(0.0, 1.0);
    let y = 1.0 - x;
    // Smaller term first so H(x) and H(1-x) sum in the same order.
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    Ok(0.0 - (plogp(lo) + plogp(hi)))
}
