//! Dense complex linear algebra and entropy functions. All logarithms are base 2.

mod eigen;
mod entropy;
mod matrix;
mod random;

pub use eigen::{herm_eig, herm_eigvals, EigenSpectrum, HERMITIAN_TOL, MAX_SWEEPS};
pub use entropy::{binary_entropy, spectrum_entropy, von_neumann_entropy, NEGATIVE_CLAMP, TRACE_TOL};
pub use matrix::{inner, norm, pauli_x, pauli_z, ComplexMatrix, C64, ONE, ZERO};
pub use random::{haar_unitary, random_hermitian};
