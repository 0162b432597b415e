//! Multi-photon polarization basis and the composite space `H_A ⊗ H_B ⊗ H_E`.
//!
//! A channel with at most `n_max` photons is spanned by the kets `|m^n>`
//! (`n` photons, `m` of them horizontally polarized), enumerated with `n`
//! ascending and then `m` ascending. For `n_max = 2` the order is
//! `|0^0>, |0^1>, |1^1>, |0^2>, |1^2>, |2^2>`. Composite indices are row-major
//! with A slowest and E fastest.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{inner, norm, ComplexMatrix, C64, ONE, ZERO};

pub const DEFAULT_N_MAX_A: u32 = 1;
pub const DEFAULT_N_MAX_B: u32 = 2;
pub const DEFAULT_ANCILLA_DIM: usize = 6;

/// `|m^n>`: `n` photons, `m` horizontally polarized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FockKet {
    pub photons: u32,
    pub horizontal: u32,
}

impl FockKet {
    pub const VACUUM: FockKet = FockKet::new(0, 0);
    /// `|0^1>`, the single vertically polarized photon.
    pub const V: FockKet = FockKet::new(1, 0);
    /// `|1^1>`, the single horizontally polarized photon.
    pub const H: FockKet = FockKet::new(1, 1);

    pub const fn new(photons: u32, horizontal: u32) -> Self {
        Self { photons, horizontal }
    }

    /// Eigenvalue of the generalized Z gate, `(-1)^m`.
    pub fn parity(&self) -> f64 {
        if self.horizontal.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for FockKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}^{}>", self.horizontal, self.photons)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChannelLabel {
    A,
    B,
    E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSpace {
    label: ChannelLabel,
    n_max: u32,
    basis: Vec<FockKet>,
}

impl ChannelSpace {
    pub fn new(label: ChannelLabel, n_max: u32) -> Self {
        let basis = (0..=n_max)
            .flat_map(|n| (0..=n).map(move |m| FockKet::new(n, m)))
            .collect();
        Self { label, n_max, basis }
    }

    pub fn label(&self) -> ChannelLabel {
        self.label
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FockKet] {
        &self.basis
    }

    pub fn basis_index(&self, ket: FockKet) -> Result<usize> {
        if ket.horizontal > ket.photons || ket.photons > self.n_max {
            return Err(Error::KetOutOfSpace {
                photons: ket.photons,
                horizontal: ket.horizontal,
                n_max: self.n_max,
            });
        }
        let n = ket.photons as usize;
        // Sectors 0..n hold 1 + 2 + ... + n kets.
        Ok(n * (n + 1) / 2 + ket.horizontal as usize)
    }

    pub fn ket_at(&self, index: usize) -> Option<FockKet> {
        self.basis.get(index).copied()
    }

    /// Generalized Z: `Z|m^n> = (-1)^m |m^n>`.
    pub fn z_gate(&self) -> ComplexMatrix {
        let diag: Vec<f64> = self.basis.iter().map(FockKet::parity).collect();
        ComplexMatrix::from_real_diag(&diag)
    }
}

/// Eve's probe. The basis is abstract unless an attack needs to store a
/// photon there, in which case it reuses the channel enumeration of B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AncillaSpace {
    dim: usize,
    initial: usize,
}

impl AncillaSpace {
    pub fn new(dim: usize, initial: usize) -> Result<Self> {
        if dim == 0 || initial >= dim {
            return Err(Error::Config(format!(
                "ancilla initial index {initial} outside dimension {dim}"
            )));
        }
        Ok(Self { dim, initial })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis index of `|e_E>`.
    pub fn initial_index(&self) -> usize {
        self.initial
    }

    pub fn initial_state(&self) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        v[self.initial] = ONE;
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    A,
    B,
    E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    a: ChannelSpace,
    b: ChannelSpace,
    e: AncillaSpace,
}

impl Default for CompositeSpace {
    fn default() -> Self {
        Self::new(DEFAULT_N_MAX_A, DEFAULT_N_MAX_B, DEFAULT_ANCILLA_DIM).expect("default space")
    }
}

impl CompositeSpace {
    /// Alice and Bob channels sized by photon number; `|e_E>` is ancilla index 0.
    pub fn new(n_max_a: u32, n_max_b: u32, ancilla_dim: usize) -> Result<Self> {
        if n_max_a < 1 || n_max_b < 1 {
            return Err(Error::Config("channels A and B need n_max >= 1".into()));
        }
        Ok(Self {
            a: ChannelSpace::new(ChannelLabel::A, n_max_a),
            b: ChannelSpace::new(ChannelLabel::B, n_max_b),
            e: AncillaSpace::new(ancilla_dim, 0)?,
        })
    }

    /// Default channels with the ancilla sized so that `dim(B ⊗ E) = be_dim`.
    pub fn for_be_dim(be_dim: usize) -> Result<Self> {
        let b_dim = ChannelSpace::new(ChannelLabel::B, DEFAULT_N_MAX_B).dim();
        if be_dim == 0 || !be_dim.is_multiple_of(b_dim) {
            return Err(Error::Config(format!(
                "B⊗E dimension {be_dim} is not a multiple of dim(B) = {b_dim}"
            )));
        }
        Self::new(DEFAULT_N_MAX_A, DEFAULT_N_MAX_B, be_dim / b_dim)
    }

    pub fn a(&self) -> &ChannelSpace {
        &self.a
    }

    pub fn b(&self) -> &ChannelSpace {
        &self.b
    }

    pub fn ancilla(&self) -> &AncillaSpace {
        &self.e
    }

    pub fn factor_dim(&self, factor: Factor) -> usize {
        match factor {
            Factor::A => self.a.dim(),
            Factor::B => self.b.dim(),
            Factor::E => self.e.dim(),
        }
    }

    pub fn be_dim(&self) -> usize {
        self.b.dim() * self.e.dim()
    }

    pub fn dim(&self) -> usize {
        self.a.dim() * self.be_dim()
    }

    pub fn index(&self, a: usize, b: usize, e: usize) -> usize {
        (a * self.b.dim() + b) * self.e.dim() + e
    }

    pub fn split(&self, index: usize) -> (usize, usize, usize) {
        let e = index % self.e.dim();
        let rest = index / self.e.dim();
        (rest / self.b.dim(), rest % self.b.dim(), e)
    }

    /// `identity ⊗ op ⊗ identity` in the A, B, E ordering.
    pub fn embed_op(&self, op: &ComplexMatrix, target: Factor) -> Result<ComplexMatrix> {
        let dim = self.factor_dim(target);
        if op.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                left_rows: op.rows(),
                left_cols: op.cols(),
                right_rows: dim,
                right_cols: dim,
            });
        }
        let (before, after) = match target {
            Factor::A => (1, self.be_dim()),
            Factor::B => (self.a.dim(), self.e.dim()),
            Factor::E => (self.a.dim() * self.b.dim(), 1),
        };
        Ok(ComplexMatrix::identity(before)
            .tensor(op)
            .tensor(&ComplexMatrix::identity(after)))
    }

    /// `identity_A ⊗ op` for an operator on `H_B ⊗ H_E`.
    pub fn embed_be(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = self.be_dim();
        if op.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                left_rows: op.rows(),
                left_cols: op.cols(),
                right_rows: dim,
                right_cols: dim,
            });
        }
        Ok(ComplexMatrix::identity(self.a.dim()).tensor(op))
    }

    /// `Z_B ⊗ identity_E` on `H_B ⊗ H_E`.
    pub fn z_be(&self) -> ComplexMatrix {
        self.b.z_gate().tensor(&ComplexMatrix::identity(self.e.dim()))
    }

    /// `|ket_B> ⊗ |e_E>` on `H_B ⊗ H_E`.
    pub fn be_product(&self, ket: FockKet, ancilla: &[C64]) -> Result<StateVector> {
        let b = self.b.basis_index(ket)?;
        let mut v = vec![ZERO; self.be_dim()];
        v[b * self.e.dim()..(b + 1) * self.e.dim()].copy_from_slice(ancilla);
        Ok(StateVector::new(v))
    }

    /// `(|0^1_A 1^1_B> ∓ |1^1_A 0^1_B>)/√2 ⊗ |e_E>` for psi-minus / psi-plus.
    pub fn bell_state(&self, kind: BellKind) -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = match kind {
            BellKind::Minus => -1.0,
            BellKind::Plus => 1.0,
        };
        let e0 = self.e.initial_index();
        let a0 = self.a.basis_index(FockKet::V).expect("n_max_a >= 1");
        let a1 = self.a.basis_index(FockKet::H).expect("n_max_a >= 1");
        let b0 = self.b.basis_index(FockKet::V).expect("n_max_b >= 1");
        let b1 = self.b.basis_index(FockKet::H).expect("n_max_b >= 1");
        let mut v = vec![ZERO; self.dim()];
        v[self.index(a0, b1, e0)] = C64::new(s, 0.0);
        v[self.index(a1, b0, e0)] = C64::new(sign * s, 0.0);
        StateVector::new(v)
    }

    /// Projector onto `|a_A b_B>` with identity on the ancilla.
    pub fn pair_projector(&self, a: FockKet, b: FockKet) -> Result<ComplexMatrix> {
        let ai = self.a.basis_index(a)?;
        let bi = self.b.basis_index(b)?;
        let mut p = ComplexMatrix::zeros(self.dim(), self.dim());
        for e in 0..self.e.dim() {
            let i = self.index(ai, bi, e);
            p[(i, i)] = ONE;
        }
        Ok(p)
    }

    /// `(Π01, Π10)`: `|0^1_A 1^1_B><0^1_A 1^1_B|` and `|1^1_A 0^1_B><1^1_A 0^1_B|`.
    pub fn anticorr_projectors(&self) -> (ComplexMatrix, ComplexMatrix) {
        (
            self.pair_projector(FockKet::V, FockKet::H).expect("single-photon sector"),
            self.pair_projector(FockKet::H, FockKet::V).expect("single-photon sector"),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    Minus,
    Plus,
}

/// Amplitudes over some space; which one is implied by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<C64>);

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        Self(amplitudes)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.0, &other.0)
    }

    pub fn apply(&self, op: &ComplexMatrix) -> Result<StateVector> {
        op.mul_vec(&self.0).map(StateVector)
    }

    pub fn scale(&self, factor: C64) -> StateVector {
        StateVector(self.0.iter().map(|z| z * factor).collect())
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.0)
    }

    /// `<self|op|self>`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        Ok(inner(&self.0, &op.mul_vec(&self.0)?))
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
