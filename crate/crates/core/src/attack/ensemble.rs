//! Holevo quantities from explicitly simulated density matrices.
//!
//! Nothing here uses the decomposition of `J` or the closed-form spectra:
//! the ensembles are built as matrices on the full composite space and
//! diagonalized.

use serde::Serialize;

use super::AttackUnitary;
use crate::error::Result;
use crate::fockspace::{BellKind, CompositeSpace, Factor};
use crate::qmath::{von_neumann_entropy, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactHolevo {
    /// `S[E(rho_AB)]`
    pub s_total: f64,
    /// `S[E_1(rho_AB)]`
    pub s_identity_branch: f64,
    /// `S[E_Z(rho_AB)]`
    pub s_z_branch: f64,
    /// `S[E(psi-)]`
    pub s_psi_minus: f64,
    /// `S[E(psi+)]`
    pub s_psi_plus: f64,
    pub i_be: f64,
    pub i_ae: f64,
}

pub fn exact_holevo(attack: &AttackUnitary, space: &CompositeSpace) -> Result<ExactHolevo> {
    let j = space.embed_be(attack.j())?;
    let k = space.embed_be(attack.k())?;
    let z = space.embed_op(&space.b().z_gate(), Factor::B)?;
    let through_identity = k.matmul(&j)?;
    let through_z = k.matmul(&z)?.matmul(&j)?;

    let half = C64::new(0.5, 0.0);
    let minus = space.bell_state(BellKind::Minus).projector();
    let plus = space.bell_state(BellKind::Plus).projector();
    let rho = minus.add(&plus)?.scale(half);

    // E_1 and E_Z for a given input state; E is their equal mixture.
    let branches = |input: &ComplexMatrix| -> Result<(ComplexMatrix, ComplexMatrix)> {
        Ok((input.conjugate_by(&through_identity)?, input.conjugate_by(&through_z)?))
    };
    let mix = |a: &ComplexMatrix, b: &ComplexMatrix| -> Result<ComplexMatrix> { Ok(a.add(b)?.scale(half)) };

    let (rho_one, rho_z) = branches(&rho)?;
    let total = mix(&rho_one, &rho_z)?;
    let (m1, mz) = branches(&minus)?;
    let (p1, pz) = branches(&plus)?;

    let s_total = von_neumann_entropy(&total)?;
    let s_identity_branch = von_neumann_entropy(&rho_one)?;
    let s_z_branch = von_neumann_entropy(&rho_z)?;
    let s_psi_minus = von_neumann_entropy(&mix(&m1, &mz)?)?;
    let s_psi_plus = von_neumann_entropy(&mix(&p1, &pz)?)?;

    Ok(ExactHolevo {
        s_total,
        s_identity_branch,
        s_z_branch,
        s_psi_minus,
        s_psi_plus,
        i_be: s_total - 0.5 * s_identity_branch - 0.5 * s_z_branch,
        i_ae: s_total - 0.5 * s_psi_minus - 0.5 * s_psi_plus,
    })
}
