//! Eve's individual attack: a probe unitary `J` on `H_B ⊗ H_E` before Bob's
//! gate and `K` after it.

mod ensemble;
mod file;
mod library;

pub use ensemble::{exact_holevo, ExactHolevo};
pub use file::{parse_attack_file, read_attack_file, write_attack_file};
pub use library::{builtin_attack, random_attack, BuiltinAttack};

use crate::error::{Error, Result};
use crate::fockspace::{BellKind, CompositeSpace, Factor, FockKet, StateVector};
use crate::qmath::{ComplexMatrix, C64, ZERO};

pub const UNITARY_TOL: f64 = 1e-10;
pub const CONSISTENCY_TOL: f64 = 1e-9;
/// Below this an amplitude counts as zero and its disturbance state is undefined.
pub const AMPLITUDE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AttackUnitary {
    name: String,
    j: ComplexMatrix,
    k: ComplexMatrix,
}

impl AttackUnitary {
    pub fn new(name: impl Into<String>, j: ComplexMatrix, k: ComplexMatrix) -> Result<Self> {
        if j.shape() != k.shape() {
            return Err(Error::DimensionMismatch {
                left_rows: j.rows(),
                left_cols: j.cols(),
                right_rows: k.rows(),
                right_cols: k.cols(),
            });
        }
        j.check_unitary(UNITARY_TOL)?;
        k.check_unitary(UNITARY_TOL)?;
        Ok(Self {
            name: name.into(),
            j,
            k,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn j(&self) -> &ComplexMatrix {
        &self.j
    }

    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    /// Same `J`, different `K`.
    pub fn with_k(&self, k: ComplexMatrix) -> Result<Self> {
        Self::new(self.name.clone(), self.j.clone(), k)
    }

    pub fn be_dim(&self) -> usize {
        self.j.rows()
    }

    fn check_space(&self, space: &CompositeSpace) -> Result<()> {
        if self.be_dim() != space.be_dim() {
            return Err(Error::DimensionMismatch {
                left_rows: self.j.rows(),
                left_cols: self.j.cols(),
                right_rows: space.be_dim(),
                right_cols: space.be_dim(),
            });
        }
        Ok(())
    }
}

/// `J|1^1_B>|e> = α|1^1_B>|α_E> + γ|Γ>` and `J|0^1_B>|e> = β|0^1_B>|β_E> + δ|Δ>`.
///
/// Amplitudes are real and non-negative; their phases live in the states.
/// A state is `None` when its amplitude vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct JDecomposition {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha_e: Option<StateVector>,
    pub beta_e: Option<StateVector>,
    pub gamma_state: Option<StateVector>,
    pub delta_state: Option<StateVector>,
}

/// Splits `image` (on B⊗E) into the part with photon B still in `ket` and the rest.
fn split_image(
    image: &[C64],
    ket: FockKet,
    space: &CompositeSpace,
) -> Result<(f64, Option<StateVector>, f64, Option<StateVector>)> {
    let e_dim = space.ancilla().dim();
    let b = space.b().basis_index(ket)?;
    let kept: Vec<C64> = image[b * e_dim..(b + 1) * e_dim].to_vec();
    let mut rest = image.to_vec();
    rest[b * e_dim..(b + 1) * e_dim].fill(ZERO);

    let normalize = |v: Vec<C64>| {
        let n = crate::qmath::norm(&v);
        let state = (n > AMPLITUDE_TOL).then(|| StateVector::new(v.iter().map(|z| z / n).collect()));
        (n, state)
    };
    let (keep_amp, keep_state) = normalize(kept);
    let (rest_amp, rest_state) = normalize(rest);
    Ok((keep_amp, keep_state, rest_amp, rest_state))
}

pub fn decompose_j(attack: &AttackUnitary, space: &CompositeSpace) -> Result<JDecomposition> {
    attack.check_space(space)?;
    attack.j.check_unitary(UNITARY_TOL)?;
    let e = space.ancilla().initial_state();
    let one = space.be_product(FockKet::H, &e)?;
    let zero = space.be_product(FockKet::V, &e)?;
    let (alpha, alpha_e, gamma, gamma_state) =
        split_image(one.apply(&attack.j)?.amplitudes(), FockKet::H, space)?;
    let (beta, beta_e, delta, delta_state) =
        split_image(zero.apply(&attack.j)?.amplitudes(), FockKet::V, space)?;
    Ok(JDecomposition {
        alpha,
        beta,
        gamma,
        delta,
        alpha_e,
        beta_e,
        gamma_state,
        delta_state,
    })
}

/// `(c, d) = (<Γ|Z_B|Γ>, <Δ|Z_B|Δ>)`; `None` where the disturbance amplitude is zero.
pub fn eve_params(dec: &JDecomposition, space: &CompositeSpace) -> Result<(Option<f64>, Option<f64>)> {
    let z = space.z_be();
    let value = |s: &Option<StateVector>| -> Result<Option<f64>> {
        s.as_ref()
            .map(|s| s.expectation(&z).map(|v| v.re.clamp(-1.0, 1.0)))
            .transpose()
    };
    Ok((value(&dec.gamma_state)?, value(&dec.delta_state)?))
}

/// Everything observable or extractable from one attack.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub p01: f64,
    pub p10: f64,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub p: f64,
    pub q: f64,
    pub decomposition: JDecomposition,
    pub mu_minus: StateVector,
    pub mu_plus: StateVector,
    pub nu_minus: StateVector,
    pub nu_plus: StateVector,
}

pub fn post_attack_states(attack: &AttackUnitary, space: &CompositeSpace) -> Result<AttackOutcome> {
    attack.check_space(space)?;
    attack.k.check_unitary(UNITARY_TOL)?;
    let j = space.embed_be(&attack.j)?;
    let k = space.embed_be(&attack.k)?;
    let z = space.embed_op(&space.b().z_gate(), Factor::B)?;

    let psi_minus = space.bell_state(BellKind::Minus);
    let psi_plus = space.bell_state(BellKind::Plus);
    let j_minus = psi_minus.apply(&j)?;
    let j_plus = psi_plus.apply(&j)?;

    let (pi01, pi10) = space.anticorr_projectors();
    let prob = |proj: &ComplexMatrix| -> Result<f64> {
        Ok(0.5 * (j_minus.expectation(proj)?.re + j_plus.expectation(proj)?.re))
    };
    let p01 = prob(&pi01)?;
    let p10 = prob(&pi10)?;

    let mu_minus = j_minus.apply(&k)?;
    let mu_plus = j_plus.apply(&k)?;
    let nu_minus = j_minus.apply(&z)?.apply(&k)?;
    let nu_plus = j_plus.apply(&z)?.apply(&k)?;

    let p = mu_plus.inner(&nu_minus);
    let p_alt = mu_minus.inner(&nu_plus);
    let q = mu_plus.inner(&nu_plus);
    let q_alt = mu_minus.inner(&nu_minus);
    for (label, v) in [("p", p), ("q", q)] {
        if v.im.abs() >= CONSISTENCY_TOL {
            return Err(Error::Consistency(format!("{label} has imaginary part {:e}", v.im)));
        }
    }
    if (p - p_alt).norm() >= CONSISTENCY_TOL || (q - q_alt).norm() >= CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "<mu+|nu-> = {p}, <mu-|nu+> = {p_alt}; <mu+|nu+> = {q}, <mu-|nu-> = {q_alt}"
        )));
    }
    for (label, a, b) in [("mu", &mu_minus, &mu_plus), ("nu", &nu_minus, &nu_plus)] {
        let overlap = a.inner(b).norm();
        if overlap >= CONSISTENCY_TOL {
            return Err(Error::Consistency(format!("<{label}-|{label}+> = {overlap:e}")));
        }
    }

    let decomposition = decompose_j(attack, space)?;
    let (c, d) = eve_params(&decomposition, space)?;
    Ok(AttackOutcome {
        p01,
        p10,
        c,
        d,
        p: p.re,
        q: q.re,
        decomposition,
        mu_minus,
        mu_plus,
        nu_minus,
        nu_plus,
    })
}
