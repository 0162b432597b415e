//! Born-rule measurements on the composite state.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockspace::{CompositeSpace, FockKet, StateVector};

pub const NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    /// Alice `|0^1>`, Bob `|1^1>`.
    Anticorr01,
    /// Alice `|1^1>`, Bob `|0^1>`.
    Anticorr10,
    /// One photon each, same polarization.
    Correlated,
    /// Everything else: vacuum or several photons in B, a silent detector at A.
    WrongOther,
}

impl CheckOutcome {
    pub const ALL: [CheckOutcome; 4] = [
        CheckOutcome::Anticorr01,
        CheckOutcome::Anticorr10,
        CheckOutcome::Correlated,
        CheckOutcome::WrongOther,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckOutcome::Anticorr01 => "anticorr_01",
            CheckOutcome::Anticorr10 => "anticorr_10",
            CheckOutcome::Correlated => "correlated",
            CheckOutcome::WrongOther => "wrong_other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BellOutcome {
    PsiPlus,
    PsiMinus,
    Fail,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 3] = [BellOutcome::PsiPlus, BellOutcome::PsiMinus, BellOutcome::Fail];

    pub fn as_str(self) -> &'static str {
        match self {
            BellOutcome::PsiPlus => "psi_plus",
            BellOutcome::PsiMinus => "psi_minus",
            BellOutcome::Fail => "fail",
        }
    }

    /// Parity of the two encoded bits, if the analysis succeeded.
    pub fn xor(self) -> Option<bool> {
        match self {
            BellOutcome::PsiPlus => Some(true),
            BellOutcome::PsiMinus => Some(false),
            BellOutcome::Fail => None,
        }
    }
}

fn check_norm(state: &StateVector) -> Result<()> {
    let n2 = state.norm().powi(2);
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    Ok(())
}

/// Weight of `|a_A b_B>` summed over the ancilla.
fn pair_weight(state: &StateVector, space: &CompositeSpace, a: FockKet, b: FockKet) -> f64 {
    let ai = space.a().basis_index(a).expect("single photon in A");
    let bi = space.b().basis_index(b).expect("single photon in B");
    let amps = state.amplitudes();
    (0..space.ancilla().dim())
        .map(|e| amps[space.index(ai, bi, e)].norm_sqr())
        .sum()
}

/// Probabilities in [`CheckOutcome::ALL`] order.
pub fn check_probabilities(state: &StateVector, space: &CompositeSpace) -> Result<[f64; 4]> {
    check_norm(state)?;
    let (v, h) = (FockKet::V, FockKet::H);
    let p01 = pair_weight(state, space, v, h);
    let p10 = pair_weight(state, space, h, v);
    let corr = pair_weight(state, space, v, v) + pair_weight(state, space, h, h);
    let rest = (1.0 - p01 - p10 - corr).max(0.0);
    Ok([p01, p10, corr, rest])
}

/// Probabilities in [`BellOutcome::ALL`] order; the ancilla is traced out.
pub fn bell_probabilities(state: &StateVector, space: &CompositeSpace) -> Result<[f64; 3]> {
    check_norm(state)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a0 = space.a().basis_index(FockKet::V)?;
    let a1 = space.a().basis_index(FockKet::H)?;
    let b0 = space.b().basis_index(FockKet::V)?;
    let b1 = space.b().basis_index(FockKet::H)?;
    let amps = state.amplitudes();
    let (mut plus, mut minus) = (0.0, 0.0);
    for e in 0..space.ancilla().dim() {
        let x = amps[space.index(a0, b1, e)];
        let y = amps[space.index(a1, b0, e)];
        plus += ((x + y) * s).norm_sqr();
        minus += ((x - y) * s).norm_sqr();
    }
    Ok([plus, minus, (1.0 - plus - minus).max(0.0)])
}

/// Index into `probs` selected by the uniform draw `u ∈ [0, 1)`.
pub(crate) fn categorical(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // Rounding left u above the total; take the last class with weight.
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

pub fn measure_check<R: Rng + ?Sized>(state: &StateVector, space: &CompositeSpace, rng: &mut R) -> Result<CheckOutcome> {
    let probs = check_probabilities(state, space)?;
    Ok(CheckOutcome::ALL[categorical(&probs, rng.random())])
}

pub fn measure_bell<R: Rng + ?Sized>(state: &StateVector, space: &CompositeSpace, rng: &mut R) -> Result<BellOutcome> {
    let probs = bell_probabilities(state, space)?;
    Ok(BellOutcome::ALL[categorical(&probs, rng.random())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{builtin_attack, BuiltinAttack};
    use crate::fockspace::BellKind;
    use crate::qmath::{ComplexMatrix, C64, ONE, ZERO};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn singlet_is_anticorrelated() {
        let space = CompositeSpace::default();
        let probs = check_probabilities(&space.bell_state(BellKind::Minus), &space).unwrap();
        assert!(close(&probs, &[0.5, 0.5, 0.0, 0.0]));
    }

    #[test]
    fn bit_flipped_singlet_is_correlated() {
        let space = CompositeSpace::default();
        let flip = builtin_attack(BuiltinAttack::Bitflip, &space).unwrap();
        let state = space
            .bell_state(BellKind::Minus)
            .apply(&space.embed_be(flip.j()).unwrap())
            .unwrap();
        let probs = check_probabilities(&state, &space).unwrap();
        assert!(close(&probs, &[0.0, 0.0, 1.0, 0.0]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(measure_check(&state, &space, &mut rng).unwrap(), CheckOutcome::Correlated);
    }

    #[test]
    fn vacuum_in_b_is_wrong() {
        let space = CompositeSpace::default();
        let mut amps = vec![ZERO; space.dim()];
        let a = space.a().basis_index(FockKet::V).unwrap();
        amps[space.index(a, 0, 0)] = ONE;
        let state = StateVector::new(amps);
        let probs = check_probabilities(&state, &space).unwrap();
        assert!(close(&probs, &[0.0, 0.0, 0.0, 1.0]));
        let probs = bell_probabilities(&state, &space).unwrap();
        assert!(close(&probs, &[0.0, 0.0, 1.0]));
    }

    #[test]
    fn bell_analysis_of_identity_attack() {
        let space = CompositeSpace::default();
        let minus = space.bell_state(BellKind::Minus);
        assert!(close(&bell_probabilities(&minus, &space).unwrap(), &[0.0, 1.0, 0.0]));
        let z = space
            .embed_op(&space.b().z_gate(), crate::fockspace::Factor::B)
            .unwrap();
        let nu_minus = minus.apply(&z).unwrap();
        assert!(close(&bell_probabilities(&nu_minus, &space).unwrap(), &[1.0, 0.0, 0.0]));
    }

    #[test]
    fn photon_kept_by_eve_fails_bell_analysis() {
        let space = CompositeSpace::default();
        let swap = builtin_attack(BuiltinAttack::VacuumSwap, &space).unwrap();
        let state = space
            .bell_state(BellKind::Minus)
            .apply(&space.embed_be(swap.j()).unwrap())
            .unwrap();
        assert!(close(&bell_probabilities(&state, &space).unwrap(), &[0.0, 0.0, 1.0]));
    }

    #[test]
    fn rejects_unnormalized_state() {
        let space = CompositeSpace::default();
        let state = space.bell_state(BellKind::Plus).scale(C64::new(2.0, 0.0));
        assert!(matches!(check_probabilities(&state, &space), Err(Error::NotNormalized(_))));
        let _ = ComplexMatrix::identity(1);
    }

    #[test]
    fn categorical_edges() {
        assert_eq!(categorical(&[0.5, 0.5], 0.0), 0);
        assert_eq!(categorical(&[0.5, 0.5], 0.5), 1);
        assert_eq!(categorical(&[0.3, 0.7, 0.0], 0.999_999_999_999_999_9), 1);
    }
}
