use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::AttackUnitary;
use crate::error::{Error, Result};
use crate::fockspace::{CompositeSpace, FockKet};
use crate::qmath::{haar_unitary, ComplexMatrix, C64, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinAttack {
    Identity,
    /// Flips `|0^1_B> <-> |1^1_B>` on the way to Bob; nothing on the way back.
    Bitflip,
    /// Moves photon B into the (vacuum) ancilla and returns it after Bob's gate.
    VacuumSwap,
    /// Swaps photon B for an ancilla photon prepared diagonal, swaps back afterwards.
    Intercept,
}

impl BuiltinAttack {
    pub const ALL: [BuiltinAttack; 4] = [
        BuiltinAttack::Identity,
        BuiltinAttack::Bitflip,
        BuiltinAttack::VacuumSwap,
        BuiltinAttack::Intercept,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinAttack::Identity => "identity",
            BuiltinAttack::Bitflip => "bitflip",
            BuiltinAttack::VacuumSwap => "vacuum_swap",
            BuiltinAttack::Intercept => "intercept",
        }
    }
}

impl fmt::Display for BuiltinAttack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinAttack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinAttack::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAttack(s.to_string()))
    }
}

pub fn builtin_attack(which: BuiltinAttack, space: &CompositeSpace) -> Result<AttackUnitary> {
    let n = space.be_dim();
    let (j, k) = match which {
        BuiltinAttack::Identity => (ComplexMatrix::identity(n), ComplexMatrix::identity(n)),
        BuiltinAttack::Bitflip => {
            let b = space.b();
            let mut flip = ComplexMatrix::identity(b.dim());
            let v = b.basis_index(FockKet::V)?;
            let h = b.basis_index(FockKet::H)?;
            flip[(v, v)] = C64::new(0.0, 0.0);
            flip[(h, h)] = C64::new(0.0, 0.0);
            flip[(v, h)] = ONE;
            flip[(h, v)] = ONE;
            let j = flip.tensor(&ComplexMatrix::identity(space.ancilla().dim()));
            (j, ComplexMatrix::identity(n))
        }
        BuiltinAttack::VacuumSwap => {
            let swap = photonic_swap(space)?;
            (swap.clone(), swap.adjoint())
        }
        BuiltinAttack::Intercept => {
            let swap = photonic_swap(space)?;
            let prep = ComplexMatrix::identity(space.b().dim()).tensor(&diagonal_preparation(space)?);
            (swap.matmul(&prep)?, swap)
        }
    };
    AttackUnitary::new(which.name(), j, k)
}

/// Haar-random `J` and `K` on `H_B ⊗ H_E`.
pub fn random_attack<R: Rng + ?Sized>(space: &CompositeSpace, rng: &mut R) -> AttackUnitary {
    let n = space.be_dim();
    let j = haar_unitary(n, rng);
    let k = haar_unitary(n, rng);
    AttackUnitary::new("random", j, k).expect("Haar unitaries are unitary")
}

/// Exchanges the contents of channel B and the ancilla, which must then be
/// photonic with the same enumeration as B.
fn photonic_swap(space: &CompositeSpace) -> Result<ComplexMatrix> {
    let d = space.b().dim();
    if space.ancilla().dim() != d {
        return Err(Error::Config(format!(
            "swap attacks need an ancilla of dimension {d} (one photonic mode like B), got {}",
            space.ancilla().dim()
        )));
    }
    if space.ancilla().initial_index() != space.b().basis_index(FockKet::VACUUM)? {
        return Err(Error::Config("swap attacks need the ancilla to start in vacuum".into()));
    }
    let mut swap = ComplexMatrix::zeros(d * d, d * d);
    for b in 0..d {
        for e in 0..d {
            swap[(e * d + b, b * d + e)] = ONE;
        }
    }
    Ok(swap)
}

/// Reflection on the ancilla exchanging vacuum with `(|0^1> + |1^1>)/√2`
/// and fixing `(|0^1> - |1^1>)/√2`.
fn diagonal_preparation(space: &CompositeSpace) -> Result<ComplexMatrix> {
    let b = space.b();
    let vac = b.basis_index(FockKet::VACUUM)?;
    let v = b.basis_index(FockKet::V)?;
    let h = b.basis_index(FockKet::H)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::identity(b.dim());
    for (i, j, x) in [
        (vac, vac, 0.0),
        (vac, v, r),
        (vac, h, r),
        (v, vac, r),
        (h, vac, r),
        (v, v, 0.5),
        (h, h, 0.5),
        (v, h, -0.5),
        (h, v, -0.5),
    ] {
        m[(i, j)] = C64::new(x, 0.0);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn names_round_trip() {
        for a in BuiltinAttack::ALL {
            assert_eq!(a.name().parse::<BuiltinAttack>().unwrap(), a);
        }
        assert!("custom_file".parse::<BuiltinAttack>().is_err());
    }

    #[test]
    fn identity_attack_is_identity() {
        let att = builtin_attack(BuiltinAttack::Identity, &CompositeSpace::default()).unwrap();
        assert_eq!(att.j(), &ComplexMatrix::identity(36));
        assert_eq!(att.k(), &ComplexMatrix::identity(36));
    }

    #[test]
    fn builtins_are_unitary() {
        let space = CompositeSpace::default();
        for a in BuiltinAttack::ALL {
            let att = builtin_attack(a, &space).unwrap();
            assert!(att.j().unitarity_defect().2 < 1e-15, "{a}");
            assert!(att.k().unitarity_defect().2 < 1e-15, "{a}");
        }
    }

    #[test]
    fn swap_attacks_need_photonic_ancilla() {
        let space = CompositeSpace::new(1, 2, 4).unwrap();
        assert!(builtin_attack(BuiltinAttack::VacuumSwap, &space).is_err());
        assert!(builtin_attack(BuiltinAttack::Bitflip, &space).is_ok());
    }

    #[test]
    fn random_attack_is_seeded() {
        let space = CompositeSpace::default();
        let a = random_attack(&space, &mut ChaCha8Rng::seed_from_u64(11));
        let b = random_attack(&space, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(a, b);
    }
}
