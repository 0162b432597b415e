//! Monte Carlo simulation of QDKD sessions.
//!
//! Each round Alice prepares the singlet and applies `1` or `Z` to photon B
//! according to her bit. Eve applies `J` on the way out. Bob then either runs
//! the Anticorrelation Check or applies his own gate and returns the photon,
//! Eve applies `K`, and Alice performs the incomplete Bell analysis.

mod decode;
mod measure;
mod session;

pub use decode::{ciphertext, decode, estimate_qber, write_trace_csv, Decoded};
pub use measure::{
    bell_probabilities, check_probabilities, measure_bell, measure_check, BellOutcome, CheckOutcome, NORM_TOL,
};
pub use session::{run_session, EveBounds, OutcomeCounts, SessionReport, ABORT_CHECK_INTERVAL};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::attack::AttackUnitary;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    RandomKey,
    BobToAlice,
    AliceToBob,
}

impl Mode {
    pub fn is_deterministic(self) -> bool {
        self != Mode::RandomKey
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::RandomKey => "random_key",
            Mode::BobToAlice => "bob_to_alice",
            Mode::AliceToBob => "alice_to_bob",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_key" => Ok(Mode::RandomKey),
            "bob_to_alice" => Ok(Mode::BobToAlice),
            "alice_to_bob" => Ok(Mode::AliceToBob),
            other => Err(Error::Config(format!(
                "unknown mode '{other}' (expected random_key, bob_to_alice or alice_to_bob)"
            ))),
        }
    }
}

/// How Bell-analysis failures on sacrificed rounds enter the QBER.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailPolicy {
    #[default]
    CountAsError,
    /// Drop fails from numerator and denominator (trusted detectors).
    Exclude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundKind {
    Check,
    Encode,
}

impl RoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RoundKind::Check => "check",
            RoundKind::Encode => "encode",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub index: usize,
    pub kind: RoundKind,
    /// 0 for the identity gate, 1 for `Z_B`.
    pub alice_bit: u8,
    pub bob_bit: Option<u8>,
    pub check_outcome: Option<CheckOutcome>,
    pub bell_outcome: Option<BellOutcome>,
    /// Encode round spent on QBER estimation.
    pub sacrificed: bool,
    /// Position in the message carried by this round.
    pub message_index: Option<usize>,
    /// Mixture component Eve used.
    pub component: usize,
}

/// Eve's attack, possibly a probabilistic mixture of unitaries chosen per round.
#[derive(Debug, Clone)]
pub struct AttackMixture {
    components: Vec<(f64, AttackUnitary)>,
}

impl AttackMixture {
    pub fn single(attack: AttackUnitary) -> Self {
        Self {
            components: vec![(1.0, attack)],
        }
    }

    /// Weights are normalized; all attacks must act on the same B⊗E space.
    pub fn new(components: Vec<(f64, AttackUnitary)>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Config("attack mixture is empty".into()));
        };
        let dim = first.1.be_dim();
        let mut total = 0.0;
        for (w, a) in &components {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::Config(format!("mixture weight {w} is not positive")));
            }
            if a.be_dim() != dim {
                return Err(Error::Config(format!(
                    "attack '{}' acts on dimension {}, expected {dim}",
                    a.name(),
                    a.be_dim()
                )));
            }
            total += w;
        }
        Ok(Self {
            components: components.into_iter().map(|(w, a)| (w / total, a)).collect(),
        })
    }

    pub fn components(&self) -> &[(f64, AttackUnitary)] {
        &self.components
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|(w, _)| *w).collect()
    }

    pub fn be_dim(&self) -> usize {
        self.components[0].1.be_dim()
    }

    pub fn name(&self) -> String {
        if let [(_, a)] = self.components.as_slice() {
            return a.name().to_string();
        }
        self.components
            .iter()
            .map(|(w, a)| format!("{}@{w}", a.name()))
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl From<AttackUnitary> for AttackMixture {
    fn from(attack: AttackUnitary) -> Self {
        Self::single(attack)
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub rounds: usize,
    pub check_probability: f64,
    pub attack: AttackMixture,
    pub seed: u64,
    pub mode: Mode,
    pub message: Option<Vec<u8>>,
    pub sacrifice_fraction: f64,
    pub fail_policy: FailPolicy,
}

pub const DEFAULT_CHECK_PROBABILITY: f64 = 0.5;
pub const DEFAULT_SACRIFICE_FRACTION: f64 = 0.1;

impl ProtocolConfig {
    /// Random-key session with default probabilities.
    pub fn new(attack: impl Into<AttackMixture>, rounds: usize, seed: u64) -> Self {
        Self {
            rounds,
            check_probability: DEFAULT_CHECK_PROBABILITY,
            attack: attack.into(),
            seed,
            mode: Mode::RandomKey,
            message: None,
            sacrifice_fraction: DEFAULT_SACRIFICE_FRACTION,
            fail_policy: FailPolicy::default(),
        }
    }

    pub fn with_message(mut self, mode: Mode, message: Vec<u8>) -> Self {
        self.mode = mode;
        self.message = Some(message);
        self
    }

    /// Mean number of encode rounds that are not sacrificed.
    pub fn expected_message_rounds(&self) -> f64 {
        self.rounds as f64 * (1.0 - self.check_probability) * (1.0 - self.sacrifice_fraction)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be positive".into()));
        }
        for (value, name) in [
            (self.check_probability, "check probability"),
            (self.sacrifice_fraction, "sacrifice fraction"),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::Config(format!("{name} {value} not in (0, 1)")));
            }
        }
        match (&self.message, self.mode.is_deterministic()) {
            (None, true) => Err(Error::Config(format!("mode {} requires a message", self.mode))),
            (Some(_), false) => Err(Error::Config("random_key mode takes no message".into())),
            (Some(m), true) => {
                if m.is_empty() {
                    return Err(Error::Config("message is empty".into()));
                }
                if m.iter().any(|&b| b > 1) {
                    return Err(Error::Config("message bits must be 0 or 1".into()));
                }
                let expected = self.expected_message_rounds();
                if m.len() as f64 > expected {
                    return Err(Error::Config(format!(
                        "message of {} bits exceeds the {expected} expected encode rounds",
                        m.len()
                    )));
                }
                Ok(())
            }
            (None, false) => Ok(()),
        }
    }
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Config(format!("invalid bit '{other}' in bit string"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{builtin_attack, BuiltinAttack};
    use crate::fockspace::CompositeSpace;

    fn identity() -> AttackUnitary {
        builtin_attack(BuiltinAttack::Identity, &CompositeSpace::default()).unwrap()
    }

    #[test]
    fn bit_strings_round_trip() {
        assert_eq!(parse_bits("1011").unwrap(), vec![1, 0, 1, 1]);
        assert_eq!(bits_to_string(&[0, 1, 1, 0]), "0110");
        assert!(parse_bits("10a").is_err());
    }

    #[test]
    fn mode_names() {
        for m in [Mode::RandomKey, Mode::BobToAlice, Mode::AliceToBob] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("push".parse::<Mode>().is_err());
    }

    #[test]
    fn config_validation() {
        let base = ProtocolConfig::new(identity(), 100, 0);
        assert!(base.validate().is_ok());
        let mut c = base.clone();
        c.check_probability = 1.0;
        assert!(c.validate().is_err());
        let c = base.clone().with_message(Mode::BobToAlice, vec![1; 40]);
        assert!(c.validate().is_ok());
        let c = base.clone().with_message(Mode::BobToAlice, vec![1; 46]);
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.mode = Mode::AliceToBob;
        assert!(c.validate().is_err());
    }

    #[test]
    fn mixture_normalizes() {
        let m = AttackMixture::new(vec![(2.0, identity()), (6.0, identity())]).unwrap();
        assert_eq!(m.weights(), vec![0.25, 0.75]);
        assert_eq!(m.name(), "identity@0.25+identity@0.75");
        assert!(AttackMixture::new(vec![(0.0, identity())]).is_err());
        assert!(AttackMixture::new(vec![]).is_err());
    }
}
