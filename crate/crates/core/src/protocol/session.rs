use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::decode::{ciphertext, decode, estimate_qber};
use super::measure::{bell_probabilities, categorical, check_probabilities, BellOutcome, CheckOutcome};
use super::{bits_to_string, FailPolicy, Mode, ProtocolConfig, RoundKind, RoundRecord};
use crate::attack::AttackUnitary;
use crate::bounds::{max_holevo_ae, max_holevo_be, security_condition, ChannelStats, Maximum, SecurityVerdict};
use crate::error::{Error, Result};
use crate::fockspace::{BellKind, CompositeSpace, Factor};

/// Rounds between running security checks in `bob_to_alice` mode.
pub const ABORT_CHECK_INTERVAL: usize = 1000;

// Independent streams derived from the master seed.
const STREAM_ALICE: u64 = 0;
const STREAM_BOB: u64 = 1;
const STREAM_SWITCH: u64 = 2;
const STREAM_MEASURE: u64 = 3;
const STREAM_EVE: u64 = 4;
const STREAM_SACRIFICE: u64 = 5;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OutcomeCounts {
    pub anticorr_01: usize,
    pub anticorr_10: usize,
    pub correlated: usize,
    pub wrong_other: usize,
    pub psi_plus: usize,
    pub psi_minus: usize,
    pub fail: usize,
}

impl OutcomeCounts {
    fn add_check(&mut self, o: CheckOutcome) {
        match o {
            CheckOutcome::Anticorr01 => self.anticorr_01 += 1,
            CheckOutcome::Anticorr10 => self.anticorr_10 += 1,
            CheckOutcome::Correlated => self.correlated += 1,
            CheckOutcome::WrongOther => self.wrong_other += 1,
        }
    }

    fn add_bell(&mut self, o: BellOutcome) {
        match o {
            BellOutcome::PsiPlus => self.psi_plus += 1,
            BellOutcome::PsiMinus => self.psi_minus += 1,
            BellOutcome::Fail => self.fail += 1,
        }
    }

    pub fn check_rounds(&self) -> usize {
        self.anticorr_01 + self.anticorr_10 + self.correlated + self.wrong_other
    }

    pub fn encode_rounds(&self) -> usize {
        self.psi_plus + self.psi_minus + self.fail
    }

    /// `(P01, P10)` as anticorrelated counts over all check rounds; zero without checks.
    pub fn anticorr_rates(&self) -> (f64, f64) {
        let n = self.check_rounds();
        if n == 0 {
            return (0.0, 0.0);
        }
        (self.anticorr_01 as f64 / n as f64, self.anticorr_10 as f64 / n as f64)
    }
}

/// Maximal Eve information compatible with the observed statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EveBounds {
    pub i_be: Maximum,
    pub i_ae: Maximum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionReport {
    pub mode: Mode,
    pub attack: String,
    pub seed: u64,
    pub rounds_requested: usize,
    pub rounds_executed: usize,
    pub check_rounds: usize,
    pub encode_rounds: usize,
    pub sacrificed_rounds: usize,
    pub counts: OutcomeCounts,
    pub p01_hat: f64,
    pub p10_hat: f64,
    pub p_anticorr_hat: f64,
    /// `None` when no sacrificed round is comparable; the verdict then assumes 0.5.
    pub qber_hat: Option<f64>,
    pub fail_policy: FailPolicy,
    pub verdict: SecurityVerdict,
    pub eve_bounds: EveBounds,
    pub alice_key: Option<String>,
    pub bob_key: Option<String>,
    pub ciphertext: Option<String>,
    pub decoded_message: Option<String>,
    pub dropped_message_indices: Vec<usize>,
    /// Message bits sent over the quantum channel before a `bob_to_alice` abort.
    pub exposed_bits: usize,
    pub aborted: bool,
    /// Round after which the running check stopped the session.
    pub abort_round: Option<usize>,
    #[serde(skip)]
    pub records: Vec<RoundRecord>,
}

impl SessionReport {
    pub fn keys_equal(&self) -> bool {
        matches!((&self.alice_key, &self.bob_key), (Some(a), Some(b)) if a == b)
    }
}

/// Outcome distributions of one attack, indexed by Alice's and Bob's bits.
struct Model {
    check: [[f64; 4]; 2],
    bell: [[[f64; 3]; 2]; 2],
}

impl Model {
    fn new(attack: &AttackUnitary, space: &CompositeSpace) -> Result<Self> {
        let z = space.embed_op(&space.b().z_gate(), Factor::B)?;
        let j = space.embed_be(attack.j())?;
        let k = space.embed_be(attack.k())?;
        let singlet = space.bell_state(BellKind::Minus);
        let mut model = Model {
            check: [[0.0; 4]; 2],
            bell: [[[0.0; 3]; 2]; 2],
        };
        for a in 0..2 {
            let prepared = if a == 1 { singlet.apply(&z)? } else { singlet.clone() };
            let out = prepared.apply(&j)?;
            model.check[a] = check_probabilities(&out, space)?;
            for b in 0..2 {
                let encoded = if b == 1 { out.apply(&z)? } else { out.clone() };
                model.bell[a][b] = bell_probabilities(&encoded.apply(&k)?, space)?;
            }
        }
        Ok(model)
    }
}

fn verdict_for(counts: &OutcomeCounts, qber: f64) -> Result<SecurityVerdict> {
    let (p01, p10) = counts.anticorr_rates();
    // Fails counted as errors can push the rate past 0.5 without any
    // systematic inversion to exploit, so the rate saturates there.
    security_condition((0.5 * (p01 + p10)).min(0.5), qber.min(0.5))
}

/// Run a full session. Every random decision comes from a per-party stream,
/// so sessions with the same config are bit-identical.
pub fn run_session(config: &ProtocolConfig) -> Result<SessionReport> {
    config.validate()?;
    let space = CompositeSpace::for_be_dim(config.attack.be_dim())?;
    let models = config
        .attack
        .components()
        .iter()
        .map(|(_, a)| Model::new(a, &space))
        .collect::<Result<Vec<_>>>()?;
    let weights = config.attack.weights();

    let mut alice_rng = stream(config.seed, STREAM_ALICE);
    let mut bob_rng = stream(config.seed, STREAM_BOB);
    let mut switch_rng = stream(config.seed, STREAM_SWITCH);
    let mut measure_rng = stream(config.seed, STREAM_MEASURE);
    let mut eve_rng = stream(config.seed, STREAM_EVE);
    let mut sacrifice_rng = stream(config.seed, STREAM_SACRIFICE);

    let message = config.message.as_deref().unwrap_or(&[]);
    let mut sent = 0usize;
    let mut counts = OutcomeCounts::default();
    let mut records = Vec::with_capacity(config.rounds);
    let (mut sac_total, mut sac_errors) = (0usize, 0usize);
    let mut abort: Option<(usize, SecurityVerdict)> = None;

    for index in 0..config.rounds {
        let is_check = switch_rng.random::<f64>() < config.check_probability;
        let alice_random = alice_rng.random::<bool>() as u8;
        let bob_random = bob_rng.random::<bool>() as u8;
        let component = categorical(&weights, eve_rng.random());
        let u: f64 = measure_rng.random();
        let model = &models[component];

        let record = if is_check {
            let outcome = CheckOutcome::ALL[categorical(&model.check[alice_random as usize], u)];
            counts.add_check(outcome);
            RoundRecord {
                index,
                kind: RoundKind::Check,
                alice_bit: alice_random,
                bob_bit: None,
                check_outcome: Some(outcome),
                bell_outcome: None,
                sacrificed: false,
                message_index: None,
                component,
            }
        } else {
            let sacrificed = sacrifice_rng.random::<f64>() < config.sacrifice_fraction;
            let (mut a, mut b) = (alice_random, bob_random);
            let mut message_index = None;
            if config.mode.is_deterministic() && !sacrificed && sent < message.len() {
                match config.mode {
                    Mode::AliceToBob => a = message[sent],
                    _ => b = message[sent],
                }
                message_index = Some(sent);
                sent += 1;
            }
            let outcome = BellOutcome::ALL[categorical(&model.bell[a as usize][b as usize], u)];
            counts.add_bell(outcome);
            if sacrificed {
                match outcome.xor() {
                    Some(x) => {
                        sac_total += 1;
                        sac_errors += usize::from((u8::from(x) ^ a) != b);
                    }
                    None if config.fail_policy == FailPolicy::CountAsError => {
                        sac_total += 1;
                        sac_errors += 1;
                    }
                    None => {}
                }
            }
            RoundRecord {
                index,
                kind: RoundKind::Encode,
                alice_bit: a,
                bob_bit: Some(b),
                check_outcome: None,
                bell_outcome: Some(outcome),
                sacrificed,
                message_index,
                component,
            }
        };
        records.push(record);

        if config.mode == Mode::BobToAlice && (index + 1) % ABORT_CHECK_INTERVAL == 0 {
            let qber = if sac_total == 0 { 0.0 } else { sac_errors as f64 / sac_total as f64 };
            let verdict = verdict_for(&counts, qber)?;
            if !verdict.secure {
                abort = Some((index + 1, verdict));
                break;
            }
        }
    }

    if abort.is_none() && sent < message.len() {
        return Err(Error::MessageExhausted {
            sent,
            len: message.len(),
        });
    }

    let qber_hat = match estimate_qber(&records, config.fail_policy) {
        Ok(q) => Some(q),
        Err(Error::NoComparableRounds) => None,
        Err(e) => return Err(e),
    };
    let (p01_hat, p10_hat) = counts.anticorr_rates();
    let (abort_round, verdict) = match abort {
        Some((round, verdict)) => (Some(round), verdict),
        None => (None, verdict_for(&counts, qber_hat.unwrap_or(0.5))?),
    };
    let stats = ChannelStats::new(p01_hat.min(0.5), p10_hat.min(0.5))?;
    let eve_bounds = EveBounds {
        i_be: max_holevo_be(stats),
        i_ae: max_holevo_ae(stats),
    };

    let mut report = SessionReport {
        mode: config.mode,
        attack: config.attack.name(),
        seed: config.seed,
        rounds_requested: config.rounds,
        rounds_executed: records.len(),
        check_rounds: counts.check_rounds(),
        encode_rounds: counts.encode_rounds(),
        sacrificed_rounds: records.iter().filter(|r| r.sacrificed).count(),
        counts,
        p01_hat,
        p10_hat,
        p_anticorr_hat: 0.5 * (p01_hat + p10_hat),
        qber_hat,
        fail_policy: config.fail_policy,
        aborted: !verdict.secure,
        verdict,
        eve_bounds,
        alice_key: None,
        bob_key: None,
        ciphertext: None,
        decoded_message: None,
        dropped_message_indices: Vec::new(),
        exposed_bits: if abort_round.is_some() { sent } else { 0 },
        abort_round,
        records: Vec::new(),
    };

    if report.verdict.secure {
        match config.mode {
            Mode::RandomKey => {
                let (mut alice, mut bob) = (Vec::new(), Vec::new());
                for r in records.iter().filter(|r| !r.is_check() && !r.sacrificed) {
                    if let Some(x) = r.bell_outcome.and_then(|o| o.xor()) {
                        alice.push(u8::from(x) ^ r.alice_bit);
                        bob.push(r.bob_bit.expect("encode round"));
                    }
                }
                report.alice_key = Some(bits_to_string(&alice));
                report.bob_key = Some(bits_to_string(&bob));
            }
            mode => {
                let decoded = decode(&records, mode, &report.verdict)?;
                if mode == Mode::AliceToBob {
                    report.ciphertext = Some(bits_to_string(&ciphertext(&records)));
                }
                report.decoded_message = Some(bits_to_string(&decoded.bits));
                report.dropped_message_indices = decoded.dropped;
            }
        }
    }
    report.records = records;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{builtin_attack, BuiltinAttack};
    use crate::protocol::AttackMixture;

    fn attack(which: BuiltinAttack) -> AttackUnitary {
        builtin_attack(which, &CompositeSpace::default()).unwrap()
    }

    #[test]
    fn identity_session_is_secure() {
        let r = run_session(&ProtocolConfig::new(attack(BuiltinAttack::Identity), 20_000, 11)).unwrap();
        assert!(r.verdict.secure && !r.aborted);
        assert_eq!(r.qber_hat, Some(0.0));
        assert!(r.keys_equal());
        assert!(!r.alice_key.as_ref().unwrap().is_empty());
        assert_eq!(r.counts.correlated + r.counts.wrong_other + r.counts.fail, 0);
        assert_eq!(r.rounds_executed, 20_000);
        assert!((r.p01_hat + r.p10_hat - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_swap_is_caught() {
        let r = run_session(&ProtocolConfig::new(attack(BuiltinAttack::VacuumSwap), 5_000, 2)).unwrap();
        assert_eq!(r.counts.wrong_other, r.check_rounds);
        assert_eq!((r.p01_hat, r.p10_hat), (0.0, 0.0));
        assert!(r.aborted && r.alice_key.is_none());
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = ProtocolConfig::new(attack(BuiltinAttack::Intercept), 3_000, 99);
        assert_eq!(run_session(&cfg).unwrap(), run_session(&cfg).unwrap());
        let other = ProtocolConfig { seed: 100, ..cfg.clone() };
        assert_ne!(run_session(&cfg).unwrap().records, run_session(&other).unwrap().records);
    }

    #[test]
    fn xor_semantics_under_identity() {
        let r = run_session(&ProtocolConfig::new(attack(BuiltinAttack::Identity), 2_000, 5)).unwrap();
        for rec in r.records.iter().filter(|r| !r.is_check()) {
            let xor = rec.alice_bit ^ rec.bob_bit.unwrap();
            let want = if xor == 1 { BellOutcome::PsiPlus } else { BellOutcome::PsiMinus };
            assert_eq!(rec.bell_outcome, Some(want));
        }
    }

    #[test]
    fn message_modes_deliver() {
        let base = ProtocolConfig::new(attack(BuiltinAttack::Identity), 200, 3);
        let r = run_session(&base.clone().with_message(Mode::BobToAlice, vec![1, 0, 1, 1])).unwrap();
        assert_eq!(r.decoded_message.as_deref(), Some("1011"));
        assert_eq!(r.exposed_bits, 0);
        let r = run_session(&base.with_message(Mode::AliceToBob, vec![0, 1, 1, 0])).unwrap();
        assert_eq!(r.decoded_message.as_deref(), Some("0110"));
        assert_eq!(r.ciphertext.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn vacuum_swap_message_never_disclosed() {
        let cfg = ProtocolConfig::new(attack(BuiltinAttack::VacuumSwap), 4_000, 3).with_message(Mode::AliceToBob, vec![1; 100]);
        let r = run_session(&cfg).unwrap();
        assert!(r.aborted);
        assert!(r.decoded_message.is_none() && r.ciphertext.is_none());
    }

    #[test]
    fn running_abort_exposes_bits() {
        let cfg = ProtocolConfig::new(attack(BuiltinAttack::Intercept), 10_000, 8).with_message(Mode::BobToAlice, vec![1; 500]);
        let r = run_session(&cfg).unwrap();
        assert!(r.aborted);
        assert_eq!(r.abort_round, Some(ABORT_CHECK_INTERVAL));
        assert_eq!(r.rounds_executed, ABORT_CHECK_INTERVAL);
        assert!(r.exposed_bits > 0);
        assert!(r.decoded_message.is_none());
    }

    #[test]
    fn message_exhaustion_is_an_error() {
        // Exactly at the expected count: the sample falls short about half the time.
        let short = (0..20u64)
            .map(|seed| {
                let cfg = ProtocolConfig::new(attack(BuiltinAttack::Identity), 100, seed).with_message(Mode::AliceToBob, vec![0; 45]);
                run_session(&cfg)
            })
            .filter(|r| matches!(r, Err(Error::MessageExhausted { len: 45, .. })))
            .count();
        assert!(short > 0);
    }

    #[test]
    fn mixture_selects_components() {
        let mix = AttackMixture::new(vec![(0.9, attack(BuiltinAttack::Identity)), (0.1, attack(BuiltinAttack::Bitflip))]).unwrap();
        let r = run_session(&ProtocolConfig::new(mix, 10_000, 4)).unwrap();
        let flipped = r.records.iter().filter(|r| r.component == 1).count() as f64 / 10_000.0;
        assert!((flipped - 0.1).abs() < 0.012);
        assert_eq!(r.counts.correlated, r.records.iter().filter(|r| r.is_check() && r.component == 1).count());
    }
}
