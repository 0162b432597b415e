use qdkd_core::attack::{builtin_attack, post_attack_states, BuiltinAttack};
use qdkd_core::fockspace::CompositeSpace;
use qdkd_core::protocol::{
    bell_probabilities, run_session, AttackMixture, FailPolicy, Mode, ProtocolConfig,
};
use qdkd_core::fockspace::{BellKind, Factor};
use qdkd_core::qmath::ComplexMatrix;

fn within(hat: f64, p: f64, n: usize, sigmas: f64) -> bool {
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    (hat - p).abs() <= sigmas * sigma + 1e-15
}

#[test]
fn estimates_converge_to_analytic_rates() {
    let space = CompositeSpace::default();
    for (i, which) in BuiltinAttack::ALL.into_iter().enumerate() {
        let attack = builtin_attack(which, &space).unwrap();
        let analytic = post_attack_states(&attack, &space).unwrap();
        let mut cfg = ProtocolConfig::new(attack, 125_000, 1000 + i as u64);
        cfg.check_probability = 0.8;
        let r = run_session(&cfg).unwrap();
        assert!(r.check_rounds >= 99_000);
        assert!(within(r.p01_hat, analytic.p01, r.check_rounds, 4.0), "{which}: {} vs {}", r.p01_hat, analytic.p01);
        assert!(within(r.p10_hat, analytic.p10, r.check_rounds, 4.0), "{which}: {} vs {}", r.p10_hat, analytic.p10);
    }
}

#[test]
fn modes_share_quantum_statistics() {
    let space = CompositeSpace::default();
    let attack = builtin_attack(BuiltinAttack::Intercept, &space).unwrap();
    let base = ProtocolConfig::new(attack, 1_000, 31);
    let random = run_session(&base).unwrap();
    let message = vec![1, 0, 0, 1, 1, 0, 1, 0];
    for mode in [Mode::AliceToBob, Mode::BobToAlice] {
        let r = run_session(&base.clone().with_message(mode, message.clone())).unwrap();
        assert_eq!(r.counts.anticorr_01, random.counts.anticorr_01);
        assert_eq!(r.counts.anticorr_10, random.counts.anticorr_10);
        assert_eq!(r.counts.correlated, random.counts.correlated);
        assert_eq!(r.counts.wrong_other, random.counts.wrong_other);
        let kinds = |rep: &qdkd_core::protocol::SessionReport| {
            rep.records.iter().map(|x| (x.kind, x.sacrificed)).collect::<Vec<_>>()
        };
        assert_eq!(kinds(&r), kinds(&random));
    }
}

#[test]
fn mixed_bitflip_qber() {
    // Oracle: per-component error rate averaged over uniform bits.
    let space = CompositeSpace::default();
    let identity = builtin_attack(BuiltinAttack::Identity, &space).unwrap();
    let flip = builtin_attack(BuiltinAttack::Bitflip, &space).unwrap();
    let z = space.embed_op(&space.b().z_gate(), Factor::B).unwrap();
    let singlet = space.bell_state(BellKind::Minus);
    let error_rate = |attack: &qdkd_core::attack::AttackUnitary| {
        let j = space.embed_be(attack.j()).unwrap();
        let k = space.embed_be(attack.k()).unwrap();
        let mut total = 0.0;
        for a in 0..2u8 {
            for b in 0..2u8 {
                let mut s = singlet.clone();
                if a == 1 {
                    s = s.apply(&z).unwrap();
                }
                s = s.apply(&j).unwrap();
                if b == 1 {
                    s = s.apply(&z).unwrap();
                }
                let [plus, minus, fail] = bell_probabilities(&s.apply(&k).unwrap(), &space).unwrap();
                let wrong = if a ^ b == 1 { minus } else { plus };
                total += 0.25 * (wrong + fail);
            }
        }
        total
    };
    let analytic = 0.9 * error_rate(&identity) + 0.1 * error_rate(&flip);
    assert!((analytic - 0.1).abs() < 1e-12);

    let mix = AttackMixture::new(vec![(0.9, identity), (0.1, flip)]).unwrap();
    let mut cfg = ProtocolConfig::new(mix, 200_000, 12);
    cfg.sacrifice_fraction = 0.5;
    let r = run_session(&cfg).unwrap();
    let q = r.qber_hat.unwrap();
    assert!(within(q, analytic, r.sacrificed_rounds, 3.0), "{q} over {} rounds", r.sacrificed_rounds);
}

#[test]
fn excluding_fails_ignores_lossy_rounds() {
    let space = CompositeSpace::default();
    let identity = builtin_attack(BuiltinAttack::Identity, &space).unwrap();
    let flip = builtin_attack(BuiltinAttack::Bitflip, &space).unwrap();
    let mix = AttackMixture::new(vec![(0.9, identity), (0.1, flip)]).unwrap();
    let mut cfg = ProtocolConfig::new(mix, 20_000, 12);
    cfg.fail_policy = FailPolicy::Exclude;
    assert_eq!(run_session(&cfg).unwrap().qber_hat, Some(0.0));
}

#[test]
fn all_fail_channel_has_unit_qber() {
    let space = CompositeSpace::default();
    // Eve swaps the photon out and never returns it.
    let swap = builtin_attack(BuiltinAttack::VacuumSwap, &space).unwrap();
    let swap = swap.with_k(ComplexMatrix::identity(space.be_dim())).unwrap();
    let r = run_session(&ProtocolConfig::new(swap.clone(), 5_000, 1)).unwrap();
    assert_eq!(r.counts.fail, r.encode_rounds);
    assert_eq!(r.qber_hat, Some(1.0));
    let mut cfg = ProtocolConfig::new(swap, 5_000, 1);
    cfg.fail_policy = FailPolicy::Exclude;
    let r = run_session(&cfg).unwrap();
    assert_eq!(r.qber_hat, None);
    assert!(r.aborted);
}

#[test]
fn returned_vacuum_swap_loses_bob_bit() {
    let space = CompositeSpace::default();
    let swap = builtin_attack(BuiltinAttack::VacuumSwap, &space).unwrap();
    let r = run_session(&ProtocolConfig::new(swap, 40_000, 9)).unwrap();
    assert_eq!(r.counts.fail, 0);
    assert!(within(r.qber_hat.unwrap(), 0.5, r.sacrificed_rounds, 4.0));
    assert!(r.aborted);
}
