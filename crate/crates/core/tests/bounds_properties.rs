use proptest::prelude::*;
use qdkd_core::bounds::{
    diagonal_max, holevo_bounds, max_holevo, max_holevo_grid, Bound, ChannelStats, EveParams,
};

fn h2(x: f64) -> f64 {
    let f = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.log2() };
    f(x) + f(1.0 - x)
}

/// Independent evaluation: `I_BE = H((1+u)/2)/2 + H((1+v)/2)/2` with `u = p+q`, `v = p-q`,
/// and `I_AE = I_BE + 1 - H((1+q)/2)`.
fn oracle(p01: f64, p10: f64, c: f64, d: f64) -> (f64, f64) {
    let p = (c - d) / 2.0 - p01 * (1.0 + c) - p10 * (1.0 - d);
    let q = (c + d) / 2.0 - p01 * (1.0 + c) + p10 * (1.0 - d);
    let be = 0.5 * h2((1.0 + p + q) / 2.0) + 0.5 * h2((1.0 + p - q) / 2.0);
    (be, be + 1.0 - h2((1.0 + q) / 2.0))
}

fn stats(a: f64, b: f64) -> ChannelStats {
    ChannelStats::new(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_matches_oracle(p01 in 0.0f64..=0.5, p10 in 0.0f64..=0.5, c in -1.0f64..=1.0, d in -1.0f64..=1.0) {
        let r = holevo_bounds(stats(p01, p10), EveParams::new(c, d).unwrap()).unwrap();
        let (be, ae) = oracle(p01, p10, c, d);
        prop_assert!((r.i_be - be).abs() < 1e-12);
        prop_assert!((r.i_ae - ae).abs() < 1e-12);
        prop_assert!(r.i_be >= -1e-15 && r.i_be <= 1.0 + 1e-12);
        prop_assert!(r.i_ae >= -1e-15 && r.i_ae <= 1.0 + 1e-12);
    }

    #[test]
    fn maxima_dominate_samples(p01 in 0.0f64..=0.5, p10 in 0.0f64..=0.5, c in -1.0f64..=1.0, d in -1.0f64..=1.0) {
        let (be, ae) = oracle(p01, p10, c, d);
        prop_assert!(max_holevo(stats(p01, p10), Bound::Be).value >= be - 1e-12);
        prop_assert!(max_holevo(stats(p01, p10), Bound::Ae).value >= ae - 1e-12);
    }

    #[test]
    fn argmax_attains_value(p01 in 0.0f64..=0.5, p10 in 0.0f64..=0.5) {
        for which in [Bound::Be, Bound::Ae] {
            let m = max_holevo(stats(p01, p10), which);
            let (be, ae) = oracle(p01, p10, m.argmax.c, m.argmax.d);
            let at = if which == Bound::Be { be } else { ae };
            prop_assert!((at - m.value).abs() < 1e-12, "{} at ({}, {})", which, p01, p10);
        }
    }

    #[test]
    fn diagonal_dominance(p in 0.0f64..=0.5, k in 0.0f64..=0.5) {
        prop_assume!(p - k >= 0.0 && p + k <= 0.5);
        for which in [Bound::Be, Bound::Ae] {
            let diag = max_holevo(stats(p, p), which).value;
            prop_assert!(diag >= max_holevo(stats(p - k, p + k), which).value - 1e-12);
            prop_assert!(diag >= max_holevo(stats(p + k, p - k), which).value - 1e-12);
            prop_assert!((diag - diagonal_max(p).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn grid_agrees_on_a_coarse_sweep() {
    for i in 0..=5 {
        for j in 0..=5 {
            let s = stats(0.1 * i as f64, 0.1 * j as f64);
            for which in [Bound::Be, Bound::Ae] {
                let grid = max_holevo_grid(s, which, 0.01).unwrap().value;
                let exact = max_holevo(s, which).value;
                assert!(grid <= exact + 1e-12 && exact - grid < 1e-3, "{which} at ({i}, {j})");
            }
        }
    }
}
