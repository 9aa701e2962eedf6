mod common;

use proptest::prelude::*;

use common::catalog;
use tcbm::self_similar::Ifs;
use tcbm::variance::{cantor_function, IteratedCdf, VarianceFunction};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn catalog_is_monotone(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for v in catalog() {
            prop_assert!(v.eval(lo).unwrap() <= v.eval(hi).unwrap(), "{} at {lo}, {hi}", v.name());
        }
    }

    #[test]
    fn inverse_round_trip(u in 0.0..=1.0f64) {
        for v in catalog() {
            let s = u * v.total().unwrap();
            let t = v.generalized_inverse(s, 1e-12).unwrap();
            prop_assert!((v.eval(t).unwrap() - s).abs() <= 1e-8, "{} at s = {s}", v.name());
        }
    }

    #[test]
    fn cantor_scales_by_one_half(t in 0.0..=1.0f64) {
        prop_assert_eq!(cantor_function(t / 3.0), 0.5 * cantor_function(t));
    }

    #[test]
    fn cantor_is_antisymmetric(t in 0.5..=1.0f64) {
        // 1 - t is exact for t in [1/2, 1].
        prop_assert_eq!(cantor_function(1.0 - t), 1.0 - cantor_function(t));
    }
}

#[test]
fn every_entry_starts_at_zero() {
    for v in catalog() {
        assert_eq!(v.eval(0.0).unwrap(), 0.0, "{}", v.name());
    }
}

#[test]
fn inverse_jumps_over_plateaus() {
    let cantor = VarianceFunction::cantor_staircase();
    assert!((cantor.generalized_inverse(0.5, 1e-12).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    let pl =
        VarianceFunction::piecewise_linear(vec![(0.0, 0.0), (0.3, 0.3), (0.6, 0.3), (1.0, 1.0)])
            .unwrap();
    assert!((pl.generalized_inverse(0.3, 1e-12).unwrap() - 0.6).abs() < 1e-9);
    assert!(cantor.generalized_inverse(1.5, 1e-12).is_err());
}

#[test]
fn iterated_cdf_converges_geometrically() {
    let cdf = IteratedCdf::build(Ifs::cantor3(), 2188, 40).unwrap();
    let gaps = cdf.convergence();
    assert!(gaps.len() >= 2);
    // Each sweep halves the sup-distance to the fixed point.
    for w in gaps.windows(2).filter(|w| w[0] > 1e-12) {
        assert!(w[1] <= 0.5 * w[0] + 1e-15, "{} -> {}", w[0], w[1]);
    }
    assert!(*gaps.last().unwrap() <= 2f64.powi(-38));
}

#[test]
fn golden_bernoulli_is_symmetric() {
    let v = VarianceFunction::build_iterated_cdf(Ifs::golden_bernoulli(), 4097, 60).unwrap();
    assert!((v.eval(0.5).unwrap() - 0.5).abs() < 1e-12);
    for k in 1..64 {
        let t = k as f64 / 64.0;
        let sum = v.eval(t).unwrap() + v.eval(1.0 - t).unwrap();
        assert!((sum - 1.0).abs() < 1e-9, "t = {t}: {sum}");
    }
}
