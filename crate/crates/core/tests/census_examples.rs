//! Worked examples for the census orderings, at bounds and tolerances taken
//! from acceptance.toml.

use std::sync::OnceLock;

use cubicfields::acceptance::Config;
use cubicfields::census::{self, Census};
use cubicfields::forms::{Signature, SplittingType};
use cubicfields::invariants::{radical_c, InvariantExponents};
use cubicfields::localmass::{InfSet, SplittingConstraint};

fn cfg() -> &'static Config {
    static C: OnceLock<Config> = OnceLock::new();
    C.get_or_init(Config::builtin)
}

/// Deep enough for the α = β = 1 ordering at the configured bound.
fn census() -> &'static Census {
    static C: OnceLock<Census> = OnceLock::new();
    C.get_or_init(|| {
        let e = InvariantExponents::new(1.0, 1.0).unwrap();
        let need = census::generalized_need(e, cfg().census.log_independence_bound).ceil() as u64 + 1;
        let need = need.max(cfg().census.uniformity_bound + 1);
        Census::enumerate(need).unwrap()
    })
}

fn all() -> SplittingConstraint {
    SplittingConstraint::all(InfSet::BOTH)
}

fn exps(a: f64, b: f64) -> InvariantExponents {
    InvariantExponents::new(a, b).unwrap()
}

#[test]
fn rect_with_unit_conductor_counts_fundamental_discriminants() {
    let c = census();
    let r = census::count_rect(c, &all(), 1e3, 1.0, cfg().pmax).unwrap();
    assert_eq!(r.count, 0, "F < 1 is empty");
    let r = census::count_rect(c, &all(), 1e3, 2.0, cfg().pmax).unwrap();
    let direct = c.records().iter().filter(|f| f.disc.unsigned_abs() < 1000 && f.conductor_f == 1).count() as u64;
    assert_eq!(r.count, direct);
    let r = census::count_rect(c, &all(), 0.5, 50.0, cfg().pmax).unwrap();
    assert_eq!(r.count, 0);
}

#[test]
fn rect_ratio_in_band() {
    let [y, z] = cfg().census.rect_bounds;
    let r = census::count_rect(census(), &all(), y, z, cfg().pmax).unwrap();
    let [lo, hi] = cfg().census.rect_band;
    assert!(r.ratio() >= lo && r.ratio() <= hi, "ratio {}", r.ratio());
    assert!(!r.unreliable);
}

#[test]
fn rect_main_term_expressions_agree() {
    let y = cfg().census.rect_consistency_y;
    let (by_f, by_d) = census::rect_main_terms(&all(), y, y.powf(0.75), cfg().pmax).unwrap();
    let rel = (by_f / by_d - 1.0).abs();
    assert!(rel < cfg().census.rect_consistency_tol, "{by_f} vs {by_d}");
}

#[test]
fn residue_sum_regime_prediction() {
    let x = cfg().census.residue_sum_bound;
    let r = census::count_generalized(census(), &all(), exps(2.0, 1.0), x, cfg().pmax).unwrap();
    assert!((r.ratio() - 1.0).abs() < cfg().census.residue_sum_tol, "ratio {}", r.ratio());
}

#[test]
fn dyadic_counts_are_monotone() {
    let r = census::count_generalized(census(), &all(), exps(1.0, 2.0), 1e6, cfg().pmax).unwrap();
    let mut counts: Vec<u64> = r.dyadic.iter().map(|p| p.count).collect();
    counts.reverse();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    assert_eq!(*counts.last().unwrap(), r.count);
}

#[test]
fn counts_are_reproducible() {
    let c = census();
    let a = census::count_generalized(c, &all(), exps(3.0, 4.0), 1e15, cfg().pmax).unwrap();
    let b = census::count_generalized(c, &all(), exps(3.0, 4.0), 1e15, cfg().pmax).unwrap();
    assert_eq!(a.count, b.count);
    assert_eq!(a.predicted_main.value.to_bits(), b.predicted_main.value.to_bits());
}

#[test]
fn small_radical_matches_direct_filter() {
    let c = census();
    let r = census::count_radical(c, Signature::OneComplexPair, 30.0, cfg().pmax).unwrap();
    // the radical can sit far below |Disc| (e.g. −3⁵·…), so scan the whole census
    assert!(c.ceiling() > 36 * 36 * 30 * 30);
    let direct = c.records().iter().filter(|f| f.disc < 0 && radical_c(f.disc) < 30).count() as u64;
    assert_eq!(r.count, direct);
    assert!(direct > 0);
}

#[test]
fn secondary_fit_leaves_small_residual() {
    let samples: Vec<f64> = cfg().secondary.log10_bounds.iter().map(|e| 10f64.powf(*e)).collect();
    let sigma = SplittingConstraint::all(InfSet::COMPLEX);
    let f = census::fit_secondary(census(), &sigma, exps(1.0, 2.0), &samples, cfg().pmax).unwrap();
    assert!(f.coefficient < 0.0);
    let last = f.points.last().unwrap();
    let term = f.coefficient * last.x.powf(5.0 / 6.0);
    assert!(last.residual.abs() < 0.3 * term.abs(), "residual {} vs term {term}", last.residual);
}

#[test]
fn secondary_fit_rejected_below_threshold() {
    let e = census::fit_secondary(census(), &all(), exps(1.0, 1.3), &[1e4, 1e5, 1e6, 1e7], cfg().pmax).unwrap_err();
    assert!(e.to_string().contains("7/5"), "{e}");
}

#[test]
fn independence_under_logarithmic_ordering() {
    let x = cfg().census.log_independence_bound;
    let r = census::independence_report(census(), 5, &all(), exps(1.0, 1.0), x, None).unwrap();
    assert!(r.expected);
    let s = r.share(SplittingType::S111).unwrap();
    assert!((s.empirical / s.predicted - 1.0).abs() < cfg().census.log_independence_tol, "{} vs {}", s.empirical, s.predicted);
}

#[test]
fn resolvent_minus_three_never_splits_at_five() {
    for (a, b) in [(1.0, 2.0), (2.0, 1.0), (1.0, 1.0)] {
        let r = census::independence_report(census(), 5, &all(), exps(a, b), 1e4, Some(-3)).unwrap();
        let sub = r.subfamily.unwrap();
        assert!(sub.total > 0);
        assert_eq!(sub.split, 0);
    }
}

#[test]
fn conductor_uniformity() {
    let (max, f) = census::uniformity(census(), cfg().census.uniformity_bound, 1.01).unwrap();
    assert!(max <= cfg().census.uniformity_max, "{max} at f = {f}");
}
