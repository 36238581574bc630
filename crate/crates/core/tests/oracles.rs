//! Closed forms checked against independent routes: truncated series,
//! numeric chain solves and finite differences.

use markov_tracking::metrics::{
    ConsecErrorSpec, RsVsSemantics, actuation_error_cost, monotone_regions, reconstruction_error_rate,
};
use markov_tracking::model::{
    ChannelParams, ChannelParams3, CostWeights, RsPolicy, RsPolicy3, SourceParams, SourceParams3,
    check_three_state_closed_form, stationary_rs, stationary_semantics, stationary_three_state,
};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Sums `term(i)` for `i >= start` until a term drops below 1e-15 past
/// `i = 10`.
fn series(start: u64, term: impl Fn(u64) -> f64) -> f64 {
    let mut total = 0.0;
    let mut i = start;
    loop {
        let t = term(i);
        total += t;
        if t < 1e-15 && i > 10 {
            return total;
        }
        i += 1;
    }
}

fn random_spec(rng: &mut Xoshiro256PlusPlus) -> ConsecErrorSpec {
    ConsecErrorSpec::new(
        SourceParams::new(rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98)).unwrap(),
        ChannelParams::new(rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=1.0)).unwrap(),
        RsPolicy::new(rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=1.0)).unwrap(),
    )
    .unwrap()
}

#[test]
fn consecutive_error_series() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    for _ in 0..500 {
        let s = random_spec(&mut rng);
        let total = series(0, |i| s.consec_error_pmf(i));
        assert!((total - 1.0).abs() < 1e-10, "{total}");
        let mean = series(1, |i| i as f64 * s.consec_error_pmf(i));
        assert!((mean - s.avg_consecutive_error().unwrap()).abs() < 1e-10);
        for n in [0, 1, 3, 8] {
            let tail = series(n + 1, |i| s.consec_error_pmf(i));
            assert!((tail - s.violation_probability(n)).abs() < 1e-10);
        }
    }
}

#[test]
fn transition_forms_agree() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2);
    for _ in 0..500 {
        let s = random_spec(&mut rng);
        for i in 0..20 {
            let den = s.consec_error_pmf(i);
            if den < 1e-200 {
                continue;
            }
            let ratio = s.consec_error_pmf(i + 1) / den;
            assert!((s.consec_transition_prob(i).unwrap() - ratio).abs() < 1e-12);
            let den = s.importance_pmf(i);
            if den < 1e-200 {
                continue;
            }
            let ratio = s.importance_pmf(i + 1) / den;
            assert!((s.importance_transition(i).unwrap() - ratio).abs() < 1e-12);
        }
    }
}

#[test]
fn importance_series() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
    for _ in 0..500 {
        let s = random_spec(&mut rng);
        let total = series(0, |i| s.importance_pmf(i));
        assert!((total - 1.0).abs() < 1e-10);
        let mean = series(1, |i| i as f64 * s.importance_pmf(i));
        assert!((mean - s.avg_importance_consec().unwrap()).abs() < 1e-10);
        let m = s.mirrored();
        let mirrored_mass = 1.0 - m.importance_pmf(0);
        assert!((mirrored_mass - s.stationary().pi01).abs() < 1e-12);
    }
}

#[test]
fn rs_vs_semantics_region_is_sufficient() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(4);
    let mut inside = 0;
    for _ in 0..5_000 {
        let src = SourceParams::new(rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98)).unwrap();
        let ch = ChannelParams::new(rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=1.0)).unwrap();
        let cw = CostWeights::new(rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0)).unwrap();
        let pol = RsPolicy::new(rng.gen_range(0.01..=1.0), rng.gen_range(0.01..=1.0)).unwrap();
        let region = RsVsSemantics::new(&src, &ch, &cw).unwrap();
        let Ok(beats) = region.rs_beats_semantics(&pol) else {
            continue;
        };
        if beats {
            inside += 1;
            let rs = actuation_error_cost(&stationary_rs(&src, &ch, &pol).unwrap(), &cw);
            let sem = actuation_error_cost(&stationary_semantics(&src, &ch).unwrap(), &cw);
            assert!(rs <= sem + 1e-12, "{rs} > {sem} at {pol:?}");
        }
    }
    assert!(inside > 100);
}

#[test]
fn monotone_regions_match_finite_differences() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    let h = 1e-6;
    let pe = |p: f64, q: f64, ch: &ChannelParams, pol: &RsPolicy| {
        reconstruction_error_rate(&stationary_rs(&SourceParams::new(p, q).unwrap(), ch, pol).unwrap())
    };
    let (mut checked_p, mut checked_q) = (0, 0);
    for _ in 0..20_000 {
        let (p, q) = (rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99));
        let src = SourceParams::new(p, q).unwrap();
        let ch = ChannelParams::new(rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=1.0)).unwrap();
        let pol = RsPolicy::new(rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=1.0)).unwrap();
        let m = monotone_regions(&src, &ch, &pol);
        if m.in_p.decreasing() && p + h < 1.0 {
            let d = (pe(p + h, q, &ch, &pol) - pe(p - h, q, &ch, &pol)) / (2.0 * h);
            assert!(d < 1e-9, "dP/dp = {d} at {src:?} {ch:?} {pol:?}");
            checked_p += 1;
        }
        if m.in_q.decreasing() && q + h < 1.0 {
            let d = (pe(p, q + h, &ch, &pol) - pe(p, q - h, &ch, &pol)) / (2.0 * h);
            assert!(d < 1e-9, "dP/dq = {d} at {src:?} {ch:?} {pol:?}");
            checked_q += 1;
        }
    }
    assert!(checked_p > 50 && checked_q > 50, "{checked_p} {checked_q}");
}

#[test]
fn three_state_numeric_solve() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(6);
    for _ in 0..200 {
        let src = SourceParams3::new(rng.gen_range(0.01..0.49), rng.gen_range(0.01..0.49)).unwrap();
        let ch = ChannelParams3::new(
            rng.gen_range(0.05..=1.0),
            rng.gen_range(0.05..=1.0),
            rng.gen_range(0.05..=1.0),
        )
        .unwrap();
        let pol = RsPolicy3::new(
            rng.gen_range(0.05..=1.0),
            rng.gen_range(0.05..=1.0),
            rng.gen_range(0.05..=1.0),
        )
        .unwrap();
        let st = stationary_three_state(&src, &ch, &pol).unwrap();
        assert!((st.sum() - 1.0).abs() < 1e-12);
        for (a, b) in st.source_marginal().iter().zip(src.marginal()) {
            assert!((a - b).abs() < 1e-12);
        }
        let check = check_three_state_closed_form(&src, &ch, &pol).unwrap();
        assert_eq!(check.agrees, check.discrepancies().is_empty());
    }
}

#[test]
fn line_coefficients_hold_at_extreme_parameters() {
    use markov_tracking::optimizer::{case1_ratio, case2_ratio, objective};
    let mut worst: f64 = 0.0;
    for &p in &[1e-4, 1e-3, 0.5, 0.999, 0.9999] {
        for &q in &[1e-4, 1e-3, 0.5, 0.999, 0.9999] {
            for &(s0, s1) in &[(0.05, 0.05), (0.2, 0.9), (1.0, 1.0)] {
                let src = SourceParams::new(p, q).unwrap();
                let ch = ChannelParams::new(s0, s1).unwrap();
                let cw = CostWeights::new(1.0, 2.0).unwrap();
                let eta = 0.4;
                let b = eta * (p + q);
                let r1 = case1_ratio(&src, &ch, &cw, eta);
                let r2 = case2_ratio(&src, &ch, &cw, eta);
                for k in 1..10 {
                    let x = (b / q).min(1.0) * k as f64 / 10.0;
                    let pa1 = (b - q * x) / p;
                    if (0.0..=1.0).contains(&pa1) {
                        let exact = objective(&src, &ch, &cw, x, pa1).unwrap();
                        worst = worst.max((r1.eval(x) - exact).abs() / exact.max(1e-300));
                    }
                    let y = (b / p).min(1.0) * k as f64 / 10.0;
                    let pa0 = (b - p * y) / q;
                    if (0.0..=1.0).contains(&pa0) {
                        let exact = objective(&src, &ch, &cw, pa0, y).unwrap();
                        worst = worst.max((r2.eval(y) - exact).abs() / exact.max(1e-300));
                    }
                }
            }
        }
    }
    assert!(worst < 1e-9, "relative drift {worst:e}");
}

/// Raising one state's sampling probability alone can lengthen error runs.
#[test]
fn means_not_monotone_per_coordinate() {
    let src = SourceParams::new(0.5, 0.9).unwrap();
    let ch = ChannelParams::new(0.4, 0.7).unwrap();
    let at = |a0: f64, a1: f64| ConsecErrorSpec::new(src, ch, RsPolicy::new(a0, a1).unwrap()).unwrap();
    assert!(at(0.2, 1.0).avg_consecutive_error().unwrap() > at(0.2, 0.2).avg_consecutive_error().unwrap());
    assert!(at(1.0, 0.1).avg_importance_consec().unwrap() > at(0.1, 0.1).avg_importance_consec().unwrap());
}
