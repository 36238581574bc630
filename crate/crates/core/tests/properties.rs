use markov_tracking::metrics::{ConsecErrorSpec, actuation_error_cost, analyze, reconstruction_error_rate};
use markov_tracking::model::{
    ChannelParams, CostWeights, RsPolicy, SourceParams, stationary_change_aware, stationary_change_aware_numeric,
    stationary_rs, stationary_rs_numeric, stationary_semantics, stationary_semantics_numeric,
};
use markov_tracking::optimizer::{
    grid_oracle, monotonicity_conditions, objective, optimize_constrained, sampling_rate_rs,
};
use proptest::prelude::*;

fn source() -> impl Strategy<Value = SourceParams> {
    (0.01f64..0.99, 0.01f64..0.99).prop_map(|(p, q)| SourceParams::new(p, q).unwrap())
}

fn channel() -> impl Strategy<Value = ChannelParams> {
    (0.05f64..=1.0, 0.05f64..=1.0).prop_map(|(a, b)| ChannelParams::new(a, b).unwrap())
}

fn policy() -> impl Strategy<Value = RsPolicy> {
    (0.0f64..=1.0, 0.0f64..=1.0)
        .prop_filter("chain must be irreducible", |(a, b)| *a > 1e-3 || *b > 1e-3)
        .prop_map(|(a, b)| RsPolicy::new(a, b).unwrap())
}

fn costs() -> impl Strategy<Value = CostWeights> {
    (0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, b)| CostWeights::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn stationary_closed_forms_match_numeric(src in source(), ch in channel(), pol in policy()) {
        let closed = stationary_rs(&src, &ch, &pol).unwrap();
        prop_assert!(closed.max_abs_diff(&stationary_rs_numeric(&src, &ch, &pol).unwrap()) < 1e-10);
        prop_assert!((closed.sum() - 1.0).abs() < 1e-12);
        let ca = stationary_change_aware(&src, &ch).unwrap();
        prop_assert!(ca.max_abs_diff(&stationary_change_aware_numeric(&src, &ch).unwrap()) < 1e-10);
        let sa = stationary_semantics(&src, &ch).unwrap();
        prop_assert!(sa.max_abs_diff(&stationary_semantics_numeric(&src, &ch).unwrap()) < 1e-10);
    }

    #[test]
    fn relabelling_swaps_the_distribution(src in source(), ch in channel(), pol in policy()) {
        let a = stationary_rs(&src, &ch, &pol).unwrap();
        let b = stationary_rs(&src.swapped(), &ch.swapped(), &pol.swapped()).unwrap();
        prop_assert!(a.swapped().max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn source_marginal_is_preserved(src in source(), ch in channel(), pol in policy()) {
        let st = stationary_rs(&src, &ch, &pol).unwrap();
        let [m0, m1] = src.marginal();
        prop_assert!((st.pi00 + st.pi01 - m0).abs() < 1e-12);
        prop_assert!((st.pi10 + st.pi11 - m1).abs() < 1e-12);
    }

    #[test]
    fn report_invariants(src in source(), ch in channel(), pol in policy(), cw in costs()) {
        let spec = ConsecErrorSpec::new(src, ch, pol).unwrap();
        let r = analyze(&spec, &cw, &[0, 1, 2, 4, 8, 16, 32]).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.pe));
        prop_assert!(r.cost >= 0.0 && r.cost <= cw.c01().max(cw.c10()) + 1e-12);
        prop_assert!(r.cbar_e >= 0.0);
        prop_assert_eq!(r.violation[&0], spec.violation_probability(0));
        prop_assert!((r.violation[&0] - r.pe).abs() < 1e-12);
        let v: Vec<f64> = r.violation.values().copied().collect();
        prop_assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn objective_has_two_routes(src in source(), ch in channel(), pol in policy(), cw in costs()) {
        let direct = objective(&src, &ch, &cw, pol.pa0(), pol.pa1()).unwrap();
        let via = actuation_error_cost(&stationary_rs(&src, &ch, &pol).unwrap(), &cw);
        prop_assert!((direct - via).abs() < 1e-12);
        let unit = objective(&src, &ch, &CostWeights::unit(), pol.pa0(), pol.pa1()).unwrap();
        prop_assert!((unit - reconstruction_error_rate(&stationary_rs(&src, &ch, &pol).unwrap())).abs() < 1e-12);
    }

    #[test]
    fn optimum_is_feasible_and_consistent(src in source(), ch in channel(), cw in costs(), eta in 0.01f64..1.5) {
        let r = optimize_constrained(&src, &ch, &cw, eta).unwrap();
        prop_assert!(sampling_rate_rs(&src, r.pa0_star, r.pa1_star) <= eta + 1e-12);
        prop_assert!((r.value - objective(&src, &ch, &cw, r.pa0_star, r.pa1_star).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn optimum_is_symmetric(src in source(), ch in channel(), cw in costs(), eta in 0.01f64..1.5) {
        let a = optimize_constrained(&src, &ch, &cw, eta).unwrap();
        let b = optimize_constrained(&src.swapped(), &ch.swapped(), &cw.swapped(), eta).unwrap();
        prop_assert!((a.value - b.value).abs() < 1e-10);
        // The optimizer may pick a different point only when values tie.
        let swapped_value = objective(&src, &ch, &cw, b.pa1_star, b.pa0_star).unwrap();
        prop_assert!((swapped_value - a.value).abs() < 1e-10);
    }

    #[test]
    fn optimum_nonincreasing_in_eta(src in source(), ch in channel(), cw in costs()) {
        let mut last = f64::INFINITY;
        for k in 1..=12 {
            let v = optimize_constrained(&src, &ch, &cw, k as f64 * 0.1).unwrap().value;
            prop_assert!(v <= last + 1e-12, "eta {}: {} > {}", k as f64 * 0.1, v, last);
            last = v;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimum_dominates_grid(src in source(), ch in channel(), cw in costs(), eta in 0.02f64..1.2) {
        let r = optimize_constrained(&src, &ch, &cw, eta).unwrap();
        let g = grid_oracle(&src, &ch, &cw, eta, 0.01).unwrap();
        prop_assert!(r.value <= g.value + 1e-6, "{} > {}", r.value, g.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn monotonicity_thresholds_predict_slope(
        src in source(), ch in channel(), cw in costs(), pa0 in 0.05f64..0.95, pa1 in 0.05f64..0.95,
    ) {
        let (cond1, cond2) = monotonicity_conditions(&src, &ch, &cw);
        let h = 1e-6;
        let f = |a0: f64, a1: f64| objective(&src, &ch, &cw, a0, a1).unwrap();
        let d0 = (f(pa0 + h, pa1) - f(pa0 - h, pa1)) / (2.0 * h);
        if (pa1 - cond1).abs() > 1e-4 {
            prop_assert_eq!(d0 < 0.0, pa1 > cond1, "d/dpa0 = {}", d0);
        }
        let d1 = (f(pa0, pa1 + h) - f(pa0, pa1 - h)) / (2.0 * h);
        if (pa0 - cond2).abs() > 1e-4 {
            prop_assert_eq!(d1 < 0.0, pa0 > cond2, "d/dpa1 = {}", d1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Sampling both states more often never lengthens error runs on average.
    #[test]
    fn means_nonincreasing_along_diagonal(src in source(), ch in channel(), a in 0.01f64..1.0, b in 0.01f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let at = |x: f64| ConsecErrorSpec::new(src, ch, RsPolicy::new(x, x).unwrap()).unwrap();
        let (s_lo, s_hi) = (at(lo), at(hi));
        prop_assert!(s_hi.avg_consecutive_error().unwrap() <= s_lo.avg_consecutive_error().unwrap() + 1e-12);
        prop_assert!(s_hi.avg_importance_consec().unwrap() <= s_lo.avg_importance_consec().unwrap() + 1e-12);
    }
}
