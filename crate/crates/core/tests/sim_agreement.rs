use std::time::Instant;

use markov_tracking::metrics::{ConsecErrorSpec, actuation_error_cost, reconstruction_error_rate};
use markov_tracking::model::{
    ChannelParams, CostWeights, PolicyKind, RsPolicy, SourceParams, stationary_change_aware, stationary_rs,
    stationary_semantics,
};
use markov_tracking::optimizer::sampling_rate_rs;
use markov_tracking::sim::{DEFAULT_BURN_IN, SimConfig, empirical_sampling_cost, simulate};

fn cfg(p: f64, q: f64, ps0: f64, ps1: f64, policy: PolicyKind, horizon: u64, seed: u64) -> SimConfig {
    SimConfig::new(
        SourceParams::new(p, q).unwrap(),
        ChannelParams::new(ps0, ps1).unwrap(),
        policy,
        CostWeights::new(1.0, 2.0).unwrap(),
        horizon,
        seed,
        DEFAULT_BURN_IN,
    )
    .unwrap()
}

fn rs(pa0: f64, pa1: f64) -> PolicyKind {
    PolicyKind::Rs(RsPolicy::new(pa0, pa1).unwrap())
}

/// Generous bound for Markov-correlated slot indicators.
fn bound(pe: f64, slots: u64) -> f64 {
    4.0 * (pe * (1.0 - pe) / slots as f64).sqrt() * 5.0
}

#[test]
fn rsc_row_cost_and_rate() {
    let r = simulate(&cfg(0.3, 0.1, 0.2, 0.3, rs(0.0, 0.667), 10_000_000, 11));
    assert!((r.cost_hat - 0.25).abs() <= 0.005, "{}", r.cost_hat);
    let src = SourceParams::new(0.3, 0.1).unwrap();
    assert!((r.sampling_rate - sampling_rate_rs(&src, 0.0, 0.667)).abs() <= 0.003);
    assert!((empirical_sampling_cost(&r, 2.0) - 2.0 * r.sampling_rate).abs() < 1e-15);
}

#[test]
fn semantics_aware_row() {
    let r = simulate(&cfg(0.2, 0.4, 0.5, 0.6, PolicyKind::SemanticsAware, 10_000_000, 12));
    assert!((r.pe_hat - 0.151).abs() <= 0.005, "{}", r.pe_hat);
}

#[test]
fn closed_form_policies_agree() {
    let src = SourceParams::new(0.35, 0.25).unwrap();
    let ch = ChannelParams::new(0.45, 0.7).unwrap();
    let cw = CostWeights::new(1.0, 2.0).unwrap();
    let n = 2_000_000;
    let cases = [
        (rs(0.4, 0.8), stationary_rs(&src, &ch, &RsPolicy::new(0.4, 0.8).unwrap()).unwrap()),
        (PolicyKind::ChangeAware, stationary_change_aware(&src, &ch).unwrap()),
        (PolicyKind::SemanticsAware, stationary_semantics(&src, &ch).unwrap()),
    ];
    for (i, (policy, st)) in cases.into_iter().enumerate() {
        let r = simulate(&cfg(0.35, 0.25, 0.45, 0.7, policy, n + DEFAULT_BURN_IN, 100 + i as u64));
        let pe = reconstruction_error_rate(&st);
        assert!((r.pe_hat - pe).abs() <= bound(pe, r.slots), "{policy:?}: {} vs {pe}", r.pe_hat);
        let cost = actuation_error_cost(&st, &cw);
        assert!((r.cost_hat - cost).abs() <= 2.0 * bound(pe, r.slots), "{policy:?}");
    }
}

#[test]
fn consecutive_statistics_converge() {
    let spec = ConsecErrorSpec::new(
        SourceParams::new(0.3, 0.2).unwrap(),
        ChannelParams::new(0.4, 0.6).unwrap(),
        RsPolicy::new(0.6, 0.9).unwrap(),
    )
    .unwrap();
    let r = simulate(&cfg(0.3, 0.2, 0.4, 0.6, rs(0.6, 0.9), 5_000_000, 21));
    assert!((r.mean_consec_error() - spec.avg_consecutive_error().unwrap()).abs() < 0.01);
    assert!((r.mean_importance_consec() - spec.avg_importance_consec().unwrap()).abs() < 0.01);
    for i in 0..5 {
        assert!((r.consec_slot_pmf(i) - spec.consec_error_pmf(i)).abs() < 0.005, "pmf {i}");
        assert!((r.importance_slot_pmf(i) - spec.importance_pmf(i)).abs() < 0.005, "imp {i}");
        assert!((r.violation_hat(i) - spec.violation_probability(i)).abs() < 0.005, "viol {i}");
    }
}

#[test]
fn ten_million_slots_is_fast() {
    let start = Instant::now();
    let r = simulate(&cfg(0.5, 0.4, 0.6, 0.6, rs(0.5, 0.5), 10_000_000, 7));
    let elapsed = start.elapsed();
    eprintln!("10^7 slots in {elapsed:?}");
    assert_eq!(r.slots, 10_000_000 - DEFAULT_BURN_IN);
    assert!(elapsed.as_secs_f64() < 2.0, "{elapsed:?}");
}

#[test]
fn analytic_sampling_rates_match_simulation() {
    use markov_tracking::metrics::{sampling_rate_change_aware, sampling_rate_semantics};
    let src = SourceParams::new(0.7, 0.8).unwrap();
    let ch = ChannelParams::new(0.2, 0.3).unwrap();
    let r = simulate(&cfg(0.7, 0.8, 0.2, 0.3, PolicyKind::SemanticsAware, 4_000_000, 31));
    assert!((r.sampling_rate - sampling_rate_semantics(&src, &ch).unwrap()).abs() < 0.002);
    let r = simulate(&cfg(0.7, 0.8, 0.2, 0.3, PolicyKind::ChangeAware, 4_000_000, 32));
    assert!((r.sampling_rate - sampling_rate_change_aware(&src)).abs() < 0.002);
}
