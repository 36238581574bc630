//! One function per subcommand, each producing a [`Report`].

use markov_tracking::metrics::{
    ConsecErrorSpec, RsVsSemantics, actuation_error_cost, analyze, monotone_regions, reconstruction_error_rate,
    sampling_rate_change_aware, sampling_rate_rs, sampling_rate_semantics, sampling_rate_uniform,
};
use markov_tracking::model::{
    ChannelParams, CostWeights, PolicyKind, RsPolicy, SourceParams, check_three_state_closed_form, stationary_change_aware,
    stationary_rs, stationary_semantics,
};
use markov_tracking::optimizer::{
    ConstraintParams, OptimizeResult, grid_oracle, minimize_pe_constrained, optimize_constrained, optimize_unconstrained,
};
use markov_tracking::sim::{DEFAULT_BURN_IN, SimConfig, SimReport, simulate, simulate_many};
use rayon::prelude::*;

use crate::config::{CommandKind, MetricName, Params, PolicyName, RunSpec};
use crate::error::{CliError, Result};
use crate::output::{Cell, Report};
use crate::tables;

pub const DEFAULT_HORIZON: u64 = 1_000_000;
pub const DEFAULT_NS: [u64; 4] = [1, 2, 5, 10];

pub fn run(spec: &RunSpec) -> Result<Report> {
    let p = &spec.params;
    match spec.command {
        CommandKind::Analyze => cmd_analyze(p),
        CommandKind::Simulate => cmd_simulate(p),
        CommandKind::Optimize => cmd_optimize(p),
        CommandKind::Table => tables::cmd_table(spec.table.as_deref().unwrap_or_default(), p),
        CommandKind::Sweep => cmd_sweep(p),
        CommandKind::Compare => cmd_compare(p),
    }
}

fn metric_report() -> Report {
    Report::new(["metric", "value"])
}

fn row(r: &mut Report, name: impl Into<String>, v: impl Into<Cell>) {
    r.push(vec![Cell::Text(name.into()), v.into()]);
}

/// Burn-in for a run of `horizon` slots: the default, shrunk for short runs.
pub fn burn_in_for(params: &Params, horizon: u64) -> u64 {
    params.burn_in.unwrap_or(DEFAULT_BURN_IN.min(horizon / 10))
}

pub fn cmd_analyze(params: &Params) -> Result<Report> {
    if params.three_state() {
        return analyze_three_state(params);
    }
    let src = params.source()?;
    let ch = params.channel()?;
    let cw = params.costs()?;
    let ns = params.n.clone().unwrap_or_else(|| DEFAULT_NS.to_vec());
    let mut r = metric_report();
    let name = params.policy_name();
    r.meta("policy", name);
    let (st, rate) = match name {
        PolicyName::Rs | PolicyName::SemanticsAware => {
            // Under the semantics-aware policy the error process coincides with
            // randomized sampling at (1, 1): a sample taken while synced
            // changes nothing.
            let (pol, rate) = match name {
                PolicyName::Rs => {
                    let pol = params.rs_policy()?;
                    (pol, sampling_rate_rs(&src, pol.pa0(), pol.pa1()))
                }
                _ => (RsPolicy::new(1.0, 1.0)?, sampling_rate_semantics(&src, &ch)?),
            };
            let spec = ConsecErrorSpec::new(src, ch, pol)?;
            let m = analyze(&spec, &cw, &ns)?;
            row(&mut r, "pe", m.pe);
            row(&mut r, "cost", m.cost);
            row(&mut r, "cbar_e", m.cbar_e);
            row(&mut r, "cbar_s", m.cbar_s);
            for (n, v) in &m.violation {
                row(&mut r, format!("violation_{n}"), *v);
            }
            (*spec.stationary(), rate)
        }
        PolicyName::ChangeAware => {
            let st = stationary_change_aware(&src, &ch)?;
            row(&mut r, "pe", reconstruction_error_rate(&st));
            row(&mut r, "cost", actuation_error_cost(&st, &cw));
            (st, sampling_rate_change_aware(&src))
        }
        PolicyName::Uniform => {
            return Err(CliError::Validation(
                "the uniform policy has no closed form; use `simulate --policy uniform`".into(),
            ));
        }
    };
    row(&mut r, "sampling_rate", rate);
    for (label, v) in ["pi00", "pi01", "pi10", "pi11"].into_iter().zip(st.as_array()) {
        row(&mut r, label, v);
    }
    row(&mut r, "pi_sum", st.sum());
    if name == PolicyName::Rs {
        let pol = params.rs_policy()?;
        let region = RsVsSemantics::new(&src, &ch, &cw)?;
        row(&mut r, "remark1_t1", region.t1());
        row(&mut r, "remark1_t2", region.t2(pol.pa1()).ok());
        row(&mut r, "remark1_rs_beats_semantics", region.rs_beats_semantics(&pol).ok());
        let m = monotone_regions(&src, &ch, &pol);
        row(&mut r, "remark2_pe_decreasing_in_p", m.in_p.decreasing());
        row(&mut r, "remark2_pe_decreasing_in_q", m.in_q.decreasing());
        r.meta("monotone_regions", m);
    }
    Ok(r)
}

fn analyze_three_state(params: &Params) -> Result<Report> {
    let src = params.source3()?;
    let ch = params.channel3()?;
    let pol = params.rs_policy3()?;
    let check = check_three_state_closed_form(&src, &ch, &pol)?;
    let mut r = metric_report();
    for i in 0..3 {
        for j in 0..3 {
            row(&mut r, format!("pi{i}{j}"), check.numeric.pi[i][j]);
        }
    }
    row(&mut r, "pi_sum", check.numeric.sum());
    row(&mut r, "pe", check.numeric.error_rate());
    row(&mut r, "closed_form_max_abs_diff", check.max_abs_diff);
    row(&mut r, "closed_form_agrees", check.agrees);
    r.meta("closed_form", check.closed_form);
    r.meta("discrepancies", check.discrepancies());
    Ok(r)
}

pub fn sim_config(params: &Params, policy: PolicyKind, default_horizon: u64, seed: u64) -> Result<SimConfig> {
    let horizon = params.horizon.unwrap_or(default_horizon);
    Ok(SimConfig::new(
        params.source()?,
        params.channel()?,
        policy,
        params.costs()?,
        horizon,
        seed,
        burn_in_for(params, horizon),
    )?)
}

pub fn cmd_simulate(params: &Params) -> Result<Report> {
    let seed = params.seed.unwrap_or(0);
    let horizon = params.horizon.unwrap_or(DEFAULT_HORIZON);
    let cfg = if params.three_state() {
        SimConfig::three_state(
            params.source3()?,
            params.channel3()?,
            params.rs_policy3()?,
            horizon,
            seed,
            burn_in_for(params, horizon),
        )?
    } else {
        sim_config(params, params.policy_kind()?, DEFAULT_HORIZON, seed)?
    };
    let rep = simulate(&cfg);
    let mut r = sim_rows(&rep, params);
    r.seed = Some(seed);
    r.meta("config", cfg);
    Ok(r)
}

fn sim_rows(rep: &SimReport, params: &Params) -> Report {
    let mut r = metric_report();
    row(&mut r, "pe_hat", rep.pe_hat);
    row(&mut r, "cost_hat", rep.cost_hat);
    row(&mut r, "sampling_rate", rep.sampling_rate);
    row(&mut r, "mean_consec_error", rep.mean_consec_error());
    row(&mut r, "mean_importance_consec", rep.mean_importance_consec());
    for n in params.n.clone().unwrap_or_else(|| DEFAULT_NS.to_vec()) {
        row(&mut r, format!("violation_{n}"), rep.violation_hat(n));
    }
    row(&mut r, "slots", rep.slots);
    row(&mut r, "error_slots", rep.error_slots);
    row(&mut r, "sample_slots", rep.sample_slots);
    r
}

pub fn cmd_optimize(params: &Params) -> Result<Report> {
    let src = params.source()?;
    let ch = params.channel()?;
    let metric = params.metric.unwrap_or(MetricName::Cost);
    let cw = match metric {
        MetricName::Cost => params.costs()?,
        MetricName::Pe => CostWeights::unit(),
        _ => return Err(CliError::Validation("optimize supports --metric cost or pe".into())),
    };
    let res: OptimizeResult = match (params.eta, metric) {
        (None, _) => optimize_unconstrained(&src, &ch, &cw)?,
        (Some(_), MetricName::Pe) => minimize_pe_constrained(&src, &ch, params.eta_or(1.0)?)?,
        (Some(_), _) => optimize_constrained(&src, &ch, &cw, params.eta_or(1.0)?)?,
    };
    let mut r = metric_report();
    row(&mut r, "pa0_star", res.pa0_star);
    row(&mut r, "pa1_star", res.pa1_star);
    row(&mut r, "value", res.value);
    row(&mut r, "sampling_rate", sampling_rate_rs(&src, res.pa0_star, res.pa1_star));
    row(&mut r, "eta_effective", res.diagnostics.eta_effective);
    row(&mut r, "case_taken", format!("{:?}", res.case_taken));
    if let Some(step) = params.grid_step {
        let step = params.grid_step_or(step)?;
        let g = grid_oracle(&src, &ch, &cw, params.eta_or(1.0)?, step)?;
        row(&mut r, "grid_pa0", g.pa0_star);
        row(&mut r, "grid_pa1", g.pa1_star);
        row(&mut r, "grid_value", g.value);
        row(&mut r, "grid_points", g.points_scanned as u64);
    }
    r.meta("metric", metric);
    r.meta("diagnostics", &res.diagnostics);
    Ok(r)
}

/// `0, step, 2 step, ...` up to and including 1.
pub fn grid_axis(step: f64) -> Vec<f64> {
    let n = (1.0 / step + 1e-9).floor() as usize;
    let mut axis: Vec<f64> = (0..=n).map(|k| (k as f64 * step).min(1.0)).collect();
    if 1.0 - axis[n] > 1e-9 {
        axis.push(1.0);
    }
    axis
}

/// Metric at one grid point; `None` where it is undefined.
pub fn sweep_value(src: SourceParams, ch: ChannelParams, cw: &CostWeights, metric: MetricName, pa0: f64, pa1: f64) -> Option<f64> {
    let pol = RsPolicy::new(pa0, pa1).ok()?;
    match metric {
        MetricName::Pe => stationary_rs(&src, &ch, &pol).ok().map(|st| reconstruction_error_rate(&st)),
        MetricName::Cost => stationary_rs(&src, &ch, &pol).ok().map(|st| actuation_error_cost(&st, cw)),
        MetricName::CbarE => ConsecErrorSpec::new(src, ch, pol).ok()?.avg_consecutive_error().ok(),
        MetricName::CbarS => ConsecErrorSpec::new(src, ch, pol).ok()?.avg_importance_consec().ok(),
    }
}

pub fn cmd_sweep(params: &Params) -> Result<Report> {
    let src = params.source()?;
    let ch = params.channel()?;
    let cw = params.costs()?;
    let metric = params.metric.unwrap_or(MetricName::CbarE);
    let axis = grid_axis(params.grid_step_or(0.05)?);
    let rows: Vec<Vec<(f64, f64, Option<f64>)>> = axis
        .par_iter()
        .map(|&a0| axis.iter().map(|&a1| (a0, a1, sweep_value(src, ch, &cw, metric, a0, a1))).collect())
        .collect();
    let mut r = Report::new(["pa0", "pa1", "value"]);
    let mut best: Option<(f64, f64, f64)> = None;
    for (a0, a1, v) in rows.into_iter().flatten() {
        if let Some(v) = v {
            if best.is_none_or(|b| v < b.2) {
                best = Some((a0, a1, v));
            }
        }
        r.push(vec![a0.into(), a1.into(), v.into()]);
    }
    r.meta("metric", metric);
    if let Some((a0, a1, v)) = best {
        r.meta("minimum", serde_json::json!({ "pa0": a0, "pa1": a1, "value": v }));
    }
    Ok(r)
}

/// Where a policy's sampling rate comes from.
pub const RATE_CLOSED_FORM: &str = "closed-form";
pub const RATE_EXACT: &str = "exact";

pub fn cmd_compare(params: &Params) -> Result<Report> {
    let src = params.source()?;
    let ch = params.channel()?;
    let cw = params.costs()?;
    let constraint = params.eta.map(ConstraintParams::new).transpose()?;
    let feasible = |rate: f64| constraint.map(|c| rate <= c.eta() + 1e-12);
    let mut r = Report::new(["policy", "pa0", "pa1", "pe", "cost", "sampling_rate", "rate_source", "feasible"]);
    let mut push = |name: &str, pol: Option<(f64, f64)>, pe: f64, cost: f64, rate: f64, source: &str| {
        r.push(vec![
            name.into(),
            pol.map(|p| p.0).into(),
            pol.map(|p| p.1).into(),
            pe.into(),
            cost.into(),
            rate.into(),
            source.into(),
            feasible(rate).into(),
        ]);
    };

    if params.pa0.is_some() || params.pa1.is_some() {
        let pol = params.rs_policy()?;
        let st = stationary_rs(&src, &ch, &pol)?;
        push(
            "rs",
            Some((pol.pa0(), pol.pa1())),
            reconstruction_error_rate(&st),
            actuation_error_cost(&st, &cw),
            sampling_rate_rs(&src, pol.pa0(), pol.pa1()),
            RATE_CLOSED_FORM,
        );
    }
    if let Some(eta) = params.eta {
        let opt = optimize_constrained(&src, &ch, &cw, eta)?;
        let st = stationary_rs(&src, &ch, &opt.policy())?;
        push(
            "rsc",
            Some((opt.pa0_star, opt.pa1_star)),
            reconstruction_error_rate(&st),
            opt.value,
            sampling_rate_rs(&src, opt.pa0_star, opt.pa1_star),
            RATE_CLOSED_FORM,
        );
    }
    let unc = optimize_unconstrained(&src, &ch, &cw)?;
    let st = stationary_rs(&src, &ch, &unc.policy())?;
    push(
        "rs-unconstrained",
        Some((unc.pa0_star, unc.pa1_star)),
        reconstruction_error_rate(&st),
        unc.value,
        sampling_rate_rs(&src, unc.pa0_star, unc.pa1_star),
        RATE_CLOSED_FORM,
    );
    let st = stationary_semantics(&src, &ch)?;
    push(
        "semantics-aware",
        None,
        reconstruction_error_rate(&st),
        actuation_error_cost(&st, &cw),
        sampling_rate_semantics(&src, &ch)?,
        RATE_CLOSED_FORM,
    );
    let st = stationary_change_aware(&src, &ch)?;
    push(
        "change-aware",
        None,
        reconstruction_error_rate(&st),
        actuation_error_cost(&st, &cw),
        sampling_rate_change_aware(&src),
        RATE_CLOSED_FORM,
    );
    let d = params.period()?;
    let seed = params.seed.unwrap_or(0);
    let rep = simulate_many(&[sim_config(params, PolicyKind::uniform(d)?, DEFAULT_HORIZON, seed)?]).remove(0);
    push(&format!("uniform-d{d}"), None, rep.pe_hat, rep.cost_hat, sampling_rate_uniform(d), RATE_EXACT);
    r.seed = Some(seed);
    r.meta("uniform_source", "simulation");
    r.meta("eta", params.eta);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_includes_both_ends() {
        assert_eq!(grid_axis(0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let a = grid_axis(0.3);
        assert_eq!(*a.last().unwrap(), 1.0);
        assert_eq!(a.len(), 5);
        assert_eq!(grid_axis(0.1).len(), 11);
    }
}
