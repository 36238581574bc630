//! Regeneration of the published result tables.
//!
//! Analytic columns come from the closed forms and the optimizer. The
//! uniform policy has no closed form, so its column is always simulated.
//! Every policy column `x` is followed by `x_violates`, true when the
//! policy's long-run sampling rate exceeds the budget `eta`.

use markov_tracking::metrics::{
    ConsecErrorSpec, actuation_error_cost, reconstruction_error_rate, sampling_rate_change_aware, sampling_rate_rs,
    sampling_rate_semantics, sampling_rate_uniform,
};
use markov_tracking::model::{
    ChannelParams, CostWeights, PolicyKind, SourceParams, stationary_change_aware, stationary_semantics,
};
use markov_tracking::optimizer::{OptimizeResult, optimize_constrained, optimize_unconstrained};
use markov_tracking::sim::{DEFAULT_BURN_IN, SimConfig, SimReport, simulate_many};
use rayon::prelude::*;
use serde_json::json;

use crate::config::Params;
use crate::error::{CliError, Result};
use crate::output::{Cell, Report};

/// Source rows shared by the cost tables.
pub const COST_ROWS: [(f64, f64); 5] = [(0.1, 0.01), (0.3, 0.1), (0.5, 0.4), (0.7, 0.8), (0.9, 0.95)];
pub const COST_ETA: f64 = 0.5;
pub const COST_WEIGHTS: (f64, f64) = (1.0, 2.0);

/// Budgets of the reconstruction-error tables.
pub const PE_ETAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const PE_CHANNEL: (f64, f64) = (0.5, 0.6);

/// Source and channel of the importance-aware tables.
pub const IMPORTANCE_SOURCE: (f64, f64) = (0.5, 0.9);
pub const IMPORTANCE_CHANNEL: (f64, f64) = (0.4, 0.7);
pub const IMPORTANCE_AXIS: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];

pub const UNIFORM_PERIOD: u32 = 5;
pub const TABLE_HORIZON: u64 = 10_000_000;

const BUDGET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    RscCost { good_channel: bool },
    RsCost { good_channel: bool },
    CompareCost { good_channel: bool },
    RscPe { fast: bool },
    ComparePe { fast: bool },
    ImportanceCs,
    ImportancePe,
}

impl TableId {
    pub const ALL: [&'static str; 12] = [
        "rsc-cost-ps02-03",
        "rsc-cost-ps06-06",
        "rs-cost-ps02-03",
        "rs-cost-ps06-06",
        "compare-cost-ps02-03",
        "compare-cost-ps06-06",
        "rsc-pe-p02-q04",
        "rsc-pe-p06-q07",
        "compare-pe-p02-q04",
        "compare-pe-p06-q07",
        "importance-cs",
        "importance-pe",
    ];

    pub fn parse(id: &str) -> Result<Self> {
        Ok(match id {
            "rsc-cost-ps02-03" => TableId::RscCost { good_channel: false },
            "rsc-cost-ps06-06" => TableId::RscCost { good_channel: true },
            "rs-cost-ps02-03" => TableId::RsCost { good_channel: false },
            "rs-cost-ps06-06" => TableId::RsCost { good_channel: true },
            "compare-cost-ps02-03" | "compare-cost-ps02" => TableId::CompareCost { good_channel: false },
            "compare-cost-ps06-06" | "compare-cost-ps06" => TableId::CompareCost { good_channel: true },
            "rsc-pe-p02-q04" => TableId::RscPe { fast: false },
            "rsc-pe-p06-q07" => TableId::RscPe { fast: true },
            "compare-pe-p02-q04" => TableId::ComparePe { fast: false },
            "compare-pe-p06-q07" => TableId::ComparePe { fast: true },
            "importance-cs" => TableId::ImportanceCs,
            "importance-pe" => TableId::ImportancePe,
            _ => return Err(CliError::UnknownTable(id.to_string())),
        })
    }
}

fn cost_channel(good_channel: bool) -> ChannelParams {
    let (a, b) = if good_channel { (0.6, 0.6) } else { (0.2, 0.3) };
    ChannelParams::new(a, b).expect("valid table channel")
}

fn cost_weights() -> CostWeights {
    CostWeights::new(COST_WEIGHTS.0, COST_WEIGHTS.1).expect("valid table costs")
}

fn pe_source(fast: bool) -> SourceParams {
    let (p, q) = if fast { (0.6, 0.7) } else { (0.2, 0.4) };
    SourceParams::new(p, q).expect("valid table source")
}

fn pe_channel() -> ChannelParams {
    ChannelParams::new(PE_CHANNEL.0, PE_CHANNEL.1).expect("valid table channel")
}

fn violates(rate: f64, eta: f64) -> bool {
    rate > eta + BUDGET_SLACK
}

fn horizon(params: &Params) -> u64 {
    params.horizon.unwrap_or(TABLE_HORIZON)
}

/// One simulation per entry, seeded `seed + index`.
fn simulate_batch(params: &Params, runs: &[(SourceParams, ChannelParams, PolicyKind, CostWeights)]) -> Result<Vec<SimReport>> {
    let h = horizon(params);
    let seed = params.seed.unwrap_or(0);
    let burn_in = params.burn_in.unwrap_or(DEFAULT_BURN_IN.min(h / 10));
    let cfgs = runs
        .iter()
        .enumerate()
        .map(|(k, &(src, ch, pol, cw))| SimConfig::new(src, ch, pol, cw, h, seed + k as u64, burn_in))
        .collect::<markov_tracking::Result<Vec<_>>>()?;
    Ok(simulate_many(&cfgs))
}

pub fn cmd_table(id: &str, params: &Params) -> Result<Report> {
    let table = TableId::parse(id)?;
    let mut r = match table {
        TableId::RscCost { good_channel } => optimizer_cost_table(params, good_channel, true)?,
        TableId::RsCost { good_channel } => optimizer_cost_table(params, good_channel, false)?,
        TableId::CompareCost { good_channel } => compare_cost_table(params, good_channel)?,
        TableId::RscPe { fast } => rsc_pe_table(params, fast)?,
        TableId::ComparePe { fast } => compare_pe_table(params, fast)?,
        TableId::ImportanceCs => importance_table(true)?,
        TableId::ImportancePe => importance_table(false)?,
    };
    r.meta("table", id);
    Ok(r)
}

fn optimizer_cost_table(params: &Params, good_channel: bool, constrained: bool) -> Result<Report> {
    let ch = cost_channel(good_channel);
    let cw = cost_weights();
    let results: Vec<(SourceParams, OptimizeResult)> = COST_ROWS
        .par_iter()
        .map(|&(p, q)| {
            let src = SourceParams::new(p, q)?;
            let res = if constrained {
                optimize_constrained(&src, &ch, &cw, COST_ETA)?
            } else {
                optimize_unconstrained(&src, &ch, &cw)?
            };
            Ok((src, res))
        })
        .collect::<markov_tracking::Result<_>>()?;
    let simulate = params.simulate.unwrap_or(false);
    let sims = if simulate {
        let runs: Vec<_> = results.iter().map(|(src, res)| (*src, ch, PolicyKind::Rs(res.policy()), cw)).collect();
        simulate_batch(params, &runs)?
    } else {
        Vec::new()
    };
    let mut cols = vec!["p", "q", "pa0", "pa1", "value", "sampling_rate", "violates", "case"];
    if simulate {
        cols.push("value_sim");
    }
    let mut r = Report::new(cols);
    for (k, (src, res)) in results.iter().enumerate() {
        let rate = sampling_rate_rs(src, res.pa0_star, res.pa1_star);
        let mut row: Vec<Cell> = vec![
            src.p().into(),
            src.q().into(),
            res.pa0_star.into(),
            res.pa1_star.into(),
            res.value.into(),
            rate.into(),
            violates(rate, COST_ETA).into(),
            format!("{:?}", res.case_taken).into(),
        ];
        if simulate {
            row.push(sims[k].cost_hat.into());
        }
        r.push(row);
    }
    r.meta("eta", COST_ETA);
    r.meta("channel", json!({ "ps0": ch.ps0(), "ps1": ch.ps1() }));
    r.meta("costs", json!({ "c01": COST_WEIGHTS.0, "c10": COST_WEIGHTS.1 }));
    r.meta("objective", "cost");
    if simulate {
        r.seed = Some(params.seed.unwrap_or(0));
        r.meta("horizon", horizon(params));
    }
    Ok(r)
}

/// Value and sampling rate of each policy for one source.
#[derive(Debug, Clone, Copy)]
struct PolicyValues {
    semantics: (f64, f64),
    change: (f64, f64),
    uniform: (f64, f64),
    rs: (f64, f64),
}

/// `metric` picks cost (true) or reconstruction error (false).
fn policy_values(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights, uniform: &SimReport, cost: bool) -> Result<PolicyValues> {
    let eval = |st: &markov_tracking::model::JointStationary| {
        if cost {
            actuation_error_cost(st, cw)
        } else {
            reconstruction_error_rate(st)
        }
    };
    let rs = optimize_unconstrained(src, ch, cw)?;
    Ok(PolicyValues {
        semantics: (eval(&stationary_semantics(src, ch)?), sampling_rate_semantics(src, ch)?),
        change: (eval(&stationary_change_aware(src, ch)?), sampling_rate_change_aware(src)),
        uniform: (
            if cost { uniform.cost_hat } else { uniform.pe_hat },
            sampling_rate_uniform(UNIFORM_PERIOD),
        ),
        rs: (rs.value, sampling_rate_rs(src, rs.pa0_star, rs.pa1_star)),
    })
}

fn rate_provenance(r: &mut Report) {
    r.meta(
        "rate_source",
        json!({
            "semantics": "closed-form stationary of the semantics-aware chain",
            "change": "closed-form 2pq/(p+q)",
            "uniform": "exact 1/d",
            "rsc": "closed-form (q pa0 + p pa1)/(p+q)",
            "rs": "closed-form (q pa0 + p pa1)/(p+q)",
        }),
    );
    r.meta("uniform_value_source", "simulation");
    r.meta("uniform_period", UNIFORM_PERIOD);
}

const COMPARE_COLS: [&str; 10] = [
    "semantics",
    "semantics_violates",
    "change",
    "change_violates",
    "uniform",
    "uniform_violates",
    "rsc",
    "rsc_violates",
    "rs",
    "rs_violates",
];

fn compare_cells(v: &PolicyValues, rsc: (f64, f64), eta: f64) -> Vec<Cell> {
    [v.semantics, v.change, v.uniform, rsc, v.rs]
        .into_iter()
        .flat_map(|(value, rate)| [Cell::Num(value), Cell::Bool(violates(rate, eta))])
        .collect()
}

fn compare_cost_table(params: &Params, good_channel: bool) -> Result<Report> {
    let ch = cost_channel(good_channel);
    let cw = cost_weights();
    let sources = COST_ROWS
        .iter()
        .map(|&(p, q)| SourceParams::new(p, q))
        .collect::<markov_tracking::Result<Vec<_>>>()?;
    let uniform = PolicyKind::uniform(UNIFORM_PERIOD)?;
    let runs: Vec<_> = sources.iter().map(|&src| (src, ch, uniform, cw)).collect();
    let sims = simulate_batch(params, &runs)?;
    let mut r = Report::new(["p", "q"].into_iter().chain(COMPARE_COLS));
    for (src, sim) in sources.iter().zip(&sims) {
        let v = policy_values(src, &ch, &cw, sim, true)?;
        let rsc = optimize_constrained(src, &ch, &cw, COST_ETA)?;
        let rsc = (rsc.value, sampling_rate_rs(src, rsc.pa0_star, rsc.pa1_star));
        let mut row = vec![src.p().into(), src.q().into()];
        row.extend(compare_cells(&v, rsc, COST_ETA));
        r.push(row);
    }
    r.seed = Some(params.seed.unwrap_or(0));
    r.meta("eta", COST_ETA);
    r.meta("channel", json!({ "ps0": ch.ps0(), "ps1": ch.ps1() }));
    r.meta("horizon", horizon(params));
    rate_provenance(&mut r);
    Ok(r)
}

fn rsc_pe_table(params: &Params, fast: bool) -> Result<Report> {
    let src = pe_source(fast);
    let ch = pe_channel();
    let results: Vec<OptimizeResult> = PE_ETAS
        .par_iter()
        .map(|&eta| optimize_constrained(&src, &ch, &CostWeights::unit(), eta))
        .collect::<markov_tracking::Result<_>>()?;
    let simulate = params.simulate.unwrap_or(false);
    let sims = if simulate {
        let runs: Vec<_> = results
            .iter()
            .map(|res| (src, ch, PolicyKind::Rs(res.policy()), CostWeights::unit()))
            .collect();
        simulate_batch(params, &runs)?
    } else {
        Vec::new()
    };
    let mut cols = vec!["eta", "pa0", "pa1", "pe", "sampling_rate", "violates", "case"];
    if simulate {
        cols.push("pe_sim");
    }
    let mut r = Report::new(cols);
    for (k, (eta, res)) in PE_ETAS.iter().zip(&results).enumerate() {
        let rate = sampling_rate_rs(&src, res.pa0_star, res.pa1_star);
        let mut row: Vec<Cell> = vec![
            (*eta).into(),
            res.pa0_star.into(),
            res.pa1_star.into(),
            res.value.into(),
            rate.into(),
            violates(rate, *eta).into(),
            format!("{:?}", res.case_taken).into(),
        ];
        if simulate {
            row.push(sims[k].pe_hat.into());
        }
        r.push(row);
    }
    r.meta("source", json!({ "p": src.p(), "q": src.q() }));
    r.meta("channel", json!({ "ps0": ch.ps0(), "ps1": ch.ps1() }));
    r.meta("objective", "pe");
    if simulate {
        r.seed = Some(params.seed.unwrap_or(0));
        r.meta("horizon", horizon(params));
    }
    Ok(r)
}

fn compare_pe_table(params: &Params, fast: bool) -> Result<Report> {
    let src = pe_source(fast);
    let ch = pe_channel();
    let cw = CostWeights::unit();
    let sims = simulate_batch(params, &[(src, ch, PolicyKind::uniform(UNIFORM_PERIOD)?, cw)])?;
    let v = policy_values(&src, &ch, &cw, &sims[0], false)?;
    let mut r = Report::new(["eta"].into_iter().chain(COMPARE_COLS));
    for eta in PE_ETAS {
        let rsc = optimize_constrained(&src, &ch, &cw, eta)?;
        let rsc = (rsc.value, sampling_rate_rs(&src, rsc.pa0_star, rsc.pa1_star));
        let mut row = vec![eta.into()];
        row.extend(compare_cells(&v, rsc, eta));
        r.push(row);
    }
    r.seed = Some(params.seed.unwrap_or(0));
    r.meta("source", json!({ "p": src.p(), "q": src.q() }));
    r.meta("channel", json!({ "ps0": ch.ps0(), "ps1": ch.ps1() }));
    r.meta("horizon", horizon(params));
    rate_provenance(&mut r);
    Ok(r)
}

/// `(C̄_S, P_E)` at every `(pa0, pa1)` of the importance-table axis; rows
/// indexed by `pa0`.
pub fn importance_grid() -> Result<Vec<Vec<(f64, f64)>>> {
    let src = SourceParams::new(IMPORTANCE_SOURCE.0, IMPORTANCE_SOURCE.1)?;
    let ch = ChannelParams::new(IMPORTANCE_CHANNEL.0, IMPORTANCE_CHANNEL.1)?;
    IMPORTANCE_AXIS
        .iter()
        .map(|&a0| {
            IMPORTANCE_AXIS
                .iter()
                .map(|&a1| {
                    let spec = ConsecErrorSpec::new(src, ch, markov_tracking::model::RsPolicy::new(a0, a1)?)?;
                    Ok((spec.avg_importance_consec()?, reconstruction_error_rate(spec.stationary())))
                })
                .collect()
        })
        .collect()
}

/// Cells with `C̄_S < i1` and `P_E < i2`.
pub fn threshold_scan(grid: &[Vec<(f64, f64)>], i1: f64, i2: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (r, row) in grid.iter().enumerate() {
        for (c, &(cs, pe)) in row.iter().enumerate() {
            if cs < i1 && pe < i2 {
                out.push((IMPORTANCE_AXIS[r], IMPORTANCE_AXIS[c]));
            }
        }
    }
    out
}

fn importance_table(cs: bool) -> Result<Report> {
    let grid = importance_grid()?;
    let cols = std::iter::once("pa0".to_string()).chain(IMPORTANCE_AXIS.iter().map(|a| format!("pa1_{a}")));
    let mut r = Report::new(cols);
    for (a0, row) in IMPORTANCE_AXIS.iter().zip(&grid) {
        let mut cells = vec![Cell::Num(*a0)];
        cells.extend(row.iter().map(|&(c, p)| Cell::Num(if cs { c } else { p })));
        r.push(cells);
    }
    r.meta("metric", if cs { "cbar-s" } else { "pe" });
    r.meta("source", json!({ "p": IMPORTANCE_SOURCE.0, "q": IMPORTANCE_SOURCE.1 }));
    r.meta("channel", json!({ "ps0": IMPORTANCE_CHANNEL.0, "ps1": IMPORTANCE_CHANNEL.1 }));
    let scans: Vec<_> = [(0.1, 0.3), (0.1, 0.2), (0.1, 1.0)]
        .into_iter()
        .map(|(i1, i2)| json!({ "i1": i1, "i2": i2, "cells": threshold_scan(&grid, i1, i2) }))
        .collect();
    r.meta("threshold_scan", scans);
    Ok(r)
}
