//! Minimum actuation-error cost of the randomized policy under a budget on
//! the time-averaged sampling rate,
//! `q pa0 + p pa1 <= eta (p + q)`.
//!
//! When `p c10 >= q c01` state 1 is the more valuable one to sample: the
//! budget line is parametrized by `pa0` and `pa1 = (eta (p+q) - q pa0) / p`.
//! Otherwise the roles swap. Along the line the cost is a ratio of two
//! quadratics whose stationary points are found in closed form. Every
//! candidate, including the corners of the feasible polygon, is scored with
//! the exact objective and the best one wins.

mod grid;
mod ratio;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::actuation_error_cost_rs;
pub use crate::metrics::sampling_rate_rs;
use crate::model::{ChannelParams, CostWeights, RsPolicy, SourceParams};

pub use grid::{GridOptimum, grid_oracle};
pub use ratio::{CriticalPoints, QuadraticRatio};

/// Values closer than this are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Budget ratio `eta = delta_max / delta`. Values at or above 1 leave the
/// constraint slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintParams {
    eta: f64,
}

impl ConstraintParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::invalid("eta", eta, "must be finite and nonnegative"));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Budget after clamping: a sampling rate above 1 is unreachable.
    pub fn effective_eta(&self) -> f64 {
        self.eta.min(1.0)
    }

    pub fn feasible(&self, src: &SourceParams, pa0: f64, pa1: f64) -> bool {
        sampling_rate_rs(src, pa0, pa1) <= self.eta + 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTaken {
    Case1Interior,
    Case1Boundary,
    /// The `(0, min(1, eta (p+q)/p))` corner, reached either because the
    /// channel of state 1 is too poor or because it beat the line candidates.
    Case1Remark3,
    Case2Interior,
    Case2Boundary,
    Case2Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    CriticalPoint,
    LowerEndpoint,
    UpperEndpoint,
    Corner,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub pa0: f64,
    pub pa1: f64,
    pub value: f64,
    pub kind: CandidateKind,
}

/// Strict "a is preferred to b": lower value, then lower total sampling
/// probability, then lower `pa0`.
pub(crate) fn preferred(a: (f64, f64, f64), b: (f64, f64, f64)) -> bool {
    let (va, a0, a1) = a;
    let (vb, b0, b1) = b;
    if va < vb - TIE_TOLERANCE {
        return true;
    }
    if va > vb + TIE_TOLERANCE {
        return false;
    }
    let (sa, sb) = (a0 + a1, b0 + b1);
    if sa != sb {
        return sa < sb;
    }
    a0 < b0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub eta_effective: f64,
    /// `pc10 >= qc01`.
    pub case1: bool,
    /// Feasible range of the free probability on the budget line.
    pub interval: (f64, f64),
    pub ratio: QuadraticRatio,
    pub critical_points: CriticalPoints,
    /// Monotonicity threshold on the dependent probability for the branch.
    pub condition_threshold: f64,
    /// Whether the returned point satisfies that threshold.
    pub condition_holds: bool,
    /// Channel of the valuable state too poor for any interior optimum.
    pub remark3: bool,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub pa0_star: f64,
    pub pa1_star: f64,
    pub value: f64,
    pub case_taken: CaseTaken,
    pub diagnostics: Diagnostics,
}

impl OptimizeResult {
    pub fn policy(&self) -> RsPolicy {
        RsPolicy::new(self.pa0_star, self.pa1_star).expect("optimizer returns probabilities")
    }
}

/// Average actuation-error cost as a function of the sampling probabilities.
pub fn objective(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights, pa0: f64, pa1: f64) -> Result<f64> {
    actuation_error_cost_rs(src, ch, &RsPolicy::new(pa0, pa1)?, cw)
}

/// Thresholds above which the cost decreases in `pa0` (a bound on `pa1`) and
/// in `pa1` (a bound on `pa0`).
pub fn monotonicity_conditions(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights) -> (f64, f64) {
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let (c01, c10) = (cw.c01(), cw.c10());
    let cond1 = (p * c10 - q * c01) / (s1 * (p * c10 + (1.0 - q) * c01));
    let cond2 = (q * c01 - p * c10) / (s0 * (q * c01 + (1.0 - p) * c10));
    (cond1, cond2)
}

/// Cost along the budget line in terms of `pa0` (valid while `pa1 <= 1`).
pub fn case1_ratio(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights, eta: f64) -> QuadraticRatio {
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let (c01, c10) = (cw.c01(), cw.c10());
    let pq = p + q;
    QuadraticRatio {
        a1: p * q * q * s0 * s1 * (c01 + c10),
        a2: p * q * (c10 * p * s0 * (1.0 - eta * s1) - q * c01 * s1 - q * eta * c10 * s0 * s1 - eta * pq * c01 * s0 * s1),
        a3: p * q * pq * eta * c01 * s1,
        b1: pq * (p * q * s0 * s1 - q * (1.0 - q) * s0 * s1),
        b2: pq * (p * q * s0 - p * q * s1 - eta * p * pq * s0 * s1 + eta * (1.0 - q) * pq * s0 * s1),
        b3: eta * p * s1 * pq * pq,
    }
}

/// Cost along the budget line in terms of `pa1` (valid while `pa0 <= 1`).
pub fn case2_ratio(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights, eta: f64) -> QuadraticRatio {
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let (c01, c10) = (cw.c01(), cw.c10());
    let pq = p + q;
    QuadraticRatio {
        a1: -p * p * q * s0 * s1 * (c01 + c10),
        a2: p * q
            * (c01 * eta * p * s0 * s1 + c01 * eta * q * s0 * s1 - c01 * q * s1
                + c10 * eta * p * s0 * s1
                + c10 * eta * q * s0 * s1
                + c10 * p * s0),
        a3: -c10 * eta * p * q * s0 * pq,
        b1: -p * s0 * s1 * pq * (pq - 1.0),
        b2: pq
            * (eta * p * p * s0 * s1 + 2.0 * eta * p * q * s0 * s1 - eta * p * s0 * s1 + eta * q * q * s0 * s1
                - eta * q * s0 * s1
                + p * q * s0
                - p * q * s1),
        b3: -eta * q * s0 * pq * pq,
    }
}

struct Branch {
    case1: bool,
    interval: (f64, f64),
    ratio: QuadraticRatio,
    corner: (f64, f64),
    threshold: f64,
    remark3: bool,
}

impl Branch {
    fn point(&self, x: f64, src: &SourceParams, b: f64) -> (f64, f64) {
        let (p, q) = (src.p(), src.q());
        if self.case1 {
            (x, ((b - q * x) / p).clamp(0.0, 1.0))
        } else {
            (((b - p * x) / q).clamp(0.0, 1.0), x)
        }
    }

    fn tags(&self) -> (CaseTaken, CaseTaken, CaseTaken) {
        if self.case1 {
            (CaseTaken::Case1Interior, CaseTaken::Case1Boundary, CaseTaken::Case1Remark3)
        } else {
            (CaseTaken::Case2Interior, CaseTaken::Case2Boundary, CaseTaken::Case2Corner)
        }
    }

    /// Monotonicity condition on the dependent probability of the point.
    fn condition_holds(&self, pa0: f64, pa1: f64) -> bool {
        if self.case1 { pa1 > self.threshold } else { pa0 > self.threshold }
    }
}

pub fn optimize_constrained(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights, eta: f64) -> Result<OptimizeResult> {
    let constraint = ConstraintParams::new(eta)?;
    if constraint.eta() == 0.0 {
        return Err(Error::InfeasibleTracking { eta });
    }
    let eta_eff = constraint.effective_eta();
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let (c01, c10) = (cw.c01(), cw.c10());
    let b = eta_eff * (p + q);
    let (cond1, cond2) = monotonicity_conditions(src, ch, cw);

    let branch = if p * c10 >= q * c01 {
        Branch {
            case1: true,
            interval: (((b - p) / q).clamp(0.0, 1.0), (b / q).min(1.0)),
            ratio: case1_ratio(src, ch, cw, eta_eff),
            corner: (0.0, (b / p).min(1.0)),
            threshold: cond1,
            remark3: s1 < (p * c10 - q * c01) / (p * c10 + (1.0 - q) * c01),
        }
    } else {
        Branch {
            case1: false,
            interval: (((b - q) / p).clamp(0.0, 1.0), (b / p).min(1.0)),
            ratio: case2_ratio(src, ch, cw, eta_eff),
            corner: ((b / q).min(1.0), 0.0),
            threshold: cond2,
            remark3: s0 < (q * c01 - p * c10) / (q * c01 + (1.0 - p) * c10),
        }
    };

    let (lb, ub) = branch.interval;
    let critical_points = branch.ratio.critical_points();
    let mut raw: Vec<((f64, f64), CandidateKind)> = vec![
        (branch.point(lb, src, b), CandidateKind::LowerEndpoint),
        (branch.point(ub, src, b), CandidateKind::UpperEndpoint),
    ];
    for x in critical_points.roots() {
        if x.is_finite() && x >= lb - 1e-12 && x <= ub + 1e-12 {
            raw.push((branch.point(x.clamp(lb, ub), src, b), CandidateKind::CriticalPoint));
        }
    }
    raw.push((branch.corner, CandidateKind::Corner));
    for v in [
        (1.0, 1.0),
        (1.0, 0.0),
        (0.0, 1.0),
        ((b / q).min(1.0), 0.0),
        (0.0, (b / p).min(1.0)),
    ] {
        if constraint.feasible(src, v.0, v.1) {
            raw.push((v, CandidateKind::Vertex));
        }
    }

    let mut candidates = Vec::with_capacity(raw.len());
    for ((pa0, pa1), kind) in raw {
        match objective(src, ch, cw, pa0, pa1) {
            Ok(value) => candidates.push(Candidate { pa0, pa1, value, kind }),
            Err(Error::DegeneratePolicy(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let mut best = *candidates
        .first()
        .ok_or_else(|| Error::DegeneratePolicy("no candidate point keeps the chain irreducible".into()))?;
    for c in &candidates[1..] {
        if preferred((c.value, c.pa0, c.pa1), (best.value, best.pa0, best.pa1)) {
            best = *c;
        }
    }
    // The corner is the stated answer whenever it ties with the best point.
    if branch.remark3 {
        if let Some(corner) = candidates.iter().find(|c| c.kind == CandidateKind::Corner) {
            if corner.value <= best.value + TIE_TOLERANCE {
                best = *corner;
            }
        }
    }

    let (interior, boundary, corner_tag) = branch.tags();
    let is_corner = (best.pa0, best.pa1) == branch.corner;
    let case_taken = if is_corner {
        corner_tag
    } else if best.kind == CandidateKind::CriticalPoint && best_is_inside(&branch, &best) {
        interior
    } else {
        boundary
    };

    Ok(OptimizeResult {
        pa0_star: best.pa0,
        pa1_star: best.pa1,
        value: best.value,
        case_taken,
        diagnostics: Diagnostics {
            eta_effective: eta_eff,
            case1: branch.case1,
            interval: branch.interval,
            ratio: branch.ratio,
            critical_points,
            condition_threshold: branch.threshold,
            condition_holds: branch.condition_holds(best.pa0, best.pa1),
            remark3: branch.remark3,
            candidates,
        },
    })
}

fn best_is_inside(branch: &Branch, c: &Candidate) -> bool {
    let x = if branch.case1 { c.pa0 } else { c.pa1 };
    x > branch.interval.0 && x < branch.interval.1
}

/// Optimum with a slack budget.
pub fn optimize_unconstrained(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights) -> Result<OptimizeResult> {
    optimize_constrained(src, ch, cw, 1.0)
}

/// Minimum reconstruction error under the budget (unit costs).
pub fn minimize_pe_constrained(src: &SourceParams, ch: &ChannelParams, eta: f64) -> Result<OptimizeResult> {
    optimize_constrained(src, ch, &CostWeights::unit(), eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::actuation_error_cost;
    use crate::model::stationary_rs;

    fn sys(p: f64, q: f64, ps0: f64, ps1: f64) -> (SourceParams, ChannelParams) {
        (SourceParams::new(p, q).unwrap(), ChannelParams::new(ps0, ps1).unwrap())
    }

    fn costs() -> CostWeights {
        CostWeights::new(1.0, 2.0).unwrap()
    }

    fn close(r: &OptimizeResult, pa0: f64, pa1: f64, v: f64) {
        assert!(
            (r.pa0_star - pa0).abs() <= 1e-3 && (r.pa1_star - pa1).abs() <= 1e-3 && (r.value - v).abs() <= 1e-3,
            "got ({}, {}, {}) want ({pa0}, {pa1}, {v})",
            r.pa0_star,
            r.pa1_star,
            r.value
        );
    }

    #[test]
    fn objective_matches_stationary_route() {
        let (s, c) = sys(0.42, 0.17, 0.35, 0.9);
        let cw = costs();
        let a = RsPolicy::new(0.3, 0.8).unwrap();
        let direct = objective(&s, &c, &cw, 0.3, 0.8).unwrap();
        let via = actuation_error_cost(&stationary_rs(&s, &c, &a).unwrap(), &cw);
        assert!((direct - via).abs() < 1e-12);
    }

    #[test]
    fn condition_thresholds() {
        let (s, c) = sys(0.3, 0.1, 0.2, 0.3);
        let (cond1, _) = monotonicity_conditions(&s, &c, &costs());
        assert!((cond1 - 0.5 / (0.3 * 1.5)).abs() < 1e-12);
        let (s, c) = sys(0.2, 0.4, 0.5, 0.5);
        let (cond1, cond2) = monotonicity_conditions(&s, &c, &costs());
        assert_eq!(cond1, 0.0);
        assert_eq!(cond2, 0.0);
    }

    #[test]
    fn ratios_follow_the_budget_line() {
        let (s, c) = sys(0.37, 0.21, 0.44, 0.71);
        let cw = CostWeights::new(1.3, 0.8).unwrap();
        let eta = 0.6;
        let b = eta * 0.58;
        let r1 = case1_ratio(&s, &c, &cw, eta);
        let x = 0.5;
        let direct = objective(&s, &c, &cw, x, (b - 0.21 * x) / 0.37).unwrap();
        assert!((r1.eval(x) - direct).abs() < 1e-12);
        let r2 = case2_ratio(&s, &c, &cw, eta);
        let y = 0.4;
        let direct = objective(&s, &c, &cw, (b - 0.37 * y) / 0.21, y).unwrap();
        assert!((r2.eval(y) - direct).abs() < 1e-12);
    }

    #[test]
    fn rsc_low_success_rows() {
        let (s, c) = sys(0.1, 0.01, 0.2, 0.3);
        let r = optimize_constrained(&s, &c, &costs(), 0.5).unwrap();
        close(&r, 0.083, 0.542, 0.091);
        assert_eq!(r.case_taken, CaseTaken::Case1Interior);
        let (s, c) = sys(0.7, 0.8, 0.2, 0.3);
        close(&optimize_constrained(&s, &c, &costs(), 0.5).unwrap(), 0.0, 1.0, 0.533);
    }

    #[test]
    fn rsc_high_success_row() {
        let (s, c) = sys(0.1, 0.01, 0.6, 0.6);
        close(&optimize_constrained(&s, &c, &costs(), 0.5).unwrap(), 0.730, 0.477, 0.049);
    }

    #[test]
    fn remark3_corner() {
        let (s, c) = sys(0.3, 0.1, 0.2, 0.3);
        let r = optimize_constrained(&s, &c, &costs(), 0.5).unwrap();
        assert!(r.diagnostics.remark3);
        assert_eq!(r.case_taken, CaseTaken::Case1Remark3);
        close(&r, 0.0, 0.667, 0.25);
    }

    #[test]
    fn unconstrained_rows() {
        let (s, c) = sys(0.1, 0.01, 0.2, 0.3);
        close(&optimize_unconstrained(&s, &c, &costs()).unwrap(), 1.0, 1.0, 0.055);
        let (s, c) = sys(0.3, 0.1, 0.2, 0.3);
        close(&optimize_unconstrained(&s, &c, &costs()).unwrap(), 0.0, 1.0, 0.25);
    }

    #[test]
    fn reconstruction_rows() {
        let (s, c) = sys(0.2, 0.4, 0.5, 0.6);
        close(&minimize_pe_constrained(&s, &c, 0.5).unwrap(), 0.556, 0.387, 0.277);
        close(&minimize_pe_constrained(&s, &c, 0.9).unwrap(), 0.889, 0.922, 0.174);
        let (s, c) = sys(0.6, 0.7, 0.5, 0.6);
        close(&minimize_pe_constrained(&s, &c, 0.1).unwrap(), 0.184, 0.002, 0.461);
    }

    #[test]
    fn zero_budget_is_infeasible() {
        let (s, c) = sys(0.3, 0.1, 0.2, 0.3);
        assert!(matches!(
            optimize_constrained(&s, &c, &costs(), 0.0),
            Err(Error::InfeasibleTracking { .. })
        ));
        assert!(matches!(
            optimize_constrained(&s, &c, &costs(), -0.1),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn result_is_feasible_and_consistent() {
        let (s, c) = sys(0.5, 0.4, 0.6, 0.6);
        let r = optimize_constrained(&s, &c, &costs(), 0.5).unwrap();
        assert!(0.4 * r.pa0_star + 0.5 * r.pa1_star <= 0.5 * 0.9 + 1e-12);
        assert!((r.value - objective(&s, &c, &costs(), r.pa0_star, r.pa1_star).unwrap()).abs() < 1e-12);
    }
}
