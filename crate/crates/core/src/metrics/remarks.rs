//! Closed-form comparison and monotonicity predicates for the randomized
//! policy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, CostWeights, EffectiveRates, RsPolicy, SourceParams};

/// Region of `(pa0, pa1)` in which the randomized policy has no larger
/// actuation cost than the semantics-aware policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsVsSemantics {
    t1_num: f64,
    t1_den: f64,
    t2_coef: f64,
}

impl RsVsSemantics {
    pub fn new(src: &SourceParams, ch: &ChannelParams, cw: &CostWeights) -> Result<Self> {
        let (p, q) = (src.p(), src.q());
        let (s0, s1) = (ch.ps0(), ch.ps1());
        let (c01, c10) = (cw.c01(), cw.c10());
        let t1_num = p * c10 + c10 * s0 - p * c10 * s0 - q * c01 * (1.0 - s0);
        let t1_den = c10 * (1.0 - p) * s0 + p * c10 * s1 + c01 * (1.0 - q) * s1 + q * c01 * s0;
        if t1_den == 0.0 {
            return Err(Error::DivisionByZero("T1 denominator"));
        }
        let t2_coef = c01 * (q + (1.0 - q) * s1) - p * c10 * (1.0 - s1);
        Ok(Self {
            t1_num,
            t1_den,
            t2_coef,
        })
    }

    /// Threshold on `pa1`.
    pub fn t1(&self) -> f64 {
        self.t1_num / self.t1_den
    }

    /// Threshold on `pa0` for a given `pa1`.
    pub fn t2(&self, pa1: f64) -> Result<f64> {
        let den = pa1 * self.t1_den - self.t1_num;
        if den == 0.0 {
            return Err(Error::DivisionByZero("T2 denominator"));
        }
        Ok(pa1 * self.t2_coef / den)
    }

    /// Whether `(pa0, pa1)` satisfies the sufficient condition.
    pub fn rs_beats_semantics(&self, pol: &RsPolicy) -> Result<bool> {
        let (pa0, pa1) = (pol.pa0(), pol.pa1());
        let t1 = self.t1();
        let t2 = self.t2(pa1)?;
        let upper = t1.max(0.0) <= pa1 && pa1 <= 1.0 && t2.max(0.0) <= pa0 && pa0 <= 1.0;
        let lower = 0.0 <= pa1 && pa1 <= t1.min(0.0) && 0.0 <= pa0 && pa0 <= t2.min(0.0);
        Ok(upper || lower)
    }
}

/// Sufficient condition for the error rate and cost to decrease in one
/// source parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneRegion {
    /// Lower bound on the sampling probability of the relevant state; `None`
    /// when its denominator is not positive.
    pub pa_lower_bound: Option<f64>,
    pub pa_condition_holds: bool,
    /// Threshold on the source parameter; `None` when undefined.
    pub threshold: Option<f64>,
    pub threshold_condition_holds: bool,
    /// Some parameter value in `(0, 1)` satisfies both conditions.
    pub feasible: bool,
}

impl MonotoneRegion {
    pub fn decreasing(&self) -> bool {
        self.pa_condition_holds && self.threshold_condition_holds
    }

    fn build(lb_num: f64, lb_den: f64, pa: f64, radicand: Option<f64>, x: f64) -> Self {
        let pa_lower_bound = (lb_den > 0.0).then(|| lb_num / lb_den);
        let threshold = radicand.filter(|r| r.is_finite() && *r >= 0.0).map(f64::sqrt);
        let pa_condition_holds = pa_lower_bound.is_some_and(|lb| lb <= pa && pa <= 1.0);
        let threshold_condition_holds = threshold.is_some_and(|t| t < x && x <= 1.0);
        let feasible = pa_lower_bound.is_some_and(|lb| lb <= 1.0) && threshold.is_some_and(|t| t < 1.0);
        Self {
            pa_lower_bound,
            pa_condition_holds,
            threshold,
            threshold_condition_holds,
            feasible,
        }
    }
}

/// Monotonicity conditions in `p` and in `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneRegions {
    pub in_p: MonotoneRegion,
    pub in_q: MonotoneRegion,
}

pub fn monotone_regions(src: &SourceParams, ch: &ChannelParams, pol: &RsPolicy) -> MonotoneRegions {
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let EffectiveRates { e0, e1 } = EffectiveRates::new(ch, pol);

    let rad_p = {
        let den = e1 * (1.0 - e0);
        (den > 0.0).then(|| q * e0 * (q + (1.0 - q) * e1) / den)
    };
    let in_p = MonotoneRegion::build(q * q * e0, s1 * (1.0 - e0 * (1.0 + q * (1.0 - q))), pol.pa1(), rad_p, p);

    let rad_q = {
        let den = e0 * (1.0 - e1);
        (den > 0.0).then(|| (p * e0 * e1 + p * p * e1 * (1.0 - e0)) / den)
    };
    let in_q = MonotoneRegion::build(p * p * e1, s0 * (1.0 - e1 * (1.0 + p * (1.0 - p))), pol.pa0(), rad_q, q);

    MonotoneRegions { in_p, in_q }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_threshold() {
        let src = SourceParams::new(0.5, 0.5).unwrap();
        let ch = ChannelParams::new(0.5, 0.5).unwrap();
        let r = RsVsSemantics::new(&src, &ch, &CostWeights::unit()).unwrap();
        assert!((r.t1() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn full_sampling_matches_semantics() {
        // At pa = (1, 1) both policies coincide, so the region must contain it
        // whenever T1 and T2 are at most one.
        let src = SourceParams::new(0.3, 0.4).unwrap();
        let ch = ChannelParams::new(0.6, 0.7).unwrap();
        let r = RsVsSemantics::new(&src, &ch, &CostWeights::new(1.0, 2.0).unwrap()).unwrap();
        let t2 = r.t2(1.0).unwrap();
        assert!(r.t1() <= 1.0 && t2 <= 1.0, "{} {t2}", r.t1());
        assert!(r.rs_beats_semantics(&RsPolicy::new(1.0, 1.0).unwrap()).unwrap());
    }

    #[test]
    fn monotone_region_flags() {
        let src = SourceParams::new(0.9, 0.1).unwrap();
        let ch = ChannelParams::new(0.9, 0.9).unwrap();
        let m = monotone_regions(&src, &ch, &RsPolicy::new(0.5, 1.0).unwrap());
        assert!(m.in_p.pa_lower_bound.is_some());
        assert!(m.in_p.threshold.is_some());
        assert_eq!(m.in_p.decreasing(), m.in_p.pa_condition_holds && m.in_p.threshold_condition_holds);
    }
}
