use std::collections::BTreeMap;

use serde::Serialize;

use super::consecutive::ConsecErrorSpec;
use super::error_rate::{actuation_error_cost, reconstruction_error_rate};
use crate::error::{Error, Result};
use crate::model::CostWeights;

/// Every stationary metric of one randomized-policy configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub pe: f64,
    pub cost: f64,
    pub cbar_e: f64,
    /// `None` when the mean importance-aware run length is undefined
    /// (`pa0 = 0` or `pa1 = 0`).
    pub cbar_s: Option<f64>,
    pub violation: BTreeMap<u64, f64>,
}

pub fn analyze(spec: &ConsecErrorSpec, cw: &CostWeights, ns: &[u64]) -> Result<MetricReport> {
    let st = spec.stationary();
    let cbar_s = match spec.avg_importance_consec() {
        Ok(v) => Some(v),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(MetricReport {
        pe: reconstruction_error_rate(st),
        cost: actuation_error_cost(st, cw),
        cbar_e: spec.avg_consecutive_error()?,
        cbar_s,
        violation: ns.iter().map(|&n| (n, spec.violation_probability(n))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChannelParams, RsPolicy, SourceParams};

    #[test]
    fn report_invariants() {
        let spec = ConsecErrorSpec::new(
            SourceParams::new(0.3, 0.2).unwrap(),
            ChannelParams::new(0.2, 0.3).unwrap(),
            RsPolicy::new(0.0, 1.0).unwrap(),
        )
        .unwrap();
        let cw = CostWeights::new(1.0, 2.0).unwrap();
        let r = analyze(&spec, &cw, &[0, 1, 2, 5, 10]).unwrap();
        assert_eq!(r.cbar_s, None);
        assert!((r.violation[&0] - r.pe).abs() < 1e-12);
        let v: Vec<f64> = r.violation.values().copied().collect();
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.cost <= 2.0);
    }
}
