//! Stationary distribution of the joint `(X, X̂)` chain for each policy.
//!
//! The closed forms below are the analytical route; [`stationary_numeric`]
//! solves the balance equations of the explicitly built chain and serves as
//! the independent check.

use serde::Serialize;

use super::chain::{JointChain, build_joint_chain_change_aware, build_joint_chain_rs, build_joint_chain_semantics};
use super::params::{ChannelParams, EffectiveRates, RsPolicy, SourceParams};
use crate::error::{Error, Result};

/// Stationary probabilities `pi[i][j] = Pr[X = i, X̂ = j]` of the two-state
/// joint chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointStationary {
    pub pi00: f64,
    pub pi01: f64,
    pub pi10: f64,
    pub pi11: f64,
}

impl JointStationary {
    /// Validates nonnegativity and normalization (within 1e-12).
    pub fn new(pi00: f64, pi01: f64, pi10: f64, pi11: f64) -> Result<Self> {
        let st = Self {
            pi00,
            pi01,
            pi10,
            pi11,
        };
        for (name, v) in [("pi00", pi00), ("pi01", pi01), ("pi10", pi10), ("pi11", pi11)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, v, "stationary mass must be finite and nonnegative"));
            }
        }
        let s = st.sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("pi", s, "stationary masses must sum to 1"));
        }
        Ok(st)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.pi00,
            (0, 1) => self.pi01,
            (1, 0) => self.pi10,
            (1, 1) => self.pi11,
            _ => panic!("joint state ({i}, {j}) out of range"),
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.pi00, self.pi01, self.pi10, self.pi11]
    }

    pub fn sum(&self) -> f64 {
        self.pi00 + self.pi01 + self.pi10 + self.pi11
    }

    /// Distribution seen after relabelling the source states.
    pub fn swapped(&self) -> Self {
        Self {
            pi00: self.pi11,
            pi01: self.pi10,
            pi10: self.pi01,
            pi11: self.pi00,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `Φ(pa0, pa1) = p e1 (1 - e0) + e0 (q + (1 - q) e1)` with `e_i = pa_i ps_i`.
pub fn phi(src: &SourceParams, rates: EffectiveRates) -> f64 {
    let (p, q) = (src.p(), src.q());
    let EffectiveRates { e0, e1 } = rates;
    p * e1 * (1.0 - e0) + e0 * (q + (1.0 - q) * e1)
}

/// Closed-form stationary distribution under the randomized policy.
pub fn stationary_rs(src: &SourceParams, ch: &ChannelParams, pol: &RsPolicy) -> Result<JointStationary> {
    let rates = EffectiveRates::new(ch, pol);
    stationary_from_rates(src, rates)
}

pub(crate) fn stationary_from_rates(src: &SourceParams, rates: EffectiveRates) -> Result<JointStationary> {
    let (p, q) = (src.p(), src.q());
    let EffectiveRates { e0, e1 } = rates;
    let phi = phi(src, rates);
    if phi <= 0.0 {
        return Err(Error::DegeneratePolicy(format!(
            "both effective sampling rates are zero (pa0*ps0 = {e0}, pa1*ps1 = {e1})"
        )));
    }
    let den = (p + q) * phi;
    Ok(JointStationary {
        pi00: q * e0 * (q + (1.0 - q) * e1) / den,
        pi01: p * q * e1 * (1.0 - e0) / den,
        pi10: p * q * e0 * (1.0 - e1) / den,
        pi11: p * e1 * (p + (1.0 - p) * e0) / den,
    })
}

/// Closed-form stationary distribution under the change-aware policy. The
/// policy has no free sampling parameter.
pub fn stationary_change_aware(src: &SourceParams, ch: &ChannelParams) -> Result<JointStationary> {
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let norm = s0 + s1 - s0 * s1;
    if norm <= 0.0 {
        return Err(Error::DegeneratePolicy("both success probabilities are zero".into()));
    }
    let den = (p + q) * norm;
    Ok(JointStationary {
        pi00: q * s0 / den,
        pi01: q * s1 * (1.0 - s0) / den,
        pi10: p * s0 * (1.0 - s1) / den,
        pi11: p * s1 / den,
    })
}

/// Closed-form stationary distribution under the semantics-aware policy.
pub fn stationary_semantics(src: &SourceParams, ch: &ChannelParams) -> Result<JointStationary> {
    let (p, q) = (src.p(), src.q());
    let (s0, s1) = (ch.ps0(), ch.ps1());
    let norm = q * s0 + (1.0 - q) * s0 * s1 + p * s1 * (1.0 - s0);
    if norm <= 0.0 {
        return Err(Error::DegeneratePolicy("both success probabilities are zero".into()));
    }
    let den = (p + q) * norm;
    Ok(JointStationary {
        pi00: q * s0 * (q + (1.0 - q) * s1) / den,
        pi01: p * q * s1 * (1.0 - s0) / den,
        pi10: p * q * s0 * (1.0 - s1) / den,
        pi11: p * s1 * (p + (1.0 - p) * s0) / den,
    })
}

/// Numeric stationary distribution of a four-state joint chain.
pub fn stationary_numeric(chain: &JointChain) -> Result<JointStationary> {
    if chain.n_source() != 2 {
        return Err(Error::Domain(format!(
            "expected a two-state source chain, got {} source states",
            chain.n_source()
        )));
    }
    let pi = chain.solve_stationary()?;
    JointStationary::new(pi[0], pi[1], pi[2], pi[3])
}

/// Numeric counterpart of [`stationary_rs`]; names the offending parameters
/// when the chain is reducible.
pub fn stationary_rs_numeric(src: &SourceParams, ch: &ChannelParams, pol: &RsPolicy) -> Result<JointStationary> {
    stationary_numeric(&build_joint_chain_rs(src, ch, pol)).map_err(|e| match e {
        Error::ReducibleChain(msg) => Error::ReducibleChain(format!(
            "{msg} (p = {}, q = {}, pa0*ps0 = {}, pa1*ps1 = {})",
            src.p(),
            src.q(),
            pol.pa0() * ch.ps0(),
            pol.pa1() * ch.ps1()
        )),
        other => other,
    })
}

pub fn stationary_change_aware_numeric(src: &SourceParams, ch: &ChannelParams) -> Result<JointStationary> {
    stationary_numeric(&build_joint_chain_change_aware(src, ch))
}

pub fn stationary_semantics_numeric(src: &SourceParams, ch: &ChannelParams) -> Result<JointStationary> {
    stationary_numeric(&build_joint_chain_semantics(src, ch))
}
