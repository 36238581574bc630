//! Consecutive-error statistics: the length `C_E(t)` of the current run of
//! erroneous slots, and its restriction `C_S(t)` to the `(X, X̂) = (1, 0)`
//! error.
//!
//! A run that starts from sync state `(0,0)` stays in `(1,0)` with
//! probability `(1-q)(1-e1)` per slot, and one starting from `(1,1)` stays in
//! `(0,1)` with probability `(1-p)(1-e0)`. All distributions below are
//! geometric mixtures of these two.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, EffectiveRates, JointStationary, RsPolicy, SourceParams, phi, stationary_rs};

/// Parameters plus the stationary distribution they induce under the
/// randomized policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsecErrorSpec {
    source: SourceParams,
    channel: ChannelParams,
    policy: RsPolicy,
    stationary: JointStationary,
}

pub(crate) fn pow_u(x: f64, n: u64) -> f64 {
    match i32::try_from(n) {
        Ok(k) => x.powi(k),
        Err(_) => x.powf(n as f64),
    }
}

impl ConsecErrorSpec {
    pub fn new(source: SourceParams, channel: ChannelParams, policy: RsPolicy) -> Result<Self> {
        let stationary = stationary_rs(&source, &channel, &policy)?;
        Ok(Self {
            source,
            channel,
            policy,
            stationary,
        })
    }

    pub fn source(&self) -> &SourceParams {
        &self.source
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }

    pub fn policy(&self) -> &RsPolicy {
        &self.policy
    }

    pub fn stationary(&self) -> &JointStationary {
        &self.stationary
    }

    /// The same system with the two source states relabelled. Importance
    /// metrics of the mirror describe the `(0, 1)` error of the original.
    pub fn mirrored(&self) -> Self {
        Self {
            source: self.source.swapped(),
            channel: self.channel.swapped(),
            policy: self.policy.swapped(),
            stationary: self.stationary.swapped(),
        }
    }

    fn rates(&self) -> EffectiveRates {
        EffectiveRates::new(&self.channel, &self.policy)
    }

    /// Per-slot probabilities of staying in `(1,0)` and in `(0,1)`.
    fn stay_probs(&self) -> (f64, f64) {
        let EffectiveRates { e0, e1 } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        ((1.0 - q) * (1.0 - e1), (1.0 - p) * (1.0 - e0))
    }

    fn check_convergence(&self) -> Result<()> {
        let (stay10, stay01) = self.stay_probs();
        if !(stay01.abs() < 1.0) {
            return Err(Error::Convergence(format!(
                "|(1-p)(1-pa0*ps0)| = {} is not below 1",
                stay01.abs()
            )));
        }
        if !(stay10.abs() < 1.0) {
            return Err(Error::Convergence(format!(
                "|(1-q)(1-pa1*ps1)| = {} is not below 1",
                stay10.abs()
            )));
        }
        Ok(())
    }

    /// `Pr[C_E = i]`.
    pub fn consec_error_pmf(&self, i: u64) -> f64 {
        let st = &self.stationary;
        if i == 0 {
            return st.pi00 + st.pi11;
        }
        let EffectiveRates { e0, e1 } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        p * pow_u(1.0 - q, i - 1) * pow_u(1.0 - e1, i) * st.pi00
            + q * pow_u(1.0 - p, i - 1) * pow_u(1.0 - e0, i) * st.pi11
    }

    /// `P_{i,i+1} = Pr[C_E(t+1) = i+1 | C_E(t) = i]`, in its explicit form.
    pub fn consec_transition_prob(&self, i: u64) -> Result<f64> {
        let st = &self.stationary;
        let EffectiveRates { e0, e1 } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        let (num, den) = if i == 0 {
            (
                p * (1.0 - e1) * st.pi00 + q * (1.0 - e0) * st.pi11,
                st.pi00 + st.pi11,
            )
        } else {
            (
                p * pow_u(1.0 - q, i) * pow_u(1.0 - e1, i + 1) * st.pi00
                    + q * pow_u(1.0 - p, i) * pow_u(1.0 - e0, i + 1) * st.pi11,
                p * pow_u(1.0 - q, i - 1) * pow_u(1.0 - e1, i) * st.pi00
                    + q * pow_u(1.0 - p, i - 1) * pow_u(1.0 - e0, i) * st.pi11,
            )
        };
        if den == 0.0 {
            return Err(Error::UndefinedConditional { i });
        }
        Ok(num / den)
    }

    /// `P_{i,0} = 1 - P_{i,i+1}`: the run ends in the next slot.
    pub fn consec_reset_prob(&self, i: u64) -> Result<f64> {
        Ok(1.0 - self.consec_transition_prob(i)?)
    }

    /// Mean of `C_E` (zero-length sync slots included).
    pub fn avg_consecutive_error(&self) -> Result<f64> {
        self.check_convergence()?;
        let EffectiveRates { e0, e1 } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        let st = &self.stationary;
        let a = q + (1.0 - q) * e1;
        let b = p + (1.0 - p) * e0;
        Ok(p * (1.0 - e1) * st.pi00 / (a * a) + q * (1.0 - e0) * st.pi11 / (b * b))
    }

    /// `Pr[C_E > n]`: probability of being more than `n` slots into an
    /// error run.
    pub fn violation_probability(&self, n: u64) -> f64 {
        let EffectiveRates { e0, e1 } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        let (stay10, stay01) = self.stay_probs();
        let den = (p + q) * phi(&self.source, self.rates());
        p * q * e0 * pow_u(stay10, n + 1) / ((1.0 - q) * den) + p * q * e1 * pow_u(stay01, n + 1) / ((1.0 - p) * den)
    }

    /// `Pr[C_S = i]` for the `(X, X̂) = (1, 0)` error.
    pub fn importance_pmf(&self, i: u64) -> f64 {
        let st = &self.stationary;
        if i == 0 {
            return 1.0 - st.pi10;
        }
        let EffectiveRates { e1, .. } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        p * pow_u(1.0 - q, i - 1) * pow_u(1.0 - e1, i) * st.pi00
    }

    /// `P^S_{i,i+1}`; constant for `i >= 1`.
    pub fn importance_transition(&self, i: u64) -> Result<f64> {
        let EffectiveRates { e1, .. } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        if i == 0 {
            let den = 1.0 - self.stationary.pi10;
            if den == 0.0 {
                return Err(Error::UndefinedConditional { i });
            }
            Ok(p * (1.0 - e1) * self.stationary.pi00 / den)
        } else {
            Ok((1.0 - q) * (1.0 - e1))
        }
    }

    /// `P^S_{i,0} = 1 - P^S_{i,i+1}`.
    pub fn importance_reset(&self, i: u64) -> Result<f64> {
        Ok(1.0 - self.importance_transition(i)?)
    }

    /// Mean of `C_S`. The formula is stated for nonzero `pa0` and `pa1`; as
    /// `pa0 -> 0` it tends to 0, but that limit is rejected here rather than
    /// extrapolated.
    pub fn avg_importance_consec(&self) -> Result<f64> {
        if self.policy.pa0() == 0.0 || self.policy.pa1() == 0.0 {
            return Err(Error::Domain(format!(
                "average importance-aware consecutive error needs pa0, pa1 != 0 (got {}, {})",
                self.policy.pa0(),
                self.policy.pa1()
            )));
        }
        let EffectiveRates { e0, e1 } = self.rates();
        let (p, q) = (self.source.p(), self.source.q());
        let phi = phi(&self.source, self.rates());
        Ok(p * q * e0 * (1.0 - e1) / ((p + q) * (q + (1.0 - q) * e1) * phi))
    }
}
