use crate::error::Result;
use crate::model::{ChannelParams, CostWeights, EffectiveRates, JointStationary, RsPolicy, SourceParams, phi};

/// Fraction of slots in which the reconstruction is wrong, `π01 + π10`.
pub fn reconstruction_error_rate(st: &JointStationary) -> f64 {
    st.pi01 + st.pi10
}

/// Average cost of actuation error, `c01 π01 + c10 π10`.
pub fn actuation_error_cost(st: &JointStationary, cw: &CostWeights) -> f64 {
    cw.c01() * st.pi01 + cw.c10() * st.pi10
}

/// Reconstruction error of the randomized policy written directly in the
/// sampling parameters, without forming the stationary distribution.
pub fn reconstruction_error_rate_rs(src: &SourceParams, ch: &ChannelParams, pol: &RsPolicy) -> Result<f64> {
    actuation_error_cost_rs(src, ch, pol, &CostWeights::unit())
}

/// Actuation-error cost of the randomized policy as the ratio
/// `pq Ψ / ((p + q) Φ)`.
pub fn actuation_error_cost_rs(
    src: &SourceParams,
    ch: &ChannelParams,
    pol: &RsPolicy,
    cw: &CostWeights,
) -> Result<f64> {
    let rates = EffectiveRates::new(ch, pol);
    let phi = phi(src, rates);
    if phi <= 0.0 {
        return Err(crate::Error::DegeneratePolicy(
            "both effective sampling rates are zero".into(),
        ));
    }
    let (p, q) = (src.p(), src.q());
    Ok(p * q * psi(rates, cw) / ((p + q) * phi))
}

/// `Ψ = c01 e1 (1 - e0) + c10 e0 (1 - e1)`.
pub(crate) fn psi(rates: EffectiveRates, cw: &CostWeights) -> f64 {
    let EffectiveRates { e0, e1 } = rates;
    cw.c01() * e1 * (1.0 - e0) + cw.c10() * e0 * (1.0 - e1)
}
