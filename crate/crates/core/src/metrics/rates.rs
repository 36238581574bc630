//! Long-run fraction of slots in which each policy takes a sample.

use crate::error::Result;
use crate::model::{ChannelParams, SourceParams, stationary_semantics};

/// Randomized policy: `(q pa0 + p pa1) / (p + q)`.
pub fn sampling_rate_rs(src: &SourceParams, pa0: f64, pa1: f64) -> f64 {
    let (p, q) = (src.p(), src.q());
    (q * pa0 + p * pa1) / (p + q)
}

/// Change-aware policy: probability that the source changes state in a slot,
/// `2pq / (p + q)`.
pub fn sampling_rate_change_aware(src: &SourceParams) -> f64 {
    let (p, q) = (src.p(), src.q());
    2.0 * p * q / (p + q)
}

/// Semantics-aware policy: probability that the new source state differs
/// from the previous reconstruction, averaged over the stationary joint
/// state at the end of the previous slot.
pub fn sampling_rate_semantics(src: &SourceParams, ch: &ChannelParams) -> Result<f64> {
    let st = stationary_semantics(src, ch)?;
    let (p, q) = (src.p(), src.q());
    Ok(st.pi00 * p + st.pi01 * (1.0 - p) + st.pi10 * (1.0 - q) + st.pi11 * q)
}

/// Uniform policy with period `d`.
pub fn sampling_rate_uniform(d: u32) -> f64 {
    1.0 / f64::from(d)
}
