//! Parameter spaces of the source, channel, sampling policy and cost model.
//!
//! Every type validates at construction, so downstream code can assume the
//! invariants hold.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_open_unit(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, v, "must lie strictly inside (0, 1)"))
    }
}

fn check_half_open_unit(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, v, "must lie in (0, 1]"))
    }
}

fn check_closed_unit(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::invalid(name, v, "must lie in [0, 1]"))
    }
}

/// Two-state information source: `p` is the 0→1 and `q` the 1→0 transition
/// probability per slot.
///
/// Both must be strictly inside (0, 1); boundary values make the chain
/// absorbing or periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceParams {
    p: f64,
    q: f64,
}

impl SourceParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            p: check_open_unit("p", p)?,
            q: check_open_unit("q", q)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Stationary probability of each source state, `(q, p) / (p + q)`.
    pub fn marginal(&self) -> [f64; 2] {
        let s = self.p + self.q;
        [self.q / s, self.p / s]
    }

    /// One-step transition matrix, row = current state.
    pub fn transition(&self) -> [[f64; 2]; 2] {
        [[1.0 - self.p, self.p], [self.q, 1.0 - self.q]]
    }

    /// Same source with the labels of the two states exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
        }
    }
}

/// Three-state source: state 0 leaves to each other state with probability
/// `p`, state 2 with probability `q`, and the middle state moves up with `p`
/// and down with `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceParams3 {
    p: f64,
    q: f64,
}

impl SourceParams3 {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let p = check_open_unit("p", p)?;
        let q = check_open_unit("q", q)?;
        if 2.0 * p >= 1.0 {
            return Err(Error::invalid("p", p, "three-state source needs 2p < 1"));
        }
        if 2.0 * q >= 1.0 {
            return Err(Error::invalid("q", q, "three-state source needs 2q < 1"));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn transition(&self) -> [[f64; 3]; 3] {
        let (p, q) = (self.p, self.q);
        [
            [1.0 - 2.0 * p, p, p],
            [q, 1.0 - p - q, p],
            [q, q, 1.0 - 2.0 * q],
        ]
    }

    /// Stationary distribution of the source alone.
    pub fn marginal(&self) -> [f64; 3] {
        let (p, q) = (self.p, self.q);
        let m0 = q / (2.0 * p + q);
        let m2 = p / (p + 2.0 * q);
        [m0, 1.0 - m0 - m2, m2]
    }
}

/// Per-state success probabilities of the erasure channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    ps0: f64,
    ps1: f64,
}

impl ChannelParams {
    pub fn new(ps0: f64, ps1: f64) -> Result<Self> {
        Ok(Self {
            ps0: check_half_open_unit("ps0", ps0)?,
            ps1: check_half_open_unit("ps1", ps1)?,
        })
    }

    pub fn ps0(&self) -> f64 {
        self.ps0
    }

    pub fn ps1(&self) -> f64 {
        self.ps1
    }

    pub fn ps(&self, state: usize) -> f64 {
        [self.ps0, self.ps1][state]
    }

    pub fn swapped(&self) -> Self {
        Self {
            ps0: self.ps1,
            ps1: self.ps0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams3 {
    ps: [f64; 3],
}

impl ChannelParams3 {
    pub fn new(ps0: f64, ps1: f64, ps2: f64) -> Result<Self> {
        Ok(Self {
            ps: [
                check_half_open_unit("ps0", ps0)?,
                check_half_open_unit("ps1", ps1)?,
                check_half_open_unit("ps2", ps2)?,
            ],
        })
    }

    pub fn ps(&self, state: usize) -> f64 {
        self.ps[state]
    }
}

/// State-aware randomized stationary policy: in every slot the source is
/// sampled and the sample transmitted with probability `pa0` when it is in
/// state 0 and `pa1` when it is in state 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsPolicy {
    pa0: f64,
    pa1: f64,
}

impl RsPolicy {
    pub fn new(pa0: f64, pa1: f64) -> Result<Self> {
        Ok(Self {
            pa0: check_closed_unit("pa0", pa0)?,
            pa1: check_closed_unit("pa1", pa1)?,
        })
    }

    pub fn pa0(&self) -> f64 {
        self.pa0
    }

    pub fn pa1(&self) -> f64 {
        self.pa1
    }

    pub fn pa(&self, state: usize) -> f64 {
        [self.pa0, self.pa1][state]
    }

    pub fn swapped(&self) -> Self {
        Self {
            pa0: self.pa1,
            pa1: self.pa0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsPolicy3 {
    pa: [f64; 3],
}

impl RsPolicy3 {
    pub fn new(pa0: f64, pa1: f64, pa2: f64) -> Result<Self> {
        Ok(Self {
            pa: [
                check_closed_unit("pa0", pa0)?,
                check_closed_unit("pa1", pa1)?,
                check_closed_unit("pa2", pa2)?,
            ],
        })
    }

    pub fn pa(&self, state: usize) -> f64 {
        self.pa[state]
    }
}

/// Probability that a slot in state `i` ends with a successful delivery,
/// `pa_i * ps_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRates {
    pub e0: f64,
    pub e1: f64,
}

impl EffectiveRates {
    pub fn new(ch: &ChannelParams, pol: &RsPolicy) -> Self {
        Self {
            e0: pol.pa0 * ch.ps0,
            e1: pol.pa1 * ch.ps1,
        }
    }
}

/// The four sampling policies compared throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PolicyKind {
    /// State-aware randomized stationary sampling.
    Rs(RsPolicy),
    /// Periodic sampling at `t = d, 2d, 3d, ...`.
    Uniform { d: u32 },
    /// Sample exactly when the source changes state.
    ChangeAware,
    /// Sample when the source differs from the last reconstruction.
    SemanticsAware,
}

impl PolicyKind {
    pub fn uniform(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d", 0.0, "period must be at least 1"));
        }
        Ok(PolicyKind::Uniform { d })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Rs(_) => "rs",
            PolicyKind::Uniform { .. } => "uniform",
            PolicyKind::ChangeAware => "change-aware",
            PolicyKind::SemanticsAware => "semantics-aware",
        }
    }
}

/// Cost of acting on a wrong reconstruction: `c01` when the source is 0 and
/// the receiver believes 1, `c10` for the opposite error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostWeights {
    c01: f64,
    c10: f64,
}

impl CostWeights {
    pub fn new(c01: f64, c10: f64) -> Result<Self> {
        if !(c01.is_finite() && c01 >= 0.0) {
            return Err(Error::invalid("c01", c01, "must be finite and nonnegative"));
        }
        if !(c10.is_finite() && c10 >= 0.0) {
            return Err(Error::invalid("c10", c10, "must be finite and nonnegative"));
        }
        if c01 == 0.0 && c10 == 0.0 {
            return Err(Error::invalid("c10", c10, "c01 and c10 cannot both be zero"));
        }
        Ok(Self { c01, c10 })
    }

    /// Unit costs; the actuation cost then equals the reconstruction error.
    pub fn unit() -> Self {
        Self { c01: 1.0, c10: 1.0 }
    }

    pub fn c01(&self) -> f64 {
        self.c01
    }

    pub fn c10(&self) -> f64 {
        self.c10
    }

    pub fn swapped(&self) -> Self {
        Self {
            c01: self.c10,
            c10: self.c01,
        }
    }
}
