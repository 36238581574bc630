//! Slot-by-slot Monte Carlo simulation of the tracking system.
//!
//! Each slot the source moves first, then the policy decides whether to
//! sample; a sample of state `i` is delivered with probability `ps_i` and
//! updates the reconstruction in the same slot. The run starts synced at
//! `X(0) = X̂(0) = 0`.
//!
//! Randomness comes from three xoshiro256++ streams derived from one seed:
//! the seeded generator drives the source, and two successive `jump()`s of
//! it drive the policy and the channel. Every stream is advanced by exactly
//! one `f64` draw per slot whether or not it is used, so changing the policy
//! leaves the source and channel sequences untouched.

mod report;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, ChannelParams3, CostWeights, PolicyKind, RsPolicy3, SourceParams, SourceParams3};

pub use report::{SimReport, empirical_sampling_cost};

pub const DEFAULT_BURN_IN: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "states", rename_all = "kebab-case")]
pub enum SimSystem {
    Two {
        source: SourceParams,
        channel: ChannelParams,
        policy: PolicyKind,
        costs: CostWeights,
    },
    /// Three-state source under randomized sampling; costs are unit, so the
    /// empirical cost equals the error rate.
    Three {
        source: SourceParams3,
        channel: ChannelParams3,
        policy: RsPolicy3,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    system: SimSystem,
    horizon: u64,
    seed: u64,
    burn_in: u64,
}

impl SimConfig {
    /// `horizon` counts every simulated slot; the first `burn_in` are
    /// excluded from all statistics.
    pub fn new(
        source: SourceParams,
        channel: ChannelParams,
        policy: PolicyKind,
        costs: CostWeights,
        horizon: u64,
        seed: u64,
        burn_in: u64,
    ) -> Result<Self> {
        if let PolicyKind::Uniform { d: 0 } = policy {
            return Err(Error::invalid("d", 0.0, "period must be at least 1"));
        }
        Self::build(
            SimSystem::Two {
                source,
                channel,
                policy,
                costs,
            },
            horizon,
            seed,
            burn_in,
        )
    }

    pub fn three_state(
        source: SourceParams3,
        channel: ChannelParams3,
        policy: RsPolicy3,
        horizon: u64,
        seed: u64,
        burn_in: u64,
    ) -> Result<Self> {
        Self::build(SimSystem::Three { source, channel, policy }, horizon, seed, burn_in)
    }

    fn build(system: SimSystem, horizon: u64, seed: u64, burn_in: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon", 0.0, "must be at least 1"));
        }
        if burn_in >= horizon {
            return Err(Error::invalid("burn_in", burn_in as f64, "must be smaller than the horizon"));
        }
        Ok(Self {
            system,
            horizon,
            seed,
            burn_in,
        })
    }

    pub fn system(&self) -> &SimSystem {
        &self.system
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn burn_in(&self) -> u64 {
        self.burn_in
    }

    /// Number of slots that enter the statistics.
    pub fn measured_slots(&self) -> u64 {
        self.horizon - self.burn_in
    }
}

/// What a policy may observe when deciding in slot `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotContext {
    pub t: u64,
    /// `X(t)`, already advanced.
    pub x: usize,
    /// `X(t-1)`.
    pub x_prev: usize,
    /// `X̂(t-1)`.
    pub xhat_prev: usize,
}

/// Sampling decision of a two-state policy. `u` is the slot's policy draw
/// from `[0, 1)`; only the randomized policy uses it.
pub fn decide_sample(policy: &PolicyKind, ctx: SlotContext, u: f64) -> bool {
    match policy {
        PolicyKind::Rs(pol) => u < pol.pa(ctx.x),
        PolicyKind::Uniform { d } => ctx.t % u64::from(*d) == 0,
        PolicyKind::ChangeAware => ctx.t > 1 && ctx.x != ctx.x_prev,
        // In sync `X̂(t-1) = X(t-1)`, so one comparison covers both rules.
        PolicyKind::SemanticsAware => ctx.t > 1 && ctx.x != ctx.xhat_prev,
    }
}

struct Streams {
    source: Xoshiro256PlusPlus,
    policy: Xoshiro256PlusPlus,
    channel: Xoshiro256PlusPlus,
}

impl Streams {
    fn new(seed: u64) -> Self {
        let source = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut policy = source.clone();
        policy.jump();
        let mut channel = policy.clone();
        channel.jump();
        Self { source, policy, channel }
    }
}

fn next_state<const N: usize>(row: &[f64; N], u: f64) -> usize {
    let mut acc = 0.0;
    for (j, &pr) in row.iter().enumerate() {
        acc += pr;
        if u < acc {
            return j;
        }
    }
    N - 1
}

fn run<const N: usize>(
    cfg: &SimConfig,
    trans: [[f64; N]; N],
    ps: [f64; N],
    cost: impl Fn(usize, usize) -> f64,
    mut decide: impl FnMut(SlotContext, f64) -> bool,
) -> SimReport {
    let mut rng = Streams::new(cfg.seed);
    let mut acc = report::Accumulator::default();
    let (mut x, mut xhat) = (0usize, 0usize);
    for t in 1..=cfg.horizon {
        let (u_src, u_pol, u_ch): (f64, f64, f64) = (rng.source.gen(), rng.policy.gen(), rng.channel.gen());
        let x_prev = x;
        x = next_state(&trans[x], u_src);
        let sample = decide(
            SlotContext {
                t,
                x,
                x_prev,
                xhat_prev: xhat,
            },
            u_pol,
        );
        if sample && u_ch < ps[x] {
            xhat = x;
        }
        if t > cfg.burn_in {
            acc.record(sample, x != xhat, x == 1 && xhat == 0, cost(x, xhat));
        }
    }
    acc.finish(cfg.seed)
}

/// Runs one simulation. Deterministic in the configuration.
pub fn simulate(cfg: &SimConfig) -> SimReport {
    match cfg.system {
        SimSystem::Two {
            source,
            channel,
            policy,
            costs,
        } => run(
            cfg,
            source.transition(),
            [channel.ps0(), channel.ps1()],
            |x, xh| match (x, xh) {
                (0, 1) => costs.c01(),
                (1, 0) => costs.c10(),
                _ => 0.0,
            },
            |ctx, u| decide_sample(&policy, ctx, u),
        ),
        SimSystem::Three { source, channel, policy } => run(
            cfg,
            source.transition(),
            [channel.ps(0), channel.ps(1), channel.ps(2)],
            |x, xh| if x != xh { 1.0 } else { 0.0 },
            |ctx, u| u < policy.pa(ctx.x),
        ),
    }
}

/// Runs independent simulations in parallel; output order follows input.
pub fn simulate_many(cfgs: &[SimConfig]) -> Vec<SimReport> {
    cfgs.par_iter().map(simulate).collect()
}
