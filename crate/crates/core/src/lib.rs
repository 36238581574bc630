//! Remote tracking of a two-state Markov source over an erasure channel.
//!
//! A sensor samples the source and sends each sample over a channel that
//! drops it with a state-dependent probability. The receiver acts on the
//! last sample it received. This crate computes how often and how costly the
//! receiver's errors are under several sampling policies. It finds the
//! cheapest state-aware randomized policy under a sampling budget, and
//! checks everything by simulation.
//!
//! - [`model`]: parameters, the joint `(X, X̂)` chain and its stationary
//!   distribution, in closed form and numerically.
//! - [`metrics`]: error rate, actuation-error cost, consecutive-error
//!   statistics and sampling rates.
//! - [`optimizer`]: budget-constrained minimization of the cost.
//! - [`sim`]: seeded slot-level Monte Carlo.
//!
//! ```
//! use markov_tracking::model::{ChannelParams, CostWeights, SourceParams};
//! use markov_tracking::optimizer::optimize_constrained;
//!
//! let best = optimize_constrained(
//!     &SourceParams::new(0.3, 0.1)?,
//!     &ChannelParams::new(0.2, 0.3)?,
//!     &CostWeights::new(1.0, 2.0)?,
//!     0.5,
//! )?;
//! assert!((best.value - 0.25).abs() < 1e-12);
//! # Ok::<(), markov_tracking::Error>(())
//! ```

pub mod error;
pub mod metrics;
pub mod model;
pub mod optimizer;
pub mod sim;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/consecutive-errors.md")]
    mod consecutive_errors {}
    #[doc = include_str!("../../../book/src/optimization.md")]
    mod optimization {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/three-state.md")]
    mod three_state {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
