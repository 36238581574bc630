//! Joint (source, reconstruction) Markov chains and a direct stationary
//! solver.
//!
//! In every slot the source moves first, then the policy decides whether the
//! *new* source state is sampled and transmitted. A delivered sample makes the
//! reconstruction equal to the new source state; a lost or absent sample
//! leaves it unchanged. The success probability is the one of the state being
//! transmitted.

use nalgebra::{DMatrix, DVector};

use super::params::{ChannelParams, ChannelParams3, RsPolicy, RsPolicy3, SourceParams, SourceParams3};
use crate::error::{Error, Result};

/// Row-stochastic transition matrix over `(source, reconstruction)` pairs,
/// ordered row-major: `(0,0), (0,1), ..., (n-1,n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointChain {
    n_source: usize,
    states: Vec<(usize, usize)>,
    matrix: DMatrix<f64>,
}

impl JointChain {
    /// Builds the chain from the source transition matrix and a delivery
    /// rule. `deliver(i, j, k)` is the probability that, moving from joint
    /// state `(i, j)` to source state `k`, a sample of `k` is both taken and
    /// received.
    pub fn from_delivery_rule<F>(source: &[Vec<f64>], deliver: F) -> Self
    where
        F: Fn(usize, usize, usize) -> f64,
    {
        let n = source.len();
        let states: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut matrix = DMatrix::zeros(n * n, n * n);
        for (row, &(i, j)) in states.iter().enumerate() {
            for (k, &t) in source[i].iter().enumerate() {
                let d = deliver(i, j, k);
                matrix[(row, k * n + k)] += t * d;
                matrix[(row, k * n + j)] += t * (1.0 - d);
            }
        }
        Self {
            n_source: n,
            states,
            matrix,
        }
    }

    pub fn n_source(&self) -> usize {
        self.n_source
    }

    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Transition probability between two joint states.
    pub fn prob(&self, from: (usize, usize), to: (usize, usize)) -> f64 {
        let n = self.n_source;
        self.matrix[(from.0 * n + from.1, to.0 * n + to.1)]
    }

    /// Largest deviation of a row sum from 1.
    pub fn max_row_defect(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Solves `pi P = pi`, `sum(pi) = 1` directly: the last balance equation
    /// is replaced by the normalization row and the system is LU-solved.
    pub fn solve_stationary(&self) -> Result<Vec<f64>> {
        let m = self.matrix.nrows();
        let mut a = self.matrix.transpose() - DMatrix::identity(m, m);
        for c in 0..m {
            a[(m - 1, c)] = 1.0;
        }
        let mut b = DVector::zeros(m);
        b[m - 1] = 1.0;
        let smallest = a.singular_values().min();
        if smallest < 1e-13 {
            return Err(Error::ReducibleChain(format!(
                "balance system is numerically singular (smallest singular value {smallest:e})"
            )));
        }
        let pi = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::ReducibleChain("balance system is singular".into()))?;

        let residual = (pi.transpose() * &self.matrix - pi.transpose()).amax();
        if !residual.is_finite() || residual > 1e-12 {
            return Err(Error::ReducibleChain(format!(
                "stationary residual {residual:e} exceeds 1e-12"
            )));
        }
        let mut out: Vec<f64> = pi.iter().copied().collect();
        for v in out.iter_mut() {
            if *v < 0.0 {
                if *v < -1e-12 {
                    return Err(Error::ReducibleChain(format!(
                        "negative stationary mass {v:e}"
                    )));
                }
                *v = 0.0;
            }
        }
        Ok(out)
    }
}

/// Joint chain of the state-aware randomized stationary policy.
pub fn build_joint_chain_rs(src: &SourceParams, ch: &ChannelParams, pol: &RsPolicy) -> JointChain {
    let t = src.transition();
    JointChain::from_delivery_rule(&rows(&t), |_, _, k| pol.pa(k) * ch.ps(k))
}

/// Change-aware policy: a sample is taken exactly when the source changes.
pub fn build_joint_chain_change_aware(src: &SourceParams, ch: &ChannelParams) -> JointChain {
    let t = src.transition();
    JointChain::from_delivery_rule(&rows(&t), |i, _, k| if k != i { ch.ps(k) } else { 0.0 })
}

/// Semantics-aware policy: a sample is taken whenever the new source state
/// differs from the current reconstruction. In sync this is a source change;
/// in error it is the rule `X(t+1) != X̂(t)`.
pub fn build_joint_chain_semantics(src: &SourceParams, ch: &ChannelParams) -> JointChain {
    let t = src.transition();
    JointChain::from_delivery_rule(&rows(&t), |_, j, k| if k != j { ch.ps(k) } else { 0.0 })
}

/// Nine-state joint chain of the randomized policy on the three-state source.
pub fn build_joint_chain_rs3(src: &SourceParams3, ch: &ChannelParams3, pol: &RsPolicy3) -> JointChain {
    let t = src.transition();
    JointChain::from_delivery_rule(&rows(&t), |_, _, k| pol.pa(k) * ch.ps(k))
}

fn rows<const N: usize>(t: &[[f64; N]; N]) -> Vec<Vec<f64>> {
    t.iter().map(|r| r.to_vec()).collect()
}
