//! Randomized-policy tracking of the three-state source.
//!
//! The nine-state joint chain is built with the same slot semantics as the
//! two-state case and solved numerically; that solve is the reference
//! result. The published closed-form expressions are evaluated verbatim by
//! [`stationary_three_state_closed`] and compared against it by
//! [`check_three_state_closed_form`]; they are reported, not trusted.

use serde::Serialize;

use super::chain::build_joint_chain_rs3;
use super::params::{ChannelParams3, RsPolicy3, SourceParams3};
use crate::error::{Error, Result};

/// Agreement threshold between the closed forms and the numeric solve.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-8;

/// `pi[i][j] = Pr[X = i, X̂ = j]` for the three-state source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointStationary3 {
    pub pi: [[f64; 3]; 3],
}

impl JointStationary3 {
    pub fn new(pi: [[f64; 3]; 3]) -> Result<Self> {
        for row in &pi {
            for &v in row {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::invalid("pi", v, "stationary mass must be finite and nonnegative"));
                }
            }
        }
        let st = Self { pi };
        if (st.sum() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("pi", st.sum(), "stationary masses must sum to 1"));
        }
        Ok(st)
    }

    pub fn sum(&self) -> f64 {
        self.pi.iter().flatten().sum()
    }

    pub fn error_rate(&self) -> f64 {
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| self.pi[i][j])
            .sum()
    }

    /// Source marginal recovered from the joint distribution.
    pub fn source_marginal(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.pi[i].iter().sum())
    }
}

/// Stationary distribution from the numeric solve of the nine-state chain.
pub fn stationary_three_state(src: &SourceParams3, ch: &ChannelParams3, pol: &RsPolicy3) -> Result<JointStationary3> {
    let v = build_joint_chain_rs3(src, ch, pol).solve_stationary()?;
    let mut pi = [[0.0; 3]; 3];
    for (idx, x) in v.into_iter().enumerate() {
        pi[idx / 3][idx % 3] = x;
    }
    JointStationary3::new(pi)
}

/// Verbatim evaluation of the published three-state closed forms, with
/// normalizers `Z1` and `Z2`. No validation is applied to the output.
pub fn stationary_three_state_closed(src: &SourceParams3, ch: &ChannelParams3, pol: &RsPolicy3) -> [[f64; 3]; 3] {
    let (p, q) = (src.p(), src.q());
    let e0 = pol.pa(0) * ch.ps(0);
    let e1 = pol.pa(1) * ch.ps(1);
    let e2 = pol.pa(2) * ch.ps(2);

    let z2 = 2.0 * p.powi(3) * e2 * (e1 - 1.0)
        + q * e1 * (2.0 * q + e2 * (1.0 - 2.0 * q))
        + p * p * (-3.0 * q * e1 + e2 * (1.0 - 5.0 * q + e1 * (8.0 * q - 3.0)))
        + p * (2.0 * q * (1.0 - q) * e2 + e1 * (q - 6.0 * q * q + e2 * (1.0 - 7.0 * q + 8.0 * q * q)));
    let z1_first = 2.0 * p.powi(3) * e2 * (e1 - 1.0)
        + q * e1 * (2.0 * q + e2 * (1.0 - 2.0 * q))
        + p * p * (-3.0 * q * e1 + e2 * (1.0 - 5.0 * q + e1 * (8.0 * q - 3.0)))
        + p * (-2.0 * q * (q - 1.0) * e2 + e1 * (q - 6.0 * q * q + e2 * (1.0 - 7.0 * q + 8.0 * q * q)));
    let z1_second = 2.0 * p * p * e2 * (e0 - 1.0) * (e1 - 1.0)
        + e0 * (e1 * (q - 1.0) - q) * (-2.0 * q + e2 * (2.0 * q - 1.0))
        + p * (q * e2
            + e1 * (3.0 * q + (2.0 - 4.0 * q) * e2)
            + e0 * (q - 4.0 * q * e1 + e2 * (1.0 - 2.0 * q + e1 * (5.0 * q - 3.0))));
    let z1 = (2.0 * p + q) * z1_first * z1_second;

    // Recurring factors.
    let w = p * (e2 - 1.0) - 2.0 * q + (2.0 * q - 1.0) * e2;
    let v = 2.0 * p * e2 * (e1 - 1.0) - q * e2 + e1 * (4.0 * q * e2 - 2.0 * e2 - 3.0 * q);
    let k = 3.0 * p - 1.0;

    let mut pi = [[0.0; 3]; 3];
    pi[0][0] = q * q * k * e0 * e1 * w
        * (p * (e1 - 1.0) * ((q - 1.0) * e2 - q) + (e1 * (q - 1.0) - q) * ((2.0 * q - 1.0) * e2 - 2.0 * q))
        / z1;
    pi[0][1] = p * q * q * k * e1 * (e0 - 1.0) * w * v / z1;
    pi[0][2] = p * q * e2 * (p * (e1 - 1.0) - 2.0 * q + (2.0 * q - 1.0) * e1) / z2;
    pi[1][0] = p * q * q * k * e0 * e1 * (e1 - 1.0) * w * ((3.0 * q - 1.0) * e2 - 3.0 * q) / z1;
    pi[1][1] = p * q * k * e1 * v
        * (p * (e0 - 1.0) * (-3.0 * q + (3.0 * q - 2.0) * e2) + e0 * (2.0 * q + e2 * (1.0 - 2.0 * q)))
        / z1;
    pi[1][2] = p * q * e2 * (1.0 - 3.0 * p) * (1.0 - e1) / z2;
    pi[2][0] = p * q * q * k * e0 * e1 * (e2 - 1.0) * (2.0 * p * (e1 - 1.0) + (q - 1.0) * e1 - q) * w / z1;
    pi[2][1] = q * p * p * k * e1 * (e2 - 1.0) * (2.0 * p * (e0 - 1.0) + (q - 1.0) * e0 - q) * v / z1;
    pi[2][2] = p * e2 * (p + 2.0 * p * p * (e1 - 1.0) + p * (q - 3.0) * e1 + q - p * q + e1 * (1.0 - q)) / z2;
    pi
}

/// Outcome of comparing the published closed forms with the numeric solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeStateCheck {
    pub numeric: JointStationary3,
    pub closed_form: [[f64; 3]; 3],
    pub max_abs_diff: f64,
    /// Entry `(i, j)` with the largest disagreement.
    pub worst_entry: (usize, usize),
    pub agrees: bool,
}

impl ThreeStateCheck {
    /// One human-readable line per entry that disagrees beyond tolerance.
    pub fn discrepancies(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let (n, c) = (self.numeric.pi[i][j], self.closed_form[i][j]);
                let d = (n - c).abs();
                if !(d <= CLOSED_FORM_TOLERANCE) {
                    out.push(format!("pi[{i}][{j}]: numeric {n:.12} closed-form {c:.12} |diff| {d:.3e}"));
                }
            }
        }
        out
    }
}

pub fn check_three_state_closed_form(
    src: &SourceParams3,
    ch: &ChannelParams3,
    pol: &RsPolicy3,
) -> Result<ThreeStateCheck> {
    let numeric = stationary_three_state(src, ch, pol)?;
    let closed_form = stationary_three_state_closed(src, ch, pol);
    let mut max_abs_diff = 0.0;
    let mut worst_entry = (0, 0);
    for i in 0..3 {
        for j in 0..3 {
            let d = (numeric.pi[i][j] - closed_form[i][j]).abs();
            // NaN from a vanishing normalizer counts as total disagreement.
            let d = if d.is_nan() { f64::INFINITY } else { d };
            if d > max_abs_diff {
                max_abs_diff = d;
                worst_entry = (i, j);
            }
        }
    }
    Ok(ThreeStateCheck {
        numeric,
        closed_form,
        max_abs_diff,
        worst_entry,
        agrees: max_abs_diff <= CLOSED_FORM_TOLERANCE,
    })
}
