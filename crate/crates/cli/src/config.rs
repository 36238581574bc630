//! Command-line flags, the optional JSON config file, and their merge into a
//! validated [`RunSpec`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use markov_tracking::model::{
    ChannelParams, ChannelParams3, CostWeights, PolicyKind, RsPolicy, RsPolicy3, SourceParams, SourceParams3,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "mtrack", version, about = "Remote tracking of a Markov source over an erasure channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form metrics for one source, channel and policy.
    Analyze(Flags),
    /// Monte Carlo run of one policy.
    Simulate(Flags),
    /// Optimal randomized policy under the sampling budget.
    Optimize(Flags),
    /// Regenerate one of the published tables.
    Table {
        /// rsc-cost-ps02-03, rsc-cost-ps06-06, rs-cost-ps02-03, rs-cost-ps06-06,
        /// compare-cost-ps02-03, compare-cost-ps06-06, rsc-pe-p02-q04, rsc-pe-p06-q07,
        /// compare-pe-p02-q04, compare-pe-p06-q07, importance-cs or importance-pe.
        id: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Metric over a (pa0, pa1) grid, in long format.
    Sweep(Flags),
    /// Every policy side by side with its sampling rate and feasibility.
    Compare(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Analyze(f)
            | Command::Simulate(f)
            | Command::Optimize(f)
            | Command::Sweep(f)
            | Command::Compare(f)
            | Command::Table { flags: f, .. } => f,
        }
    }

    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Analyze(_) => CommandKind::Analyze,
            Command::Simulate(_) => CommandKind::Simulate,
            Command::Optimize(_) => CommandKind::Optimize,
            Command::Table { .. } => CommandKind::Table,
            Command::Sweep(_) => CommandKind::Sweep,
            Command::Compare(_) => CommandKind::Compare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Analyze,
    Simulate,
    Optimize,
    Table,
    Sweep,
    Compare,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::Simulate => "simulate",
            CommandKind::Optimize => "optimize",
            CommandKind::Table => "table",
            CommandKind::Sweep => "sweep",
            CommandKind::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    Rs,
    Uniform,
    ChangeAware,
    SemanticsAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricName {
    /// Reconstruction error rate.
    Pe,
    /// Actuation-error cost.
    Cost,
    /// Mean consecutive error.
    CbarE,
    /// Mean importance-aware consecutive error.
    CbarS,
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Flags {
    /// JSON file with any of the parameters below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Source 0→1 transition probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Source 1→0 transition probability.
    #[arg(long)]
    pub q: Option<f64>,
    /// Channel success probability in state 0.
    #[arg(long)]
    pub ps0: Option<f64>,
    /// Channel success probability in state 1.
    #[arg(long)]
    pub ps1: Option<f64>,
    /// Channel success probability in state 2 (three-state source).
    #[arg(long)]
    pub ps2: Option<f64>,
    /// Sampling probability in state 0.
    #[arg(long)]
    pub pa0: Option<f64>,
    /// Sampling probability in state 1.
    #[arg(long)]
    pub pa1: Option<f64>,
    /// Sampling probability in state 2 (three-state source).
    #[arg(long)]
    pub pa2: Option<f64>,
    /// Cost when the source is 0 and the receiver believes 1.
    #[arg(long)]
    pub c01: Option<f64>,
    /// Cost when the source is 1 and the receiver believes 0.
    #[arg(long)]
    pub c10: Option<f64>,
    /// Sampling budget ratio.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Period of the uniform policy.
    #[arg(long)]
    pub d: Option<u32>,
    /// Simulated slots, burn-in included.
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Leading slots excluded from simulation statistics.
    #[arg(long)]
    pub burn_in: Option<u64>,
    /// Grid resolution for `sweep` and for the brute-force check in `optimize`.
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyName>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricName>,
    /// Run lengths at which to report the violation probability.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Use the three-state source.
    #[arg(long)]
    pub three_state: bool,
    /// Add simulated columns to `table` output.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Every configurable key. Absent keys fall back to command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pa0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pa1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pa2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c01: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", alias = "burn-in")]
    pub burn_in: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", alias = "grid-step")]
    pub grid_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", alias = "three-state")]
    pub three_state: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulate: Option<bool>,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl Params {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|message| CliError::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn from_json_str(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Fields set in `flags` replace those from the file.
    pub fn overlay_flags(&mut self, flags: &Flags) {
        overlay!(self, flags; p, q, ps0, ps1, ps2, pa0, pa1, pa2, c01, c10, eta, d, horizon, seed, burn_in,
            grid_step, policy, metric, n, out, format);
        if flags.three_state {
            self.three_state = Some(true);
        }
        if flags.simulate {
            self.simulate = Some(true);
        }
    }

    fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
        v.ok_or(CliError::Missing(name))
    }

    pub fn source(&self) -> Result<SourceParams> {
        Ok(SourceParams::new(Self::need(self.p, "p")?, Self::need(self.q, "q")?)?)
    }

    pub fn channel(&self) -> Result<ChannelParams> {
        Ok(ChannelParams::new(Self::need(self.ps0, "ps0")?, Self::need(self.ps1, "ps1")?)?)
    }

    pub fn rs_policy(&self) -> Result<RsPolicy> {
        Ok(RsPolicy::new(Self::need(self.pa0, "pa0")?, Self::need(self.pa1, "pa1")?)?)
    }

    /// Unit costs unless overridden.
    pub fn costs(&self) -> Result<CostWeights> {
        Ok(CostWeights::new(self.c01.unwrap_or(1.0), self.c10.unwrap_or(1.0))?)
    }

    pub fn source3(&self) -> Result<SourceParams3> {
        Ok(SourceParams3::new(Self::need(self.p, "p")?, Self::need(self.q, "q")?)?)
    }

    pub fn channel3(&self) -> Result<ChannelParams3> {
        Ok(ChannelParams3::new(
            Self::need(self.ps0, "ps0")?,
            Self::need(self.ps1, "ps1")?,
            Self::need(self.ps2, "ps2")?,
        )?)
    }

    pub fn rs_policy3(&self) -> Result<RsPolicy3> {
        Ok(RsPolicy3::new(
            Self::need(self.pa0, "pa0")?,
            Self::need(self.pa1, "pa1")?,
            Self::need(self.pa2, "pa2")?,
        )?)
    }

    pub fn policy_name(&self) -> PolicyName {
        self.policy.unwrap_or(PolicyName::Rs)
    }

    pub fn period(&self) -> Result<u32> {
        let d = self.d.unwrap_or(5);
        if d == 0 {
            return Err(CliError::Validation("invalid parameter `d` = 0: period must be at least 1".into()));
        }
        Ok(d)
    }

    pub fn policy_kind(&self) -> Result<PolicyKind> {
        Ok(match self.policy_name() {
            PolicyName::Rs => PolicyKind::Rs(self.rs_policy()?),
            PolicyName::Uniform => PolicyKind::uniform(self.period()?)?,
            PolicyName::ChangeAware => PolicyKind::ChangeAware,
            PolicyName::SemanticsAware => PolicyKind::SemanticsAware,
        })
    }

    pub fn three_state(&self) -> bool {
        self.three_state.unwrap_or(false)
    }

    pub fn eta_or(&self, default: f64) -> Result<f64> {
        let eta = self.eta.unwrap_or(default);
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(CliError::Validation(format!(
                "invalid parameter `eta` = {eta}: must be finite and nonnegative"
            )));
        }
        Ok(eta)
    }

    pub fn grid_step_or(&self, default: f64) -> Result<f64> {
        let step = self.grid_step.unwrap_or(default);
        if !(step.is_finite() && step > 0.0 && step <= 1.0) {
            return Err(CliError::Validation(format!(
                "invalid parameter `grid_step` = {step}: must lie in (0, 1]"
            )));
        }
        Ok(step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// A fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: CommandKind,
    pub table: Option<String>,
    pub params: Params,
    pub output: OutputSpec,
}

impl RunSpec {
    pub fn from_command(command: &Command) -> Result<Self> {
        let flags = command.flags();
        let mut params = match &flags.config {
            Some(path) => Params::from_json_file(path)?,
            None => Params::default(),
        };
        params.overlay_flags(flags);
        let table = match command {
            Command::Table { id, .. } => Some(id.clone()),
            _ => None,
        };
        let output = OutputSpec {
            path: params.out.clone(),
            format: params.format.unwrap_or_default(),
        };
        Ok(Self {
            command: command.kind(),
            table,
            params,
            output,
        })
    }

    /// SHA-256 over the command, table id and resolved parameters.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::json!({
            "command": self.command,
            "table": self.table,
            "params": self.params,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let err = Params::from_json_str(r#"{"p": 0.3, "speed": 2}"#).unwrap_err();
        assert!(err.contains("speed"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let mut params = Params::from_json_str(r#"{"p": 0.3, "q": 0.2, "burn-in": 5}"#).unwrap();
        let flags = Flags {
            p: Some(0.7),
            ..Flags::default()
        };
        params.overlay_flags(&flags);
        assert_eq!(params.p, Some(0.7));
        assert_eq!(params.q, Some(0.2));
        assert_eq!(params.burn_in, Some(5));
    }

    #[test]
    fn hash_ignores_output_location() {
        let mk = |out: Option<&str>| RunSpec {
            command: CommandKind::Analyze,
            table: None,
            params: Params {
                p: Some(0.3),
                out: out.map(PathBuf::from),
                ..Params::default()
            },
            output: OutputSpec {
                path: None,
                format: Format::Csv,
            },
        };
        assert_eq!(mk(None).config_hash(), mk(Some("x.csv")).config_hash());
        assert_eq!(mk(None).config_hash().len(), 64);
    }
}
