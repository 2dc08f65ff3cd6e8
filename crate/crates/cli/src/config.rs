//! Experiment configuration: one channel spec per role plus the simulation
//! parameters. Loadable from a versioned JSON file; unknown keys rejected;
//! every default equals the reference setup.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use memchan_core::montecarlo::{trajectory_seed, SimulationConfig};
use memchan_core::{ChannelKind, ChannelSpec};
use serde::{Deserialize, Serialize};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    #[default]
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    A = 0,
    B = 1,
    C = 2,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::A, Role::B, Role::C];

    pub fn label(self) -> &'static str {
        match self {
            Role::A => "a",
            Role::B => "b",
            Role::C => "c",
        }
    }
}

fn default_version() -> u32 {
    CONFIG_VERSION
}
fn default_channel_a() -> ChannelSpec {
    ChannelSpec::new(ChannelKind::A)
}
fn default_channel_b() -> ChannelSpec {
    ChannelSpec::new(ChannelKind::B)
}
fn default_channel_c() -> ChannelSpec {
    ChannelSpec::new(ChannelKind::CLambda)
}
fn default_uses() -> u64 {
    100_000
}
fn default_trials() -> u64 {
    10_000
}
fn default_seed() -> u64 {
    42
}

/// The experiment: three channel roles, ensemble sizes, seed, output knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default = "default_channel_a")]
    pub channel_a: ChannelSpec,
    #[serde(default = "default_channel_b")]
    pub channel_b: ChannelSpec,
    #[serde(default = "default_channel_c")]
    pub channel_c: ChannelSpec,
    /// Channel uses per trajectory (n).
    #[serde(default = "default_uses")]
    pub uses: u64,
    /// Trajectories per ensemble (N).
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub record_trajectories: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            version: CONFIG_VERSION,
            channel_a: default_channel_a(),
            channel_b: default_channel_b(),
            channel_c: default_channel_c(),
            uses: default_uses(),
            trials: default_trials(),
            seed: default_seed(),
            burn_in: None,
            record_trajectories: false,
            out_dir: None,
            format: ReportFormat::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| anyhow::anyhow!("parsing config {}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.version != CONFIG_VERSION {
            bail!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            );
        }
        for (role, spec) in [
            ("channel_a", &self.channel_a),
            ("channel_b", &self.channel_b),
            ("channel_c", &self.channel_c),
        ] {
            spec.validate().map_err(|e| anyhow::anyhow!("{role}: {e}"))?;
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        Ok(())
    }

    pub fn spec(&self, role: Role) -> &ChannelSpec {
        match role {
            Role::A => &self.channel_a,
            Role::B => &self.channel_b,
            Role::C => &self.channel_c,
        }
    }

    /// Ensemble configuration for one role. Role base seeds are derived from
    /// the experiment seed with the published trajectory hash, so the roles
    /// have independent, schedule-free streams.
    pub fn sim_config(&self, role: Role) -> SimulationConfig {
        SimulationConfig {
            spec: self.spec(role).clone(),
            uses: self.uses,
            trials: self.trials,
            base_seed: trajectory_seed(self.seed, role as u64),
            record_trajectories: self.record_trajectories,
            burn_in: self.burn_in,
        }
    }
}
