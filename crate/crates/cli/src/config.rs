//! Flat key-value run configuration, merged with command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twotier::allocation::{default_alpha_grid, parse_alpha_grid, power_law_weights, RuleKind};
use twotier::{ConstituencyPartition, DistributionSpec, PreferenceModel};

use crate::CliError;

pub const DEFAULT_REPLICATIONS: u64 = 100_000;

/// Every key is optional in the file; commands check for what they need.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub replications: Option<u64>,
    pub quota: Option<f64>,
    /// Population file, one number per line; relative to the config file.
    pub partition: Option<PathBuf>,
    /// Inline constituency sizes, used when no partition file is given.
    pub sizes: Option<Vec<u64>>,
    pub population_scale: Option<f64>,
    pub g: Option<DistributionSpec>,
    pub h: Option<DistributionSpec>,
    pub shock_scale: Option<f64>,
    pub rule: Option<String>,
    pub alpha: Option<f64>,
    pub weights: Option<Vec<f64>>,
    /// Game file: quota on the first line, weights after it.
    pub game: Option<PathBuf>,
    pub target: Option<Vec<f64>>,
    pub alpha_grid: Option<String>,
    pub tolerance_scale: Option<f64>,
    pub max_iters: Option<usize>,
    pub tolerance: Option<f64>,
    pub resolution: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Reads `path`, resolving relative file keys against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: RunConfig = toml::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for file in [&mut config.partition, &mut config.game] {
            if let Some(p) = file.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::Invalid("a seed is required (set `seed` in the config or pass --seed)".into())
        })
    }

    pub fn replications(&self) -> Result<u64, CliError> {
        match self.replications.unwrap_or(DEFAULT_REPLICATIONS) {
            0 => Err(CliError::Invalid("replications must be at least 1".into())),
            r => Ok(r),
        }
    }

    pub fn quota(&self) -> f64 {
        self.quota.unwrap_or(0.5)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn partition(&self) -> Result<ConstituencyPartition, CliError> {
        match (&self.partition, &self.sizes) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Invalid(format!("cannot read partition {}: {e}", path.display()))
                })?;
                let pops = ConstituencyPartition::parse_sizes(&text)?;
                let scale = self.population_scale.unwrap_or(1.0);
                Ok(ConstituencyPartition::from_populations(&pops, scale)?)
            }
            (None, Some(sizes)) => Ok(ConstituencyPartition::new(sizes.clone())?),
            (None, None) => Err(CliError::Invalid(
                "no constituencies: set `partition` or `sizes` in the config".into(),
            )),
        }
    }

    pub fn model(&self) -> Result<PreferenceModel, CliError> {
        let g = self.g.unwrap_or(DistributionSpec::Uniform { low: -0.5, high: 0.5 });
        Ok(match self.h {
            Some(h) if !h.is_degenerate() => {
                PreferenceModel::new(g, h, self.shock_scale.unwrap_or(1.0))?
            }
            _ => PreferenceModel::iid(g)?,
        })
    }

    pub fn rule(&self) -> Result<RuleKind, CliError> {
        Ok(self.rule.as_deref().unwrap_or("direct_power_law").parse()?)
    }

    pub fn alpha_grid(&self) -> Result<Vec<f64>, CliError> {
        Ok(match &self.alpha_grid {
            Some(s) => parse_alpha_grid(s)?,
            None => default_alpha_grid(),
        })
    }

    /// Explicit target, else partition sizes raised to `alpha` (default 1).
    pub fn target(&self) -> Result<Vec<f64>, CliError> {
        match &self.target {
            Some(t) => Ok(t.clone()),
            None => Ok(power_law_weights(&self.partition()?, self.alpha.unwrap_or(1.0))?),
        }
    }
}
