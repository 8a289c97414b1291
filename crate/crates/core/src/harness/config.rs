use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coherence::GridSpec;
use crate::corpus::PipelineConfig;
use crate::lda::TrainConfig;
use crate::noise::NoiseStrategy;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Extended author description against the noisy transcript.
    DescriptionVsNoisyTranscript,
    /// Clean transcript against its own noisy copy.
    RawVsNoisyTranscript,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub beta_grid: Vec<f64>,
    pub trials: usize,
    pub strategies: Vec<NoiseStrategy>,
    pub experiment: ExperimentKind,
    /// Baseline similarity an episode must strictly exceed to enter the
    /// description experiment.
    pub filter_threshold: f64,
    pub master_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            beta_grid: (0..=10).map(|i| i as f64 / 10.0).collect(),
            trials: 50,
            strategies: vec![NoiseStrategy::UniformVocab, NoiseStrategy::StatisticsConfusion],
            experiment: ExperimentKind::DescriptionVsNoisyTranscript,
            filter_threshold: 0.5,
            master_seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beta_grid.is_empty() {
            return Err(Error::InvalidConfig("beta_grid is empty".into()));
        }
        for &b in &self.beta_grid {
            crate::noise::validate_beta(b)?;
        }
        if self.beta_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfig("beta_grid must be strictly ascending".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidConfig("no noise strategies selected".into()));
        }
        Ok(())
    }
}

/// Everything a run can be configured with, as read from `--config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub train: TrainConfig,
    pub sweep: SweepConfig,
    pub grid: GridSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.pipeline.validate()?;
        cfg.train.validate()?;
        cfg.sweep.validate()?;
        cfg.grid.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
