use std::fmt;
use std::path::PathBuf;

use anyhow::{bail, Result};
use qswitch_core::learn::{Objective, ObservableMode};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    TwoSwitchForms,
    FourierScan,
    ThreeSwitchTrain,
    ThreeSwitchReplay,
    ReuploadingBaseline,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::TwoSwitchForms => "two_switch_forms",
            Experiment::FourierScan => "fourier_scan",
            Experiment::ThreeSwitchTrain => "three_switch_train",
            Experiment::ThreeSwitchReplay => "three_switch_replay",
            Experiment::ReuploadingBaseline => "reuploading_baseline",
        }
    }

    pub fn needs_mode(self) -> bool {
        matches!(
            self,
            Experiment::ThreeSwitchTrain | Experiment::ThreeSwitchReplay
        )
    }

    pub fn trains(self) -> bool {
        matches!(
            self,
            Experiment::ThreeSwitchTrain | Experiment::ReuploadingBaseline
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to re-run an experiment. Echoed verbatim into its record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ObservableMode>,
    pub seed: u64,
    pub n_train: usize,
    pub budget: usize,
    pub restarts: usize,
    pub objective: Objective,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, mode: Option<ObservableMode>, output: PathBuf) -> Self {
        Self {
            experiment,
            mode,
            seed: 0,
            n_train: 200,
            budget: 2000,
            restarts: 10,
            objective: Objective::Accuracy,
            output,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.experiment.needs_mode(), self.mode) {
            (true, None) => bail!("{} needs an order mode", self.experiment),
            (false, Some(m)) => bail!("{} takes no order mode, got {m}", self.experiment),
            _ => {}
        }
        if self.n_train == 0 {
            bail!("n_train must be positive");
        }
        if self.experiment.trains() && (self.budget == 0 || self.restarts == 0) {
            bail!("training needs a positive budget and at least one restart");
        }
        Ok(())
    }

    /// Directory name used when no explicit output path is given.
    pub fn default_dir_name(
        experiment: Experiment,
        mode: Option<ObservableMode>,
        seed: u64,
    ) -> String {
        match mode {
            Some(m) => format!("{experiment}_{m}_seed{seed}"),
            None => format!("{experiment}_seed{seed}"),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
