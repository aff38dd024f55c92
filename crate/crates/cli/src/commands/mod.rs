pub mod fourier;
pub mod reupload;
pub mod selftest;
pub mod three_switch;
pub mod two_switch;

use anyhow::Result;

use crate::config::{Experiment, ExperimentConfig};
use crate::record::Outcome;

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::TwoSwitchForms => two_switch::run(),
        Experiment::FourierScan => fourier::run(cfg),
        Experiment::ThreeSwitchTrain | Experiment::ThreeSwitchReplay => three_switch::run(cfg),
        Experiment::ReuploadingBaseline => reupload::run(cfg),
    }
}
