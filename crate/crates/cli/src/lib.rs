//! Experiment runner behind the `qswitch` binary.
//!
//! Each run writes one directory holding a `record` (TOML: config echo,
//! version, timing, metrics, parameters, checks) and `tables/*.csv`.

pub mod commands;
pub mod config;
pub mod record;

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Result;

use config::ExperimentConfig;
use record::{persist, Outcome, RunRecord, Timing};

/// Runs `f`, stamps the outcome into a record and writes it under `dir`.
pub fn run_and_persist(
    command: &str,
    config: Option<ExperimentConfig>,
    dir: &Path,
    f: impl FnOnce() -> Result<Outcome>,
) -> Result<RunRecord> {
    let started_unix_seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let outcome = f()?;
    let timing = Timing {
        started_unix_seconds,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
    };
    let record = RunRecord::new(command, config, timing, &outcome);
    persist(dir, &record, &outcome.tables)?;
    Ok(record)
}
