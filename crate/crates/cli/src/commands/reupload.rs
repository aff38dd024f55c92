use anyhow::Result;
use qswitch_core::learn::{
    boundary_grid, generate_dataset, train_restarts, ReUploading, TEST_SEED_OFFSET,
};

use super::three_switch::{prediction_table, training_config, training_tables, BOUNDARY_SIDE};
use crate::config::ExperimentConfig;
use crate::record::{Check, Outcome};

/// Trains the two-layer fixed-order re-uploading classifier.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let summary = train_restarts(&ReUploading, &training_config(cfg), cfg.restarts)?;
    let best = summary.best_run();
    let mut out = Outcome::default();
    out.metric("train_accuracy", best.train_accuracy);
    out.metric("test_accuracy", summary.test_accuracy);
    out.metric("evaluations", best.evaluations as f64);
    out.metric("selected_restart", summary.best as f64);
    out.checks.push(Check::between(
        "test accuracy",
        summary.test_accuracy,
        0.65,
        0.85,
    ));
    out.params.insert("model".into(), best.params.clone());
    out.tables.extend(training_tables(&summary));

    let train_set = generate_dataset(cfg.n_train, cfg.seed);
    let test_set = generate_dataset(cfg.n_train, cfg.seed.wrapping_add(TEST_SEED_OFFSET));
    out.tables.push(prediction_table(
        "train",
        &ReUploading,
        &best.params,
        &train_set,
    )?);
    out.tables.push(prediction_table(
        "test",
        &ReUploading,
        &best.params,
        &test_set,
    )?);
    out.tables.push(prediction_table(
        "boundary",
        &ReUploading,
        &best.params,
        &boundary_grid(BOUNDARY_SIDE),
    )?);
    Ok(out)
}
