use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{classify, generate_dataset, LabeledSample};
use super::model::{ClassifierModel, ModelParams};
use crate::error::{invalid, Error, Result};

/// Offset between the training and the test dataset seeds.
pub const TEST_SEED_OFFSET: u64 = 1_000_003;

/// Anything that maps a flat parameter vector and samples to expectation values.
pub trait Classifier: Sync {
    fn param_count(&self) -> usize;
    fn expectations(&self, params: &[f64], samples: &[LabeledSample]) -> Result<Vec<f64>>;
}

impl Classifier for ClassifierModel {
    fn param_count(&self) -> usize {
        self.mode().param_count()
    }

    fn expectations(&self, params: &[f64], samples: &[LabeledSample]) -> Result<Vec<f64>> {
        let p = ModelParams::from_slice(self.mode(), params)?;
        ClassifierModel::expectations(self, &p, samples)
    }
}

/// Fraction of samples whose classified output matches the label.
pub fn accuracy(model: &dyn Classifier, params: &[f64], samples: &[LabeledSample]) -> Result<f64> {
    if samples.is_empty() {
        return invalid("accuracy of an empty dataset");
    }
    let e = model.expectations(params, samples)?;
    let mut correct = 0usize;
    for (s, &v) in samples.iter().zip(&e) {
        if classify(v)? == s.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / samples.len() as f64)
}

/// Quantity minimised during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Minus the training accuracy.
    #[default]
    Accuracy,
    /// Mean of `max(0, 1 − y·e)`.
    Hinge,
    /// Mean of the logistic step `1 / (1 + exp(y·e / τ))` at
    /// τ = [`SMOOTH_TEMPERATURE`], a differentiable stand-in for the error rate.
    Smooth,
}

pub const SMOOTH_TEMPERATURE: f64 = 0.1;

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Accuracy, Objective::Hinge, Objective::Smooth];

    pub fn name(self) -> &'static str {
        match self {
            Objective::Accuracy => "accuracy",
            Objective::Hinge => "hinge",
            Objective::Smooth => "smooth",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown objective `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Seed of the training dataset; also the base of the start-point draw.
    pub seed: u64,
    /// Selects an independent start point for the same dataset.
    pub restart: u64,
    pub n_train: usize,
    /// Maximum number of objective evaluations.
    pub budget: usize,
    /// Start point; drawn uniformly from `[−π, π]` when absent.
    pub initial: Option<Vec<f64>>,
    pub objective: Objective,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restart: 0,
            n_train: 200,
            budget: 2000,
            initial: None,
            objective: Objective::Accuracy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub params: Vec<f64>,
    pub train_accuracy: f64,
    pub best_objective: f64,
    pub evaluations: usize,
    /// Best objective seen after each evaluation.
    pub trace: Vec<f64>,
}

/// Uniform start point in `[−π, π]^n`, one ChaCha stream per restart.
pub fn initial_params(n: usize, seed: u64, restart: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart + 1);
    (0..n).map(|_| rng.random_range(-PI..PI)).collect()
}

fn objective_value(
    model: &dyn Classifier,
    objective: Objective,
    params: &[f64],
    samples: &[LabeledSample],
) -> Result<f64> {
    match objective {
        Objective::Accuracy => Ok(-accuracy(model, params, samples)?),
        Objective::Hinge => {
            let e = model.expectations(params, samples)?;
            let total: f64 = samples
                .iter()
                .zip(&e)
                .map(|(s, &v)| (1.0 - f64::from(s.label) * v).max(0.0))
                .sum();
            Ok(total / samples.len() as f64)
        }
        Objective::Smooth => {
            let e = model.expectations(params, samples)?;
            let total: f64 = samples
                .iter()
                .zip(&e)
                .map(|(s, &v)| 1.0 / (1.0 + (f64::from(s.label) * v / SMOOTH_TEMPERATURE).exp()))
                .sum();
            Ok(total / samples.len() as f64)
        }
    }
}

struct Progress {
    evaluations: usize,
    best: f64,
    best_params: Vec<f64>,
    trace: Vec<f64>,
    error: Option<Error>,
}

/// Runs COBYLA on the configured objective and returns the best point seen.
pub fn train(model: &dyn Classifier, cfg: &TrainConfig) -> Result<TrainResult> {
    if cfg.budget == 0 {
        return invalid("training budget must be positive");
    }
    if cfg.n_train == 0 {
        return invalid("training set must be nonempty");
    }
    let n = model.param_count();
    let x0 = match &cfg.initial {
        Some(v) if v.len() != n => {
            return invalid(format!(
                "initial point has {} parameters, model takes {n}",
                v.len()
            ))
        }
        Some(v) => v.clone(),
        None => initial_params(n, cfg.seed, cfg.restart),
    };
    let samples = generate_dataset(cfg.n_train, cfg.seed);

    let progress = RefCell::new(Progress {
        evaluations: 0,
        best: f64::INFINITY,
        best_params: x0.clone(),
        trace: Vec::with_capacity(cfg.budget),
        error: None,
    });
    let func = |x: &[f64], _: &mut ()| -> f64 {
        let mut p = progress.borrow_mut();
        if p.error.is_some() || p.evaluations >= cfg.budget {
            return f64::INFINITY;
        }
        p.evaluations += 1;
        match objective_value(model, cfg.objective, x, &samples) {
            Ok(v) => {
                if v < p.best {
                    p.best = v;
                    p.best_params = x.to_vec();
                }
                let best = p.best;
                p.trace.push(best);
                v
            }
            Err(e) => {
                p.error = Some(e);
                f64::INFINITY
            }
        }
    };
    let bounds = vec![(-4.0 * PI, 4.0 * PI); n];
    let cons: Vec<&dyn cobyla::Func<()>> = Vec::new();
    // COBYLA settles on a plateau of the piecewise-constant accuracy long
    // before the budget is spent, so it is relaunched from the best point
    // until a round brings no improvement.
    loop {
        let (start, best_before, remaining) = {
            let p = progress.borrow();
            (p.best_params.clone(), p.best, cfg.budget - p.evaluations)
        };
        if remaining == 0 {
            break;
        }
        let stop = cobyla::StopTols {
            xtol_abs: vec![1e-6; n],
            ..cobyla::StopTols::default()
        };
        let outcome = cobyla::minimize(
            func,
            &start,
            &bounds,
            &cons,
            (),
            remaining,
            cobyla::RhoBeg::All(0.5),
            Some(stop),
        );
        let p = progress.borrow();
        if p.error.is_some() {
            break;
        }
        if let Err((status, _, _)) = outcome {
            if p.evaluations == 0 {
                return Err(Error::Optimizer(format!("{status:?}")));
            }
        }
        if p.best >= best_before {
            break;
        }
    }
    let p = progress.into_inner();
    if let Some(e) = p.error {
        return Err(e);
    }
    let train_accuracy = accuracy(model, &p.best_params, &samples)?;
    Ok(TrainResult {
        params: p.best_params,
        train_accuracy,
        best_objective: p.best,
        evaluations: p.evaluations,
        trace: p.trace,
    })
}

/// Independent restarts on one training set, the winner chosen by training
/// accuracy and scored on a fresh test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub runs: Vec<TrainResult>,
    pub best: usize,
    pub test_seed: u64,
    pub test_accuracy: f64,
}

impl RestartSummary {
    pub fn best_run(&self) -> &TrainResult {
        &self.runs[self.best]
    }
}

pub fn train_restarts(
    model: &dyn Classifier,
    cfg: &TrainConfig,
    restarts: usize,
) -> Result<RestartSummary> {
    if restarts == 0 {
        return invalid("at least one restart is required");
    }
    let runs = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let cfg = TrainConfig {
                restart: r,
                initial: if r == 0 { cfg.initial.clone() } else { None },
                ..cfg.clone()
            };
            train(model, &cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let best = runs.iter().enumerate().fold(0, |b, (i, r)| {
        if r.train_accuracy > runs[b].train_accuracy {
            i
        } else {
            b
        }
    });
    let test_seed = cfg.seed.wrapping_add(TEST_SEED_OFFSET);
    let test = generate_dataset(cfg.n_train, test_seed);
    let test_accuracy = accuracy(model, &runs[best].params, &test)?;
    Ok(RestartSummary {
        runs,
        best,
        test_seed,
        test_accuracy,
    })
}
