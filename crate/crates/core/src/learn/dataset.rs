use std::f64::consts::FRAC_2_PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A point of the circle-in-square task with its class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub x1: f64,
    pub x2: f64,
    pub label: i8,
}

impl LabeledSample {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self {
            x1,
            x2,
            label: true_label(x1, x2),
        }
    }
}

/// `+1` outside the circle of radius `sqrt(2/π)`, `−1` inside or on it.
pub fn true_label(x1: f64, x2: f64) -> i8 {
    if x1 * x1 + x2 * x2 - FRAC_2_PI > 0.0 {
        1
    } else {
        -1
    }
}

/// `n` points uniform on `[−1, 1]²`, deterministic in `seed`.
pub fn generate_dataset(n: usize, seed: u64) -> Vec<LabeledSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x1 = rng.random_range(-1.0..=1.0);
            let x2 = rng.random_range(-1.0..=1.0);
            LabeledSample::new(x1, x2)
        })
        .collect()
}

/// Decision rule on a model output: `+1` if `e > 0`, else `−1`.
pub fn classify(e: f64) -> Result<i8> {
    if !e.is_finite() {
        return invalid(format!("cannot classify non-finite output {e}"));
    }
    Ok(if e > 0.0 { 1 } else { -1 })
}

/// Fraction of samples labelled `+1`.
pub fn class_balance(samples: &[LabeledSample]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().filter(|s| s.label == 1).count() as f64 / samples.len() as f64
}

/// The `side × side` grid over `[−1, 1]²`, row-major in `x2` then `x1`.
pub fn boundary_grid(side: usize) -> Vec<LabeledSample> {
    let step = if side > 1 {
        2.0 / (side - 1) as f64
    } else {
        0.0
    };
    (0..side)
        .flat_map(|j| {
            (0..side)
                .map(move |i| LabeledSample::new(-1.0 + i as f64 * step, -1.0 + j as f64 * step))
        })
        .collect()
}
