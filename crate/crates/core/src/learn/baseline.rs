use super::dataset::LabeledSample;
use super::model::slot_gates;
use super::train::Classifier;
use crate::error::{invalid, Result};
use crate::qcore::{pauli_z, StateVector, ONE, ZERO};

/// Parameters of the two-layer re-uploading classifier.
pub const REUPLOAD_PARAMS: usize = 6;

/// `<σ_z>` after `U(p₄,p₅,p₆) RY(x2) RZ(x1) U(p₁,p₂,p₃) RY(x2) RZ(x1) |0>`.
pub fn re_uploading_baseline(params: &[f64], x1: f64, x2: f64) -> Result<f64> {
    if params.len() != REUPLOAD_PARAMS {
        return invalid(format!(
            "re-uploading takes {REUPLOAD_PARAMS} parameters, got {}",
            params.len()
        ));
    }
    let mut psi = vec![ONE, ZERO];
    for layer in params.chunks_exact(3) {
        for g in slot_gates(&[layer[0], layer[1], layer[2]], x1, x2) {
            psi = g.mul_vec(&psi)?;
        }
    }
    StateVector::from_amplitudes(psi)?.expectation(&pauli_z())
}

/// [`re_uploading_baseline`] as a trainable [`Classifier`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ReUploading;

impl Classifier for ReUploading {
    fn param_count(&self) -> usize {
        REUPLOAD_PARAMS
    }

    fn expectations(&self, params: &[f64], samples: &[LabeledSample]) -> Result<Vec<f64>> {
        samples
            .iter()
            .map(|s| re_uploading_baseline(params, s.x1, s.x2))
            .collect()
    }
}
