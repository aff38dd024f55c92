use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::qcore::{ComplexMatrix, EncodingGenerator, C64, ZERO};

/// Frequencies closer than this are treated as the same term.
pub const FREQUENCY_TOLERANCE: f64 = 1e-6;

/// A finite Fourier series `Σ_ω c_ω e^{iωx}` with real frequencies.
///
/// Terms are kept sorted by frequency with no two frequencies closer than
/// [`FREQUENCY_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierSeries {
    terms: Vec<(f64, C64)>,
}

impl FourierSeries {
    /// Builds a series, summing coefficients whose frequencies coincide.
    pub fn new(terms: impl IntoIterator<Item = (f64, C64)>) -> Self {
        let mut raw: Vec<(f64, C64)> = terms.into_iter().collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, C64)> = Vec::with_capacity(raw.len());
        for (w, c) in raw {
            match merged.last_mut() {
                Some(last) if (w - last.0).abs() < FREQUENCY_TOLERANCE => last.1 += c,
                _ => merged.push((w, c)),
            }
        }
        for term in &mut merged {
            if term.0.abs() < FREQUENCY_TOLERANCE {
                term.0 = 0.0;
            }
        }
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[(f64, C64)] {
        &self.terms
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.0).collect()
    }

    /// Coefficient at `freq`, zero if the series has no such term.
    pub fn coefficient(&self, freq: f64) -> C64 {
        self.terms
            .iter()
            .find(|t| (t.0 - freq).abs() < FREQUENCY_TOLERANCE)
            .map_or(ZERO, |t| t.1)
    }

    /// Frequencies whose coefficient magnitude exceeds `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<f64> {
        self.terms
            .iter()
            .filter(|t| t.1.norm() > threshold)
            .map(|t| t.0)
            .collect()
    }

    pub fn evaluate(&self, x: f64) -> C64 {
        self.terms
            .iter()
            .map(|&(w, c)| c * C64::from_polar(1.0, w * x))
            .sum()
    }

    /// Largest `|c_{-ω} - conj(c_ω)|`; zero for the series of a real function.
    pub fn reality_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(w, c)| (self.coefficient(-w) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect() <= tol
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            terms: self.terms.iter().map(|&(w, c)| (w, c * factor)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).copied())
    }

    /// Largest coefficient difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
            .terms
            .iter()
            .map(|t| t.1.norm())
            .fold(0.0, f64::max)
    }

    /// Moves every term onto the nearest frequency of `spectrum`; a term
    /// further than [`FREQUENCY_TOLERANCE`] from all of them is an error.
    pub fn bin_to(&self, spectrum: &[f64]) -> Result<Self> {
        let mut binned = Vec::with_capacity(self.terms.len());
        for &(w, c) in &self.terms {
            let nearest = spectrum
                .iter()
                .copied()
                .min_by(|a, b| (a - w).abs().total_cmp(&(b - w).abs()));
            match nearest {
                Some(s) if (s - w).abs() < FREQUENCY_TOLERANCE => binned.push((s, c)),
                _ => return invalid(format!("frequency {w} lies outside the predicted spectrum")),
            }
        }
        Ok(Self::new(binned))
    }
}

/// Sorted, deduplicated eigenvalue differences `λ_k − λ_l` of a generator.
pub fn predicted_spectrum(gen: &EncodingGenerator) -> Vec<f64> {
    let ev = gen.eigenvalues();
    let mut diffs: Vec<f64> = ev
        .iter()
        .flat_map(|a| ev.iter().map(move |b| a - b))
        .collect();
    diffs.sort_by(f64::total_cmp);
    diffs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    for d in &mut diffs {
        if d.abs() < 1e-9 {
            *d = 0.0;
        }
    }
    diffs
}

type Evaluator = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A real model output `x ↦ f(x)` together with an upper bound on `|f|`.
#[derive(Clone)]
pub struct ModelFunction {
    f: Arc<Evaluator>,
    bound: f64,
}

impl ModelFunction {
    pub fn new(bound: f64, f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            bound,
        }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Evaluates `f(x)`, rejecting non-finite values and values beyond the bound.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let y = (self.f)(x)?;
        if !y.is_finite() {
            return invalid(format!("model output at x = {x} is not finite"));
        }
        if y.abs() > self.bound + 1e-9 {
            return invalid(format!(
                "model output {y} at x = {x} exceeds the bound {}",
                self.bound
            ));
        }
        Ok(y)
    }
}

impl fmt::Debug for ModelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelFunction")
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

/// Operator norm of a Hermitian matrix.
pub fn operator_norm(obs: &ComplexMatrix) -> Result<f64> {
    let (ev, _) = obs.hermitian_eigen()?;
    Ok(ev.iter().fold(0.0, |m, l| m.max(l.abs())))
}

/// Largest absolute row sum, a cheap upper bound on the operator norm.
pub fn row_sum_norm(obs: &ComplexMatrix) -> f64 {
    (0..obs.rows())
        .map(|i| obs.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
