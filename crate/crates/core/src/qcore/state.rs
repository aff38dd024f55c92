use super::gate::GateSpec;
use super::matrix::ComplexMatrix;
use super::operator::RegisterOperator;
use super::{C64, MAX_QUBITS, ONE, ZERO};
use crate::error::{invalid, Result};

/// Pure state of an `n`-qubit register. Qubit 0 is the least-significant bit
/// of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0>`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return invalid(format!(
                "basis index {index} out of range for dimension {dim}"
            ));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Normalizes the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        check_size(n_qubits)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return invalid("state amplitudes must have a finite nonzero norm");
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn swap_amplitudes(&mut self, other: &mut Vec<C64>) {
        debug_assert_eq!(other.len(), self.amps.len());
        std::mem::swap(&mut self.amps, other);
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return invalid("inner product between registers of different size");
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|²`
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `high ⊗ self`: `self` keeps qubits `0..n`, `high` is placed above it.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        check_size(self.n_qubits + high.n_qubits)?;
        let mut amps = Vec::with_capacity(self.dim() * high.dim());
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| h * l));
        }
        Ok(Self::from_raw(self.n_qubits + high.n_qubits, amps))
    }

    pub fn apply_gate(&self, spec: &GateSpec) -> Result<StateVector> {
        spec.validate(Some(self.n_qubits))?;
        RegisterOperator::from_gate(spec)?.apply(self)
    }

    pub fn apply_matrix(&self, matrix: &ComplexMatrix, targets: &[usize]) -> Result<StateVector> {
        RegisterOperator::new(matrix.clone(), targets.to_vec())?.apply(self)
    }

    /// `<ψ|O|ψ>` for a Hermitian `O` on the whole register.
    pub fn expectation(&self, obs: &ComplexMatrix) -> Result<f64> {
        if obs.rows() != self.dim() || obs.cols() != self.dim() {
            return invalid(format!(
                "observable is {}x{}, state dimension is {}",
                obs.rows(),
                obs.cols(),
                self.dim()
            ));
        }
        if !obs.is_hermitian(1e-10) {
            return invalid("observable is not Hermitian");
        }
        let raw: C64 = obs
            .mul_vec(&self.amps)?
            .iter()
            .zip(&self.amps)
            .map(|(o, a)| a.conj() * o)
            .sum();
        debug_assert!(raw.im.abs() < 1e-9, "imaginary residue {}", raw.im);
        Ok(raw.re)
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Expectation of a Hermitian observable; see [`StateVector::expectation`].
pub fn expectation(state: &StateVector, obs: &ComplexMatrix) -> Result<f64> {
    state.expectation(obs)
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return invalid(format!("amplitude count {len} is not a power of two"));
    }
    Ok(len.trailing_zeros() as usize)
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return invalid(format!(
            "{n_qubits} qubits exceeds the dense limit of {MAX_QUBITS}"
        ));
    }
    Ok(())
}
