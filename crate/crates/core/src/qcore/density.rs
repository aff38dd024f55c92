use super::gate::{check_targets, local_offsets};
use super::matrix::ComplexMatrix;
use super::state::StateVector;
use super::{C64, ZERO};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.rows().is_power_of_two() {
            return invalid("density matrix must be square with power-of-two dimension");
        }
        if !matrix.is_hermitian(1e-10) {
            return invalid("density matrix is not Hermitian");
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return invalid(format!("density matrix trace is {tr}, expected 1"));
        }
        let rho = Self {
            n_qubits: matrix.rows().trailing_zeros() as usize,
            matrix,
        };
        if let Some(&min) = rho.eigenvalues()?.first() {
            if min < -1e-9 {
                return invalid(format!("density matrix has negative eigenvalue {min:e}"));
            }
        }
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Self {
        Self {
            n_qubits: state.n_qubits(),
            matrix: ComplexMatrix::outer(state.amplitudes(), state.amplitudes()),
        }
    }

    /// `Σ p_k |ψ_k><ψ_k|`; the weights must be a probability vector.
    pub fn mixture(branches: &[(f64, StateVector)]) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return invalid("mixture of zero states");
        };
        if branches
            .iter()
            .any(|(p, s)| *p < 0.0 || s.n_qubits() != first.n_qubits())
        {
            return invalid("mixture weights must be non-negative over equal registers");
        }
        let total: f64 = branches.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return invalid(format!("mixture weights sum to {total}"));
        }
        let dim = first.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (p, s) in branches {
            let a = s.amplitudes();
            for i in 0..dim {
                if a[i] == ZERO {
                    continue;
                }
                for j in 0..dim {
                    m[(i, j)] += *p * a[i] * a[j].conj();
                }
            }
        }
        Ok(Self {
            n_qubits: first.n_qubits(),
            matrix: m,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Diagonal in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.matrix.rows())
            .map(|i| self.matrix[(i, i)].re)
            .collect()
    }

    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let n = m.rows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        acc
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.matrix.hermitian_eigen()?.0)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        Ok(self.eigenvalues()?.into_iter().filter(|&v| v > tol).count())
    }

    /// `Tr(ρ O)`
    pub fn expectation(&self, obs: &ComplexMatrix) -> Result<f64> {
        if obs.rows() != self.matrix.rows() || obs.cols() != self.matrix.cols() {
            return invalid("observable dimension does not match the density matrix");
        }
        if !obs.is_hermitian(1e-10) {
            return invalid("observable is not Hermitian");
        }
        let n = obs.rows();
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * obs[(j, i)];
            }
        }
        Ok(acc.re)
    }

    /// Partial trace keeping `keep` (in that order, `keep[0]` lowest).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (offsets, rest_offsets) = split_offsets(keep, self.n_qubits)?;
        let k = offsets.len();
        let mut out = ComplexMatrix::zeros(k, k);
        for &r in &rest_offsets {
            for (a, &oa) in offsets.iter().enumerate() {
                for (b, &ob) in offsets.iter().enumerate() {
                    out[(a, b)] += self.matrix[(oa | r, ob | r)];
                }
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            matrix: out,
        })
    }
}

fn split_offsets(keep: &[usize], n_qubits: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return invalid("reduced density needs at least one kept qubit");
    }
    check_targets(keep, Some(n_qubits))?;
    let rest: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
    Ok((local_offsets(keep), local_offsets(&rest)))
}

/// Reduced state of `keep` after tracing out every other qubit.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let (offsets, rest_offsets) = split_offsets(keep, state.n_qubits())?;
    let amps = state.amplitudes();
    let k = offsets.len();
    let mut out = ComplexMatrix::zeros(k, k);
    let mut block = vec![ZERO; k];
    for &r in &rest_offsets {
        for (slot, &o) in block.iter_mut().zip(&offsets) {
            *slot = amps[o | r];
        }
        for a in 0..k {
            if block[a] == ZERO {
                continue;
            }
            for b in 0..k {
                out[(a, b)] += block[a] * block[b].conj();
            }
        }
    }
    Ok(DensityMatrix {
        n_qubits: keep.len(),
        matrix: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c, ONE};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> StateVector {
        StateVector::from_amplitudes(vec![ONE, ONE]).unwrap()
    }

    #[test]
    fn product_state_keeps_factor() {
        // qubit 0 in |0>, qubit 1 in |+>
        let psi = StateVector::zero(1).unwrap().tensor(&plus()).unwrap();
        let rho = reduced_density(&psi, &[1]).unwrap();
        let expected = DensityMatrix::from_pure(&plus());
        assert!(rho.matrix().max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn bell_state_is_maximally_mixed() {
        let bell = StateVector::from_amplitudes(vec![ONE, ZERO, ZERO, ONE]).unwrap();
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        for q in 0..2 {
            let rho = reduced_density(&bell, &[q]).unwrap();
            assert!(rho.matrix().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn keep_all_is_projector() {
        let psi = StateVector::from_amplitudes(vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.0, 0.7), ONE])
            .unwrap();
        let rho = reduced_density(&psi, &[0, 1]).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(DensityMatrix::from_pure(&psi).matrix())
                < 1e-15
        );
        assert_eq!(rho.rank(1e-8).unwrap(), 1);
        // Reordered keep list transposes the qubit roles.
        let swapped = reduced_density(&psi, &[1, 0]).unwrap();
        assert!((swapped.matrix()[(1, 1)] - rho.matrix()[(2, 2)]).norm() < 1e-15);
    }

    #[test]
    fn empty_keep_is_rejected() {
        let psi = StateVector::zero(2).unwrap();
        assert!(reduced_density(&psi, &[]).is_err());
        assert!(reduced_density(&psi, &[2]).is_err());
        assert!(reduced_density(&psi, &[0, 0]).is_err());
    }

    #[test]
    fn validated_constructor() {
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(DensityMatrix::new(half.clone()).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let negative = ComplexMatrix::diagonal(&[c(1.5, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(negative).is_err());
    }

    #[test]
    fn mixture_matches_reduce() {
        let a = StateVector::zero(2).unwrap();
        let b = StateVector::from_amplitudes(vec![
            ZERO,
            c(FRAC_1_SQRT_2, 0.0),
            ZERO,
            c(0.0, FRAC_1_SQRT_2),
        ])
        .unwrap();
        let rho = DensityMatrix::mixture(&[(0.25, a.clone()), (0.75, b.clone())]).unwrap();
        let reduced = rho.reduce(&[0]).unwrap();
        let direct = 0.25 * reduced_density(&a, &[0]).unwrap().matrix()[(1, 1)].re
            + 0.75 * reduced_density(&b, &[0]).unwrap().matrix()[(1, 1)].re;
        assert!((reduced.matrix()[(1, 1)].re - direct).abs() < 1e-15);
        assert!(DensityMatrix::mixture(&[(0.5, a)]).is_err());
    }
}
