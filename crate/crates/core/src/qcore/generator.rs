use super::gate::pauli_x;
use super::matrix::ComplexMatrix;
use super::{c, C64};
use crate::error::{invalid, Result};

/// Hermitian generator `H` of an encoding gate `g(x) = exp(-i x H)`, kept
/// together with its spectral decomposition `H = Q diag(λ) Q†`.
#[derive(Debug, Clone)]
pub struct EncodingGenerator {
    hermitian: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EncodingGenerator {
    pub fn new(hermitian: ComplexMatrix) -> Result<Self> {
        if !hermitian.is_square() {
            return invalid("generator must be square");
        }
        if !hermitian.is_hermitian(1e-10) {
            return invalid("generator is not Hermitian");
        }
        let (eigenvalues, eigenvectors) = hermitian.hermitian_eigen()?;
        Ok(Self {
            hermitian,
            eigenvalues,
            eigenvectors,
        })
    }

    /// `σ_x / 2`, the generator of `RX`.
    pub fn rx() -> Self {
        Self::new(pauli_x().scale(c(0.5, 0.0))).expect("σ_x/2 is Hermitian")
    }

    /// Generator of `layers` independent copies, `Σ_k 1⊗…⊗H⊗…⊗1`.
    pub fn repeated(&self, layers: usize) -> Result<Self> {
        if layers == 0 {
            return invalid("at least one layer is required");
        }
        let d = self.dim();
        let mut total = ComplexMatrix::zeros(d.pow(layers as u32), d.pow(layers as u32));
        for k in 0..layers {
            let mut term = ComplexMatrix::identity(1);
            for j in 0..layers {
                let factor = if j == k {
                    self.hermitian.clone()
                } else {
                    ComplexMatrix::identity(d)
                };
                term = term.kron(&factor);
            }
            total = total.add(&term)?;
        }
        Self::new(total)
    }

    pub fn dim(&self) -> usize {
        self.hermitian.rows()
    }

    pub fn hermitian(&self) -> &ComplexMatrix {
        &self.hermitian
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors, matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// `exp(-i x H)` through the eigendecomposition.
    pub fn evolution(&self, x: f64) -> ComplexMatrix {
        let q = &self.eigenvectors;
        let phases: Vec<C64> = self
            .eigenvalues
            .iter()
            .map(|&l| C64::from_polar(1.0, -x * l))
            .collect();
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|k| q[(i, k)] * phases[k] * q[(j, k)].conj())
                .sum()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gate::rx;

    #[test]
    fn rx_generator_reproduces_rx() {
        let g = EncodingGenerator::rx();
        assert_eq!(g.eigenvalues().len(), 2);
        assert!((g.eigenvalues()[0] + 0.5).abs() < 1e-12);
        for &x in &[-1.3, 0.0, 0.4, 2.9] {
            assert!(g.evolution(x).max_abs_diff(&rx(x)) < 1e-12);
        }
    }

    #[test]
    fn repeated_eigenvalues_are_pair_sums() {
        let g = EncodingGenerator::rx().repeated(2).unwrap();
        let expected = [-1.0, 0.0, 0.0, 1.0];
        for (a, b) in g.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(EncodingGenerator::rx().repeated(0).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(EncodingGenerator::new(m).is_err());
    }
}
