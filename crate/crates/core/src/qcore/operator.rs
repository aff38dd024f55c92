use super::gate::{check_targets, embed, gate_matrix, local_offsets, GateSpec};
use super::matrix::ComplexMatrix;
use super::state::StateVector;
use super::{C64, ZERO};
use crate::error::{invalid, Result};

/// An operator given by a dense local matrix on a list of register qubits.
///
/// The matrix is kept as built; application goes through a column-sparse copy
/// so that permutation-like operators cost one update per amplitude.
#[derive(Debug, Clone)]
pub struct RegisterOperator {
    matrix: ComplexMatrix,
    qubits: Vec<usize>,
    columns: Vec<Vec<(usize, C64)>>,
    offsets: Vec<usize>,
    mask: usize,
}

impl RegisterOperator {
    pub fn new(matrix: ComplexMatrix, qubits: Vec<usize>) -> Result<Self> {
        check_targets(&qubits, None)?;
        if !matrix.is_square() || matrix.rows() != 1 << qubits.len() {
            return invalid(format!(
                "{}x{} matrix cannot act on {} qubit(s)",
                matrix.rows(),
                matrix.cols(),
                qubits.len()
            ));
        }
        let dim = matrix.rows();
        let columns = (0..dim)
            .map(|j| {
                (0..dim)
                    .filter_map(|i| {
                        let v = matrix[(i, j)];
                        (v != ZERO).then_some((i, v))
                    })
                    .collect()
            })
            .collect();
        let offsets = local_offsets(&qubits);
        let mask = qubits.iter().map(|&q| 1usize << q).sum();
        Ok(Self {
            matrix,
            qubits,
            columns,
            offsets,
            mask,
        })
    }

    pub fn from_gate(spec: &GateSpec) -> Result<Self> {
        Self::new(gate_matrix(spec)?, spec.targets.clone())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Embeds into a dense operator on `n_qubits`.
    pub fn to_dense(&self, n_qubits: usize) -> Result<ComplexMatrix> {
        embed(&self.matrix, &self.qubits, n_qubits)
    }

    fn check_register(&self, n_qubits: usize) -> Result<()> {
        check_targets(&self.qubits, Some(n_qubits))
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_register(state.n_qubits())?;
        let mut out = vec![ZERO; state.dim()];
        self.apply_into(state.amplitudes(), &mut out);
        Ok(StateVector::from_raw(state.n_qubits(), out))
    }

    /// In-place variant; `scratch` is resized as needed and left holding the
    /// previous amplitudes.
    pub fn apply_mut(&self, state: &mut StateVector, scratch: &mut Vec<C64>) -> Result<()> {
        self.check_register(state.n_qubits())?;
        scratch.clear();
        scratch.resize(state.dim(), ZERO);
        self.apply_into(state.amplitudes(), scratch);
        state.swap_amplitudes(scratch);
        Ok(())
    }

    fn apply_into(&self, input: &[C64], out: &mut [C64]) {
        for base in (0..input.len()).filter(|b| b & self.mask == 0) {
            for (li, col) in self.columns.iter().enumerate() {
                let a = input[base | self.offsets[li]];
                if a == ZERO {
                    continue;
                }
                for &(lo, v) in col {
                    out[base | self.offsets[lo]] += v * a;
                }
            }
        }
    }

    /// `<ψ|O|ψ>` without materializing `O|ψ>`. The caller is responsible for
    /// Hermiticity; the real part is returned.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        Ok(self.sandwich(state, state)?.re)
    }

    /// `<bra|O|ket>`
    pub fn sandwich(&self, bra: &StateVector, ket: &StateVector) -> Result<C64> {
        if bra.n_qubits() != ket.n_qubits() {
            return invalid("sandwich between registers of different size");
        }
        self.check_register(ket.n_qubits())?;
        let (b, k) = (bra.amplitudes(), ket.amplitudes());
        let mut acc = ZERO;
        for base in (0..k.len()).filter(|x| x & self.mask == 0) {
            for (li, col) in self.columns.iter().enumerate() {
                let a = k[base | self.offsets[li]];
                if a == ZERO {
                    continue;
                }
                for &(lo, v) in col {
                    acc += b[base | self.offsets[lo]].conj() * v * a;
                }
            }
        }
        Ok(acc)
    }
}
