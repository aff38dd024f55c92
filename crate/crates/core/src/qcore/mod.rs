//! Dense complex linear algebra, gates, pure and mixed states.
//!
//! Qubit 0 is the least-significant bit of every basis index.

mod density;
mod gate;
mod generator;
mod matrix;
mod operator;
mod state;

pub use density::{reduced_density, DensityMatrix};
pub use gate::{
    embed, gate_matrix, pauli_x, pauli_y, pauli_z, permutation_matrix, rx, ry, rz, u3, GateKind,
    GateSpec,
};
pub use generator::EncodingGenerator;
pub use matrix::{compose, ComplexMatrix};
pub use operator::RegisterOperator;
pub use state::{expectation, StateVector};

pub type C64 = num_complex::Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 14;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
