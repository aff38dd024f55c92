//! Statevector simulation of quantum N-switch circuits.
//!
//! [`qcore`] holds the dense simulator, [`switch`] builds and runs the
//! order-controlled pipeline, [`spectra`] analyses model outputs as Fourier
//! series and [`learn`] runs the order-controlled classification experiments.

pub mod error;
pub mod learn;
pub mod qcore;
pub mod selftest;
pub mod spectra;
pub mod switch;

pub use error::{Error, Result};
pub use qcore::{ComplexMatrix, DensityMatrix, GateKind, GateSpec, StateVector, C64};
