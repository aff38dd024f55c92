use crate::error::{invalid, Result};
use crate::qcore::{reduced_density, DensityMatrix, StateVector};
use crate::switch::SwitchLayout;

fn ancilla(state: &StateVector) -> Result<Vec<usize>> {
    let layout = SwitchLayout::three_switch();
    if state.n_qubits() != layout.total_qubits() {
        return invalid(format!(
            "expected a {}-qubit 3-switch register, got {} qubits",
            layout.total_qubits(),
            state.n_qubits()
        ));
    }
    Ok(layout.ancilla_qubits())
}

/// Reduced state of the order ancilla (q6–q8) of a 3-switch register.
pub fn ancilla_density(state: &StateVector) -> Result<DensityMatrix> {
    reduced_density(state, &ancilla(state)?)
}

/// Populations of the eight ancilla basis states.
pub fn ancilla_probabilities(state: &StateVector) -> Result<Vec<f64>> {
    Ok(ancilla_density(state)?.probabilities())
}
