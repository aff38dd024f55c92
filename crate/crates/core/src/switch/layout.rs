use std::ops::Range;

use super::perm::factorial;
use crate::error::{Error, Result};
use crate::qcore::MAX_QUBITS;

/// Qubit allocation of an N-switch register.
///
/// From qubit 0 upwards: target `t`, working systems `t_0 … t_{N-1}`,
/// control `c`, history `C_H` (optional) and the order ancilla `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchLayout {
    n_gates: usize,
    n_target_qubits: usize,
    n_alpha: usize,
    n_control: usize,
    include_history: bool,
}

impl SwitchLayout {
    pub fn new(n_gates: usize, n_target_qubits: usize, include_history: bool) -> Result<Self> {
        if !(2..=4).contains(&n_gates) {
            return Err(Error::Configuration(format!(
                "an N-switch needs 2 <= N <= 4 gates, got {n_gates}"
            )));
        }
        if n_target_qubits == 0 {
            return Err(Error::Configuration(
                "target system needs at least one qubit".into(),
            ));
        }
        let layout = Self {
            n_gates,
            n_target_qubits,
            n_alpha: ceil_log2(factorial(n_gates)),
            n_control: ceil_log2(n_gates),
            include_history,
        };
        if layout.total_qubits() > MAX_QUBITS {
            return Err(Error::Configuration(format!(
                "layout needs {} qubits, more than the dense limit of {MAX_QUBITS}",
                layout.total_qubits()
            )));
        }
        Ok(layout)
    }

    /// The 9-qubit single-target 3-switch without history register.
    pub fn three_switch() -> Self {
        Self::new(3, 1, false).expect("valid layout")
    }

    pub fn n_gates(&self) -> usize {
        self.n_gates
    }

    pub fn n_target_qubits(&self) -> usize {
        self.n_target_qubits
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_control(&self) -> usize {
        self.n_control
    }

    pub fn include_history(&self) -> bool {
        self.include_history
    }

    pub fn n_history(&self) -> usize {
        if self.include_history {
            self.n_gates
        } else {
            0
        }
    }

    pub fn total_qubits(&self) -> usize {
        self.n_target_qubits * (self.n_gates + 1) + self.n_alpha + self.n_control + self.n_history()
    }

    /// Number of orders, `|E| = N!`.
    pub fn n_orders(&self) -> usize {
        factorial(self.n_gates)
    }

    /// `|R| = 2^{n_α} − N!`
    pub fn n_redundant_orders(&self) -> usize {
        (1 << self.n_alpha) - self.n_orders()
    }

    /// `|c_R| = 2^{n_c} − N`
    pub fn n_redundant_controls(&self) -> usize {
        (1 << self.n_control) - self.n_gates
    }

    pub fn is_effective_order(&self, ancilla_value: usize) -> bool {
        ancilla_value < self.n_orders()
    }

    pub fn is_effective_control(&self, control_value: usize) -> bool {
        control_value < self.n_gates
    }

    pub fn target_range(&self) -> Range<usize> {
        0..self.n_target_qubits
    }

    pub fn working_range(&self, k: usize) -> Range<usize> {
        assert!(k < self.n_gates, "working system {k} out of range");
        let start = self.n_target_qubits * (k + 1);
        start..start + self.n_target_qubits
    }

    pub fn control_range(&self) -> Range<usize> {
        let start = self.n_target_qubits * (self.n_gates + 1);
        start..start + self.n_control
    }

    pub fn history_range(&self) -> Range<usize> {
        let start = self.control_range().end;
        start..start + self.n_history()
    }

    pub fn ancilla_range(&self) -> Range<usize> {
        let start = self.history_range().end;
        start..start + self.n_alpha
    }

    pub fn target_qubits(&self) -> Vec<usize> {
        self.target_range().collect()
    }

    pub fn working_qubits(&self, k: usize) -> Vec<usize> {
        self.working_range(k).collect()
    }

    pub fn control_qubits(&self) -> Vec<usize> {
        self.control_range().collect()
    }

    pub fn history_qubits(&self) -> Vec<usize> {
        self.history_range().collect()
    }

    pub fn ancilla_qubits(&self) -> Vec<usize> {
        self.ancilla_range().collect()
    }

    /// Everything except the target: working systems, control, history and ancilla.
    pub fn auxiliary_qubits(&self) -> Vec<usize> {
        (self.n_target_qubits..self.total_qubits()).collect()
    }
}

fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}
