use std::sync::Arc;

use super::series::{row_sum_norm, ModelFunction};
use crate::error::{invalid, Result};
use crate::qcore::{pauli_z, rx, ComplexMatrix, EncodingGenerator, StateVector, C64};
use crate::switch::{
    all_ones_weights, diagonal_weights, order_observable, ControlPrep, Permutation, SwitchLayout,
    SwitchPipeline,
};

/// How the order of a switch is controlled.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderControl {
    Fixed(Permutation),
    /// Uniform classical mixture of every order.
    Classical,
    /// Uniform coherent superposition of every order.
    Quantum,
}

/// The single-qubit 2-switch of `RX(x)` (gate 0) and a variational gate
/// (gate 1), started from `|0>` and measured with `σ_z`.
///
/// The identity order applies `RX(x)` first. Fixed and classical control
/// read `Σ_i |i><i| ⊗ σ_z`; quantum control reads `|+><+| ⊗ σ_z`.
#[derive(Debug, Clone)]
pub struct TwoSwitch {
    pipeline: SwitchPipeline,
    classical_obs: ComplexMatrix,
    quantum_obs: ComplexMatrix,
    off_diagonal_obs: ComplexMatrix,
}

impl TwoSwitch {
    pub fn new() -> Result<Self> {
        let layout = SwitchLayout::new(2, 1, false)?;
        let z = pauli_z();
        let ones = all_ones_weights(2);
        let off_diagonal = ones.sub(&diagonal_weights(2))?;
        Ok(Self {
            classical_obs: order_observable(&layout, &diagonal_weights(2), &z)?,
            quantum_obs: order_observable(&layout, &ones.scale(C64::new(0.5, 0.0)), &z)?,
            off_diagonal_obs: order_observable(&layout, &off_diagonal, &z)?,
            pipeline: SwitchPipeline::new(layout)?,
        })
    }

    fn run(
        &self,
        prep: &ControlPrep,
        variational: &ComplexMatrix,
        x: f64,
        obs: &ComplexMatrix,
    ) -> Result<f64> {
        let gates = [rx(x), variational.clone()];
        self.pipeline
            .run(&gates, prep, &StateVector::zero(1)?)?
            .expectation(obs)
    }

    pub fn output(
        &self,
        control: &OrderControl,
        variational: &ComplexMatrix,
        x: f64,
    ) -> Result<f64> {
        let layout = self.pipeline.layout();
        match control {
            OrderControl::Fixed(p) => self.run(
                &ControlPrep::BasisOrder(p.clone()),
                variational,
                x,
                &self.classical_obs,
            ),
            OrderControl::Classical => self.run(
                &ControlPrep::uniform_mixture(layout),
                variational,
                x,
                &self.classical_obs,
            ),
            OrderControl::Quantum => self.run(
                &ControlPrep::uniform_superposition(layout),
                variational,
                x,
                &self.quantum_obs,
            ),
        }
    }

    /// `2 Re <ψ_{[1,0]}| σ_z |ψ_{[0,1]}>`, read off the switch through the
    /// off-diagonal part of the order observable.
    pub fn cross_term(&self, variational: &ComplexMatrix, x: f64) -> Result<f64> {
        let prep = ControlPrep::uniform_superposition(self.pipeline.layout());
        Ok(2.0 * self.run(&prep, variational, x, &self.off_diagonal_obs)?)
    }

    pub fn function(&self, control: OrderControl, variational: ComplexMatrix) -> ModelFunction {
        let model = self.clone();
        ModelFunction::new(1.0, move |x| model.output(&control, &variational, x))
    }
}

/// One gate of a [`SwitchModel`].
#[derive(Debug, Clone)]
pub enum SwitchGate {
    /// `exp(-ixH)` of the model's encoding generator.
    Encoding,
    Fixed(ComplexMatrix),
}

/// `x ↦ <O>` for an N-switch whose gates are either fixed or the encoding
/// gate evaluated at `x`.
#[derive(Debug, Clone)]
pub struct SwitchModel {
    pipeline: SwitchPipeline,
    encoding: EncodingGenerator,
    gates: Vec<SwitchGate>,
    prep: ControlPrep,
    target_in: StateVector,
    observable: Arc<ComplexMatrix>,
}

impl SwitchModel {
    pub fn new(
        layout: SwitchLayout,
        encoding: EncodingGenerator,
        gates: Vec<SwitchGate>,
        prep: ControlPrep,
        target_in: StateVector,
        observable: Arc<ComplexMatrix>,
    ) -> Result<Self> {
        let d = 1usize << layout.n_target_qubits();
        if gates.len() != layout.n_gates() {
            return invalid(format!(
                "{} gates for a {}-switch",
                gates.len(),
                layout.n_gates()
            ));
        }
        if encoding.dim() != d {
            return invalid("encoding generator does not act on the target system");
        }
        for g in &gates {
            if let SwitchGate::Fixed(m) = g {
                if m.rows() != d || m.cols() != d {
                    return invalid("fixed gate does not act on the target system");
                }
            }
        }
        let full = 1usize << layout.total_qubits();
        if observable.rows() != full || observable.cols() != full {
            return invalid("observable does not span the switch register");
        }
        prep.validate(&layout)?;
        Ok(Self {
            pipeline: SwitchPipeline::new(layout)?,
            encoding,
            gates,
            prep,
            target_in,
            observable,
        })
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let g = self.encoding.evolution(x);
        let mats: Vec<ComplexMatrix> = self
            .gates
            .iter()
            .map(|gate| match gate {
                SwitchGate::Encoding => g.clone(),
                SwitchGate::Fixed(m) => m.clone(),
            })
            .collect();
        self.pipeline
            .run(&mats, &self.prep, &self.target_in)?
            .expectation(&self.observable)
    }

    /// The model as a [`ModelFunction`], bounded by the observable's largest
    /// absolute row sum.
    pub fn into_function(self) -> ModelFunction {
        let bound = row_sum_norm(&self.observable);
        ModelFunction::new(bound, move |x| self.evaluate(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{rz, u3};

    #[test]
    fn two_switch_rz_cases() {
        let ts = TwoSwitch::new().unwrap();
        for &theta in &[0.0, 0.9, -2.2] {
            for &x in &[-1.0, 0.0, 0.5, 2.5] {
                for control in [
                    OrderControl::Fixed(Permutation::identity(2)),
                    OrderControl::Fixed(Permutation::new(vec![1, 0]).unwrap()),
                    OrderControl::Classical,
                ] {
                    assert!((ts.output(&control, &rz(theta), x).unwrap() - x.cos()).abs() < 1e-12);
                }
                let q = ts.output(&OrderControl::Quantum, &rz(theta), x).unwrap();
                let expected = ((3.0 + theta.cos()) * x.cos() + 1.0 - theta.cos()) / 4.0;
                assert!((q - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quantum_output_decomposes() {
        let ts = TwoSwitch::new().unwrap();
        let v = u3(0.7, -1.2, 0.4);
        for &x in &[-0.4, 1.3] {
            let f0 = ts
                .output(&OrderControl::Fixed(Permutation::identity(2)), &v, x)
                .unwrap();
            let f1 = ts
                .output(
                    &OrderControl::Fixed(Permutation::new(vec![1, 0]).unwrap()),
                    &v,
                    x,
                )
                .unwrap();
            let cross = ts.cross_term(&v, x).unwrap();
            let q = ts.output(&OrderControl::Quantum, &v, x).unwrap();
            assert!((q - (f0 + f1 + cross) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn switch_model_with_one_order_matches_plain_circuit() {
        let layout = SwitchLayout::new(2, 1, false).unwrap();
        let obs = order_observable(&layout, &diagonal_weights(2), &pauli_z()).unwrap();
        let v = u3(0.3, 0.8, -0.5);
        let model = SwitchModel::new(
            layout,
            EncodingGenerator::rx(),
            vec![SwitchGate::Fixed(v.clone()), SwitchGate::Encoding],
            ControlPrep::BasisOrder(Permutation::identity(2)),
            StateVector::zero(1).unwrap(),
            Arc::new(obs),
        )
        .unwrap();
        for &x in &[0.2, -1.7] {
            let direct = StateVector::zero(1)
                .unwrap()
                .apply_matrix(&rx(x).matmul(&v).unwrap(), &[0])
                .unwrap()
                .expectation(&pauli_z())
                .unwrap();
            assert!((model.evaluate(x).unwrap() - direct).abs() < 1e-12);
        }
    }
}
