use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dataset::LabeledSample;
use crate::error::{invalid, Error, Result};
use crate::qcore::{
    pauli_z, ry, rz, u3, ComplexMatrix, GateSpec, RegisterOperator, StateVector, C64,
};
use crate::switch::{
    all_ones_weights, diagonal_weights, order_observable, order_observable_operator, ControlPrep,
    SwitchLayout, SwitchPipeline,
};

/// Parameters of the variational gate.
pub const GATE_PARAMS: usize = 3;
/// Parameters of the ancilla preparation block.
pub const PREP_PARAMS: usize = 9;

/// How the order of the three gates is controlled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableMode {
    /// `U · RY(x2) · RZ(x1)` on one qubit, measured with `σ_z`.
    FixedOrder,
    /// 3-switch read with `Σ_{π∈E} |π><π| ⊗ 1 ⊗ σ_z`.
    Classical,
    /// 3-switch read with `Σ_{π,π'∈E} |π><π'| ⊗ 1 ⊗ σ_z`.
    Quantum,
}

impl ObservableMode {
    pub const ALL: [ObservableMode; 3] = [
        ObservableMode::FixedOrder,
        ObservableMode::Classical,
        ObservableMode::Quantum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObservableMode::FixedOrder => "fixed",
            ObservableMode::Classical => "classical",
            ObservableMode::Quantum => "quantum",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            ObservableMode::FixedOrder => GATE_PARAMS,
            _ => GATE_PARAMS + PREP_PARAMS,
        }
    }
}

impl fmt::Display for ObservableMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObservableMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" | "fixed_order" => Ok(ObservableMode::FixedOrder),
            "classical" => Ok(ObservableMode::Classical),
            "quantum" => Ok(ObservableMode::Quantum),
            _ => invalid(format!("unknown order mode `{s}`")),
        }
    }
}

/// Trainable parameters: `(θ, φ, λ)` of the U3 gate, then the nine angles of
/// the ancilla preparation in switch modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gate: [f64; GATE_PARAMS],
    pub prep: Option<[f64; PREP_PARAMS]>,
}

impl ModelParams {
    pub fn from_slice(mode: ObservableMode, values: &[f64]) -> Result<Self> {
        if values.len() != mode.param_count() {
            return invalid(format!(
                "{mode} mode takes {} parameters, got {}",
                mode.param_count(),
                values.len()
            ));
        }
        let gate = [values[0], values[1], values[2]];
        let prep = (mode != ObservableMode::FixedOrder).then(|| {
            let mut p = [0.0; PREP_PARAMS];
            p.copy_from_slice(&values[GATE_PARAMS..]);
            p
        });
        Ok(Self { gate, prep })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.gate.to_vec();
        if let Some(p) = &self.prep {
            v.extend_from_slice(p);
        }
        v
    }

    fn check(&self, mode: ObservableMode) -> Result<()> {
        match (mode, &self.prep) {
            (ObservableMode::FixedOrder, None) => Ok(()),
            (ObservableMode::FixedOrder, Some(_)) => invalid("fixed mode has no preparation block"),
            (_, Some(_)) => Ok(()),
            (_, None) => invalid(format!("{mode} mode needs preparation parameters")),
        }
    }
}

/// The mode's observable, dense over its register and as a local operator.
#[derive(Debug, Clone)]
pub struct Observable3Switch {
    pub mode: ObservableMode,
    pub matrix: ComplexMatrix,
    local: RegisterOperator,
}

impl Observable3Switch {
    pub fn local(&self) -> &RegisterOperator {
        &self.local
    }
}

pub fn build_observable(mode: ObservableMode) -> Result<Observable3Switch> {
    let z = pauli_z();
    let layout = SwitchLayout::three_switch();
    let weights = match mode {
        ObservableMode::FixedOrder => {
            return Ok(Observable3Switch {
                mode,
                local: RegisterOperator::new(z.clone(), vec![0])?,
                matrix: z,
            })
        }
        ObservableMode::Classical => diagonal_weights(layout.n_orders()),
        ObservableMode::Quantum => all_ones_weights(layout.n_orders()),
    };
    Ok(Observable3Switch {
        mode,
        matrix: order_observable(&layout, &weights, &z)?,
        local: order_observable_operator(&layout, &weights, &z)?,
    })
}

/// Gates of the ancilla preparation: U3 on q6, q7, q8 from the nine angles,
/// then CNOTs q6→q7, q7→q8 and q6→q8.
pub fn preparation_block(layout: &SwitchLayout, prep: &[f64; PREP_PARAMS]) -> Vec<GateSpec> {
    let q = layout.ancilla_qubits();
    let mut gates: Vec<GateSpec> = q
        .iter()
        .enumerate()
        .map(|(k, &qubit)| GateSpec::u3(prep[3 * k], prep[3 * k + 1], prep[3 * k + 2], qubit))
        .collect();
    gates.push(GateSpec::cnot(q[0], q[1]));
    gates.push(GateSpec::cnot(q[1], q[2]));
    gates.push(GateSpec::cnot(q[0], q[2]));
    gates
}

/// Gate 0 = `RZ(x1)`, gate 1 = `RY(x2)`, gate 2 = `U3(θ, φ, λ)`.
pub fn slot_gates(gate: &[f64; GATE_PARAMS], x1: f64, x2: f64) -> [ComplexMatrix; 3] {
    [rz(x1), ry(x2), u3(gate[0], gate[1], gate[2])]
}

/// The single-qubit classifier in one of the three order modes.
#[derive(Debug, Clone)]
pub struct ClassifierModel {
    mode: ObservableMode,
    pipeline: SwitchPipeline,
    observable: Observable3Switch,
}

impl ClassifierModel {
    pub fn new(mode: ObservableMode) -> Result<Self> {
        Ok(Self {
            mode,
            pipeline: SwitchPipeline::new(SwitchLayout::three_switch())?,
            observable: build_observable(mode)?,
        })
    }

    /// A classifier running on the given 3-switch pipeline.
    pub fn with_pipeline(mode: ObservableMode, pipeline: SwitchPipeline) -> Result<Self> {
        if pipeline.layout() != &SwitchLayout::three_switch() {
            return invalid("the classifier needs the 9-qubit 3-switch layout");
        }
        Ok(Self {
            mode,
            pipeline,
            observable: build_observable(mode)?,
        })
    }

    pub fn mode(&self) -> ObservableMode {
        self.mode
    }

    pub fn layout(&self) -> &SwitchLayout {
        self.pipeline.layout()
    }

    pub fn observable(&self) -> &Observable3Switch {
        &self.observable
    }

    /// The register right after the ancilla preparation, before the switch.
    pub fn prepared_state(&self, params: &ModelParams) -> Result<StateVector> {
        params.check(self.mode)?;
        let prep = match &params.prep {
            Some(p) => ControlPrep::PreparationBlock(preparation_block(self.layout(), p)),
            None => return invalid("fixed mode has no switch register"),
        };
        self.pipeline.initial_state(&prep, &StateVector::zero(1)?)
    }

    /// The register after the full switch for one sample.
    pub fn final_state(&self, params: &ModelParams, x1: f64, x2: f64) -> Result<StateVector> {
        let initial = self.prepared_state(params)?;
        self.evolve(initial, &params.gate, x1, x2)
    }

    fn evolve(
        &self,
        initial: StateVector,
        gate: &[f64; GATE_PARAMS],
        x1: f64,
        x2: f64,
    ) -> Result<StateVector> {
        let slot = self.pipeline.slot_operator(&slot_gates(gate, x1, x2))?;
        self.pipeline.evolve(&slot, initial)
    }

    /// Raw expectation value `e` for one sample.
    pub fn forward(&self, params: &ModelParams, x1: f64, x2: f64) -> Result<f64> {
        Ok(self.expectations(params, &[LabeledSample::new(x1, x2)])?[0])
    }

    /// Expectation values for many samples, sharing the prepared ancilla.
    pub fn expectations(
        &self,
        params: &ModelParams,
        samples: &[LabeledSample],
    ) -> Result<Vec<f64>> {
        params.check(self.mode)?;
        if self.mode == ObservableMode::FixedOrder {
            let z = pauli_z();
            return samples
                .iter()
                .map(|s| fixed_order_expectation(&params.gate, s.x1, s.x2, &z))
                .collect();
        }
        let initial = self.prepared_state(params)?;
        samples
            .iter()
            .map(|s| {
                let out = self.evolve(initial.clone(), &params.gate, s.x1, s.x2)?;
                self.observable.local.expectation(&out)
            })
            .collect()
    }
}

fn fixed_order_expectation(
    gate: &[f64; GATE_PARAMS],
    x1: f64,
    x2: f64,
    z: &ComplexMatrix,
) -> Result<f64> {
    let [a, b, u] = slot_gates(gate, x1, x2);
    let overall = u.matmul(&b)?.matmul(&a)?;
    let psi: Vec<C64> = (0..2).map(|i| overall[(i, 0)]).collect();
    StateVector::from_amplitudes(psi)?.expectation(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names() {
        for m in ObservableMode::ALL {
            assert_eq!(m.name().parse::<ObservableMode>().unwrap(), m);
        }
        assert!("mixed".parse::<ObservableMode>().is_err());
    }

    #[test]
    fn params_roundtrip() {
        let v: Vec<f64> = (0..12).map(|k| k as f64 * 0.1).collect();
        let p = ModelParams::from_slice(ObservableMode::Quantum, &v).unwrap();
        assert_eq!(p.to_vec(), v);
        assert!(ModelParams::from_slice(ObservableMode::FixedOrder, &v).is_err());
        assert_eq!(
            ModelParams::from_slice(ObservableMode::FixedOrder, &v[..3])
                .unwrap()
                .prep,
            None
        );
        let model = ClassifierModel::new(ObservableMode::Classical).unwrap();
        let fixed = ModelParams::from_slice(ObservableMode::FixedOrder, &v[..3]).unwrap();
        assert!(model.forward(&fixed, 0.1, 0.2).is_err());
    }

    #[test]
    fn observables_are_hermitian_with_expected_support() {
        let fixed = build_observable(ObservableMode::FixedOrder).unwrap();
        assert_eq!(fixed.matrix, pauli_z());
        let layout = SwitchLayout::three_switch();
        let shift = layout.ancilla_range().start;
        for mode in [ObservableMode::Classical, ObservableMode::Quantum] {
            let obs = build_observable(mode).unwrap();
            assert!(obs.matrix.hermiticity_defect() < 1e-10);
            let mut off_diagonal_blocks = 0;
            for r in 0..512 {
                for c in 0..512 {
                    if obs.matrix[(r, c)].norm() == 0.0 {
                        continue;
                    }
                    let (ar, ac) = (r >> shift, c >> shift);
                    assert!(ar < 6 && ac < 6);
                    if ar != ac {
                        off_diagonal_blocks += 1;
                    }
                }
            }
            assert_eq!(off_diagonal_blocks > 0, mode == ObservableMode::Quantum);
        }
    }

    #[test]
    fn fixed_order_ignores_x1() {
        let gate = [0.7, -1.1, 2.3];
        let p = ModelParams { gate, prep: None };
        let model = ClassifierModel::new(ObservableMode::FixedOrder).unwrap();
        for &x2 in &[-0.9, 0.0, 0.4] {
            let base = model.forward(&p, -1.0, x2).unwrap();
            for k in 0..=10 {
                let x1 = -1.0 + 0.2 * k as f64;
                assert!((model.forward(&p, x1, x2).unwrap() - base).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_prep_selects_identity_order() {
        let gate = [0.4, 1.9, -0.6];
        let fixed = ClassifierModel::new(ObservableMode::FixedOrder).unwrap();
        let classical = ClassifierModel::new(ObservableMode::Classical).unwrap();
        let switched = ModelParams {
            gate,
            prep: Some([0.0; PREP_PARAMS]),
        };
        let plain = ModelParams { gate, prep: None };
        for &(x1, x2) in &[(0.3, -0.2), (-0.8, 0.9)] {
            let a = classical.forward(&switched, x1, x2).unwrap();
            let b = fixed.forward(&plain, x1, x2).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
