//! Invariant suite run by the `selftest` command.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::learn::{
    class_balance, generate_dataset, slot_gates, ClassifierModel, ModelParams, ObservableMode,
    PREP_PARAMS,
};
use crate::qcore::{
    pauli_z, reduced_density, u3, ComplexMatrix, EncodingGenerator, GateSpec, StateVector, C64,
    ZERO,
};
use crate::spectra::{
    analytic_coefficients, dft_coefficients, FourierSeries, OrderControl, OrderMode, SwitchGate,
    SwitchModel, TwoSwitch,
};
use crate::switch::{
    all_ones_weights, build_u1, build_ufinal, build_un, diagonal_weights, order_observable,
    ControlPrep, Permutation, SwitchLayout, SwitchPipeline,
};

const ALGEBRAIC_TOL: f64 = 1e-10;

/// Defect deliberately injected into the switch to check that the suite
/// notices it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Slots skip the controlled-SWAP that returns the target.
    DropReturnSwap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Suite {
    fault: Fault,
    rng: ChaCha8Rng,
}

/// Runs every invariant on 2- and 3-switches.
pub fn run_selftest(fault: Fault) -> SelftestReport {
    let mut suite = Suite {
        fault,
        rng: ChaCha8Rng::seed_from_u64(0x5e1f),
    };
    type Check = fn(&mut Suite) -> Result<(bool, String)>;
    let checks: [(&'static str, Check); 9] = [
        ("unitarity", Suite::unitarity),
        ("norm preservation", Suite::norm_preservation),
        ("permutation faithfulness", Suite::permutation_faithfulness),
        ("control round-trip", Suite::control_round_trip),
        ("redundancy inertness", Suite::redundancy_inertness),
        ("mixture identity", Suite::mixture_identity),
        ("decomposition identity", Suite::decomposition_identity),
        ("fourier reality", Suite::fourier_reality),
        ("class balance", Suite::class_balance),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, check)| match check(&mut suite) {
            Ok((passed, detail)) => CheckOutcome {
                name,
                passed,
                detail,
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect();
    SelftestReport { checks }
}

fn verdict(worst: f64, tol: f64, what: &str) -> (bool, String) {
    (
        worst < tol,
        format!("max {what} {worst:.3e} (tolerance {tol:.0e})"),
    )
}

fn target_fidelity(state: &StateVector, layout: &SwitchLayout, expected: &[C64]) -> Result<f64> {
    let rho = reduced_density(state, &layout.target_qubits())?;
    let m = rho.matrix();
    let mut acc = ZERO;
    for (i, a) in expected.iter().enumerate() {
        for (j, b) in expected.iter().enumerate() {
            acc += a.conj() * m[(i, j)] * b;
        }
    }
    Ok(acc.re)
}

impl Suite {
    fn pipeline(&self, layout: SwitchLayout) -> Result<SwitchPipeline> {
        match self.fault {
            Fault::None => SwitchPipeline::new(layout),
            Fault::DropReturnSwap => SwitchPipeline::with_broken_slot(layout),
        }
    }

    fn angle(&mut self) -> f64 {
        self.rng.random_range(-PI..PI)
    }

    fn random_unitary(&mut self) -> ComplexMatrix {
        u3(self.angle(), self.angle(), self.angle())
    }

    fn random_amplitudes(&mut self, dim: usize) -> Vec<C64> {
        let amps: Vec<C64> = (0..dim)
            .map(|_| {
                C64::new(
                    self.rng.random_range(-1.0..1.0),
                    self.rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.into_iter().map(|a| a / norm).collect()
    }

    fn random_state(&mut self, dim: usize) -> Result<StateVector> {
        StateVector::from_amplitudes(self.random_amplitudes(dim))
    }

    fn layouts() -> Result<Vec<SwitchLayout>> {
        Ok(vec![
            SwitchLayout::new(2, 1, false)?,
            SwitchLayout::new(2, 1, true)?,
            SwitchLayout::new(3, 1, false)?,
        ])
    }

    fn unitarity(&mut self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for layout in Self::layouts()? {
            let n = layout.total_qubits();
            let gates: Vec<ComplexMatrix> = (0..layout.n_gates())
                .map(|_| self.random_unitary())
                .collect();
            let pipeline = self.pipeline(layout.clone())?;
            for op in [
                build_u1(&layout)?,
                build_un(&layout)?,
                build_ufinal(&layout)?,
                pipeline.slot_operator(&gates)?,
            ] {
                worst = worst.max(op.to_dense(n)?.unitarity_defect());
            }
        }
        Ok(verdict(worst, ALGEBRAIC_TOL, "unitarity defect"))
    }

    fn norm_preservation(&mut self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for layout in Self::layouts()? {
            let pipeline = self.pipeline(layout.clone())?;
            for _ in 0..5 {
                let gates: Vec<ComplexMatrix> = (0..layout.n_gates())
                    .map(|_| self.random_unitary())
                    .collect();
                let amps = self.random_amplitudes(layout.n_orders());
                let target = self.random_state(2)?;
                let out = pipeline.run(&gates, &ControlPrep::Superposition(amps), &target)?;
                let state = out.as_pure().expect("coherent preparation");
                worst = worst.max((state.norm() - 1.0).abs());
            }
        }
        Ok(verdict(worst, ALGEBRAIC_TOL, "norm drift"))
    }

    fn permutation_faithfulness(&mut self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for n in [2, 3] {
            let layout = SwitchLayout::new(n, 1, false)?;
            let pipeline = self.pipeline(layout.clone())?;
            for _ in 0..10 {
                let gates: Vec<ComplexMatrix> = (0..n).map(|_| self.random_unitary()).collect();
                let target = self.random_state(2)?;
                for order in Permutation::all(n) {
                    let out =
                        pipeline.run(&gates, &ControlPrep::BasisOrder(order.clone()), &target)?;
                    let expected = order
                        .ordered_product(&gates)?
                        .mul_vec(target.amplitudes())?;
                    let f =
                        target_fidelity(out.as_pure().expect("basis order"), &layout, &expected)?;
                    worst = worst.max(1.0 - f);
                }
            }
        }
        Ok(verdict(worst, ALGEBRAIC_TOL, "fidelity deficit"))
    }

    fn control_round_trip(&mut self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for layout in Self::layouts()? {
            let pipeline = self.pipeline(layout.clone())?;
            let gates: Vec<ComplexMatrix> = (0..layout.n_gates())
                .map(|_| self.random_unitary())
                .collect();
            for order in Permutation::all(layout.n_gates()) {
                let out = pipeline.run(
                    &gates,
                    &ControlPrep::BasisOrder(order),
                    &StateVector::zero(1)?,
                )?;
                let state = out.as_pure().expect("basis order");
                let control = reduced_density(state, &layout.control_qubits())?;
                worst = worst.max(1.0 - control.probabilities()[0]);
                if layout.include_history() {
                    let history = reduced_density(state, &layout.history_qubits())?;
                    let all_applied = (1 << layout.n_history()) - 1;
                    worst = worst.max(1.0 - history.probabilities()[all_applied]);
                }
            }
        }
        Ok(verdict(worst, ALGEBRAIC_TOL, "control residue"))
    }

    /// Ancilla amplitude in the redundancy space stays there, the control is
    /// never moved off `|0>` (gate 0's label, so the target receives
    /// `A_0^N`), and observables supported on effective orders read zero.
    fn redundancy_inertness(&mut self) -> Result<(bool, String)> {
        let layout = SwitchLayout::three_switch();
        let pipeline = self.pipeline(layout.clone())?;
        let x = |q| GateSpec::u3(PI, 0.0, PI, q);
        let anc = layout.ancilla_qubits();
        let obs = order_observable(&layout, &all_ones_weights(layout.n_orders()), &pauli_z())?;
        let mut worst: f64 = 0.0;
        for (value, prep) in [
            (6, vec![x(anc[1]), x(anc[2])]),
            (7, vec![x(anc[0]), x(anc[1]), x(anc[2])]),
        ] {
            let gates: Vec<ComplexMatrix> = (0..3).map(|_| self.random_unitary()).collect();
            let target = self.random_state(2)?;
            let out = pipeline.run(&gates, &ControlPrep::PreparationBlock(prep), &target)?;
            let state = out.as_pure().expect("coherent preparation");
            let a = reduced_density(state, &anc)?;
            worst = worst.max(1.0 - a.probabilities()[value]);
            let c = reduced_density(state, &layout.control_qubits())?;
            worst = worst.max(1.0 - c.probabilities()[0]);
            let a0 = &gates[0];
            let cubed = a0.matmul(a0)?.matmul(a0)?;
            let expected = cubed.mul_vec(target.amplitudes())?;
            worst = worst.max(1.0 - target_fidelity(state, &layout, &expected)?);
            worst = worst.max(state.expectation(&obs)?.abs());
        }
        Ok(verdict(worst, ALGEBRAIC_TOL, "leakage"))
    }

    fn random_switch_params(&mut self) -> ModelParams {
        let gate = [self.angle(), self.angle(), self.angle()];
        let mut prep = [0.0; PREP_PARAMS];
        for p in &mut prep {
            *p = self.angle();
        }
        ModelParams {
            gate,
            prep: Some(prep),
        }
    }

    /// `f^π(x1, x2)` of every order, by direct single-qubit products.
    fn order_outputs(gate: &[f64; 3], x1: f64, x2: f64) -> Result<Vec<StateVector>> {
        let mats = slot_gates(gate, x1, x2);
        Permutation::all(3)
            .map(|p| {
                let m = p.ordered_product(&mats)?;
                StateVector::from_amplitudes(vec![m[(0, 0)], m[(1, 0)]])
            })
            .collect()
    }

    fn mixture_identity(&mut self) -> Result<(bool, String)> {
        let model = ClassifierModel::with_pipeline(
            ObservableMode::Classical,
            self.pipeline(SwitchLayout::three_switch())?,
        )?;
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let params = self.random_switch_params();
            let q = reduced_density(
                &model.prepared_state(&params)?,
                &model.layout().ancilla_qubits(),
            )?
            .probabilities();
            for _ in 0..3 {
                let (x1, x2) = (
                    self.rng.random_range(-1.0..1.0),
                    self.rng.random_range(-1.0..1.0),
                );
                let psi = Self::order_outputs(&params.gate, x1, x2)?;
                let mut oracle = 0.0;
                for (k, s) in psi.iter().enumerate() {
                    oracle += q[k] * s.expectation(&pauli_z())?;
                }
                worst = worst.max((model.forward(&params, x1, x2)? - oracle).abs());
            }
        }
        Ok(verdict(worst, 1e-9, "deviation"))
    }

    fn decomposition_identity(&mut self) -> Result<(bool, String)> {
        let model = ClassifierModel::with_pipeline(
            ObservableMode::Quantum,
            self.pipeline(SwitchLayout::three_switch())?,
        )?;
        let z = pauli_z();
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let params = self.random_switch_params();
            let rho = reduced_density(
                &model.prepared_state(&params)?,
                &model.layout().ancilla_qubits(),
            )?;
            for _ in 0..3 {
                let (x1, x2) = (
                    self.rng.random_range(-1.0..1.0),
                    self.rng.random_range(-1.0..1.0),
                );
                let psi = Self::order_outputs(&params.gate, x1, x2)?;
                let mut oracle = ZERO;
                for (i, psi_i) in psi.iter().enumerate() {
                    let zi = psi_i.apply_matrix(&z, &[0])?;
                    for (j, psi_j) in psi.iter().enumerate() {
                        oracle += rho.matrix()[(j, i)] * psi_j.inner(&zi)?.conj();
                    }
                }
                worst = worst.max((model.forward(&params, x1, x2)? - oracle.re).abs());
            }
        }
        Ok(verdict(worst, 1e-9, "deviation"))
    }

    fn fourier_reality(&mut self) -> Result<(bool, String)> {
        let mut series: Vec<FourierSeries> = Vec::new();
        let two = TwoSwitch::new()?;
        let v = self.random_unitary();
        for control in [
            OrderControl::Fixed(Permutation::identity(2)),
            OrderControl::Fixed(Permutation::new(vec![1, 0])?),
            OrderControl::Classical,
            OrderControl::Quantum,
        ] {
            series.push(dft_coefficients(&two.function(control, v.clone()), 1)?);
        }

        let layout = SwitchLayout::three_switch();
        let target = self.random_state(2)?;
        let gates = vec![
            SwitchGate::Encoding,
            SwitchGate::Fixed(self.random_unitary()),
            SwitchGate::Fixed(self.random_unitary()),
        ];
        let diag =
            std::sync::Arc::new(order_observable(&layout, &diagonal_weights(6), &pauli_z())?);
        let full =
            std::sync::Arc::new(order_observable(&layout, &all_ones_weights(6), &pauli_z())?);
        for (prep, obs) in [
            (
                ControlPrep::BasisOrder(Permutation::from_rank(4, 3)?),
                diag.clone(),
            ),
            (ControlPrep::uniform_mixture(&layout), diag),
            (ControlPrep::uniform_superposition(&layout), full),
        ] {
            let model = SwitchModel::new(
                layout.clone(),
                EncodingGenerator::rx(),
                gates.clone(),
                prep,
                target.clone(),
                obs,
            )?;
            series.push(dft_coefficients(&model.into_function(), 1)?);
        }

        let spec: Vec<GateSpec> = (0..3)
            .map(|_| GateSpec::u3(self.angle(), self.angle(), self.angle(), 0))
            .collect();
        for order in Permutation::all(3) {
            series.push(analytic_coefficients(
                &spec,
                &EncodingGenerator::rx(),
                &pauli_z(),
                &OrderMode::Fixed(order),
            )?);
        }
        let worst = series
            .iter()
            .map(FourierSeries::reality_defect)
            .fold(0.0, f64::max);
        let (passed, detail) = verdict(worst, 1e-9, "reality defect");
        Ok((passed, format!("{detail} over {} series", series.len())))
    }

    fn class_balance(&mut self) -> Result<(bool, String)> {
        let balance = class_balance(&generate_dataset(200, 0));
        Ok((
            (balance - 0.5).abs() <= 0.08,
            format!("fraction labelled +1: {balance:.3} (expected 0.5 ± 0.08)"),
        ))
    }
}
