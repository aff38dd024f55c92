use super::layout::SwitchLayout;
use super::ops::{
    build_slot_from_matrices, build_slot_without_return_swap, build_u1, build_ufinal, build_un,
};
use super::perm::Permutation;
use crate::error::{invalid, Result};
use crate::qcore::{
    gate_matrix, reduced_density, ComplexMatrix, DensityMatrix, GateSpec, RegisterOperator,
    StateVector, C64, ONE, ZERO,
};

/// State of the order ancilla at the start of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlPrep {
    /// A single definite order.
    BasisOrder(Permutation),
    /// Classical mixture: one probability per effective order, by rank.
    Mixture(Vec<f64>),
    /// Coherent superposition: one amplitude per effective order, by rank.
    Superposition(Vec<C64>),
    /// Gates applied to `|0…0>` of the ancilla (register-wide qubit indices).
    PreparationBlock(Vec<GateSpec>),
}

impl ControlPrep {
    pub fn validate(&self, layout: &SwitchLayout) -> Result<()> {
        let n_orders = layout.n_orders();
        match self {
            ControlPrep::BasisOrder(p) => {
                if p.len() != layout.n_gates() {
                    return invalid(format!(
                        "order {p} does not match a {}-switch",
                        layout.n_gates()
                    ));
                }
            }
            ControlPrep::Mixture(probs) => {
                if probs.len() != n_orders {
                    return invalid(format!("mixture needs {n_orders} probabilities"));
                }
                if probs.iter().any(|&p| p.is_nan() || p < 0.0) {
                    return invalid("mixture probabilities must be non-negative");
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return invalid(format!("mixture probabilities sum to {total}"));
                }
            }
            ControlPrep::Superposition(amps) => {
                if amps.len() != n_orders {
                    return invalid(format!("superposition needs {n_orders} amplitudes"));
                }
                let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                if (norm - 1.0).abs() > 1e-12 {
                    return invalid(format!("superposition has squared norm {norm}"));
                }
            }
            ControlPrep::PreparationBlock(gates) => {
                let ancilla = layout.ancilla_range();
                for g in gates {
                    g.validate(Some(layout.total_qubits()))?;
                    if g.targets.iter().any(|q| !ancilla.contains(q)) {
                        return invalid(format!(
                            "preparation gate {} touches qubits outside the ancilla {ancilla:?}",
                            g.kind
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Uniform superposition over all effective orders.
    pub fn uniform_superposition(layout: &SwitchLayout) -> Self {
        let n = layout.n_orders();
        ControlPrep::Superposition(vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n])
    }

    /// Uniform classical mixture over all effective orders.
    pub fn uniform_mixture(layout: &SwitchLayout) -> Self {
        let n = layout.n_orders();
        ControlPrep::Mixture(vec![1.0 / n as f64; n])
    }
}

/// Result of a pipeline run: pure for coherent preparations, mixed for a
/// classical mixture of orders.
#[derive(Debug, Clone)]
pub enum SwitchOutput {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl SwitchOutput {
    pub fn expectation(&self, obs: &ComplexMatrix) -> Result<f64> {
        match self {
            SwitchOutput::Pure(s) => s.expectation(obs),
            SwitchOutput::Mixed(rho) => rho.expectation(obs),
        }
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        match self {
            SwitchOutput::Pure(s) => reduced_density(s, keep),
            SwitchOutput::Mixed(rho) => rho.reduce(keep),
        }
    }

    pub fn as_pure(&self) -> Option<&StateVector> {
        match self {
            SwitchOutput::Pure(s) => Some(s),
            SwitchOutput::Mixed(_) => None,
        }
    }
}

/// The sample-independent part of an N-switch circuit: the layout and its
/// compiled control operators.
#[derive(Debug, Clone)]
pub struct SwitchPipeline {
    layout: SwitchLayout,
    u1: RegisterOperator,
    un: RegisterOperator,
    ufinal: RegisterOperator,
    drop_return_swap: bool,
}

impl SwitchPipeline {
    pub fn new(layout: SwitchLayout) -> Result<Self> {
        Ok(Self {
            u1: build_u1(&layout)?,
            un: build_un(&layout)?,
            ufinal: build_ufinal(&layout)?,
            layout,
            drop_return_swap: false,
        })
    }

    /// A deliberately broken pipeline whose slots omit the second
    /// controlled-SWAP.
    pub fn with_broken_slot(layout: SwitchLayout) -> Result<Self> {
        Ok(Self {
            drop_return_swap: true,
            ..Self::new(layout)?
        })
    }

    pub fn layout(&self) -> &SwitchLayout {
        &self.layout
    }

    pub fn slot_operator(&self, gates: &[ComplexMatrix]) -> Result<RegisterOperator> {
        if self.drop_return_swap {
            build_slot_without_return_swap(&self.layout, gates)
        } else {
            build_slot_from_matrices(&self.layout, gates)
        }
    }

    /// `|ψ_0>` for a coherent preparation: the target input, working systems,
    /// control and history at `|0>`, ancilla as prepared.
    pub fn initial_state(
        &self,
        prep: &ControlPrep,
        target_in: &StateVector,
    ) -> Result<StateVector> {
        let l = &self.layout;
        prep.validate(l)?;
        if target_in.n_qubits() != l.n_target_qubits() {
            return invalid(format!(
                "target input has {} qubit(s), layout expects {}",
                target_in.n_qubits(),
                l.n_target_qubits()
            ));
        }
        let middle = l.ancilla_range().start - l.n_target_qubits();
        let rest = StateVector::zero(middle)?;
        let ancilla = match prep {
            ControlPrep::BasisOrder(p) => StateVector::basis(l.n_alpha(), p.rank())?,
            ControlPrep::Superposition(amps) => {
                let mut full = vec![ZERO; 1 << l.n_alpha()];
                full[..amps.len()].copy_from_slice(amps);
                StateVector::from_amplitudes(full)?
            }
            ControlPrep::PreparationBlock(_) => StateVector::zero(l.n_alpha())?,
            ControlPrep::Mixture(_) => {
                return invalid("a mixture has no single initial state vector")
            }
        };
        let mut psi = target_in.tensor(&rest)?.tensor(&ancilla)?;
        if let ControlPrep::PreparationBlock(gates) = prep {
            for g in gates {
                psi = psi.apply_gate(g)?;
            }
        }
        Ok(psi)
    }

    /// `U_{N+1} Ã′ U_N ⋯ U_2 Ã′ U_1 |ψ_0>` with a prebuilt slot operator.
    pub fn evolve(&self, slot: &RegisterOperator, initial: StateVector) -> Result<StateVector> {
        let mut psi = initial;
        let mut scratch = Vec::with_capacity(psi.dim());
        self.u1.apply_mut(&mut psi, &mut scratch)?;
        let n = self.layout.n_gates();
        for step in 0..n {
            slot.apply_mut(&mut psi, &mut scratch)?;
            let control = if step + 1 < n { &self.un } else { &self.ufinal };
            control.apply_mut(&mut psi, &mut scratch)?;
        }
        Ok(psi)
    }

    pub fn run(
        &self,
        gates: &[ComplexMatrix],
        prep: &ControlPrep,
        target_in: &StateVector,
    ) -> Result<SwitchOutput> {
        let slot = self.slot_operator(gates)?;
        if let ControlPrep::Mixture(probs) = prep {
            prep.validate(&self.layout)?;
            let mut branches = Vec::new();
            for (rank, &p) in probs.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let basis =
                    ControlPrep::BasisOrder(Permutation::from_rank(rank, self.layout.n_gates())?);
                let psi0 = self.initial_state(&basis, target_in)?;
                branches.push((p, self.evolve(&slot, psi0)?));
            }
            return Ok(SwitchOutput::Mixed(DensityMatrix::mixture(&branches)?));
        }
        let psi0 = self.initial_state(prep, target_in)?;
        Ok(SwitchOutput::Pure(self.evolve(&slot, psi0)?))
    }
}

/// Runs the full N-switch protocol on `target_in` with the given slot gates.
pub fn run_switch(
    layout: &SwitchLayout,
    gates: &[GateSpec],
    prep: &ControlPrep,
    target_in: &StateVector,
) -> Result<SwitchOutput> {
    if gates.len() != layout.n_gates() {
        return invalid(format!(
            "{} gates for a {}-switch",
            gates.len(),
            layout.n_gates()
        ));
    }
    let matrices = gates.iter().map(gate_matrix).collect::<Result<Vec<_>>>()?;
    SwitchPipeline::new(layout.clone())?.run(&matrices, prep, target_in)
}

/// Full-register observable `Σ_{i,j} w_{ij} |π_i><π_j|^α ⊗ 1 ⊗ O^t` where the
/// weights run over effective orders.
pub fn order_observable(
    layout: &SwitchLayout,
    weights: &ComplexMatrix,
    target_obs: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n_orders = layout.n_orders();
    if weights.rows() != n_orders || weights.cols() != n_orders {
        return invalid(format!("order weights must be {n_orders}x{n_orders}"));
    }
    let d_t = 1usize << layout.n_target_qubits();
    if target_obs.rows() != d_t || target_obs.cols() != d_t {
        return invalid("target observable dimension does not match the target system");
    }
    let n = layout.total_qubits();
    let dim = 1usize << n;
    let anc_shift = layout.ancilla_range().start;
    let middle_mask = ((1usize << anc_shift) - 1) & !(d_t - 1);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for row in 0..dim {
        let (ar, tr) = (row >> anc_shift, row & (d_t - 1));
        if ar >= n_orders {
            continue;
        }
        for ac in 0..n_orders {
            let w = weights[(ar, ac)];
            if w == ZERO {
                continue;
            }
            for tc in 0..d_t {
                let o = target_obs[(tr, tc)];
                if o == ZERO {
                    continue;
                }
                let col = (ac << anc_shift) | (row & middle_mask) | tc;
                m[(row, col)] = w * o;
            }
        }
    }
    Ok(m)
}

/// The same observable as [`order_observable`], stored as a local operator on
/// the target and ancilla qubits.
pub fn order_observable_operator(
    layout: &SwitchLayout,
    weights: &ComplexMatrix,
    target_obs: &ComplexMatrix,
) -> Result<RegisterOperator> {
    let n_orders = layout.n_orders();
    if weights.rows() != n_orders || weights.cols() != n_orders {
        return invalid(format!("order weights must be {n_orders}x{n_orders}"));
    }
    let d_t = 1usize << layout.n_target_qubits();
    if target_obs.rows() != d_t || target_obs.cols() != d_t {
        return invalid("target observable dimension does not match the target system");
    }
    let d_a = 1usize << layout.n_alpha();
    let padded = ComplexMatrix::from_fn(d_a, d_a, |i, j| {
        if i < n_orders && j < n_orders {
            weights[(i, j)]
        } else {
            ZERO
        }
    });
    let mut qubits = layout.target_qubits();
    qubits.extend(layout.ancilla_qubits());
    RegisterOperator::new(padded.kron(target_obs), qubits)
}

/// Diagonal order weights (classical observable).
pub fn diagonal_weights(n_orders: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n_orders)
}

/// All-ones order weights (coherent observable).
pub fn all_ones_weights(n_orders: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_orders, n_orders, |_, _| ONE)
}
