//! Control unitaries and the slot operator of the N-switch.
//!
//! Every control operator is a basis permutation of the (control, history,
//! ancilla) subsystem, built by enumerating that subsystem's basis. On an
//! effective order `π` the control register moves cyclically through the
//! effective labels `0..N`; redundant orders and redundant control labels
//! are left untouched.

use super::layout::SwitchLayout;
use super::perm::Permutation;
use crate::error::{invalid, Error, Result};
use crate::qcore::{
    gate_matrix, permutation_matrix, ComplexMatrix, GateSpec, RegisterOperator, ZERO,
};

/// Effective orders indexed by their ancilla basis label.
fn orders(layout: &SwitchLayout) -> Vec<Permutation> {
    Permutation::all(layout.n_gates()).collect()
}

/// Control label of the gate following `current` under `order`, wrapping
/// from the last slot back to the first.
fn next_gate(order: &Permutation, current: usize) -> usize {
    order.gate_at((order.slot_of(current) + 1) % order.len())
}

/// Local basis over `control ++ ancilla` (control in the low bits).
fn control_ancilla_operator(
    layout: &SwitchLayout,
    map: impl Fn(&Permutation, usize) -> usize,
) -> Result<RegisterOperator> {
    let nc = layout.n_control();
    let orders = orders(layout);
    let dim = 1 << (nc + layout.n_alpha());
    let matrix = permutation_matrix(dim, |local| {
        let control = local & ((1 << nc) - 1);
        let ancilla = local >> nc;
        match orders.get(ancilla) {
            Some(order) if layout.is_effective_control(control) => {
                map(order, control) | (ancilla << nc)
            }
            _ => local,
        }
    });
    let qubits = [layout.control_qubits(), layout.ancilla_qubits()].concat();
    RegisterOperator::new(matrix, qubits)
}

/// `ExUnion` on `control ++ history`: for an effective control label `i`,
/// toggles history bit `i`.
pub fn build_exunion(layout: &SwitchLayout) -> Result<RegisterOperator> {
    require_history(layout)?;
    let nc = layout.n_control();
    let dim = 1 << (nc + layout.n_history());
    let matrix = permutation_matrix(dim, |local| {
        let control = local & ((1 << nc) - 1);
        if layout.is_effective_control(control) {
            local ^ (1 << (nc + control))
        } else {
            local
        }
    });
    let qubits = [layout.control_qubits(), layout.history_qubits()].concat();
    RegisterOperator::new(matrix, qubits)
}

/// `SHIFT` on `control ++ ancilla`: moves the control from the gate of the
/// current slot to the gate of the next slot.
pub fn build_shift(layout: &SwitchLayout) -> Result<RegisterOperator> {
    control_ancilla_operator(layout, next_gate)
}

/// `FINAL` on `control ++ ancilla`: subtracts the last gate of the order, so
/// that `π(N-1)` returns to `0`.
pub fn build_final(layout: &SwitchLayout) -> Result<RegisterOperator> {
    let n = layout.n_gates();
    control_ancilla_operator(layout, |order, k| (k + n - order.gate_at(n - 1)) % n)
}

/// `U_1` on `control ++ ancilla`: adds the first gate of the order, taking
/// control `0` to `π(0)`.
pub fn build_u1(layout: &SwitchLayout) -> Result<RegisterOperator> {
    let n = layout.n_gates();
    control_ancilla_operator(layout, |order, i| (order.gate_at(0) + i) % n)
}

/// `U_n` for the slots in between: `SHIFT · ExUnion`, or `SHIFT` alone
/// without a history register.
pub fn build_un(layout: &SwitchLayout) -> Result<RegisterOperator> {
    with_history_mark(layout, build_shift(layout)?)
}

/// `U_{N+1}`: `FINAL · ExUnion`, or `FINAL` alone without a history register.
pub fn build_ufinal(layout: &SwitchLayout) -> Result<RegisterOperator> {
    with_history_mark(layout, build_final(layout)?)
}

/// Prefixes `op` (on control ++ ancilla) with `ExUnion` when the layout has a
/// history register; the result acts on control ++ history ++ ancilla.
fn with_history_mark(layout: &SwitchLayout, op: RegisterOperator) -> Result<RegisterOperator> {
    if !layout.include_history() {
        return Ok(op);
    }
    let exunion = build_exunion(layout)?;
    let qubits = [
        layout.control_qubits(),
        layout.history_qubits(),
        layout.ancilla_qubits(),
    ]
    .concat();
    let local_n = qubits.len();
    let position = |q: usize| {
        qubits
            .iter()
            .position(|&x| x == q)
            .expect("qubit in subsystem")
    };
    let place = |o: &RegisterOperator| -> Result<ComplexMatrix> {
        let local: Vec<usize> = o.qubits().iter().map(|&q| position(q)).collect();
        crate::qcore::embed(o.matrix(), &local, local_n)
    };
    let matrix = place(&op)?.matmul(&place(&exunion)?)?;
    RegisterOperator::new(matrix, qubits)
}

fn require_history(layout: &SwitchLayout) -> Result<()> {
    if layout.include_history() {
        Ok(())
    } else {
        Err(Error::Configuration(
            "ExUnion needs a layout with a history register".into(),
        ))
    }
}

/// Qubits of the slot operator: target, working systems, then control.
pub fn slot_qubits(layout: &SwitchLayout) -> Vec<usize> {
    (0..layout.control_range().end).collect()
}

/// Controlled-SWAP between the target and working system `k` for every
/// effective control label `k`, as a permutation of the slot-local basis.
fn controlled_swap(layout: &SwitchLayout, local: usize) -> usize {
    let nt = layout.n_target_qubits();
    let n = layout.n_gates();
    let control = local >> (nt * (n + 1));
    if !layout.is_effective_control(control) {
        return local;
    }
    let field = (1usize << nt) - 1;
    let shift = nt * (control + 1);
    let target = local & field;
    let working = (local >> shift) & field;
    (local & !field & !(field << shift)) | working | (target << shift)
}

/// Slot operator `Ã′ = CSWAP · (⊗_k A_k on t_k) · CSWAP` on target, working
/// and control qubits.
pub fn build_slot(layout: &SwitchLayout, gates: &[GateSpec]) -> Result<RegisterOperator> {
    let matrices = gates.iter().map(gate_matrix).collect::<Result<Vec<_>>>()?;
    build_slot_from_matrices(layout, &matrices)
}

pub fn build_slot_from_matrices(
    layout: &SwitchLayout,
    gates: &[ComplexMatrix],
) -> Result<RegisterOperator> {
    slot_operator(layout, gates, true)
}

/// Slot operator missing its second controlled-SWAP. Only used to check that
/// the invariant suite notices a broken slot.
pub fn build_slot_without_return_swap(
    layout: &SwitchLayout,
    gates: &[ComplexMatrix],
) -> Result<RegisterOperator> {
    slot_operator(layout, gates, false)
}

fn slot_operator(
    layout: &SwitchLayout,
    gates: &[ComplexMatrix],
    swap_back: bool,
) -> Result<RegisterOperator> {
    let n = layout.n_gates();
    let nt = layout.n_target_qubits();
    if gates.len() != n {
        return invalid(format!("slot needs {n} gates, got {}", gates.len()));
    }
    let d = 1usize << nt;
    if let Some(g) = gates.iter().find(|g| g.rows() != d || g.cols() != d) {
        return invalid(format!(
            "slot gate is {}x{}, target system has dimension {d}",
            g.rows(),
            g.cols()
        ));
    }
    let qubits = slot_qubits(layout);
    let dim = 1usize << qubits.len();
    let field = d - 1;
    // Bits shared by input and output of the working-system product: target and control.
    let fixed_mask = field | !((1usize << (nt * (n + 1))) - 1);
    let product = |row: usize, col: usize| {
        if (row ^ col) & fixed_mask & (dim - 1) != 0 {
            return ZERO;
        }
        let mut v = gates[0][((row >> nt) & field, (col >> nt) & field)];
        for (k, g) in gates.iter().enumerate().skip(1) {
            if v == ZERO {
                break;
            }
            let shift = nt * (k + 1);
            v *= g[((row >> shift) & field, (col >> shift) & field)];
        }
        v
    };
    // The controlled-SWAP is a self-inverse permutation P, so (P K P)[i][j] = K[P i][P j].
    let swap = |i: usize| controlled_swap(layout, i);
    let matrix = if swap_back {
        ComplexMatrix::from_fn(dim, dim, |i, j| product(swap(i), swap(j)))
    } else {
        ComplexMatrix::from_fn(dim, dim, |i, j| product(i, swap(j)))
    };
    RegisterOperator::new(matrix, qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{rx, rz, u3, StateVector};

    fn layouts() -> Vec<SwitchLayout> {
        let mut v = Vec::new();
        for n in 2..=3 {
            for h in [false, true] {
                v.push(SwitchLayout::new(n, 1, h).unwrap());
            }
        }
        v
    }

    /// Splits a control++ancilla local index.
    fn ca(layout: &SwitchLayout, control: usize, ancilla: usize) -> usize {
        control | (ancilla << layout.n_control())
    }

    fn image(op: &RegisterOperator, input: usize) -> usize {
        let m = op.matrix();
        (0..m.rows())
            .find(|&r| m[(r, input)] != ZERO)
            .expect("permutation column")
    }

    #[test]
    fn all_operators_unitary() {
        for l in layouts() {
            for op in [
                build_shift(&l),
                build_final(&l),
                build_u1(&l),
                build_un(&l),
                build_ufinal(&l),
            ] {
                assert!(op.unwrap().matrix().unitarity_defect() < 1e-10);
            }
            if l.include_history() {
                assert!(build_exunion(&l).unwrap().matrix().unitarity_defect() < 1e-10);
            }
            let gates = vec![u3(0.3, 1.0, -0.4); l.n_gates()];
            let slot = build_slot_from_matrices(&l, &gates).unwrap();
            assert!(slot.matrix().unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn exunion_flips_history_bit() {
        let l = SwitchLayout::new(2, 1, true).unwrap();
        let op = build_exunion(&l).unwrap();
        // control 1, empty history -> history bit 1 set
        assert_eq!(image(&op, 0b001), 0b101);
        assert_eq!(image(&op, 0b000), 0b010);
        assert!(build_exunion(&SwitchLayout::three_switch()).is_err());
    }

    #[test]
    fn exunion_redundant_control_is_identity() {
        let l = SwitchLayout::new(3, 1, true).unwrap();
        let op = build_exunion(&l).unwrap();
        for history in 0..8 {
            let local = 3 | (history << 2);
            assert_eq!(image(&op, local), local);
        }
    }

    #[test]
    fn exunion_is_an_involution() {
        let l = SwitchLayout::new(2, 1, true).unwrap();
        let op = build_exunion(&l).unwrap();
        let sq = op.matrix().matmul(op.matrix()).unwrap();
        for local in 0..8 {
            let once = image(&op, local);
            assert_eq!(image(&op, once), local);
        }
        assert!(sq.max_abs_diff(&ComplexMatrix::identity(8)) == 0.0);
    }

    #[test]
    fn shift_moves_to_next_slot() {
        let l = SwitchLayout::new(2, 1, false).unwrap();
        let op = build_shift(&l).unwrap();
        // π = [0,1] has label 0; control at gate 0 goes to gate 1.
        assert_eq!(image(&op, ca(&l, 0, 0)), ca(&l, 1, 0));
        let l3 = SwitchLayout::three_switch();
        let op = build_shift(&l3).unwrap();
        // π = [1,2,0] has label 3.
        assert_eq!(image(&op, ca(&l3, 1, 3)), ca(&l3, 2, 3));
        assert_eq!(image(&op, ca(&l3, 2, 3)), ca(&l3, 0, 3));
        // redundant ancilla and redundant control are inert
        for control in 0..4 {
            for ancilla in 6..8 {
                assert_eq!(
                    image(&op, ca(&l3, control, ancilla)),
                    ca(&l3, control, ancilla)
                );
            }
        }
        for ancilla in 0..6 {
            assert_eq!(image(&op, ca(&l3, 3, ancilla)), ca(&l3, 3, ancilla));
        }
    }

    #[test]
    fn u1_writes_first_gate() {
        let l = SwitchLayout::new(2, 1, false).unwrap();
        let op = build_u1(&l).unwrap();
        // π = [1,0] has label 1.
        assert_eq!(image(&op, ca(&l, 0, 1)), ca(&l, 1, 1));
        let l3 = SwitchLayout::three_switch();
        let op = build_u1(&l3).unwrap();
        for (label, order) in Permutation::all(3).enumerate() {
            assert_eq!(
                image(&op, ca(&l3, 0, label)),
                ca(&l3, order.gate_at(0), label)
            );
        }
        for ancilla in 6..8 {
            assert_eq!(image(&op, ca(&l3, 0, ancilla)), ca(&l3, 0, ancilla));
        }
    }

    #[test]
    fn final_returns_control_to_zero() {
        let l3 = SwitchLayout::three_switch();
        let op = build_final(&l3).unwrap();
        for (label, order) in Permutation::all(3).enumerate() {
            assert_eq!(
                image(&op, ca(&l3, order.gate_at(2), label)),
                ca(&l3, 0, label)
            );
        }
    }

    #[test]
    fn slot_routes_selected_gate_to_target() {
        let l = SwitchLayout::new(2, 1, false).unwrap();
        let gates = [rx(0.9), rz(-1.3)];
        let slot = build_slot_from_matrices(&l, &gates).unwrap();
        let psi = StateVector::from_amplitudes(vec![
            crate::qcore::c(0.6, 0.1),
            crate::qcore::c(-0.3, 0.7),
        ])
        .unwrap();
        for (k, gate) in gates.iter().enumerate() {
            // target ψ, working |00>, control |k>
            let control = StateVector::basis(3, k << 2).unwrap();
            let full = psi.tensor(&control).unwrap();
            let out = slot.apply(&full).unwrap();
            let target = crate::qcore::reduced_density(&out, &[0]).unwrap();
            let expected =
                StateVector::from_amplitudes(gate.mul_vec(psi.amplitudes()).unwrap()).unwrap();
            let fid = crate::qcore::DensityMatrix::from_pure(&expected)
                .matrix()
                .as_slice()
                .iter()
                .zip(target.matrix().as_slice())
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>();
            assert!((1.0 - fid).abs() < 1e-12, "control {k}: fidelity {fid}");
        }
    }

    #[test]
    fn slot_redundant_control_leaves_target() {
        let l = SwitchLayout::three_switch();
        let gates = [rx(0.9), rz(-1.3), u3(0.2, 0.5, 1.1)];
        let slot = build_slot_from_matrices(&l, &gates).unwrap();
        // target |1>, working |000>, control |3>
        let input = StateVector::basis(6, 1 | (3 << 4)).unwrap();
        let out = slot.apply(&input).unwrap();
        let mut expected = StateVector::basis(1, 1).unwrap();
        for g in &gates {
            let w = StateVector::from_amplitudes(g.mul_vec(&[crate::qcore::ONE, ZERO]).unwrap())
                .unwrap();
            expected = expected.tensor(&w).unwrap();
        }
        expected = expected.tensor(&StateVector::basis(2, 3).unwrap()).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn slot_checks_gates() {
        let l = SwitchLayout::new(2, 1, false).unwrap();
        assert!(build_slot_from_matrices(&l, &[rx(0.1)]).is_err());
        assert!(build_slot_from_matrices(&l, &[rx(0.1), ComplexMatrix::identity(4)]).is_err());
        assert!(build_slot(&l, &[GateSpec::rx(0.1, 0), GateSpec::cnot(0, 1)]).is_err());
    }
}
