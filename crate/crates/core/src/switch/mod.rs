//! The N-switch simulation protocol: register layout with redundancy spaces,
//! control unitaries, the controlled-SWAP slot operator and the full pipeline.

mod layout;
mod ops;
mod perm;
mod pipeline;

pub use layout::SwitchLayout;
pub use ops::{
    build_exunion, build_final, build_shift, build_slot, build_slot_from_matrices,
    build_slot_without_return_swap, build_u1, build_ufinal, build_un, slot_qubits,
};
pub use perm::{factorial, index_perm, perm_index, Permutation};
pub use pipeline::{
    all_ones_weights, diagonal_weights, order_observable, order_observable_operator, run_switch,
    ControlPrep, SwitchOutput, SwitchPipeline,
};
