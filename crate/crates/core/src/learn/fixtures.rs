//! Reference optimal parameter vectors of the three classifiers.

/// `(θ, φ, λ)` of the fixed-order classifier.
pub const FIXED_ORDER: [f64; 3] = [1.6623, 0.8838, 1.5971];

/// Gate angles then preparation angles of the classical-order classifier.
pub const CLASSICAL: [f64; 12] = [
    1.7567, 2.2360, 0.7842, 0.9630, 0.2881, 0.7284, 1.8383, 0.8536, -0.0387, 0.0011, 0.4796, 0.7081,
];

/// Gate angles then preparation angles of the quantum-order classifier.
pub const QUANTUM: [f64; 12] = [
    1.6628, 1.6813, 1.3400, 1.4326, 1.5209, 0.0921, 0.5260, 0.9382, 1.2003, 1.5877, -0.3781,
    -0.5879,
];

use super::model::ObservableMode;

pub fn for_mode(mode: ObservableMode) -> &'static [f64] {
    match mode {
        ObservableMode::FixedOrder => &FIXED_ORDER,
        ObservableMode::Classical => &CLASSICAL,
        ObservableMode::Quantum => &QUANTUM,
    }
}
