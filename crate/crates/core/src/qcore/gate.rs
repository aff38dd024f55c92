use std::fmt;
use std::str::FromStr;

use super::matrix::ComplexMatrix;
use super::{c, C64, ONE, ZERO};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    U3,
    CNOT,
    SWAP,
    CSWAP,
    Custom,
}

impl GateKind {
    pub fn param_count(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            GateKind::U3 => 3,
            GateKind::CNOT | GateKind::SWAP | GateKind::CSWAP | GateKind::Custom => 0,
        }
    }

    /// Qubit count for the fixed-arity kinds; `None` for custom matrices.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::U3 => Some(1),
            GateKind::CNOT | GateKind::SWAP => Some(2),
            GateKind::CSWAP => Some(3),
            GateKind::Custom => None,
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "rx" => GateKind::RX,
            "ry" => GateKind::RY,
            "rz" => GateKind::RZ,
            "u3" | "u" => GateKind::U3,
            "cnot" | "cx" => GateKind::CNOT,
            "swap" => GateKind::SWAP,
            "cswap" | "fredkin" => GateKind::CSWAP,
            "custom" => GateKind::Custom,
            other => return invalid(format!("unknown gate kind '{other}'")),
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::U3 => "u3",
            GateKind::CNOT => "cnot",
            GateKind::SWAP => "swap",
            GateKind::CSWAP => "cswap",
            GateKind::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// A gate placed on specific qubits.
///
/// `targets[0]` maps to the least-significant bit of the gate's local basis
/// index. For `CNOT` the targets are `[control, target]`, for `CSWAP`
/// `[control, a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
    pub matrix: Option<ComplexMatrix>,
}

impl GateSpec {
    pub fn new(kind: GateKind, params: Vec<f64>, targets: Vec<usize>) -> Self {
        Self {
            kind,
            params,
            targets,
            matrix: None,
        }
    }

    pub fn rx(angle: f64, q: usize) -> Self {
        Self::new(GateKind::RX, vec![angle], vec![q])
    }

    pub fn ry(angle: f64, q: usize) -> Self {
        Self::new(GateKind::RY, vec![angle], vec![q])
    }

    pub fn rz(angle: f64, q: usize) -> Self {
        Self::new(GateKind::RZ, vec![angle], vec![q])
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::new(GateKind::U3, vec![theta, phi, lambda], vec![q])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::CNOT, vec![], vec![control, target])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::SWAP, vec![], vec![a, b])
    }

    pub fn cswap(control: usize, a: usize, b: usize) -> Self {
        Self::new(GateKind::CSWAP, vec![], vec![control, a, b])
    }

    pub fn custom(matrix: ComplexMatrix, targets: Vec<usize>) -> Self {
        Self {
            kind: GateKind::Custom,
            params: vec![],
            targets,
            matrix: Some(matrix),
        }
    }

    /// Same gate moved onto other qubits.
    pub fn retarget(&self, targets: Vec<usize>) -> Self {
        Self {
            targets,
            ..self.clone()
        }
    }

    /// Checks the structural invariants. `n_qubits` bounds the targets when given.
    pub fn validate(&self, n_qubits: Option<usize>) -> Result<()> {
        if self.params.len() != self.kind.param_count() {
            return invalid(format!(
                "{} takes {} parameter(s), got {}",
                self.kind,
                self.kind.param_count(),
                self.params.len()
            ));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return invalid(format!("{} has a non-finite parameter", self.kind));
        }
        if self.targets.is_empty() {
            return invalid(format!("{} has no target qubits", self.kind));
        }
        match self.kind.arity() {
            Some(k) if self.targets.len() != k => {
                return invalid(format!(
                    "{} acts on {k} qubit(s), got {} targets",
                    self.kind,
                    self.targets.len()
                ))
            }
            None => {
                let Some(m) = &self.matrix else {
                    return invalid("custom gate without a matrix");
                };
                let dim = 1usize << self.targets.len();
                if m.rows() != dim || m.cols() != dim {
                    return invalid(format!(
                        "custom matrix is {}x{}, expected {dim}x{dim} for {} targets",
                        m.rows(),
                        m.cols(),
                        self.targets.len()
                    ));
                }
            }
            _ => {}
        }
        check_targets(&self.targets, n_qubits)
    }
}

pub(crate) fn check_targets(targets: &[usize], n_qubits: Option<usize>) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if targets[..i].contains(&t) {
            return invalid(format!("duplicate target qubit {t}"));
        }
        if let Some(n) = n_qubits {
            if t >= n {
                return Err(Error::Index {
                    index: t,
                    n_qubits: n,
                });
            }
        }
    }
    Ok(())
}

/// Unitary of a gate on its own `2^|targets|`-dimensional space.
pub fn gate_matrix(spec: &GateSpec) -> Result<ComplexMatrix> {
    spec.validate(None)?;
    let p = &spec.params;
    Ok(match spec.kind {
        GateKind::RX => rx(p[0]),
        GateKind::RY => ry(p[0]),
        GateKind::RZ => rz(p[0]),
        GateKind::U3 => u3(p[0], p[1], p[2]),
        GateKind::CNOT => permutation_matrix(4, |i| if i & 1 == 1 { i ^ 2 } else { i }),
        GateKind::SWAP => permutation_matrix(4, |i| ((i & 1) << 1) | ((i >> 1) & 1)),
        GateKind::CSWAP => permutation_matrix(8, |i| {
            if i & 1 == 1 {
                let (a, b) = ((i >> 1) & 1, (i >> 2) & 1);
                1 | (b << 1) | (a << 2)
            } else {
                i
            }
        }),
        GateKind::Custom => spec.matrix.clone().expect("validated"),
    })
}

/// `exp(-i x σ_x / 2)`
pub fn rx(x: f64) -> ComplexMatrix {
    let (s, co) = (x / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[&[c(co, 0.0), c(0.0, -s)], &[c(0.0, -s), c(co, 0.0)]])
}

/// `exp(-i x σ_y / 2)`
pub fn ry(x: f64) -> ComplexMatrix {
    let (s, co) = (x / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[&[c(co, 0.0), c(-s, 0.0)], &[c(s, 0.0), c(co, 0.0)]])
}

/// `exp(-i x σ_z / 2)`
pub fn rz(x: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[
        C64::from_polar(1.0, -x / 2.0),
        C64::from_polar(1.0, x / 2.0),
    ])
}

/// `[[cos(θ/2), −e^{iλ}sin(θ/2)], [e^{iφ}sin(θ/2), e^{i(φ+λ)}cos(θ/2)]]`
pub fn u3(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[
        &[c(co, 0.0), -C64::from_polar(s, lambda)],
        &[C64::from_polar(s, phi), C64::from_polar(co, phi + lambda)],
    ])
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, c(0.0, -1.0)], &[c(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, -ONE])
}

/// Matrix sending basis state `j` to `perm(j)`.
pub fn permutation_matrix(dim: usize, perm: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        m[(perm(j), j)] = ONE;
    }
    m
}

/// Full-register operator acting as `matrix` on `targets` and as identity
/// elsewhere. `targets[k]` receives bit `k` of the local index.
pub fn embed(matrix: &ComplexMatrix, targets: &[usize], n_qubits: usize) -> Result<ComplexMatrix> {
    check_targets(targets, Some(n_qubits))?;
    let k = targets.len();
    if !matrix.is_square() || matrix.rows() != 1 << k {
        return invalid(format!(
            "matrix of dimension {}x{} cannot act on {k} qubit(s)",
            matrix.rows(),
            matrix.cols()
        ));
    }
    let dim = 1usize << n_qubits;
    let mask: usize = targets.iter().map(|&t| 1 << t).sum();
    let offsets = local_offsets(targets);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for base in (0..dim).filter(|b| b & mask == 0) {
        for (lo, &ro) in offsets.iter().enumerate() {
            for (li, &ri) in offsets.iter().enumerate() {
                out[(base | ro, base | ri)] = matrix[(lo, li)];
            }
        }
    }
    Ok(out)
}

/// Register index offset contributed by each local basis index.
pub(crate) fn local_offsets(targets: &[usize]) -> Vec<usize> {
    (0..1usize << targets.len())
        .map(|local| {
            targets
                .iter()
                .enumerate()
                .filter(|(bit, _)| local >> bit & 1 == 1)
                .map(|(_, &q)| 1 << q)
                .sum()
        })
        .collect()
}
