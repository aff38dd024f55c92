use std::fmt;
use std::str::FromStr;

use super::series::ModelFunction;
use crate::error::{invalid, Error, Result};

/// Closed-form outputs of the single-qubit 2-switch models.
///
/// The RZ kinds take `[θ]`, the U kinds take `[θ, φ, λ]` of the U3 gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// Either fixed order of `RZ(θ)` and `RX(x)`: `cos x`.
    FixedRz,
    /// Quantum 2-switch of `RZ(θ)` and `RX(x)`: `[(3+cos θ)cos x + 1 − cos θ]/4`.
    Quantum2SwitchRz,
    /// `U(θ,φ,λ) RX(x)`: `cos θ cos x − sin θ sin λ sin x`.
    FixedUFirst,
    /// `RX(x) U(θ,φ,λ)`: `cos θ cos x − sin θ sin φ sin x`.
    FixedUSecond,
    /// The interference term between the two U orders.
    InterferenceU,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 5] = [
        ClosedForm::FixedRz,
        ClosedForm::Quantum2SwitchRz,
        ClosedForm::FixedUFirst,
        ClosedForm::FixedUSecond,
        ClosedForm::InterferenceU,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::FixedRz => "fixed_rz",
            ClosedForm::Quantum2SwitchRz => "quantum_2switch_rz",
            ClosedForm::FixedUFirst => "fixed_u_first",
            ClosedForm::FixedUSecond => "fixed_u_second",
            ClosedForm::InterferenceU => "interference_u",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            ClosedForm::FixedRz | ClosedForm::Quantum2SwitchRz => 1,
            _ => 3,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown closed form `{s}`")))
    }
}

/// The literal closed-form function `x ↦ f(x)` for the given parameters.
pub fn closed_form(kind: ClosedForm, params: &[f64]) -> Result<ModelFunction> {
    if params.len() != kind.param_count() {
        return invalid(format!(
            "{kind} takes {} parameter(s), got {}",
            kind.param_count(),
            params.len()
        ));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return invalid(format!("{kind} parameters must be finite"));
    }
    let f = match kind {
        ClosedForm::FixedRz => ModelFunction::new(1.0, |x: f64| Ok(x.cos())),
        ClosedForm::Quantum2SwitchRz => {
            let ct = params[0].cos();
            ModelFunction::new(1.0, move |x: f64| {
                Ok(((3.0 + ct) * x.cos() + 1.0 - ct) / 4.0)
            })
        }
        ClosedForm::FixedUFirst => {
            let (t, l) = (params[0], params[2]);
            ModelFunction::new(1.0, move |x: f64| {
                Ok(t.cos() * x.cos() - t.sin() * l.sin() * x.sin())
            })
        }
        ClosedForm::FixedUSecond => {
            let (t, p) = (params[0], params[1]);
            ModelFunction::new(1.0, move |x: f64| {
                Ok(t.cos() * x.cos() - t.sin() * p.sin() * x.sin())
            })
        }
        ClosedForm::InterferenceU => {
            let (t, p, l) = (params[0], params[1], params[2]);
            let (sp, cp, sl, cl) = (p.sin(), p.cos(), l.sin(), l.cos());
            let constant = (1.0 + sp * sl) * t.cos() - cp * cl;
            let sine = (sp - sl) * t.sin();
            let cosine = (1.0 - sp * sl) * t.cos() + cp * cl;
            let bound = constant.abs() + sine.abs() + cosine.abs();
            ModelFunction::new(bound, move |x: f64| {
                Ok(constant + sine * x.sin() + cosine * x.cos())
            })
        }
    };
    Ok(f)
}
