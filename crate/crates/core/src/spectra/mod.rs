//! Model outputs as Fourier series: predicted spectra, numerical and
//! analytic coefficients, and closed-form oracles for the 2-switch models.

mod analytic;
mod closed_form;
mod dft;
mod models;
mod series;

pub use analytic::{analytic_coefficients, OrderMode};
pub use closed_form::{closed_form, ClosedForm};
pub use dft::{dft_coefficients, RECONSTRUCTION_TOLERANCE};
pub use models::{OrderControl, SwitchGate, SwitchModel, TwoSwitch};
pub use series::{
    operator_norm, predicted_spectrum, row_sum_norm, FourierSeries, ModelFunction,
    FREQUENCY_TOLERANCE,
};
