use std::f64::consts::TAU;

use super::series::{FourierSeries, ModelFunction};
use crate::error::{invalid, Error, Result};
use crate::qcore::C64;

/// Largest reconstruction error accepted by [`dft_coefficients`].
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;

/// Coefficients `c_{-K} … c_K` of a function with integer spectrum bounded
/// by `max_freq`, from `2K+1` equidistant samples on `[0, 2π)`.
///
/// The series is checked against the function on a grid ten times finer;
/// frequencies beyond `K` show up as a [`Error::SpectrumMismatch`].
pub fn dft_coefficients(f: &ModelFunction, max_freq: usize) -> Result<FourierSeries> {
    if max_freq == 0 {
        return invalid("the maximum frequency must be positive");
    }
    let k = max_freq as i64;
    let m = 2 * max_freq + 1;
    let samples = (0..m)
        .map(|n| f.evaluate(TAU * n as f64 / m as f64))
        .collect::<Result<Vec<_>>>()?;

    let series = FourierSeries::new((-k..=k).map(|w| {
        let sum: C64 = samples
            .iter()
            .enumerate()
            .map(|(n, &y)| y * C64::from_polar(1.0, -TAU * (w * n as i64) as f64 / m as f64))
            .sum();
        (w as f64, sum / m as f64)
    }));

    let fine = 10 * m;
    let mut max_error: f64 = 0.0;
    for j in 0..fine {
        let x = TAU * j as f64 / fine as f64;
        max_error = max_error.max((series.evaluate(x) - f.evaluate(x)?).norm());
    }
    if max_error > RECONSTRUCTION_TOLERANCE {
        return Err(Error::SpectrumMismatch {
            max_error,
            tolerance: RECONSTRUCTION_TOLERANCE,
            max_freq,
        });
    }
    Ok(series)
}
