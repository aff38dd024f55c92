use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::Result;
use qswitch_core::learn::re_uploading_baseline;
use qswitch_core::qcore::{
    gate_matrix, pauli_z, rx, u3, ComplexMatrix, EncodingGenerator, GateSpec, StateVector, C64,
};
use qswitch_core::spectra::{
    analytic_coefficients, dft_coefficients, FourierSeries, ModelFunction, OrderControl, OrderMode,
    SwitchGate, SwitchModel, TwoSwitch,
};
use qswitch_core::switch::{
    all_ones_weights, diagonal_weights, order_observable, ControlPrep, Permutation, SwitchLayout,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::record::{num, Check, Outcome, Table};

const SUPPORT_THRESHOLD: f64 = 1e-8;

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

fn random_u3(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    u3(angle(rng), angle(rng), angle(rng))
}

/// `a·1 + b·σx + c·σy + d·σz` with weights in `[−1, 1]`.
fn random_observable(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    ComplexMatrix::from_rows(&[
        &[C64::new(a + d, 0.0), C64::new(b, -c)],
        &[C64::new(b, c), C64::new(a - d, 0.0)],
    ])
}

fn order_label(p: &Permutation) -> String {
    let slots: Vec<String> = p.slots().iter().map(usize::to_string).collect();
    format!("order_{}", slots.join(""))
}

fn coefficient_table(name: String, series: &FourierSeries) -> Table {
    let mut t = Table::new(name, &["frequency", "re", "im"]);
    for &(f, a) in series.terms() {
        t.push(vec![num(f), num(a.re), num(a.im)]);
    }
    t
}

/// Coefficient tables of single-layer switch models in every order mode, the
/// shared-support verdict, and the two-layer baseline for contrast.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Outcome::default();
    let mut worst_reality: f64 = 0.0;

    let two = TwoSwitch::new()?;
    let v = random_u3(&mut rng);
    let controls = [
        ("fixed_01", OrderControl::Fixed(Permutation::identity(2))),
        (
            "fixed_10",
            OrderControl::Fixed(Permutation::new(vec![1, 0])?),
        ),
        ("classical", OrderControl::Classical),
        ("quantum", OrderControl::Quantum),
    ];
    for (label, control) in controls {
        let series = dft_coefficients(&two.function(control, v.clone()), 1)?;
        worst_reality = worst_reality.max(series.reality_defect());
        out.tables.push(coefficient_table(
            format!("fourier_two_switch_{label}"),
            &series,
        ));
    }

    // Three-switch with RX(x) in gate 0, random fixed gates, target input and
    // target observable.
    let layout = SwitchLayout::three_switch();
    let (a, b) = (random_u3(&mut rng), random_u3(&mut rng));
    let target = StateVector::zero(1)?.apply_matrix(&random_u3(&mut rng), &[0])?;
    let obs = random_observable(&mut rng);
    let gates = vec![
        SwitchGate::Encoding,
        SwitchGate::Fixed(a.clone()),
        SwitchGate::Fixed(b.clone()),
    ];
    let diag = Arc::new(order_observable(&layout, &diagonal_weights(6), &obs)?);
    let full = Arc::new(order_observable(&layout, &all_ones_weights(6), &obs)?);
    let mut preps: Vec<(String, ControlPrep, Arc<ComplexMatrix>)> = Permutation::all(3)
        .map(|p| (order_label(&p), ControlPrep::BasisOrder(p), diag.clone()))
        .collect();
    preps.push((
        "classical".into(),
        ControlPrep::uniform_mixture(&layout),
        diag,
    ));
    preps.push((
        "quantum".into(),
        ControlPrep::uniform_superposition(&layout),
        full,
    ));

    let mut supports: Vec<(String, Vec<f64>)> = Vec::new();
    for (label, prep, o) in preps {
        let model = SwitchModel::new(
            layout.clone(),
            EncodingGenerator::rx(),
            gates.clone(),
            prep,
            target.clone(),
            o,
        )?;
        let series = dft_coefficients(&model.into_function(), 1)?;
        worst_reality = worst_reality.max(series.reality_defect());
        supports.push((label.clone(), series.support(SUPPORT_THRESHOLD)));
        out.tables.push(coefficient_table(
            format!("fourier_three_switch_{label}"),
            &series,
        ));
    }
    let reference = supports[0].1.clone();
    let shared = supports.iter().all(|(_, s)| *s == reference);
    out.checks.push(Check::holds(
        "three-switch order modes share one frequency support",
        shared,
        format!("support {reference:?} in every mode"),
    ));
    out.checks.push(Check::holds(
        "single-layer support is {-1, 0, 1}",
        reference == [-1.0, 0.0, 1.0],
        "frequencies {-1, 0, 1}",
    ));

    // Analytic coefficients of the fixed orders on a |0> input, against the DFT
    // of the plain circuit that applies RX(x) after the ordered gates.
    let specs = [
        GateSpec::custom(a.clone(), vec![0]),
        GateSpec::custom(b.clone(), vec![0]),
        GateSpec::custom(random_u3(&mut rng), vec![0]),
    ];
    let z = pauli_z();
    let mut worst_analytic: f64 = 0.0;
    for p in Permutation::all(3) {
        let analytic = analytic_coefficients(
            &specs,
            &EncodingGenerator::rx(),
            &z,
            &OrderMode::Fixed(p.clone()),
        )?;
        let dense = specs
            .iter()
            .map(gate_matrix)
            .collect::<Result<Vec<_>, _>>()?;
        let w = p.ordered_product(&dense)?;
        let z2 = z.clone();
        let f = ModelFunction::new(1.0, move |x| {
            let psi = StateVector::zero(1)?
                .apply_matrix(&w, &[0])?
                .apply_matrix(&rx(x), &[0])?;
            psi.expectation(&z2)
        });
        let numeric = dft_coefficients(&f, 1)?;
        worst_analytic = worst_analytic.max(analytic.max_abs_diff(&numeric));
        worst_reality = worst_reality.max(analytic.reality_defect());
        out.tables.push(coefficient_table(
            format!("analytic_{}", order_label(&p)),
            &analytic,
        ));
    }
    out.metric("max_analytic_vs_dft", worst_analytic);
    out.checks.push(Check::below(
        "analytic coefficients match the DFT",
        worst_analytic,
        1e-8,
    ));

    let params: Vec<f64> = (0..6).map(|_| angle(&mut rng)).collect();
    let x1 = rng.random_range(-1.0..1.0);
    let p = params.clone();
    let baseline = dft_coefficients(
        &ModelFunction::new(1.0, move |x2| re_uploading_baseline(&p, x1, x2)),
        2,
    )?;
    worst_reality = worst_reality.max(baseline.reality_defect());
    let top = baseline
        .support(SUPPORT_THRESHOLD)
        .into_iter()
        .fold(0.0, f64::max);
    out.metric("baseline_max_frequency", top);
    out.params.insert("baseline".into(), params);
    out.checks.push(Check::holds(
        "two-layer baseline reaches frequency 2",
        top == 2.0,
        "max frequency 2",
    ));
    out.tables
        .push(coefficient_table("fourier_reupload_x2".into(), &baseline));

    out.metric("max_reality_defect", worst_reality);
    out.checks
        .push(Check::below("every series is real", worst_reality, 1e-9));
    Ok(out)
}
