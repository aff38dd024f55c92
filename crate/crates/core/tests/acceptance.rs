//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Reference values come from hand-written 2×2 algebra and literal closed
//! forms, never from the library code under test.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qswitch_core::learn::{
    accuracy, fixtures, generate_dataset, re_uploading_baseline, train_restarts, ClassifierModel,
    ModelParams, ObservableMode, TrainConfig, TEST_SEED_OFFSET,
};
use qswitch_core::qcore::{reduced_density, EncodingGenerator};
use qswitch_core::selftest::{run_selftest, Fault};
use qswitch_core::spectra::{
    closed_form, ClosedForm, OrderControl, SwitchGate, SwitchModel, TwoSwitch,
};
use qswitch_core::switch::{
    all_ones_weights, diagonal_weights, order_observable, ControlPrep, Permutation, SwitchLayout,
    SwitchPipeline,
};
use qswitch_core::{ComplexMatrix, StateVector, C64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M2 = [[C64; 2]; 2];
type V2 = [C64; 2];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cis(a: f64) -> C64 {
    C64::from_polar(1.0, a)
}

fn mat_rx(x: f64) -> M2 {
    let (s, co) = (x / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

fn mat_ry(x: f64) -> M2 {
    let (s, co) = (x / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

fn mat_rz(x: f64) -> M2 {
    [[cis(-x / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), cis(x / 2.0)]]
}

fn mat_u3(t: f64, p: f64, l: f64) -> M2 {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), -cis(l) * s], [cis(p) * s, cis(p + l) * co]]
}

fn apply(a: &M2, v: &V2) -> V2 {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

/// `<u| σ_z |v>`.
fn z_sandwich(u: &V2, v: &V2) -> C64 {
    u[0].conj() * v[0] - u[1].conj() * v[1]
}

fn to_matrix(a: &M2) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&a[0], &a[1]])
}

const KET0: V2 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];

/// Lexicographic orders of three gates; `slots[s]` is the gate in slot `s`,
/// slot 0 acting first.
const ORDERS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn run_order(gates: &[M2], slots: &[usize], input: &V2) -> V2 {
    slots.iter().fold(*input, |v, &g| apply(&gates[g], &v))
}

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn random_u3(rng: &mut ChaCha8Rng) -> M2 {
    mat_u3(
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
    )
}

fn random_qubit(rng: &mut ChaCha8Rng) -> V2 {
    apply(&random_u3(rng), &KET0)
}

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

/// Name, check and runtime limit.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn closed_form_regression() -> Outcome {
    let sw = TwoSwitch::new()?;
    let rx_first = OrderControl::Fixed(Permutation::identity(2));
    let rz_first = OrderControl::Fixed(Permutation::new(vec![1, 0])?);
    let mut worst: f64 = 0.0;
    for theta in grid(25, -PI, PI) {
        let v = to_matrix(&mat_rz(theta));
        for x in grid(101, -PI, PI) {
            let expected_quantum = ((3.0 + theta.cos()) * x.cos() + 1.0 - theta.cos()) / 4.0;
            for (control, expected) in [
                (&rx_first, x.cos()),
                (&rz_first, x.cos()),
                (&OrderControl::Classical, x.cos()),
                (&OrderControl::Quantum, expected_quantum),
            ] {
                worst = worst.max((sw.output(control, &v, x)? - expected).abs());
            }
        }
    }
    Ok((
        worst < 1e-8,
        format!("max deviation {worst:.2e} over 101 x 25 grid"),
    ))
}

fn general_u_forms() -> Outcome {
    let sw = TwoSwitch::new()?;
    let rx_first = OrderControl::Fixed(Permutation::identity(2));
    let u_first = OrderControl::Fixed(Permutation::new(vec![1, 0])?);
    let axis = grid(5, -PI, PI);
    let (mut first, mut second, mut cross, mut stored): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for &x in &axis {
        for &t in &axis {
            for &p in &axis {
                for &l in &axis {
                    let u = mat_u3(t, p, l);
                    let v = to_matrix(&u);
                    let expected_first = t.cos() * x.cos() - t.sin() * l.sin() * x.sin();
                    let expected_second = t.cos() * x.cos() - t.sin() * p.sin() * x.sin();
                    let expected_cross = (1.0 + p.sin() * l.sin()) * t.cos() - p.cos() * l.cos()
                        + (p.sin() - l.sin()) * t.sin() * x.sin()
                        + ((1.0 - p.sin() * l.sin()) * t.cos() + p.cos() * l.cos()) * x.cos();
                    first = first.max((sw.output(&rx_first, &v, x)? - expected_first).abs());
                    second = second.max((sw.output(&u_first, &v, x)? - expected_second).abs());
                    cross = cross.max((sw.cross_term(&v, x)? - expected_cross).abs());

                    let gates = [mat_rx(x), u];
                    let psi_a = run_order(&gates, &[0, 1], &KET0);
                    let psi_b = run_order(&gates, &[1, 0], &KET0);
                    let oracle_cross = 2.0 * z_sandwich(&psi_b, &psi_a).re;
                    cross = cross.max((sw.cross_term(&v, x)? - oracle_cross).abs());
                    for (kind, value) in [
                        (ClosedForm::FixedUFirst, expected_first),
                        (ClosedForm::FixedUSecond, expected_second),
                        (ClosedForm::InterferenceU, expected_cross),
                    ] {
                        stored =
                            stored.max((closed_form(kind, &[t, p, l])?.evaluate(x)? - value).abs());
                    }
                }
            }
        }
    }
    let tol = 1e-8;
    let passed = first < tol && second < tol && cross < tol && stored < tol;
    Ok((
        passed,
        format!(
            "U then RX {first:.2e}, RX then U {second:.2e}, interference {cross:.2e}, stored forms {stored:.2e}"
        ),
    ))
}

fn target_fidelity(
    state: &StateVector,
    layout: &SwitchLayout,
    expected: &V2,
) -> Result<f64, Box<dyn std::error::Error>> {
    let rho = reduced_density(state, &layout.target_qubits())?;
    let m = rho.matrix();
    let mut acc = c(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += expected[i].conj() * m[(i, j)] * expected[j];
        }
    }
    Ok(acc.re)
}

fn permutation_faithfulness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for n in [2usize, 3] {
        let layout = SwitchLayout::new(n, 1, false)?;
        let pipeline = SwitchPipeline::new(layout.clone())?;
        let orders: Vec<Vec<usize>> = if n == 2 {
            vec![vec![0, 1], vec![1, 0]]
        } else {
            ORDERS3.iter().map(|o| o.to_vec()).collect()
        };
        for _ in 0..100 {
            let gates: Vec<M2> = (0..n).map(|_| random_u3(&mut rng)).collect();
            let dense: Vec<ComplexMatrix> = gates.iter().map(to_matrix).collect();
            let input = random_qubit(&mut rng);
            let target = StateVector::from_amplitudes(input.to_vec())?;
            for slots in &orders {
                let prep = ControlPrep::BasisOrder(Permutation::new(slots.clone())?);
                let out = pipeline.run(&dense, &prep, &target)?;
                let state = out.as_pure().ok_or("basis order produced a mixed state")?;
                let expected = run_order(&gates, slots, &input);
                worst = worst.max(1.0 - target_fidelity(state, &layout, &expected)?);
                runs += 1;
            }
        }
    }
    Ok((
        worst < 1e-10,
        format!("max fidelity deficit {worst:.2e} over {runs} runs"),
    ))
}

/// Ancilla state `|a>` after three U3 gates and CNOTs 0→1, 1→2, 0→2 on
/// `|000>`, qubit 0 least significant.
fn prepared_ancilla(prep: &[f64; 9]) -> [C64; 8] {
    let singles: Vec<V2> = (0..3)
        .map(|k| {
            apply(
                &mat_u3(prep[3 * k], prep[3 * k + 1], prep[3 * k + 2]),
                &KET0,
            )
        })
        .collect();
    let mut amp = [c(0.0, 0.0); 8];
    for (idx, a) in amp.iter_mut().enumerate() {
        *a = singles[0][idx & 1] * singles[1][(idx >> 1) & 1] * singles[2][(idx >> 2) & 1];
    }
    for (ctrl, tgt) in [(0, 1), (1, 2), (0, 2)] {
        let mut next = amp;
        for (idx, a) in amp.iter().enumerate() {
            let dest = if idx >> ctrl & 1 == 1 {
                idx ^ (1 << tgt)
            } else {
                idx
            };
            next[dest] = *a;
        }
        amp = next;
    }
    amp
}

fn oracle_equivalence() -> Outcome {
    let classical = ClassifierModel::new(ObservableMode::Classical)?;
    let quantum = ClassifierModel::new(ObservableMode::Quantum)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_c, mut worst_q): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let gate = [
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        ];
        let mut prep = [0.0; 9];
        for p in &mut prep {
            *p = rng.random_range(-PI..PI);
        }
        let (x1, x2) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let params = ModelParams {
            gate,
            prep: Some(prep),
        };

        let gates = [mat_rz(x1), mat_ry(x2), mat_u3(gate[0], gate[1], gate[2])];
        let psi: Vec<V2> = ORDERS3
            .iter()
            .map(|o| run_order(&gates, o, &KET0))
            .collect();
        let a = prepared_ancilla(&prep);

        let mixture: f64 = (0..6)
            .map(|k| a[k].norm_sqr() * z_sandwich(&psi[k], &psi[k]).re)
            .sum();
        let mut contraction = c(0.0, 0.0);
        for i in 0..6 {
            for j in 0..6 {
                let rho_ji = a[j] * a[i].conj();
                contraction += rho_ji * z_sandwich(&psi[i], &psi[j]);
            }
        }
        worst_c = worst_c.max((classical.forward(&params, x1, x2)? - mixture).abs());
        worst_q = worst_q.max((quantum.forward(&params, x1, x2)? - contraction.re).abs());
    }
    Ok((
        worst_c < 1e-9 && worst_q < 1e-9,
        format!("classical {worst_c:.2e}, quantum {worst_q:.2e} over 50 draws"),
    ))
}

/// Complex Fourier coefficients of a real function sampled at `2K+1` points.
fn dft(f: impl Fn(f64) -> f64, k_max: i32) -> Vec<(i32, C64)> {
    let n = 2 * k_max + 1;
    let samples: Vec<f64> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
    (-k_max..=k_max)
        .map(|k| {
            let sum: C64 = samples
                .iter()
                .enumerate()
                .map(|(j, &v)| cis(-2.0 * PI * (k * j as i32) as f64 / n as f64) * v)
                .sum();
            (k, sum / n as f64)
        })
        .collect()
}

fn support(coeffs: &[(i32, C64)]) -> Vec<i32> {
    coeffs
        .iter()
        .filter(|(_, a)| a.norm() > 1e-8)
        .map(|&(k, _)| k)
        .collect()
}

/// `a·I + b·σ_x + c·σ_y + d·σ_z` with random real weights. Under `σ_z` alone
/// the orders that encode last have a vanishing constant term.
fn random_observable(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let [a, b, y, d]: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    ComplexMatrix::from_rows(&[&[c(a + d, 0.0), c(b, -y)], &[c(b, y), c(a - d, 0.0)]])
}

fn spectrum_invariance() -> Outcome {
    let layout = SwitchLayout::three_switch();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = Vec::new();
    let mut models = 0;
    for draw in 0..20 {
        let obs = random_observable(&mut rng);
        let diag = Arc::new(order_observable(&layout, &diagonal_weights(6), &obs)?);
        let full = Arc::new(order_observable(&layout, &all_ones_weights(6), &obs)?);
        let gates = vec![
            SwitchGate::Encoding,
            SwitchGate::Fixed(to_matrix(&random_u3(&mut rng))),
            SwitchGate::Fixed(to_matrix(&random_u3(&mut rng))),
        ];
        let target = StateVector::from_amplitudes(random_qubit(&mut rng).to_vec())?;
        let mut preps: Vec<(ControlPrep, Arc<ComplexMatrix>)> = ORDERS3
            .iter()
            .map(|o| {
                Ok((
                    ControlPrep::BasisOrder(Permutation::new(o.to_vec())?),
                    diag.clone(),
                ))
            })
            .collect::<Result<_, Box<dyn std::error::Error>>>()?;
        preps.push((ControlPrep::uniform_mixture(&layout), diag.clone()));
        preps.push((ControlPrep::uniform_superposition(&layout), full.clone()));
        for (prep, obs) in preps {
            let model = SwitchModel::new(
                layout.clone(),
                EncodingGenerator::rx(),
                gates.clone(),
                prep,
                target.clone(),
                obs,
            )?;
            let coeffs = dft(|x| model.evaluate(x).expect("model evaluation"), 3);
            let s = support(&coeffs);
            if s != [-1, 0, 1] {
                mismatches.push(format!("draw {draw}: {s:?}"));
            }
            models += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p: Vec<f64> = (0..6).map(|_| rng.random_range(-PI..PI)).collect();
    let baseline = support(&dft(
        |x2| re_uploading_baseline(&p, 0.4, x2).expect("baseline"),
        4,
    ));
    let passed = mismatches.is_empty() && baseline == [-2, -1, 0, 1, 2];
    Ok((
        passed,
        format!(
            "{} of {models} single-layer models with support {{-1,0,1}} {mismatches:?}; baseline support {baseline:?}",
            models - mismatches.len()
        ),
    ))
}

fn fixed_order_replay() -> Outcome {
    let model = ClassifierModel::new(ObservableMode::FixedOrder)?;
    let params = ModelParams::from_slice(ObservableMode::FixedOrder, &fixtures::FIXED_ORDER)?;
    let test = generate_dataset(200, TEST_SEED_OFFSET);
    let acc = accuracy(&model, &params.to_vec(), &test)?;
    let mut spread: f64 = 0.0;
    for x2 in grid(21, -1.0, 1.0) {
        let reference = model.forward(&params, -1.0, x2)?;
        for x1 in grid(21, -1.0, 1.0) {
            spread = spread.max((model.forward(&params, x1, x2)? - reference).abs());
        }
    }
    Ok((
        (acc - 0.5).abs() <= 0.08 && spread < 1e-10,
        format!("test accuracy {acc:.3}, x1 dependence {spread:.2e}"),
    ))
}

fn accuracy_ladder() -> Outcome {
    let cfg = TrainConfig::default();
    let mut best = Vec::new();
    for mode in ObservableMode::ALL {
        let model = ClassifierModel::new(mode)?;
        let summary = train_restarts(&model, &cfg, 10)?;
        best.push(summary.test_accuracy);
    }
    let (fixed, classical, quantum) = (best[0], best[1], best[2]);
    let passed = quantum > classical && classical > fixed && fixed <= 0.55 && quantum >= 0.70;
    Ok((
        passed,
        format!("test accuracy fixed {fixed:.3}, classical {classical:.3}, quantum {quantum:.3}"),
    ))
}

fn invariant_suite() -> Outcome {
    let report = run_selftest(Fault::None);
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    Ok((
        report.all_passed(),
        format!("{} checks, failing: {failed:?}", report.checks.len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "closed-form regression",
            closed_form_regression,
            Duration::from_secs(1),
        ),
        (
            "general-U closed forms",
            general_u_forms,
            Duration::from_secs(5),
        ),
        (
            "permutation faithfulness",
            permutation_faithfulness,
            Duration::from_secs(30),
        ),
        (
            "mixture and contraction oracles",
            oracle_equivalence,
            Duration::from_secs(60),
        ),
        (
            "spectrum invariance",
            spectrum_invariance,
            Duration::from_secs(30),
        ),
        (
            "fixed-order replay",
            fixed_order_replay,
            Duration::from_secs(5),
        ),
        (
            "accuracy ladder",
            accuracy_ladder,
            Duration::from_secs(30 * 60),
        ),
        ("invariant suite", invariant_suite, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok((passed, detail)) => (passed && elapsed <= *limit, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {}: {} {name}: {detail} [{:.2}s, limit {}s]",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
