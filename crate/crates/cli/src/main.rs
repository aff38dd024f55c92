use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qswitch_cli::commands::{self, selftest};
use qswitch_cli::config::{Experiment, ExperimentConfig};
use qswitch_cli::record::{RunRecord, RECORD_FILE};
use qswitch_cli::run_and_persist;
use qswitch_core::learn::{Objective, ObservableMode};
use qswitch_core::selftest::Fault;

#[derive(Parser)]
#[command(name = "qswitch", version, about = "Quantum N-switch experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Record directory; defaults to a name derived from the experiment under the output root.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory under which record directories are created.
    #[arg(
        long,
        global = true,
        env = "QSWITCH_OUTPUT_ROOT",
        default_value = "qswitch-runs"
    )]
    root: PathBuf,

    /// Maximum objective evaluations per training restart.
    #[arg(long, global = true, default_value_t = 2000)]
    budget: usize,

    #[arg(long, global = true, default_value_t = 10)]
    restarts: usize,

    #[arg(long, global = true, default_value_t = 200)]
    n_train: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compare simulated 2-switch outputs with their closed forms.
    TwoSwitch,
    /// Fourier coefficients of switch models in every order mode.
    Fourier,
    /// Train or replay the 3-switch classifier.
    ThreeSwitch(ThreeSwitchArgs),
    /// Train the two-layer re-uploading baseline.
    Reupload(TrainArgs),
    /// Run the invariant suite.
    Selftest {
        /// Drop the target-returning SWAP from every slot.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Re-run the experiment echoed in a record.
    Rerun {
        /// A record file or the directory holding it.
        record: PathBuf,
    },
}

#[derive(Args)]
struct ThreeSwitchArgs {
    #[arg(long, value_parser = parse_mode)]
    mode: ObservableMode,

    /// Evaluate the stored reference parameters instead of training.
    #[arg(long, conflicts_with = "train")]
    replay: bool,

    /// Train from seeded restarts (the default).
    #[arg(long)]
    train: bool,

    #[command(flatten)]
    training: TrainArgs,
}

#[derive(Args)]
struct TrainArgs {
    /// accuracy, hinge or smooth.
    #[arg(long, default_value = "accuracy", value_parser = parse_objective)]
    objective: Objective,
}

fn parse_mode(s: &str) -> Result<ObservableMode, String> {
    s.parse().map_err(|e: qswitch_core::Error| e.to_string())
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse().map_err(|e: qswitch_core::Error| e.to_string())
}

impl Cli {
    fn config(
        &self,
        experiment: Experiment,
        mode: Option<ObservableMode>,
        objective: Objective,
    ) -> ExperimentConfig {
        let output = self.out.clone().unwrap_or_else(|| {
            self.root.join(ExperimentConfig::default_dir_name(
                experiment, mode, self.seed,
            ))
        });
        ExperimentConfig {
            seed: self.seed,
            n_train: self.n_train,
            budget: self.budget,
            restarts: self.restarts,
            objective,
            ..ExperimentConfig::new(experiment, mode, output)
        }
    }
}

fn experiment(cfg: ExperimentConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let dir = cfg.output.clone();
    let command = cfg.experiment.name();
    run_and_persist(command, Some(cfg.clone()), &dir, || commands::execute(&cfg))
}

fn dispatch(cli: &Cli) -> Result<RunRecord> {
    match &cli.command {
        Command::TwoSwitch => {
            experiment(cli.config(Experiment::TwoSwitchForms, None, Objective::Accuracy))
        }
        Command::Fourier => {
            experiment(cli.config(Experiment::FourierScan, None, Objective::Accuracy))
        }
        Command::ThreeSwitch(a) => {
            let kind = if a.replay {
                Experiment::ThreeSwitchReplay
            } else {
                Experiment::ThreeSwitchTrain
            };
            experiment(cli.config(kind, Some(a.mode), a.training.objective))
        }
        Command::Reupload(a) => {
            experiment(cli.config(Experiment::ReuploadingBaseline, None, a.objective))
        }
        Command::Selftest { inject_fault } => {
            let fault = if *inject_fault {
                Fault::DropReturnSwap
            } else {
                Fault::None
            };
            let dir = cli.out.clone().unwrap_or_else(|| cli.root.join("selftest"));
            run_and_persist("selftest", None, &dir, || Ok(selftest::run(fault)))
        }
        Command::Rerun { record } => {
            let previous = RunRecord::load(record)?;
            let Some(mut cfg) = previous.config else {
                bail!("record {} carries no experiment config", record.display());
            };
            if let Some(out) = &cli.out {
                cfg.output = out.clone();
            }
            experiment(cfg)
        }
    }
}

fn short(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.3e}")
    } else {
        v.to_string()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli).context("qswitch failed") {
        Ok(record) => {
            for c in &record.checks {
                let status = match (c.passed, c.asserted) {
                    (true, _) => "ok",
                    (false, true) => "FAIL",
                    (false, false) => "off",
                };
                println!(
                    "[{status:>4}] {}: {} (required {})",
                    c.name,
                    short(c.value),
                    c.requirement
                );
            }
            for (k, v) in &record.metrics {
                println!("{k} = {}", short(*v));
            }
            let dir = record
                .config
                .as_ref()
                .map(|c| c.output.clone())
                .unwrap_or_else(|| cli.out.clone().unwrap_or_else(|| cli.root.join("selftest")));
            println!("record written to {}", dir.join(RECORD_FILE).display());
            if record.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
