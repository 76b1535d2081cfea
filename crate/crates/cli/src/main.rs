use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use freezelab_cli::{exit_code, run, Overrides, ScenarioDoc, Task};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TaskArg {
    PressureCurve,
    FreezeDetect,
    Construct,
    Verify,
    SwitchingDemo,
    DensityDemo,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::PressureCurve => Task::PressureCurve,
            TaskArg::FreezeDetect => Task::FreezeDetect,
            TaskArg::Construct => Task::Construct,
            TaskArg::Verify => Task::Verify,
            TaskArg::SwitchingDemo => Task::SwitchingDemo,
            TaskArg::DensityDemo => Task::DensityDemo,
        }
    }
}

/// Pressure, freezing and face-construction experiments on subshifts of
/// finite type and renewal potentials.
///
/// Exit status: 0 when every check passed, 1 when a verification failed,
/// 2 on errors. Set FREEZELAB_THREADS to fix the worker thread count.
#[derive(Debug, Parser)]
#[command(name = "freezelab", version)]
struct Args {
    task: TaskArg,
    /// Scenario document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Output directory for report.json and CSV files.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Ok(n) = std::env::var("FREEZELAB_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("freezelab: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("freezelab: FREEZELAB_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(2);
            }
        }
    }
    let doc = match ScenarioDoc::load(&args.input) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("freezelab: {e}");
            return ExitCode::from(2);
        }
    };
    let task: Task = args.task.into();
    if doc.task != task {
        eprintln!(
            "freezelab: document is a {} task, not {}",
            doc.task.name(),
            task.name()
        );
        return ExitCode::from(2);
    }
    let overrides = Overrides {
        seed: args.seed,
        beta_max: args.beta_max,
        tol: args.tol,
    };
    match run(&doc, overrides, &args.out) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if !outcome.passed {
                eprintln!("freezelab: verification failed; see report.json");
            }
            ExitCode::from(exit_code(&outcome) as u8)
        }
        Err(e) => {
            eprintln!("freezelab: {e}");
            ExitCode::from(2)
        }
    }
}
