//! The `rtopt` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rtopt_core::oracle::brute_force;
use rtopt_core::problems::ProblemKind;

use crate::experiment::{run_experiment, ExperimentConfig, ExperimentError, ExperimentOutcome, InstanceEntry};
use crate::formats::{parse_instance, Format, FormatError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rtopt",
    version,
    about = "Resource-task metaheuristics for combinatorial optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance with one algorithm over several seeded runs.
    Solve {
        #[arg(long)]
        problem: Option<ProblemKind>,
        #[arg(long)]
        instance: PathBuf,
        /// Input format; inferred from the extension and problem otherwise.
        #[arg(long)]
        format: Option<String>,
        /// sa, ts, vns (or qvns/avns/rvns), lns or ga.
        #[arg(long, default_value = "vns")]
        algo: String,
        /// Seconds per run.
        #[arg(long, default_value_t = 5.0)]
        time_limit: f64,
        #[arg(long)]
        max_evaluations: Option<u64>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Seed of the first run; run k uses seed + k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        lower_bound: Option<f64>,
        /// Directory for result and trace files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively solve a small instance.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        problem: Option<ProblemKind>,
        #[arg(long)]
        format: Option<String>,
        /// Refuse when more structures than this would be enumerated.
        #[arg(long, default_value_t = 10_000_000)]
        limit: u128,
    },
    /// Run an experiment described by a JSON file.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding the one in the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_for(e: &ExperimentError) -> i32 {
    match e {
        ExperimentError::InvalidConfig(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

fn print_outcome(out: &mut impl Write, outcome: &ExperimentOutcome) -> std::io::Result<()> {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    writeln!(
        out,
        "instance\talgorithm\truns\tfeasible\tbest\tmean\tbest_gap\tmean_gap"
    )?;
    for r in &outcome.results {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{}\t{}",
            r.instance,
            r.algorithm,
            r.runs,
            r.feasible_runs,
            r.best_objective,
            r.mean_objective,
            opt(r.best_gap),
            opt(r.mean_gap)
        )?;
    }
    Ok(())
}

fn finish(outcome: Result<ExperimentOutcome, ExperimentError>) -> i32 {
    match outcome {
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("error: {}: {}", f.instance, f.message);
            }
            let _ = print_outcome(&mut std::io::stdout().lock(), &outcome);
            if outcome.parse_errors > 0 {
                EXIT_PARSE
            } else if !outcome.failures.is_empty() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn oracle(instance: &Path, problem: Option<ProblemKind>, format: Option<&str>, limit: u128) -> i32 {
    let format = match format
        .map(str::parse)
        .unwrap_or_else(|| Format::infer(instance, problem))
    {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let model = match parse_instance(instance, format).and_then(|i| Ok(i.model()?)) {
        Ok(m) => m,
        Err(e @ FormatError::Io { .. }) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    match brute_force(&model, limit) {
        Ok(r) => {
            println!("objective\t{}", r.best.objective);
            println!("feasible\t{}", r.is_feasible());
            println!("violation_sum\t{}", r.best.violation_sum());
            println!("enumerated\t{}", r.enumerated);
            for (i, route) in r.best.structure.routes().iter().enumerate() {
                println!("resource {i}\t{route:?}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Solve {
            problem,
            instance,
            format,
            algo,
            time_limit,
            max_evaluations,
            runs,
            seed,
            lower_bound,
            out,
        } => {
            let config = ExperimentConfig {
                instances: vec![InstanceEntry {
                    path: instance,
                    id: None,
                    problem,
                    format,
                    lower_bound,
                }],
                algorithms: vec![algo],
                runs,
                time_limit_s: Some(time_limit),
                max_evaluations,
                max_iterations: None,
                base_seed: seed,
                out_dir: out,
                jobs: Some(1),
                record_wall_clock: true,
                stop_at_lower_bound: false,
                solver: Default::default(),
            };
            finish(run_experiment(&config, Path::new("")))
        }
        Command::Oracle {
            instance,
            problem,
            format,
            limit,
        } => oracle(&instance, problem, format.as_deref(), limit),
        Command::Bench { config, out } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return EXIT_CONFIG;
                }
            };
            let mut parsed = match ExperimentConfig::from_json(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_for(&e);
                }
            };
            let base = config.parent().unwrap_or(Path::new(""));
            if let Some(out) = out {
                // relative to the working directory, not the config file
                parsed.out_dir = Some(std::env::current_dir().map(|d| d.join(&out)).unwrap_or(out));
            }
            finish(run_experiment(&parsed, base))
        }
    }
}
