//! Seeded multi-run experiments over instance files.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rtopt_core::model::Sense;
use rtopt_core::problems::{Instance, ProblemKind};
use rtopt_core::qlearning::SelectionMode;
use rtopt_core::ranking::{compare, Comparison};
use rtopt_core::solver::{solve, RunReport, SolverConfig, Variant};
use rtopt_core::ProblemModel;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formats::{parse_instance, Format, FormatError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("solver failed: {0}")]
    Solver(#[from] rtopt_core::Error),
}

/// Relative gap to a lower bound: `(objective - lb) / max(|lb|, 1)` for
/// minimization, mirrored for maximization.
pub fn compute_gap(objective: f64, lower_bound: f64, sense: Sense) -> f64 {
    let diff = match sense {
        Sense::Min => objective - lower_bound,
        Sense::Max => lower_bound - objective,
    };
    diff / lower_bound.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceEntry {
    pub path: PathBuf,
    /// Defaults to the file stem.
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub problem: Option<ProblemKind>,
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub lower_bound: Option<f64>,
}

impl InstanceEntry {
    pub fn id(&self) -> String {
        self.id.clone().unwrap_or_else(|| {
            self.path
                .file_stem()
                .map_or_else(|| self.path.display().to_string(), |s| s.to_string_lossy().into_owned())
        })
    }

    pub fn load(&self, base: &Path) -> Result<Instance, FormatError> {
        let path = base.join(&self.path);
        let format = match &self.format {
            Some(f) => f.parse()?,
            None => Format::infer(&path, self.problem)?,
        };
        let inst = parse_instance(&path, format)?;
        if let Some(kind) = self.problem.filter(|&k| k != inst.kind()) {
            return Err(FormatError::UnsupportedFormat(format!(
                "{} holds a {} instance, not {kind}",
                path.display(),
                inst.kind()
            )));
        }
        Ok(inst)
    }
}

/// A named solver setup: `sa`, `ts`, `vns`, `lns`, `ga`, with an optional
/// `q`/`a`/`r` prefix on the first three picking Q-learning (the default),
/// success-rate or uniform neighborhood selection. `qvns`, `avns` and
/// `rvns` are the three VNS flavors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Algorithm {
    pub variant: Variant,
    pub selection: SelectionMode,
}

impl Algorithm {
    pub fn parse(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        let base = |s: &str| match s {
            "sa" => Some(Variant::Sa),
            "ts" => Some(Variant::Ts),
            "vns" => Some(Variant::Vns),
            _ => None,
        };
        let (variant, selection) = match lower.as_str() {
            "lns" => (Variant::Lns, SelectionMode::QLearning),
            "ga" => (Variant::Ga, SelectionMode::Random),
            s => match base(s) {
                Some(v) => (v, SelectionMode::QLearning),
                None => {
                    let mode = match s.chars().next()? {
                        'q' => SelectionMode::QLearning,
                        'a' => SelectionMode::SuccessRate,
                        'r' => SelectionMode::Random,
                        _ => return None,
                    };
                    (base(&s[1..])?, mode)
                }
            },
        };
        Some(Self { variant, selection })
    }
}

fn default_runs() -> usize {
    5
}

fn default_time_limit() -> Option<f64> {
    Some(5.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceEntry>,
    pub algorithms: Vec<String>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Per run; `null` leaves only the evaluation or iteration budget.
    #[serde(default = "default_time_limit")]
    pub time_limit_s: Option<f64>,
    #[serde(default)]
    pub max_evaluations: Option<u64>,
    #[serde(default)]
    pub max_iterations: Option<u64>,
    /// Run `k` uses seed `base_seed + k`.
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Wall-clock columns make outputs differ between executions.
    #[serde(default)]
    pub record_wall_clock: bool,
    /// Stop a run once it reaches the instance's lower bound.
    #[serde(default)]
    pub stop_at_lower_bound: bool,
    /// Solver parameters shared by every run; variant, seed and budgets are
    /// filled in per run.
    #[serde(default)]
    pub solver: SolverConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self) -> Result<Vec<Algorithm>, ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidConfig(m));
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        match self.time_limit_s {
            Some(t) if !(t > 0.0 && t.is_finite()) => return bad("time_limit_s must be positive".into()),
            None if self.max_evaluations.is_none() && self.max_iterations.is_none() => {
                return bad("without a time limit, set max_evaluations or max_iterations".into())
            }
            _ => {}
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if self.instances.is_empty() || self.algorithms.is_empty() {
            return bad("need at least one instance and one algorithm".into());
        }
        let algorithms = self
            .algorithms
            .iter()
            .map(|a| {
                Algorithm::parse(a).ok_or_else(|| ExperimentError::InvalidConfig(format!("unknown algorithm `{a}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for alg in &algorithms {
            self.run_config(*alg, 0, None)
                .validate()
                .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
        }
        Ok(algorithms)
    }

    fn run_config(&self, alg: Algorithm, run: u64, lower_bound: Option<f64>) -> SolverConfig {
        SolverConfig {
            variant: alg.variant,
            selection: alg.selection,
            seed: self.base_seed.wrapping_add(run),
            time_limit_s: self.time_limit_s,
            max_evaluations: self.max_evaluations,
            max_iterations: self.max_iterations,
            target: if self.stop_at_lower_bound { lower_bound } else { None },
            ..self.solver.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub instance: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub objective: f64,
    pub violation_sum: f64,
    pub feasible: bool,
    pub gap: Option<f64>,
    pub evaluations: u64,
    pub iterations: u64,
    pub perturbations: u64,
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub instance: String,
    pub problem: String,
    pub algorithm: String,
    pub runs: usize,
    pub feasible_runs: usize,
    pub best_objective: f64,
    pub mean_objective: f64,
    pub best_gap: Option<f64>,
    pub mean_gap: Option<f64>,
    pub mean_elapsed_ms: Option<f64>,
    /// Run seeds joined by `;`.
    pub seeds: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceFailure {
    pub instance: String,
    pub message: String,
}

#[derive(Debug, Default, Serialize)]
pub struct ExperimentOutcome {
    pub results: Vec<ResultRow>,
    pub runs: Vec<RunRow>,
    pub failures: Vec<InstanceFailure>,
    #[serde(skip)]
    pub parse_errors: usize,
    #[serde(skip)]
    pub reports: Vec<RunReport>,
}

struct Loaded {
    id: String,
    kind: ProblemKind,
    model: ProblemModel,
    lower_bound: Option<f64>,
}

struct Cell {
    instance: usize,
    algorithm: usize,
    run: usize,
}

fn gap_of(report: &RunReport, lower_bound: Option<f64>, sense: Sense) -> Option<f64> {
    let lb = lower_bound?;
    Some(if report.best.is_feasible() {
        compute_gap(report.best.objective, lb, sense)
    } else {
        f64::INFINITY
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    sum / count.max(1) as f64
}

/// File-name-safe version of an id.
fn slug(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Runs every (instance, algorithm, run) cell. Instance paths are resolved
/// against `base`. Instances that fail to load are reported in
/// `failures` and skipped; outputs go to `out_dir` when set.
pub fn run_experiment(config: &ExperimentConfig, base: &Path) -> Result<ExperimentOutcome, ExperimentError> {
    let algorithms = config.validate()?;
    let mut outcome = ExperimentOutcome::default();
    let mut loaded = Vec::new();
    for entry in &config.instances {
        match entry.load(base).and_then(|inst| Ok((inst.kind(), inst.model()?))) {
            Ok((kind, model)) => loaded.push(Loaded {
                id: entry.id(),
                kind,
                model,
                lower_bound: entry.lower_bound,
            }),
            Err(e) => {
                if !matches!(e, FormatError::Io { .. }) {
                    outcome.parse_errors += 1;
                }
                outcome.failures.push(InstanceFailure {
                    instance: entry.id(),
                    message: e.to_string(),
                });
            }
        }
    }

    let cells: Vec<Cell> = (0..loaded.len())
        .flat_map(|i| {
            (0..algorithms.len()).flat_map(move |a| {
                (0..config.runs).map(move |r| Cell {
                    instance: i,
                    algorithm: a,
                    run: r,
                })
            })
        })
        .collect();
    let threads = config
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    let reports: Vec<RunReport> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                let inst = &loaded[c.instance];
                solve(
                    &inst.model,
                    &config.run_config(algorithms[c.algorithm], c.run as u64, inst.lower_bound),
                )
            })
            .collect::<Result<_, _>>()
    })?;

    for (cell, report) in cells.iter().zip(&reports) {
        let inst = &loaded[cell.instance];
        outcome.runs.push(RunRow {
            instance: inst.id.clone(),
            algorithm: config.algorithms[cell.algorithm].to_ascii_lowercase(),
            run: cell.run,
            seed: report.seed,
            objective: report.best.objective,
            violation_sum: report.best.violation_sum(),
            feasible: report.best.is_feasible(),
            gap: gap_of(report, inst.lower_bound, inst.model.sense()),
            evaluations: report.evaluations,
            iterations: report.iterations,
            perturbations: report.perturbations,
            elapsed_ms: config.record_wall_clock.then_some(report.elapsed.as_secs_f64() * 1e3),
        });
    }
    for (group, chunk) in reports.chunks(config.runs).enumerate() {
        let first = &cells[group * config.runs];
        let inst = &loaded[first.instance];
        let sense = inst.model.sense();
        let best = chunk
            .iter()
            .map(|r| &r.best)
            .reduce(|a, b| {
                if compare(b, a, sense) == Comparison::Better {
                    b
                } else {
                    a
                }
            })
            .expect("runs >= 1");
        let gaps: Option<Vec<f64>> = chunk.iter().map(|r| gap_of(r, inst.lower_bound, sense)).collect();
        outcome.results.push(ResultRow {
            instance: inst.id.clone(),
            problem: inst.kind.to_string(),
            algorithm: config.algorithms[first.algorithm].to_ascii_lowercase(),
            runs: chunk.len(),
            feasible_runs: chunk.iter().filter(|r| r.best.is_feasible()).count(),
            best_objective: best.objective,
            mean_objective: mean(chunk.iter().map(|r| r.best.objective)),
            best_gap: inst.lower_bound.map(|lb| {
                if best.is_feasible() {
                    compute_gap(best.objective, lb, sense)
                } else {
                    f64::INFINITY
                }
            }),
            mean_gap: gaps.map(|g| mean(g.into_iter())),
            mean_elapsed_ms: config
                .record_wall_clock
                .then(|| mean(chunk.iter().map(|r| r.elapsed.as_secs_f64() * 1e3))),
            seeds: chunk.iter().map(|r| r.seed.to_string()).collect::<Vec<_>>().join(";"),
        });
    }
    outcome.reports = reports;

    if let Some(dir) = &config.out_dir {
        write_outputs(&outcome, &cells, &loaded, config, &base.join(dir))?;
    }
    Ok(outcome)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Output {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> ExperimentError + '_ {
    move |e| ExperimentError::Output {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

#[derive(Serialize)]
struct TraceRow {
    elapsed_ms: Option<f64>,
    evaluations: u64,
    best_objective: f64,
    violation_sum: f64,
}

fn write_outputs(
    outcome: &ExperimentOutcome,
    cells: &[Cell],
    loaded: &[Loaded],
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<(), ExperimentError> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces).map_err(io_err(&traces))?;
    let results_csv = dir.join("results.csv");
    write_csv(&results_csv, &outcome.results)?;
    let runs_csv = dir.join("runs.csv");
    write_csv(&runs_csv, &outcome.runs)?;
    let json_path = dir.join("results.json");
    let json = serde_json::to_string_pretty(outcome).expect("outcome serializes") + "\n";
    fs::write(&json_path, json).map_err(io_err(&json_path))?;

    for (cell, report) in cells.iter().zip(&outcome.reports) {
        let name = format!(
            "{}__{}__run{}.csv",
            slug(&loaded[cell.instance].id),
            slug(&config.algorithms[cell.algorithm].to_ascii_lowercase()),
            cell.run
        );
        let rows: Vec<TraceRow> = report
            .trace
            .iter()
            .map(|p| TraceRow {
                elapsed_ms: config.record_wall_clock.then_some(p.elapsed.as_secs_f64() * 1e3),
                evaluations: p.evaluations,
                best_objective: p.best_objective,
                violation_sum: p.violation_sum,
            })
            .collect();
        write_csv(&traces.join(name), &rows)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_examples() {
        assert_eq!(compute_gap(100.0, 100.0, Sense::Min), 0.0);
        assert!((compute_gap(110.0, 100.0, Sense::Min) - 0.10).abs() < 1e-12);
        assert_eq!(compute_gap(5.0, 0.0, Sense::Min), 5.0);
        assert!((compute_gap(90.0, 100.0, Sense::Max) - 0.10).abs() < 1e-12);
    }

    #[test]
    fn algorithm_names() {
        let a = |s| Algorithm::parse(s).unwrap();
        assert_eq!(a("vns"), a("qvns"));
        assert_eq!(a("rvns").selection, SelectionMode::Random);
        assert_eq!(a("AVNS").selection, SelectionMode::SuccessRate);
        assert_eq!(a("lns").variant, Variant::Lns);
        assert_eq!(a("ga").variant, Variant::Ga);
        assert!(Algorithm::parse("rlns").is_none());
        assert!(Algorithm::parse("xvns").is_none());
        assert!(Algorithm::parse("").is_none());
    }

    #[test]
    fn config_defaults_and_validation() {
        let c = ExperimentConfig::from_json(r#"{"instances": [{"path": "a.json"}], "algorithms": ["sa"]}"#).unwrap();
        assert_eq!(c.runs, 5);
        assert_eq!(c.time_limit_s, Some(5.0));
        assert!(c.validate().is_ok());

        let bad = |patch: &str| {
            let text = format!(r#"{{"instances": [{{"path": "a.json"}}], "algorithms": ["sa"], {patch}}}"#);
            ExperimentConfig::from_json(&text).and_then(|c| c.validate().map(|_| ()))
        };
        assert!(bad(r#""runs": 0"#).is_err());
        assert!(bad(r#""time_limit_s": 0"#).is_err());
        assert!(bad(r#""time_limit_s": null"#).is_err());
        assert!(bad(r#""time_limit_s": null, "max_evaluations": 10"#).is_ok());
        let unknown = r#"{"instances": [{"path": "a.json"}], "algorithms": ["foo"]}"#;
        assert!(ExperimentConfig::from_json(unknown).unwrap().validate().is_err());
        assert!(bad(r#""colour": 1"#).is_err());
        assert!(bad(r#""solver": {"candidates": 0}"#).is_err());
    }
}
