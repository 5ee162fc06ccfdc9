//! Single-point metaheuristics (SA, TS, VNS, LNS) and a genetic algorithm,
//! all driven by the generic operators.

mod ga;
mod single_point;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EvaluatedSolution, ProblemModel, Sense};
use crate::qlearning::{QParams, SelectionMode};

pub use ga::run_ga;
pub use single_point::run_single_point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sa,
    Ts,
    Vns,
    Lns,
    Ga,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Sa => "sa",
            Variant::Ts => "ts",
            Variant::Vns => "vns",
            Variant::Lns => "lns",
            Variant::Ga => "ga",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaParams {
    /// `None` picks `max(1, 0.05·|f0|)` from the initial solution.
    pub initial_temperature: Option<f64>,
    /// Geometric factor applied once per outer iteration.
    pub cooling: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            initial_temperature: None,
            cooling: 0.95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TsParams {
    /// Tenure at the start of the run.
    pub tenure_max: usize,
    /// Tenure at the end of the run.
    pub tenure_min: usize,
}

impl Default for TsParams {
    fn default() -> Self {
        Self {
            tenure_max: 10,
            tenure_min: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LnsParams {
    /// Removal count at the start of the run as a share of the task count;
    /// it shrinks linearly to 1.
    pub removal_fraction: f64,
}

impl Default for LnsParams {
    fn default() -> Self {
        Self { removal_fraction: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elite_fraction: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 20,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            elite_fraction: 0.1,
        }
    }
}

/// Everything a run needs besides the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub variant: Variant,
    /// Neighborhood choice for SA, TS and VNS.
    pub selection: SelectionMode,
    pub seed: u64,
    pub time_limit_s: Option<f64>,
    pub max_evaluations: Option<u64>,
    pub max_iterations: Option<u64>,
    /// Stop once a feasible incumbent reaches this objective value.
    pub target: Option<f64>,
    /// Candidates generated per outer iteration.
    pub candidates: usize,
    /// Non-improving outer iterations before a perturbation.
    pub perturbation_trigger: usize,
    pub q: QParams,
    pub sa: SaParams,
    pub ts: TsParams,
    pub lns: LnsParams,
    pub ga: GaParams,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Vns,
            selection: SelectionMode::QLearning,
            seed: 0,
            time_limit_s: Some(5.0),
            max_evaluations: None,
            max_iterations: None,
            target: None,
            candidates: 5,
            perturbation_trigger: 50,
            q: QParams::default(),
            sa: SaParams::default(),
            ts: TsParams::default(),
            lns: LnsParams::default(),
            ga: GaParams::default(),
        }
    }
}

impl SolverConfig {
    pub fn new(variant: Variant, seed: u64) -> Self {
        Self {
            variant,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidConfig(why.into()));
        if self.time_limit_s.is_none() && self.max_evaluations.is_none() && self.max_iterations.is_none() {
            return bad("no time, evaluation or iteration budget");
        }
        if let Some(t) = self.time_limit_s {
            if !(t > 0.0) {
                return bad("time limit must be positive");
            }
        }
        if self.candidates < 1 {
            return bad("candidate count must be at least 1");
        }
        if self.perturbation_trigger < 1 {
            return bad("perturbation trigger must be at least 1");
        }
        if self.variant == Variant::Ga && self.ga.population < 2 {
            return bad("population must hold at least 2 individuals");
        }
        if !(0.0..=1.0).contains(&self.ga.crossover_rate) || !(0.0..=1.0).contains(&self.ga.mutation_rate) {
            return bad("rates must lie in [0, 1]");
        }
        if !(self.sa.cooling > 0.0 && self.sa.cooling <= 1.0) {
            return bad("cooling factor must lie in (0, 1]");
        }
        if self.ts.tenure_min > self.ts.tenure_max {
            return bad("minimum tenure exceeds maximum tenure");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    Initial,
    Improved,
    Perturbation,
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub elapsed: Duration,
    pub evaluations: u64,
    pub best_objective: f64,
    pub violation_sum: f64,
    pub event: TraceEvent,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub best: EvaluatedSolution,
    pub trace: Vec<TracePoint>,
    pub seed: u64,
    pub evaluations: u64,
    /// Outer iterations (generations for the GA).
    pub iterations: u64,
    pub perturbations: u64,
    pub elapsed: Duration,
    /// Time spent after the initial solution(s) were built.
    pub search_elapsed: Duration,
}

/// Runs the configured variant.
pub fn solve(model: &ProblemModel, config: &SolverConfig) -> Result<RunReport> {
    match config.variant {
        Variant::Ga => run_ga(model, config),
        _ => run_single_point(model, config),
    }
}

/// Budget bookkeeping and trace recording shared by all variants.
pub(crate) struct Monitor {
    start: Instant,
    search_start: Option<Instant>,
    time_limit: Option<Duration>,
    max_evaluations: Option<u64>,
    max_iterations: Option<u64>,
    target: Option<f64>,
    sense: Sense,
    pub trace: Vec<TracePoint>,
    pub iterations: u64,
    pub perturbations: u64,
    last_evaluations: u64,
    idle: u64,
}

/// Consecutive iterations without a single evaluation after which a run
/// bounded only by evaluations gives up.
const IDLE_LIMIT: u64 = 1000;

impl Monitor {
    pub fn new(model: &ProblemModel, config: &SolverConfig) -> Self {
        Self {
            start: Instant::now(),
            search_start: None,
            time_limit: config.time_limit_s.map(Duration::from_secs_f64),
            max_evaluations: config.max_evaluations,
            max_iterations: config.max_iterations,
            target: config.target,
            sense: model.sense(),
            trace: Vec::new(),
            iterations: 0,
            perturbations: 0,
            last_evaluations: 0,
            idle: 0,
        }
    }

    pub fn begin_search(&mut self) {
        self.search_start = Some(Instant::now());
    }

    pub fn record(&mut self, best: &EvaluatedSolution, evaluations: u64, event: TraceEvent) {
        self.trace.push(TracePoint {
            elapsed: self.start.elapsed(),
            evaluations,
            best_objective: best.objective,
            violation_sum: best.violation_sum(),
            event,
        });
    }

    pub fn target_reached(&self, best: &EvaluatedSolution) -> bool {
        match self.target {
            Some(t) => best.is_feasible() && self.sense.cmp_values(best.objective, t).is_le(),
            None => false,
        }
    }

    pub fn exhausted(&mut self, evaluations: u64, best: &EvaluatedSolution) -> bool {
        if evaluations == self.last_evaluations {
            self.idle += 1;
        } else {
            self.idle = 0;
            self.last_evaluations = evaluations;
        }
        let only_evaluations = self.time_limit.is_none() && self.max_iterations.is_none();
        (only_evaluations && self.idle > IDLE_LIMIT)
            || self.max_evaluations.is_some_and(|m| evaluations >= m)
            || self.max_iterations.is_some_and(|m| self.iterations >= m)
            || self.time_limit.is_some_and(|t| self.start.elapsed() >= t)
            || self.target_reached(best)
    }

    /// Fraction of the budget used, in `[0, 1]`. Evaluation and iteration
    /// budgets take precedence over time so that schedules stay
    /// reproducible.
    pub fn progress(&self, evaluations: u64) -> f64 {
        let p = if let Some(m) = self.max_evaluations {
            evaluations as f64 / m.max(1) as f64
        } else if let Some(m) = self.max_iterations {
            self.iterations as f64 / m.max(1) as f64
        } else if let Some(t) = self.time_limit {
            self.start.elapsed().as_secs_f64() / t.as_secs_f64()
        } else {
            0.0
        };
        p.clamp(0.0, 1.0)
    }

    pub fn finish(mut self, best: EvaluatedSolution, evaluations: u64, seed: u64) -> RunReport {
        self.record(&best, evaluations, TraceEvent::Final);
        let elapsed = self.start.elapsed();
        let search_elapsed = self.search_start.map_or(Duration::ZERO, |s| s.elapsed());
        RunReport {
            best,
            trace: self.trace,
            seed,
            evaluations,
            iterations: self.iterations,
            perturbations: self.perturbations,
            elapsed,
            search_elapsed,
        }
    }
}
