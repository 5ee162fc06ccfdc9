//! Tabular Q-learning over neighborhood structures.
//!
//! The search state is a 10-component vector of small class labels
//! describing the current solution, plus a distinguished `Zero` state used
//! as the successor of moves that could not be applied.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::context::SearchContext;
use crate::model::{EvaluatedSolution, ProblemModel, Template};
use crate::operators::{apply_neighborhood, MoveOutcome, NeighborhoodKind};
use crate::ranking::{no_larger, Comparison};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QState {
    Zero,
    Observed([u8; 10]),
}

impl QState {
    pub fn components(&self) -> Option<&[u8; 10]> {
        match self {
            QState::Zero => None,
            QState::Observed(s) => Some(s),
        }
    }
}

impl std::fmt::Display for QState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QState::Zero => f.write_str("zero"),
            QState::Observed(s) => {
                for (k, v) in s.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Observed state of `solution`; `stagnated` marks a run of
/// non-improving moves.
pub fn compute_state(model: &ProblemModel, solution: &EvaluatedSolution, stagnated: bool) -> QState {
    let class = |ok: bool| if ok { 1 } else { 2 };
    let mut s = [0u8; 10];
    s[0] = class(model.resource_count() == 1);
    s[1] = class(!model.is_ordered());
    s[2] = class(solution.is_feasible());
    for (slot, template) in Template::ALL.iter().enumerate() {
        let satisfied = model
            .constraints()
            .iter()
            .zip(&solution.violations)
            .filter(|(c, _)| c.template() == Some(*template))
            .all(|(_, &v)| v == 0.0);
        s[3 + slot] = class(satisfied);
    }
    s[8] = match solution.structure.max_load() {
        0 | 1 => 1,
        2 => 2,
        _ => 3,
    };
    s[9] = if stagnated { 1 } else { 2 };
    QState::Observed(s)
}

/// Reward of moving from `prev` to `next`; `None` means the move was not
/// applicable.
pub fn reward(model: &ProblemModel, prev: &EvaluatedSolution, next: Option<&EvaluatedSolution>) -> i32 {
    let Some(next) = next else {
        return -2;
    };
    match crate::ranking::compare(next, prev, model.sense()) {
        Comparison::Better => 2,
        Comparison::Equal => 0,
        Comparison::Worse => {
            if no_larger(&next.violations, &prev.violations) {
                1
            } else {
                -1
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QParams {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
    /// Selections after which the success counters restart.
    pub window: u32,
    /// Consecutive non-improving moves that mark the search as stagnated.
    pub stagnation_threshold: u32,
    /// Share of actions, by Q value, eligible for exploitation.
    pub top_fraction: f64,
}

impl Default for QParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            gamma: 0.9,
            epsilon: 0.1,
            window: 200,
            stagnation_threshold: 20,
            top_fraction: 0.2,
        }
    }
}

/// How the next neighborhood structure is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Improved ε-greedy over Q values with success-rate roulette.
    QLearning,
    /// Roulette over historical success rates of all actions.
    SuccessRate,
    /// Uniform choice.
    Random,
}

/// Q values plus per-action success statistics.
#[derive(Debug, Clone)]
pub struct QTable {
    actions: Vec<NeighborhoodKind>,
    values: BTreeMap<QState, Vec<f64>>,
    successes: Vec<u32>,
    selections: Vec<u32>,
    window_used: u32,
    window: u32,
}

impl QTable {
    pub fn new(actions: Vec<NeighborhoodKind>, window: u32) -> Self {
        let ns = actions.len();
        Self {
            actions,
            values: BTreeMap::new(),
            successes: vec![0; ns],
            selections: vec![0; ns],
            window_used: 0,
            window: window.max(1),
        }
    }

    pub fn actions(&self) -> &[NeighborhoodKind] {
        &self.actions
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn value(&self, state: QState, action: usize) -> f64 {
        self.values.get(&state).map_or(0.0, |row| row[action])
    }

    pub fn set_value(&mut self, state: QState, action: usize, value: f64) {
        let ns = self.actions.len();
        self.values.entry(state).or_insert_with(|| vec![0.0; ns])[action] = value;
    }

    pub fn max_value(&self, state: QState) -> f64 {
        self.values
            .get(&state)
            .map_or(0.0, |row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    /// One temporal-difference step on `(state, action)`.
    pub fn update(&mut self, state: QState, action: usize, reward: f64, next: QState, alpha: f64, gamma: f64) {
        let q = self.value(state, action);
        let target = reward + gamma * self.max_value(next);
        self.set_value(state, action, (1.0 - alpha) * q + alpha * target);
    }

    /// Success rate of `action` in the current window; 1 before any selection.
    pub fn success_rate(&self, action: usize) -> f64 {
        match self.selections[action] {
            0 => 1.0,
            st => self.successes[action] as f64 / st as f64,
        }
    }

    pub fn successes(&self, action: usize) -> u32 {
        self.successes[action]
    }

    pub fn selections(&self, action: usize) -> u32 {
        self.selections[action]
    }

    /// Counts one selection of `action`, restarting the window when full.
    pub fn record(&mut self, action: usize, success: bool) {
        if self.window_used == self.window {
            self.successes.fill(0);
            self.selections.fill(0);
            self.window_used = 0;
        }
        self.window_used += 1;
        self.selections[action] += 1;
        if success {
            self.successes[action] += 1;
        }
    }

    /// The `⌈fraction·ns⌉` actions with the largest Q in `state`, ties by
    /// action index.
    pub fn top_pool(&self, state: QState, fraction: f64) -> Vec<usize> {
        let ns = self.actions.len();
        let size = ((fraction * ns as f64).ceil() as usize).clamp(1, ns.max(1));
        let mut order: Vec<usize> = (0..ns).collect();
        order.sort_by(|&a, &b| self.value(state, b).total_cmp(&self.value(state, a)).then(a.cmp(&b)));
        order.truncate(size);
        order
    }

    fn roulette<R: Rng>(&self, pool: &[usize], rng: &mut R) -> usize {
        let weights: Vec<f64> = pool.iter().map(|&a| self.success_rate(a)).collect();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return pool[rng.random_range(0..pool.len())];
        }
        let mut x = rng.random::<f64>() * total;
        for (&a, w) in pool.iter().zip(&weights) {
            if x < *w {
                return a;
            }
            x -= w;
        }
        *pool.last().expect("pool is never empty")
    }

    pub fn select_action<R: Rng>(&self, state: QState, mode: SelectionMode, params: &QParams, rng: &mut R) -> usize {
        let ns = self.actions.len();
        match mode {
            SelectionMode::Random => rng.random_range(0..ns),
            SelectionMode::SuccessRate => self.roulette(&(0..ns).collect::<Vec<_>>(), rng),
            SelectionMode::QLearning => {
                if rng.random::<f64>() < params.epsilon {
                    rng.random_range(0..ns)
                } else {
                    self.roulette(&self.top_pool(state, params.top_fraction), rng)
                }
            }
        }
    }

    /// Text dump: one row per visited state, one column per action.
    pub fn dump(&self) -> String {
        let mut out = String::from("state");
        for a in &self.actions {
            out.push('\t');
            out.push_str(a.name());
        }
        out.push('\n');
        for (state, row) in &self.values {
            let _ = write!(out, "{state}");
            for v in row {
                let _ = write!(out, "\t{v:.4}");
            }
            out.push('\n');
        }
        out
    }
}

/// Result of one selector-driven move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: NeighborhoodKind,
    pub reward: i32,
}

/// Chooses and applies neighborhood moves, learning from their rewards.
#[derive(Debug, Clone)]
pub struct NeighborhoodSelector {
    mode: SelectionMode,
    params: QParams,
    table: Option<QTable>,
    stagnation: u32,
}

impl NeighborhoodSelector {
    pub fn new(mode: SelectionMode, params: QParams) -> Self {
        Self {
            mode,
            params,
            table: None,
            stagnation: 0,
        }
    }

    pub fn mode(&self) -> SelectionMode {
        self.mode
    }

    /// `None` until the first move.
    pub fn table(&self) -> Option<&QTable> {
        self.table.as_ref()
    }

    pub fn is_stagnated(&self) -> bool {
        self.stagnation >= self.params.stagnation_threshold
    }

    /// Applies the kind chosen for `solution`'s state. Returns the neighbor,
    /// or a clone of `solution` when the move was not applicable.
    pub fn neighborhood_solution<R: Rng>(
        &mut self,
        ctx: &mut SearchContext<'_, R>,
        solution: &EvaluatedSolution,
    ) -> (EvaluatedSolution, MoveRecord) {
        let window = self.params.window;
        let table = self
            .table
            .get_or_insert_with(|| QTable::new(NeighborhoodKind::ALL.to_vec(), window));
        let model = ctx.model;
        let state = compute_state(model, solution, self.stagnation >= self.params.stagnation_threshold);
        let action = table.select_action(state, self.mode, &self.params, &mut ctx.rng);
        let kind = table.actions()[action];
        let outcome = apply_neighborhood(ctx, solution, kind);
        let (next, r, next_state) = match outcome {
            MoveOutcome::Moved(next) => {
                let r = reward(model, solution, Some(&next));
                if r == 2 {
                    self.stagnation = 0;
                } else {
                    self.stagnation = self.stagnation.saturating_add(1);
                }
                let s = compute_state(model, &next, self.stagnation >= self.params.stagnation_threshold);
                (next, r, s)
            }
            MoveOutcome::Unreachable => {
                self.stagnation = self.stagnation.saturating_add(1);
                (solution.clone(), -2, QState::Zero)
            }
        };
        if self.mode == SelectionMode::QLearning {
            table.update(
                state,
                action,
                r as f64,
                next_state,
                self.params.alpha,
                self.params.gamma,
            );
        }
        table.record(action, r == 2);
        (next, MoveRecord { kind, reward: r })
    }
}
