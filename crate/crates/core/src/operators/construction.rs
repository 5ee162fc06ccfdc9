use rand::seq::{index, IndexedRandom};
use rand::Rng;

use crate::context::SearchContext;
use crate::model::{
    ConstraintKind, EvaluatedSolution, Occupancy, PairingMode, ProblemModel, SolutionStructure, FEASIBILITY_TOLERANCE,
};
use crate::ranking::{no_larger, Comparison};

/// Partial solution being extended one unit assignment at a time, with the
/// resources and per-resource tasks already found not to fit.
#[derive(Debug, Clone)]
pub struct ConstructionState {
    pub current: EvaluatedSolution,
    infeasible_resources: Vec<bool>,
    infeasible_tasks: Vec<Vec<bool>>,
}

impl ConstructionState {
    /// Fresh exclusion sets around `current`.
    pub fn new(current: EvaluatedSolution, tasks: usize) -> Self {
        let m = current.structure.resource_count();
        Self {
            current,
            infeasible_resources: vec![false; m],
            infeasible_tasks: vec![vec![false; tasks]; m],
        }
    }

    pub fn is_resource_excluded(&self, resource: usize) -> bool {
        self.infeasible_resources[resource]
    }

    pub fn is_task_excluded(&self, resource: usize, task: usize) -> bool {
        self.infeasible_tasks[resource][task]
    }

    pub fn exclude_task(&mut self, resource: usize, task: usize) {
        self.infeasible_tasks[resource][task] = true;
    }

    pub fn exclude_resource(&mut self, resource: usize) {
        self.infeasible_resources[resource] = true;
    }

    pub fn excluded_resources(&self) -> impl Iterator<Item = usize> + '_ {
        self.infeasible_resources
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(|(i, _)| i)
    }
}

/// How a candidate insertion is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertionRule {
    /// Accept when the candidate does not rank worse than the current solution.
    NoWorse,
    /// As `NoWorse`, and no violation component may grow.
    NonIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Inserted {
        resource: usize,
        task: usize,
        position: usize,
    },
    Rejected {
        resource: usize,
        task: usize,
    },
    /// The drawn resource had no admissible task left and was excluded.
    ResourceExhausted(usize),
    /// No resource can take another task; construction is complete.
    NoFeasibleResource,
}

/// Current left-hand sides of the aggregate templates.
enum Load {
    Resource(Vec<f64>),
    Task(Vec<f64>),
    ResourceTask(Vec<f64>),
    Other,
}

/// Template bookkeeping used to pre-filter resources, tasks and positions.
pub(crate) struct Admission<'a> {
    model: &'a ProblemModel,
    structure: &'a SolutionStructure,
    occupancy: Occupancy,
    loads: Vec<Load>,
}

impl<'a> Admission<'a> {
    pub(crate) fn new(model: &'a ProblemModel, structure: &'a SolutionStructure) -> Self {
        let n = model.task_count();
        let m = model.resource_count();
        let occupancy = Occupancy::new(structure, n);
        let loads = model
            .constraints()
            .iter()
            .map(|c| match &c.kind {
                ConstraintKind::ResourceAggregate { coefficients, .. } => Load::Resource(
                    structure
                        .routes()
                        .iter()
                        .enumerate()
                        .map(|(i, r)| r.iter().map(|&j| coefficients.at(i, j)).sum())
                        .collect(),
                ),
                ConstraintKind::TaskAggregate { coefficients, .. } => {
                    let mut l = vec![0.0; n];
                    for (i, _, j) in structure.cells() {
                        l[j] += coefficients.at(i, j);
                    }
                    Load::Task(l)
                }
                ConstraintKind::ResourceTaskAggregate { coefficients, .. } => {
                    let mut l = vec![0.0; m * n];
                    for (i, _, j) in structure.cells() {
                        l[i * n + j] += coefficients.at(i, j);
                    }
                    Load::ResourceTask(l)
                }
                _ => Load::Other,
            })
            .collect();
        Self {
            model,
            structure,
            occupancy,
            loads,
        }
    }

    /// Resource has a free position and every capped resource aggregate has
    /// room for at least one task.
    pub(crate) fn resource_open(&self, i: usize) -> bool {
        if self.structure.route(i).len() >= self.model.position_capacity(i) {
            return false;
        }
        let n = self.model.task_count();
        self.model
            .constraints()
            .iter()
            .zip(&self.loads)
            .all(|(c, load)| match (&c.kind, load) {
                (
                    ConstraintKind::ResourceAggregate {
                        coefficients,
                        thresholds,
                        relation,
                    },
                    Load::Resource(l),
                ) if relation.has_upper_bound() => {
                    let room = thresholds.at(i, 0) + FEASIBILITY_TOLERANCE - l[i];
                    (0..n).any(|j| coefficients.at(i, j) <= room)
                }
                _ => true,
            })
    }

    /// Adding task `j` to resource `i` keeps every capped aggregate row within
    /// its threshold and respects pairings.
    pub(crate) fn task_admissible(&self, i: usize, j: usize) -> bool {
        let n = self.model.task_count();
        for (ci, (c, load)) in self.model.constraints().iter().zip(&self.loads).enumerate() {
            let fits = |current: f64, rho: f64, theta: f64| current + rho <= theta + FEASIBILITY_TOLERANCE;
            let ok = match (&c.kind, load) {
                (
                    ConstraintKind::ResourceAggregate {
                        coefficients,
                        thresholds,
                        relation,
                    },
                    Load::Resource(l),
                ) => !relation.has_upper_bound() || fits(l[i], coefficients.at(i, j), thresholds.at(i, 0)),
                (
                    ConstraintKind::TaskAggregate {
                        coefficients,
                        thresholds,
                        relation,
                    },
                    Load::Task(l),
                ) => !relation.has_upper_bound() || fits(l[j], coefficients.at(i, j), thresholds.at(0, j)),
                (
                    ConstraintKind::ResourceTaskAggregate {
                        coefficients,
                        thresholds,
                        relation,
                    },
                    Load::ResourceTask(l),
                ) => !relation.has_upper_bound() || fits(l[i * n + j], coefficients.at(i, j), thresholds.at(i, j)),
                (ConstraintKind::Pairing { mode, .. }, _) => {
                    let partners = &self.model.links(ci).partners[j];
                    match mode {
                        PairingMode::DifferentResource => partners.iter().all(|&p| !self.occupancy.on(p, i)),
                        PairingMode::SameResource => partners
                            .iter()
                            .all(|&p| self.occupancy.places(p).iter().all(|&(r, _)| r == i)),
                    }
                }
                _ => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Insertion positions for task `j` on resource `i` allowed by the
    /// precedence templates.
    pub(crate) fn feasible_positions(&self, i: usize, j: usize) -> Vec<usize> {
        let len = self.structure.route(i).len();
        if !self.model.is_ordered() {
            return vec![len];
        }
        let mut lo = 0;
        let mut hi = len;
        for (ci, c) in self.model.constraints().iter().enumerate() {
            if !matches!(c.kind, ConstraintKind::Precedence { .. }) {
                continue;
            }
            let links = self.model.links(ci);
            for &b in &links.before[j] {
                for &(r, k) in self.occupancy.places(b) {
                    if r == i {
                        lo = lo.max(k + 1);
                    }
                }
            }
            for &a in &links.after[j] {
                for &(r, k) in self.occupancy.places(a) {
                    if r == i {
                        hi = hi.min(k);
                    }
                }
            }
        }
        (lo..=hi).collect()
    }
}

fn accepts<R: Rng>(
    ctx: &SearchContext<'_, R>,
    candidate: &EvaluatedSolution,
    current: &EvaluatedSolution,
    rule: InsertionRule,
) -> bool {
    if ctx.compare(candidate, current) == Comparison::Worse {
        return false;
    }
    match rule {
        InsertionRule::NoWorse => true,
        InsertionRule::NonIncreasing => no_larger(&candidate.violations, &current.violations),
    }
}

/// Inserts `task` on `resource` at the ranking-best of `positions`; the
/// lowest position wins ties.
pub(crate) fn best_insertion<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    base: &SolutionStructure,
    resource: usize,
    task: usize,
    positions: &[usize],
) -> Option<(EvaluatedSolution, usize)> {
    let mut best: Option<(EvaluatedSolution, usize)> = None;
    for &p in positions {
        let mut s = base.clone();
        s.route_mut(resource).insert(p, task);
        let cand = ctx.evaluate(s);
        match &best {
            Some((b, _)) if !ctx.is_better(&cand, b) => {}
            _ => best = Some((cand, p)),
        }
    }
    best
}

/// One attempted unit assignment.
pub fn feasible_assignment<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    state: &mut ConstructionState,
    rule: InsertionRule,
) -> StepOutcome {
    let model = ctx.model;
    let admission = Admission::new(model, &state.current.structure);
    let open: Vec<usize> = (0..model.resource_count())
        .filter(|&i| !state.is_resource_excluded(i) && admission.resource_open(i))
        .collect();
    let Some(&resource) = open.choose(&mut ctx.rng) else {
        return StepOutcome::NoFeasibleResource;
    };
    let tasks: Vec<usize> = (0..model.task_count())
        .filter(|&j| !state.is_task_excluded(resource, j) && admission.task_admissible(resource, j))
        .collect();
    let Some(&task) = tasks.choose(&mut ctx.rng) else {
        state.exclude_resource(resource);
        return StepOutcome::ResourceExhausted(resource);
    };
    let positions = admission.feasible_positions(resource, task);
    drop(admission);

    let candidate = best_insertion(ctx, &state.current.structure, resource, task, &positions);
    if let Some((candidate, position)) = candidate.filter(|(c, _)| accepts(ctx, c, &state.current, rule)) {
        state.current = candidate;
        if model.is_ordered() {
            state.infeasible_tasks[resource].fill(false);
        }
        return StepOutcome::Inserted {
            resource,
            task,
            position,
        };
    }
    state.exclude_task(resource, task);
    if tasks.len() == 1 {
        state.exclude_resource(resource);
    }
    StepOutcome::Rejected { resource, task }
}

/// Runs [`feasible_assignment`] until no resource can take another task.
pub fn repair<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    mut state: ConstructionState,
    rule: InsertionRule,
) -> EvaluatedSolution {
    while feasible_assignment(ctx, &mut state, rule) != StepOutcome::NoFeasibleResource {}
    state.current
}

/// Greedy randomized construction from the empty structure.
pub fn initial_solution<R: Rng>(ctx: &mut SearchContext<'_, R>) -> EvaluatedSolution {
    let empty = ctx.evaluate(ctx.model.empty_structure());
    let state = ConstructionState::new(empty, ctx.model.task_count());
    repair(ctx, state, InsertionRule::NoWorse)
}

/// Removes `nd` uniformly drawn unit assignments (all of them if fewer).
pub fn destroy<R: Rng>(rng: &mut R, structure: &SolutionStructure, nd: usize) -> SolutionStructure {
    let cells: Vec<(usize, usize)> = structure.cells().map(|(i, k, _)| (i, k)).collect();
    let remove = nd.min(cells.len());
    let mut picked: Vec<(usize, usize)> = index::sample(rng, cells.len(), remove)
        .into_iter()
        .map(|c| cells[c])
        .collect();
    picked.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = structure.clone();
    for (i, k) in picked {
        out.route_mut(i).remove(k);
    }
    out
}

/// Destroy `nd` random unit assignments, then repair with fresh exclusion sets.
pub fn destroy_repair<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    solution: &EvaluatedSolution,
    nd: usize,
) -> EvaluatedSolution {
    let destroyed = destroy(&mut ctx.rng, &solution.structure, nd);
    let start = ctx.evaluate(destroyed);
    let state = ConstructionState::new(start, ctx.model.task_count());
    repair(ctx, state, InsertionRule::NoWorse)
}
