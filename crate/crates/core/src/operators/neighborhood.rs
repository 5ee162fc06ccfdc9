use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::construction::{best_insertion, repair, Admission, ConstructionState, InsertionRule};
use crate::context::SearchContext;
use crate::model::{EvaluatedSolution, SolutionStructure};
use crate::ranking::no_larger;

/// Concrete neighborhood structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborhoodKind {
    SwapIntra,
    SwapInter,
    ShiftIntra,
    ShiftInter,
    ShiftAllInter,
    Remove,
    Insert,
    RemoveInsert,
    ReverseIntra,
    ReverseInter,
}

impl NeighborhoodKind {
    pub const ALL: [NeighborhoodKind; 10] = [
        NeighborhoodKind::SwapIntra,
        NeighborhoodKind::SwapInter,
        NeighborhoodKind::ShiftIntra,
        NeighborhoodKind::ShiftInter,
        NeighborhoodKind::ShiftAllInter,
        NeighborhoodKind::Remove,
        NeighborhoodKind::Insert,
        NeighborhoodKind::RemoveInsert,
        NeighborhoodKind::ReverseIntra,
        NeighborhoodKind::ReverseInter,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            NeighborhoodKind::SwapIntra => "swap_intra",
            NeighborhoodKind::SwapInter => "swap_inter",
            NeighborhoodKind::ShiftIntra => "shift_intra",
            NeighborhoodKind::ShiftInter => "shift_inter",
            NeighborhoodKind::ShiftAllInter => "shift_all_inter",
            NeighborhoodKind::Remove => "remove",
            NeighborhoodKind::Insert => "insert",
            NeighborhoodKind::RemoveInsert => "remove_insert",
            NeighborhoodKind::ReverseIntra => "reverse_intra",
            NeighborhoodKind::ReverseInter => "reverse_inter",
        }
    }

    /// Moves that only permute assigned tasks.
    pub fn conserves_tasks(self) -> bool {
        !matches!(
            self,
            NeighborhoodKind::Remove | NeighborhoodKind::Insert | NeighborhoodKind::RemoveInsert
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MoveOutcome {
    Moved(EvaluatedSolution),
    /// The move cannot be applied to this solution.
    Unreachable,
}

impl MoveOutcome {
    pub fn into_option(self) -> Option<EvaluatedSolution> {
        match self {
            MoveOutcome::Moved(s) => Some(s),
            MoveOutcome::Unreachable => None,
        }
    }
}

fn segment_len<R: Rng>(rng: &mut R, available: usize) -> usize {
    rng.random_range(1..=2usize).min(available)
}

fn pick<R: Rng>(rng: &mut R, items: &[usize]) -> Option<usize> {
    items.choose(rng).copied()
}

/// Two distinct draws from `items`.
fn pick_two<R: Rng>(rng: &mut R, items: &[usize]) -> Option<(usize, usize)> {
    if items.len() < 2 {
        return None;
    }
    let a = rng.random_range(0..items.len());
    let mut b = rng.random_range(0..items.len() - 1);
    if b >= a {
        b += 1;
    }
    Some((items[a], items[b]))
}

/// Applies one move of `kind` to `solution`.
pub fn apply_neighborhood<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    solution: &EvaluatedSolution,
    kind: NeighborhoodKind,
) -> MoveOutcome {
    let structure = match kind {
        NeighborhoodKind::Insert => return insert(ctx, solution),
        NeighborhoodKind::RemoveInsert => return remove_insert(ctx, solution),
        _ => permute(ctx, &solution.structure, kind),
    };
    match structure {
        Some(s) => MoveOutcome::Moved(ctx.evaluate(s)),
        None => MoveOutcome::Unreachable,
    }
}

fn permute<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    current: &SolutionStructure,
    kind: NeighborhoodKind,
) -> Option<SolutionStructure> {
    let model = ctx.model;
    let rng = &mut ctx.rng;
    let m = model.resource_count();
    let ordered = model.is_ordered();
    let len = |i: usize| current.route(i).len();
    let with_at_least = |k: usize| (0..m).filter(|&i| len(i) >= k).collect::<Vec<_>>();
    let mut s = current.clone();

    match kind {
        NeighborhoodKind::SwapIntra => {
            if !ordered {
                return None;
            }
            let i = pick(rng, &with_at_least(2))?;
            let (a, b) = pick_two(rng, &(0..len(i)).collect::<Vec<_>>())?;
            s.route_mut(i).swap(a, b);
        }
        NeighborhoodKind::SwapInter => {
            let (a, b) = pick_two(rng, &with_at_least(1))?;
            let pa = rng.random_range(0..len(a));
            let pb = rng.random_range(0..len(b));
            let ta = s.route(a)[pa];
            s.route_mut(a)[pa] = s.route(b)[pb];
            s.route_mut(b)[pb] = ta;
        }
        NeighborhoodKind::ShiftIntra => {
            if !ordered {
                return None;
            }
            let i = pick(rng, &with_at_least(2))?;
            let n = len(i);
            let l = segment_len(rng, n - 1);
            let from = rng.random_range(0..=n - l);
            let mut to = rng.random_range(0..n - l);
            if to >= from {
                to += 1;
            }
            let route = s.route_mut(i);
            let seg: Vec<usize> = route.drain(from..from + l).collect();
            route.splice(to..to, seg);
        }
        NeighborhoodKind::ShiftInter => {
            let a = pick(rng, &with_at_least(1))?;
            let l = segment_len(rng, len(a));
            let targets: Vec<usize> = (0..m)
                .filter(|&b| b != a && len(b) + l <= model.position_capacity(b))
                .collect();
            let b = pick(rng, &targets)?;
            let from = rng.random_range(0..=len(a) - l);
            let seg: Vec<usize> = s.route_mut(a).drain(from..from + l).collect();
            let to = if ordered { rng.random_range(0..=len(b)) } else { len(b) };
            s.route_mut(b).splice(to..to, seg);
        }
        NeighborhoodKind::ShiftAllInter => {
            let a = pick(rng, &with_at_least(1))?;
            let targets: Vec<usize> = (0..m)
                .filter(|&b| b != a && len(b) + len(a) <= model.position_capacity(b))
                .collect();
            let b = pick(rng, &targets)?;
            let seg = std::mem::take(s.route_mut(a));
            let to = if ordered { rng.random_range(0..=len(b)) } else { len(b) };
            s.route_mut(b).splice(to..to, seg);
        }
        NeighborhoodKind::Remove => {
            let i = pick(rng, &with_at_least(1))?;
            let p = rng.random_range(0..len(i));
            s.route_mut(i).remove(p);
        }
        NeighborhoodKind::ReverseIntra => {
            if !ordered {
                return None;
            }
            let i = pick(rng, &with_at_least(2))?;
            let (a, b) = pick_two(rng, &(0..len(i)).collect::<Vec<_>>())?;
            s.route_mut(i)[a.min(b)..=a.max(b)].reverse();
        }
        NeighborhoodKind::ReverseInter => {
            let (a, b) = pick_two(rng, &with_at_least(1))?;
            let la = segment_len(rng, len(a));
            let lb = segment_len(rng, len(b));
            let tail_start = len(a) - la;
            let mut joined: Vec<usize> = s.route_mut(a).drain(tail_start..).collect();
            joined.extend(s.route_mut(b).drain(..lb));
            joined.reverse();
            let head: Vec<usize> = joined.split_off(la);
            s.route_mut(a).extend(joined);
            s.route_mut(b).splice(0..0, head);
        }
        NeighborhoodKind::Insert | NeighborhoodKind::RemoveInsert => unreachable!("handled by caller"),
    }
    Some(s)
}

/// Inserts one admissible task at the best position that does not raise any
/// violation component.
fn insert<R: Rng>(ctx: &mut SearchContext<'_, R>, solution: &EvaluatedSolution) -> MoveOutcome {
    let model = ctx.model;
    let admission = Admission::new(model, &solution.structure);
    let pairs: Vec<(usize, usize)> = (0..model.resource_count())
        .filter(|&i| admission.resource_open(i))
        .flat_map(|i| (0..model.task_count()).map(move |j| (i, j)))
        .filter(|&(i, j)| admission.task_admissible(i, j))
        .collect();
    let Some(&(resource, task)) = pairs.choose(&mut ctx.rng) else {
        return MoveOutcome::Unreachable;
    };
    let positions = admission.feasible_positions(resource, task);
    drop(admission);

    let mut best: Option<EvaluatedSolution> = None;
    for p in positions {
        if let Some((cand, _)) = best_insertion(ctx, &solution.structure, resource, task, &[p]) {
            if !no_larger(&cand.violations, &solution.violations) {
                continue;
            }
            match &best {
                Some(b) if !ctx.is_better(&cand, b) => {}
                _ => best = Some(cand),
            }
        }
    }
    best.map_or(MoveOutcome::Unreachable, MoveOutcome::Moved)
}

/// Removes 1-2 consecutive tasks from one resource and refills greedily
/// without raising any violation component; the removed tasks may not go
/// back to their source resource.
fn remove_insert<R: Rng>(ctx: &mut SearchContext<'_, R>, solution: &EvaluatedSolution) -> MoveOutcome {
    let model = ctx.model;
    let sources: Vec<usize> = (0..model.resource_count())
        .filter(|&i| !solution.structure.route(i).is_empty())
        .collect();
    let Some(i) = pick(&mut ctx.rng, &sources) else {
        return MoveOutcome::Unreachable;
    };
    let n = solution.structure.route(i).len();
    let l = segment_len(&mut ctx.rng, n);
    let from = ctx.rng.random_range(0..=n - l);
    let mut s = solution.structure.clone();
    let removed: Vec<usize> = s.route_mut(i).drain(from..from + l).collect();
    let start = ctx.evaluate(s);
    let mut state = ConstructionState::new(start, model.task_count());
    for &j in &removed {
        state.exclude_task(i, j);
    }
    MoveOutcome::Moved(repair(ctx, state, InsertionRule::NonIncreasing))
}
