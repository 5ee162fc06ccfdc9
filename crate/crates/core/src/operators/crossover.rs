use rand::Rng;

use super::construction::{repair, ConstructionState, InsertionRule};
use crate::context::SearchContext;
use crate::error::{Error, Result};
use crate::model::{EvaluatedSolution, SolutionStructure};
use crate::ranking::{no_larger, Comparison};

/// Appends `task` to `resource` when that raises no violation component.
fn append_if_safe<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    current: &mut EvaluatedSolution,
    resource: usize,
    task: usize,
) {
    if current.structure.route(resource).len() >= ctx.model.position_capacity(resource) {
        return;
    }
    let mut s = current.structure.clone();
    s.route_mut(resource).push(task);
    let cand = ctx.evaluate(s);
    if no_larger(&cand.violations, &current.violations) {
        *current = cand;
    }
}

fn finish<R: Rng>(ctx: &mut SearchContext<'_, R>, child: EvaluatedSolution) -> EvaluatedSolution {
    let state = ConstructionState::new(child, ctx.model.task_count());
    repair(ctx, state, InsertionRule::NoWorse)
}

/// Single-point crossover before the repair pass: `parent1[..cut1]`
/// followed by the safe tasks of `parent2[cut2..]`.
pub fn single_point_append<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    parent1: &SolutionStructure,
    parent2: &SolutionStructure,
    cut1: usize,
    cut2: usize,
) -> Result<EvaluatedSolution> {
    if ctx.model.resource_count() != 1 {
        return Err(Error::WrongArity {
            expected: "exactly one resource",
            actual: ctx.model.resource_count(),
        });
    }
    let prefix = parent1.route(0)[..cut1.min(parent1.route(0).len())].to_vec();
    let mut child = ctx.evaluate(SolutionStructure::from_routes(vec![prefix]));
    for &task in &parent2.route(0)[cut2.min(parent2.route(0).len())..] {
        append_if_safe(ctx, &mut child, 0, task);
    }
    Ok(child)
}

fn draw_cut<R: Rng>(rng: &mut R, len: usize) -> usize {
    if len == 0 {
        0
    } else {
        rng.random_range(1..=len)
    }
}

/// Single-resource crossover with one independently drawn cut per parent.
pub fn single_point_crossover<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    parent1: &EvaluatedSolution,
    parent2: &EvaluatedSolution,
) -> Result<EvaluatedSolution> {
    let cut1 = draw_cut(&mut ctx.rng, parent1.structure.route(0).len());
    let cut2 = draw_cut(&mut ctx.rng, parent2.structure.route(0).len());
    let child = single_point_append(ctx, &parent1.structure, &parent2.structure, cut1, cut2)?;
    Ok(finish(ctx, child))
}

/// Two-point crossover over resource indices: resources in the window
/// `[min(a,b), max(a,b))` are rebuilt from `parent2`, the rest come from
/// `parent1`.
pub fn two_point_crossover<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    parent1: &EvaluatedSolution,
    parent2: &EvaluatedSolution,
) -> Result<EvaluatedSolution> {
    let m = ctx.model.resource_count();
    if m < 2 {
        return Err(Error::WrongArity {
            expected: "at least two resources",
            actual: m,
        });
    }
    let a = ctx.rng.random_range(0..=m);
    let b = ctx.rng.random_range(0..=m);
    let window = a.min(b)..a.max(b);
    two_point_window(ctx, &parent1.structure, &parent2.structure, window)
}

pub(crate) fn two_point_window<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    parent1: &SolutionStructure,
    parent2: &SolutionStructure,
    window: std::ops::Range<usize>,
) -> Result<EvaluatedSolution> {
    let mut base = parent1.clone();
    for i in window.clone() {
        base.route_mut(i).clear();
    }
    let mut child = ctx.evaluate(base);
    for i in window {
        for &task in parent2.route(i) {
            append_if_safe(ctx, &mut child, i, task);
        }
    }
    Ok(finish(ctx, child))
}

/// Picks the ranking-better of two uniform draws from `pop` excluding `skip`.
pub fn tournament<R: Rng>(ctx: &mut SearchContext<'_, R>, pop: &[EvaluatedSolution], skip: usize) -> usize {
    let draw = |rng: &mut R| {
        let k = rng.random_range(0..pop.len() - 1);
        if k >= skip {
            k + 1
        } else {
            k
        }
    };
    let x = draw(&mut ctx.rng);
    let y = draw(&mut ctx.rng);
    if ctx.compare(&pop[y], &pop[x]) == Comparison::Better {
        y
    } else {
        x
    }
}

/// One offspring per population member; with probability `p_c` member `i`
/// is crossed with a tournament-chosen partner.
pub fn crossover_operation<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    pop: &[EvaluatedSolution],
    p_c: f64,
) -> Result<Vec<EvaluatedSolution>> {
    if pop.len() < 2 {
        return Err(Error::InvalidConfig("crossover needs at least two individuals".into()));
    }
    let single = ctx.model.resource_count() == 1;
    let mut out = Vec::with_capacity(pop.len());
    for i in 0..pop.len() {
        if !ctx.rng.random_bool(p_c.clamp(0.0, 1.0)) {
            out.push(pop[i].clone());
            continue;
        }
        let partner = tournament(ctx, pop, i);
        let child = if single {
            single_point_crossover(ctx, &pop[i], &pop[partner])?
        } else {
            two_point_crossover(ctx, &pop[i], &pop[partner])?
        };
        out.push(child);
    }
    Ok(out)
}
