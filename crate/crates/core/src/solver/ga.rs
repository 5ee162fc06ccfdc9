use rand::Rng;

use super::{Monitor, RunReport, SolverConfig, TraceEvent, Variant};
use crate::context::SearchContext;
use crate::error::{Error, Result};
use crate::model::{EvaluatedSolution, ProblemModel};
use crate::operators::{crossover_operation, initial_solution};
use crate::qlearning::{NeighborhoodSelector, SelectionMode};
use crate::ranking::rank_solutions;

/// Generational GA: crossover, random-neighborhood mutation, then elitist
/// survival of the ranked parents-plus-offspring pool with tournament fill.
pub fn run_ga(model: &ProblemModel, config: &SolverConfig) -> Result<RunReport> {
    config.validate()?;
    if config.variant != Variant::Ga {
        return Err(Error::InvalidConfig("variant is not the genetic algorithm".into()));
    }
    let params = config.ga;
    let mut ctx = SearchContext::seeded(model, config.seed);
    let mut monitor = Monitor::new(model, config);
    let mut pop: Vec<EvaluatedSolution> = (0..params.population).map(|_| initial_solution(&mut ctx)).collect();
    let mut best = pop[rank_solutions(&pop, model.sense())[0].index].clone();
    monitor.record(&best, ctx.evaluations(), TraceEvent::Initial);
    monitor.begin_search();
    if model.task_count() == 0 {
        return Ok(monitor.finish(best, ctx.evaluations(), config.seed));
    }
    let mut mutation = NeighborhoodSelector::new(SelectionMode::Random, config.q);

    while !monitor.exhausted(ctx.evaluations(), &best) {
        monitor.iterations += 1;
        let mut offspring = crossover_operation(&mut ctx, &pop, params.crossover_rate)?;
        for child in &mut offspring {
            if ctx.rng.random_bool(params.mutation_rate) {
                *child = mutation.neighborhood_solution(&mut ctx, child).0;
            }
        }
        let mut mix = std::mem::take(&mut pop);
        mix.extend(offspring);
        let ranks = rank_solutions(&mix, model.sense());
        // position of each member in the ranking, lower is better
        let mut position = vec![0usize; mix.len()];
        for (p, r) in ranks.iter().enumerate() {
            position[r.index] = p;
        }
        let elite = ((params.elite_fraction * mix.len() as f64).ceil() as usize).clamp(1, params.population);
        let mut next: Vec<EvaluatedSolution> = ranks[..elite].iter().map(|r| mix[r.index].clone()).collect();
        while next.len() < params.population {
            let a = ctx.rng.random_range(0..mix.len());
            let b = ctx.rng.random_range(0..mix.len());
            let winner = if position[b] < position[a] { b } else { a };
            next.push(mix[winner].clone());
        }
        let leader = &mix[ranks[0].index];
        if ctx.is_better(leader, &best) {
            best = leader.clone();
            monitor.record(&best, ctx.evaluations(), TraceEvent::Improved);
        }
        pop = next;
    }
    Ok(monitor.finish(best, ctx.evaluations(), config.seed))
}
