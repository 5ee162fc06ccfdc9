use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::{Monitor, RunReport, SolverConfig, TraceEvent, Variant};
use crate::context::SearchContext;
use crate::error::{Error, Result};
use crate::model::{EvaluatedSolution, ProblemModel, SolutionStructure};
use crate::operators::{apply_neighborhood, destroy_repair, initial_solution, NeighborhoodKind};
use crate::qlearning::NeighborhoodSelector;
use crate::ranking::{best_index, dominates_unchecked, Comparison};

type Pair = (usize, usize);

fn pairs(s: &SolutionStructure) -> BTreeSet<Pair> {
    s.cells().map(|(i, _, j)| (j, i)).collect()
}

/// Per-variant acceptance state.
enum Acceptance {
    Annealing {
        initial: f64,
        temperature: f64,
        cooling: f64,
    },
    Tabu {
        expires: HashMap<Pair, u64>,
        max: usize,
        min: usize,
    },
    Vns {
        kind: usize,
    },
    NotWorse,
}

fn metropolis<R: Rng>(rng: &mut R, delta: f64, temperature: f64) -> bool {
    temperature > 0.0 && rng.random::<f64>() < (-delta / temperature).exp()
}

fn sa_accepts<R: Rng>(
    ctx: &mut SearchContext<'_, R>,
    cand: &EvaluatedSolution,
    current: &EvaluatedSolution,
    temperature: f64,
) -> bool {
    if ctx.compare(cand, current) != Comparison::Worse {
        return true;
    }
    match (current.is_feasible(), cand.is_feasible()) {
        (true, true) => {
            let delta = (cand.objective - current.objective).abs();
            metropolis(&mut ctx.rng, delta, temperature)
        }
        (false, false) if !dominates_unchecked(&current.violations, &cand.violations) => true,
        _ => {
            let delta = cand.violation_sum() - current.violation_sum();
            metropolis(&mut ctx.rng, delta.max(0.0), temperature)
        }
    }
}

/// The single-point framework: N candidates per outer iteration, the best
/// one competes for the incumbent, a variant-specific rule decides whether
/// the search moves, and stagnation triggers a destroy-and-repair
/// perturbation.
pub fn run_single_point(model: &ProblemModel, config: &SolverConfig) -> Result<RunReport> {
    config.validate()?;
    if config.variant == Variant::Ga {
        return Err(Error::InvalidConfig(
            "the genetic algorithm is not a single-point method".into(),
        ));
    }
    let mut ctx = SearchContext::seeded(model, config.seed);
    let mut monitor = Monitor::new(model, config);
    let mut current = initial_solution(&mut ctx);
    let mut best = current.clone();
    monitor.record(&best, ctx.evaluations(), TraceEvent::Initial);
    monitor.begin_search();
    if model.task_count() == 0 {
        return Ok(monitor.finish(best, ctx.evaluations(), config.seed));
    }

    let mut selector = NeighborhoodSelector::new(config.selection, config.q);
    let mut acceptance = match config.variant {
        Variant::Sa => {
            let t0 = config
                .sa
                .initial_temperature
                .unwrap_or_else(|| (0.05 * current.objective.abs()).max(1.0));
            Acceptance::Annealing {
                initial: t0,
                temperature: t0,
                cooling: config.sa.cooling,
            }
        }
        Variant::Ts => Acceptance::Tabu {
            expires: HashMap::new(),
            max: config.ts.tenure_max,
            min: config.ts.tenure_min,
        },
        Variant::Vns => Acceptance::Vns { kind: 0 },
        _ => Acceptance::NotWorse,
    };
    let n = model.task_count();
    let mut stall = 0usize;

    while !monitor.exhausted(ctx.evaluations(), &best) {
        monitor.iterations += 1;
        let progress = monitor.progress(ctx.evaluations());
        let iteration = monitor.iterations;

        let mut candidates = Vec::with_capacity(config.candidates);
        for _ in 0..config.candidates {
            let cand = match (&acceptance, config.variant) {
                (_, Variant::Lns) => {
                    let start = (config.lns.removal_fraction * n as f64).ceil().max(1.0);
                    let nd = (start - progress * (start - 1.0)).round() as usize;
                    destroy_repair(&mut ctx, &current, nd.max(1))
                }
                (Acceptance::Vns { kind }, _) => {
                    let shake = NeighborhoodKind::ALL[*kind];
                    let shaken = apply_neighborhood(&mut ctx, &current, shake)
                        .into_option()
                        .unwrap_or_else(|| current.clone());
                    selector.neighborhood_solution(&mut ctx, &shaken).0
                }
                _ => selector.neighborhood_solution(&mut ctx, &current).0,
            };
            candidates.push(cand);
        }

        // tabu filtering before the best candidate is chosen
        if let Acceptance::Tabu { expires, .. } = &acceptance {
            let here = pairs(&current.structure);
            let allowed: Vec<EvaluatedSolution> = candidates
                .iter()
                .filter(|c| {
                    ctx.is_better(c, &best)
                        || pairs(&c.structure)
                            .difference(&here)
                            .all(|p| expires.get(p).is_none_or(|&e| e < iteration))
                })
                .cloned()
                .collect();
            candidates = allowed;
        }

        let chosen = best_index(&candidates, model.sense()).map(|k| candidates.swap_remove(k));
        if let Some(subopt) = chosen {
            if ctx.is_better(&subopt, &best) {
                best = subopt.clone();
                stall = 0;
                monitor.record(&best, ctx.evaluations(), TraceEvent::Improved);
            } else {
                stall += 1;
            }
            match &mut acceptance {
                Acceptance::Annealing { temperature, .. } => {
                    if sa_accepts(&mut ctx, &subopt, &current, *temperature) {
                        current = subopt;
                    }
                }
                Acceptance::Tabu { expires, max, min } => {
                    let tenure = (*max as f64 - progress * (*max - *min) as f64).round() as u64;
                    let after = pairs(&subopt.structure);
                    for p in pairs(&current.structure).difference(&after) {
                        expires.insert(*p, iteration + tenure);
                    }
                    expires.retain(|_, e| *e >= iteration);
                    current = subopt;
                }
                Acceptance::Vns { kind } => {
                    if ctx.is_better(&subopt, &current) {
                        current = subopt;
                        *kind = 0;
                    } else {
                        *kind = (*kind + 1) % NeighborhoodKind::ALL.len();
                    }
                }
                Acceptance::NotWorse => {
                    if ctx.compare(&subopt, &current) != Comparison::Worse {
                        current = subopt;
                    }
                }
            }
        } else {
            stall += 1;
        }

        if let Acceptance::Annealing {
            temperature, cooling, ..
        } = &mut acceptance
        {
            *temperature *= *cooling;
        }

        if stall >= config.perturbation_trigger {
            let nd = (0.5 * current.structure.assigned_count() as f64).ceil() as usize;
            current = destroy_repair(&mut ctx, &current, nd);
            stall = 0;
            monitor.perturbations += 1;
            if let Acceptance::Annealing {
                initial, temperature, ..
            } = &mut acceptance
            {
                *temperature = *initial;
            }
            if ctx.is_better(&current, &best) {
                best = current.clone();
            }
            monitor.record(&best, ctx.evaluations(), TraceEvent::Perturbation);
        }
    }
    Ok(monitor.finish(best, ctx.evaluations(), config.seed))
}
