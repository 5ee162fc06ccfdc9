//! Constraint-aware comparison and hierarchical ranking.
//!
//! Feasible solutions always beat infeasible ones and are ordered by
//! objective. Infeasible solutions are compared by dominance of their
//! violation vectors first and by objective when neither dominates.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{EvaluatedSolution, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Better,
    Worse,
    Equal,
}

impl Comparison {
    pub fn reverse(self) -> Self {
        match self {
            Comparison::Better => Comparison::Worse,
            Comparison::Worse => Comparison::Better,
            Comparison::Equal => Comparison::Equal,
        }
    }
}

/// `a` dominates `b`: no component larger and at least one smaller.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Componentwise `a ≤ b`.
pub fn no_larger(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

fn objective_comparison(a: f64, b: f64, sense: Sense) -> Comparison {
    match sense.cmp_values(a, b) {
        Ordering::Less => Comparison::Better,
        Ordering::Greater => Comparison::Worse,
        Ordering::Equal => Comparison::Equal,
    }
}

/// Compares `a` against `b`.
pub fn compare(a: &EvaluatedSolution, b: &EvaluatedSolution, sense: Sense) -> Comparison {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Comparison::Better,
        (false, true) => Comparison::Worse,
        (true, true) => objective_comparison(a.objective, b.objective, sense),
        (false, false) => {
            if dominates_unchecked(&a.violations, &b.violations) {
                Comparison::Better
            } else if dominates_unchecked(&b.violations, &a.violations) {
                Comparison::Worse
            } else {
                objective_comparison(a.objective, b.objective, sense)
            }
        }
    }
}

#[inline]
pub fn is_better(a: &EvaluatedSolution, b: &EvaluatedSolution, sense: Sense) -> bool {
    compare(a, b, sense) == Comparison::Better
}

/// Position of one population member in the ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank {
    /// Index into the ranked population.
    pub index: usize,
    /// 0 for feasible solutions, then one layer per distinct dominance count
    /// of the infeasible ones (more dominated solutions, better layer).
    pub layer: usize,
    pub objective: f64,
}

/// Ranks a population best-first.
///
/// Ties on layer and objective keep population order.
pub fn rank_solutions(pop: &[EvaluatedSolution], sense: Sense) -> Vec<Rank> {
    let infeasible: Vec<usize> = (0..pop.len()).filter(|&i| !pop[i].is_feasible()).collect();
    let mut counts = vec![0usize; pop.len()];
    for &a in &infeasible {
        counts[a] = infeasible
            .iter()
            .filter(|&&b| dominates_unchecked(&pop[a].violations, &pop[b].violations))
            .count();
    }
    let mut distinct: Vec<usize> = infeasible.iter().map(|&i| counts[i]).collect();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();

    let mut ranks: Vec<Rank> = pop
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let layer = if s.is_feasible() {
                0
            } else {
                1 + distinct
                    .iter()
                    .position(|&c| c == counts[index])
                    .expect("count recorded above")
            };
            Rank {
                index,
                layer,
                objective: s.objective,
            }
        })
        .collect();
    ranks.sort_by(|a, b| {
        a.layer
            .cmp(&b.layer)
            .then_with(|| sense.cmp_values(a.objective, b.objective))
            .then_with(|| a.index.cmp(&b.index))
    });
    ranks
}

/// Index of the ranking-best member.
pub fn best_index(pop: &[EvaluatedSolution], sense: Sense) -> Option<usize> {
    rank_solutions(pop, sense).first().map(|r| r.index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SolutionStructure;

    fn sol(objective: f64, violations: &[f64]) -> EvaluatedSolution {
        EvaluatedSolution {
            structure: SolutionStructure::empty(1),
            objective,
            violations: violations.to_vec(),
        }
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&[0.0, 1.0], &[0.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 0.0], &[0.0, 1.0]).unwrap());
        assert!(!dominates(&[0.0, 1.0], &[1.0, 0.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert_eq!(dominates(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch(1, 2)));
    }

    #[test]
    fn feasible_beats_infeasible() {
        let a = sol(100.0, &[0.0]);
        let b = sol(1.0, &[1.0]);
        assert_eq!(compare(&a, &b, Sense::Min), Comparison::Better);
        assert_eq!(compare(&b, &a, Sense::Min), Comparison::Worse);
    }

    #[test]
    fn feasible_pair_uses_objective() {
        let a = sol(3.0, &[0.0]);
        let b = sol(5.0, &[0.0]);
        assert_eq!(compare(&a, &b, Sense::Min), Comparison::Better);
        assert_eq!(compare(&a, &b, Sense::Max), Comparison::Worse);
        assert_eq!(compare(&a, &a, Sense::Max), Comparison::Equal);
    }

    #[test]
    fn non_dominated_infeasible_pair_uses_objective() {
        let a = sol(3.0, &[1.0, 0.0]);
        let b = sol(5.0, &[0.0, 1.0]);
        assert_eq!(compare(&a, &b, Sense::Min), Comparison::Better);
        // dominance wins over objective
        let c = sol(1.0, &[2.0, 1.0]);
        assert_eq!(compare(&c, &b, Sense::Min), Comparison::Worse);
    }

    #[test]
    fn ranking_layers() {
        let pop = vec![
            sol(1.0, &[3.0, 3.0]),
            sol(9.0, &[0.0, 0.0]),
            sol(2.0, &[1.0, 1.0]),
            sol(5.0, &[2.0, 2.0]),
        ];
        let ranks = rank_solutions(&pop, Sense::Min);
        let order: Vec<usize> = ranks.iter().map(|r| r.index).collect();
        assert_eq!(order, vec![1, 2, 3, 0]);
        let layers: Vec<usize> = ranks.iter().map(|r| r.layer).collect();
        assert_eq!(layers, vec![0, 1, 2, 3]);
    }

    #[test]
    fn all_feasible_sorts_by_objective_stably() {
        let pop = vec![sol(4.0, &[0.0]), sol(2.0, &[0.0]), sol(4.0, &[0.0]), sol(1.0, &[0.0])];
        let order: Vec<usize> = rank_solutions(&pop, Sense::Min).iter().map(|r| r.index).collect();
        assert_eq!(order, vec![3, 1, 0, 2]);
        let order: Vec<usize> = rank_solutions(&pop, Sense::Max).iter().map(|r| r.index).collect();
        assert_eq!(order, vec![0, 2, 1, 3]);
    }
}
