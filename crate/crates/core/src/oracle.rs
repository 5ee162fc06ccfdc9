//! Exhaustive search for tiny models.
//!
//! Enumerates every structure in which each task appears at most once:
//! each task is either left out or placed on one resource, and on ordered
//! models at every position of that resource. Insertion in task order
//! produces each sequence exactly once.

use crate::error::{Error, Result};
use crate::model::{EvaluatedSolution, ProblemModel, SolutionStructure};
use crate::ranking::{compare, Comparison};

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Ranking-best structure over the enumeration.
    pub best: EvaluatedSolution,
    /// Structures evaluated.
    pub enumerated: u128,
}

impl OracleResult {
    pub fn is_feasible(&self) -> bool {
        self.best.is_feasible()
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// Upper bound on the number of structures the enumeration visits,
/// ignoring position capacities; saturates at `u128::MAX`.
pub fn structure_count(model: &ProblemModel) -> u128 {
    let n = model.task_count() as u128;
    let m = model.resource_count() as u128;
    let count = || -> Option<u128> {
        if !model.is_ordered() {
            return (m + 1).checked_pow(n as u32);
        }
        // Σ_k C(n,k) · k! · C(k+m-1, m-1): choose the placed tasks, order
        // them, cut the order into m possibly empty routes
        let mut total: u128 = 0;
        let mut fact: u128 = 1;
        for k in 0..=n {
            if k > 0 {
                fact = fact.checked_mul(k)?;
            }
            let term = binomial(n, k)?
                .checked_mul(fact)?
                .checked_mul(binomial(k + m - 1, m - 1)?)?;
            total = total.checked_add(term)?;
        }
        Some(total)
    };
    count().unwrap_or(u128::MAX)
}

struct Search<'a> {
    model: &'a ProblemModel,
    best: Option<EvaluatedSolution>,
    enumerated: u128,
}

impl Search<'_> {
    fn visit(&mut self, structure: &mut SolutionStructure, task: usize) {
        let model = self.model;
        if task == model.task_count() {
            self.enumerated += 1;
            let e = model.evaluate_unchecked(structure.clone());
            let better = match &self.best {
                None => true,
                Some(b) => compare(&e, b, model.sense()) == Comparison::Better,
            };
            if better {
                self.best = Some(e);
            }
            return;
        }
        self.visit(structure, task + 1);
        for i in 0..model.resource_count() {
            let len = structure.route(i).len();
            if len >= model.position_capacity(i) {
                continue;
            }
            let positions = if model.is_ordered() { 0..=len } else { len..=len };
            for p in positions {
                structure.route_mut(i).insert(p, task);
                self.visit(structure, task + 1);
                structure.route_mut(i).remove(p);
            }
        }
    }
}

/// Ranking-optimal structure, or `TooLarge` when more than `limit`
/// structures would be enumerated.
pub fn brute_force(model: &ProblemModel, limit: u128) -> Result<OracleResult> {
    let count = structure_count(model);
    if count > limit {
        return Err(Error::TooLarge { count, limit });
    }
    let mut search = Search {
        model,
        best: None,
        enumerated: 0,
    };
    search.visit(&mut model.empty_structure(), 0);
    Ok(OracleResult {
        best: search.best.expect("the empty structure is always enumerated"),
        enumerated: search.enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ObjectiveKind, ObjectiveSpec, PositionOrder, Resource, Sense, Task};

    fn bare(m: usize, n: usize, order: PositionOrder, sense: Sense) -> ProblemModel {
        ProblemModel::builder("b", order)
            .resources((0..m).map(|_| Resource::new()))
            .tasks((0..n).map(|_| Task::new()))
            .objective(ObjectiveSpec::new(sense, ObjectiveKind::UsedResources))
            .build()
            .unwrap()
    }

    #[test]
    fn single_task_enumerates_two_structures() {
        let r = brute_force(&bare(1, 1, PositionOrder::Unordered, Sense::Max), 10).unwrap();
        assert_eq!(r.enumerated, 2);
        assert_eq!(r.best.objective, 1.0);
    }

    #[test]
    fn counts_match_enumeration() {
        for (m, n) in [(1, 3), (2, 3), (3, 2), (2, 4)] {
            for order in [PositionOrder::Unordered, PositionOrder::Ordered] {
                let model = bare(m, n, order, Sense::Min);
                let r = brute_force(&model, u128::MAX).unwrap();
                assert_eq!(r.enumerated, structure_count(&model), "m={m} n={n} {order:?}");
            }
        }
        // 1 resource, 3 tasks, ordered: 1 + 3 + 6 + 6
        assert_eq!(structure_count(&bare(1, 3, PositionOrder::Ordered, Sense::Min)), 16);
    }

    #[test]
    fn guard_refuses_large_enumerations() {
        let model = bare(2, 4, PositionOrder::Unordered, Sense::Min);
        assert_eq!(
            brute_force(&model, 80).unwrap_err(),
            Error::TooLarge { count: 81, limit: 80 }
        );
    }
}
