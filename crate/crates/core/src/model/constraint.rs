use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::attribute::Attributes;
use super::structure::SolutionStructure;
use super::table::{Relation, Table};

/// One residual row of a custom constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Residual {
    /// `g ≤ 0`
    Inequality(f64),
    /// `h = 0`
    Equality(f64),
}

impl Residual {
    /// `max{0, g}` for inequality rows, `|h|` for equality rows.
    #[inline]
    pub fn violation(self) -> f64 {
        match self {
            Residual::Inequality(g) => g.max(0.0),
            Residual::Equality(h) => h.abs(),
        }
    }
}

pub type ResidualFn = dyn Fn(&SolutionStructure, &Attributes) -> Vec<Residual> + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingMode {
    SameResource,
    DifferentResource,
}

/// Template family of a constraint; custom residuals have none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    ResourceAggregate,
    TaskAggregate,
    Pairing,
    Precedence,
    ResourceTaskAggregate,
}

impl Template {
    pub const ALL: [Template; 5] = [
        Template::ResourceAggregate,
        Template::TaskAggregate,
        Template::Pairing,
        Template::Precedence,
        Template::ResourceTaskAggregate,
    ];
}

#[derive(Clone)]
pub enum ConstraintKind {
    /// `Σ_k Σ_j ρ[i][j] y[i][j][k] (rel) θ[i]` for every resource `i`.
    ResourceAggregate {
        coefficients: Table,
        thresholds: Table,
        relation: Relation,
    },
    /// `Σ_i Σ_k ρ[i][j] y[i][j][k] (rel) θ[j]` for every task `j`.
    TaskAggregate {
        coefficients: Table,
        thresholds: Table,
        relation: Relation,
    },
    /// Pairs of tasks that must share a resource or must not.
    Pairing {
        pairs: Vec<(usize, usize)>,
        mode: PairingMode,
    },
    /// `(before, after)`: when both sit on one resource, `before` must come first.
    Precedence {
        pairs: Vec<(usize, usize)>,
    },
    /// `Σ_k ρ[i][j] y[i][j][k] (rel) θ[i][j]` for every resource/task pair.
    ResourceTaskAggregate {
        coefficients: Table,
        thresholds: Table,
        relation: Relation,
    },
    Custom(Arc<ResidualFn>),
}

impl fmt::Debug for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintKind::ResourceAggregate {
                coefficients,
                thresholds,
                relation,
            } => f
                .debug_struct("ResourceAggregate")
                .field("coefficients", coefficients)
                .field("thresholds", thresholds)
                .field("relation", relation)
                .finish(),
            ConstraintKind::TaskAggregate {
                coefficients,
                thresholds,
                relation,
            } => f
                .debug_struct("TaskAggregate")
                .field("coefficients", coefficients)
                .field("thresholds", thresholds)
                .field("relation", relation)
                .finish(),
            ConstraintKind::Pairing { pairs, mode } => f
                .debug_struct("Pairing")
                .field("pairs", pairs)
                .field("mode", mode)
                .finish(),
            ConstraintKind::Precedence { pairs } => f.debug_struct("Precedence").field("pairs", pairs).finish(),
            ConstraintKind::ResourceTaskAggregate {
                coefficients,
                thresholds,
                relation,
            } => f
                .debug_struct("ResourceTaskAggregate")
                .field("coefficients", coefficients)
                .field("thresholds", thresholds)
                .field("relation", relation)
                .finish(),
            ConstraintKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintSpec {
    pub name: String,
    pub kind: ConstraintKind,
}

impl ConstraintSpec {
    pub fn new(name: impl Into<String>, kind: ConstraintKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }

    pub fn resource_aggregate(
        name: impl Into<String>,
        coefficients: Table,
        relation: Relation,
        thresholds: Table,
    ) -> Self {
        Self::new(
            name,
            ConstraintKind::ResourceAggregate {
                coefficients,
                thresholds,
                relation,
            },
        )
    }

    pub fn task_aggregate(name: impl Into<String>, coefficients: Table, relation: Relation, thresholds: Table) -> Self {
        Self::new(
            name,
            ConstraintKind::TaskAggregate {
                coefficients,
                thresholds,
                relation,
            },
        )
    }

    /// Every task assigned exactly once.
    pub fn each_task_once(name: impl Into<String>) -> Self {
        Self::task_aggregate(name, Table::Uniform(1.0), Relation::Eq, Table::Uniform(1.0))
    }

    pub fn pairing(name: impl Into<String>, pairs: Vec<(usize, usize)>, mode: PairingMode) -> Self {
        Self::new(name, ConstraintKind::Pairing { pairs, mode })
    }

    pub fn precedence(name: impl Into<String>, pairs: Vec<(usize, usize)>) -> Self {
        Self::new(name, ConstraintKind::Precedence { pairs })
    }

    pub fn resource_task_aggregate(
        name: impl Into<String>,
        coefficients: Table,
        relation: Relation,
        thresholds: Table,
    ) -> Self {
        Self::new(
            name,
            ConstraintKind::ResourceTaskAggregate {
                coefficients,
                thresholds,
                relation,
            },
        )
    }

    pub fn custom<F>(name: impl Into<String>, residuals: F) -> Self
    where
        F: Fn(&SolutionStructure, &Attributes) -> Vec<Residual> + Send + Sync + 'static,
    {
        Self::new(name, ConstraintKind::Custom(Arc::new(residuals)))
    }

    pub fn template(&self) -> Option<Template> {
        match self.kind {
            ConstraintKind::ResourceAggregate { .. } => Some(Template::ResourceAggregate),
            ConstraintKind::TaskAggregate { .. } => Some(Template::TaskAggregate),
            ConstraintKind::Pairing { .. } => Some(Template::Pairing),
            ConstraintKind::Precedence { .. } => Some(Template::Precedence),
            ConstraintKind::ResourceTaskAggregate { .. } => Some(Template::ResourceTaskAggregate),
            ConstraintKind::Custom(_) => None,
        }
    }
}

/// Where each task sits: `(resource, position)` of every occurrence.
pub(crate) struct Occupancy {
    places: Vec<Vec<(usize, usize)>>,
}

impl Occupancy {
    pub(crate) fn new(structure: &SolutionStructure, tasks: usize) -> Self {
        let mut places = vec![Vec::new(); tasks];
        for (i, k, j) in structure.cells() {
            places[j].push((i, k));
        }
        Self { places }
    }

    pub(crate) fn places(&self, task: usize) -> &[(usize, usize)] {
        &self.places[task]
    }

    pub(crate) fn on(&self, task: usize, resource: usize) -> bool {
        self.places[task].iter().any(|&(i, _)| i == resource)
    }

    fn first_position(&self, task: usize, resource: usize) -> Option<usize> {
        self.places[task]
            .iter()
            .filter(|&&(i, _)| i == resource)
            .map(|&(_, k)| k)
            .min()
    }
}

pub(crate) struct EvalInput<'a> {
    pub structure: &'a SolutionStructure,
    pub attributes: &'a Attributes,
    pub occupancy: &'a Occupancy,
    pub tasks: usize,
    pub ordered: bool,
}

impl ConstraintSpec {
    /// Summed violation of every row of this constraint.
    pub(crate) fn violation(&self, input: &EvalInput<'_>) -> f64 {
        let s = input.structure;
        match &self.kind {
            ConstraintKind::ResourceAggregate {
                coefficients,
                thresholds,
                relation,
            } => s
                .routes()
                .iter()
                .enumerate()
                .map(|(i, route)| {
                    let expr: f64 = route.iter().map(|&j| coefficients.at(i, j)).sum();
                    relation.violation(expr, thresholds.at(i, 0))
                })
                .sum(),
            ConstraintKind::TaskAggregate {
                coefficients,
                thresholds,
                relation,
            } => (0..input.tasks)
                .map(|j| {
                    let expr: f64 = input
                        .occupancy
                        .places(j)
                        .iter()
                        .map(|&(i, _)| coefficients.at(i, j))
                        .sum();
                    relation.violation(expr, thresholds.at(0, j))
                })
                .sum(),
            ConstraintKind::Pairing { pairs, mode } => pairs
                .iter()
                .map(|&(a, b)| pair_violation(input.occupancy, s.resource_count(), a, b, *mode))
                .sum(),
            ConstraintKind::Precedence { pairs } => {
                if !input.ordered {
                    return 0.0;
                }
                let occ = input.occupancy;
                pairs
                    .iter()
                    .map(|&(before, after)| {
                        (0..s.resource_count())
                            .filter(
                                |&i| match (occ.first_position(before, i), occ.first_position(after, i)) {
                                    (Some(pb), Some(pa)) => pa < pb,
                                    _ => false,
                                },
                            )
                            .count() as f64
                    })
                    .sum()
            }
            ConstraintKind::ResourceTaskAggregate {
                coefficients,
                thresholds,
                relation,
            } => {
                let m = s.resource_count();
                let n = input.tasks;
                let mut expr = vec![0.0; m * n];
                for (i, _, j) in s.cells() {
                    expr[i * n + j] += coefficients.at(i, j);
                }
                let mut total = 0.0;
                for i in 0..m {
                    for j in 0..n {
                        total += relation.violation(expr[i * n + j], thresholds.at(i, j));
                    }
                }
                total
            }
            ConstraintKind::Custom(f) => f(s, input.attributes).into_iter().map(Residual::violation).sum(),
        }
    }
}

/// `DifferentResource`: number of resources holding both tasks.
/// `SameResource`: when both tasks are assigned, number of resources holding
/// exactly one of them.
fn pair_violation(occ: &Occupancy, resources: usize, a: usize, b: usize, mode: PairingMode) -> f64 {
    match mode {
        PairingMode::DifferentResource => (0..resources).filter(|&i| occ.on(a, i) && occ.on(b, i)).count() as f64,
        PairingMode::SameResource => {
            if occ.places(a).is_empty() || occ.places(b).is_empty() {
                return 0.0;
            }
            (0..resources).filter(|&i| occ.on(a, i) != occ.on(b, i)).count() as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_violation_follows_row_kind() {
        assert_eq!(Residual::Inequality(-3.0).violation(), 0.0);
        assert_eq!(Residual::Inequality(2.5).violation(), 2.5);
        assert_eq!(Residual::Equality(-3.0).violation(), 3.0);
        assert_eq!(Residual::Equality(0.0).violation(), 0.0);
    }

    #[test]
    fn pair_modes() {
        let s = SolutionStructure::from_routes(vec![vec![0, 1], vec![2]]);
        let occ = Occupancy::new(&s, 4);
        assert_eq!(pair_violation(&occ, 2, 0, 1, PairingMode::DifferentResource), 1.0);
        assert_eq!(pair_violation(&occ, 2, 0, 2, PairingMode::DifferentResource), 0.0);
        assert_eq!(pair_violation(&occ, 2, 0, 2, PairingMode::SameResource), 2.0);
        assert_eq!(pair_violation(&occ, 2, 0, 1, PairingMode::SameResource), 0.0);
        // Task 3 unassigned: nothing to pair with yet.
        assert_eq!(pair_violation(&occ, 2, 0, 3, PairingMode::SameResource), 0.0);
    }
}
