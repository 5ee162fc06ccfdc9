//! Random small models mixing every constraint template, for fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{
    ConstraintSpec, ObjectiveKind, ObjectiveSpec, PairingMode, PositionOrder, ProblemModel, Relation, Residual,
    Resource, Sense, SolutionStructure, Table, Task,
};

/// Size limits for [`synthetic_model`].
#[derive(Debug, Clone, Copy)]
pub struct SyntheticShape {
    pub max_resources: usize,
    pub max_tasks: usize,
}

impl Default for SyntheticShape {
    fn default() -> Self {
        Self {
            max_resources: 3,
            max_tasks: 6,
        }
    }
}

fn distinct_pairs<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let mut all: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    all.shuffle(rng);
    all.truncate(count);
    all
}

/// A random model with 1..=`max_resources` resources and 0..=`max_tasks`
/// tasks; each template is included with probability one half.
pub fn synthetic_model<R: Rng>(rng: &mut R, shape: SyntheticShape) -> ProblemModel {
    let m = rng.random_range(1..=shape.max_resources.max(1));
    let n = rng.random_range(0..=shape.max_tasks);
    let order = if rng.random_bool(0.5) {
        PositionOrder::Ordered
    } else {
        PositionOrder::Unordered
    };
    let sense = if rng.random_bool(0.8) { Sense::Min } else { Sense::Max };
    let objective = if rng.random_bool(0.5) {
        ObjectiveKind::AssignmentCost(Table::ByResourceTask(
            (0..m)
                .map(|_| (0..n).map(|_| rng.random_range(1..10) as f64).collect())
                .collect(),
        ))
    } else {
        ObjectiveKind::UsedResources
    };
    let mut b = ProblemModel::builder("synthetic", order)
        .resources((0..m).map(|_| {
            if rng.random_bool(0.3) {
                Resource::with_capacity(rng.random_range(1..=3))
            } else {
                Resource::new()
            }
        }))
        .tasks((0..n).map(|_| Task::new()))
        .objective(ObjectiveSpec::new(sense, objective));

    if rng.random_bool(0.5) {
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..5) as f64).collect();
        let caps: Vec<f64> = (0..m).map(|_| rng.random_range(3..10) as f64).collect();
        b = b.constraint(ConstraintSpec::resource_aggregate(
            "capacity",
            Table::ByTask(weights),
            Relation::Le,
            Table::ByResource(caps),
        ));
    }
    if rng.random_bool(0.7) {
        b = b.constraint(ConstraintSpec::each_task_once("once"));
    }
    if rng.random_bool(0.5) {
        let count = rng.random_range(1..=3);
        let mode = if rng.random_bool(0.5) {
            PairingMode::DifferentResource
        } else {
            PairingMode::SameResource
        };
        b = b.constraint(ConstraintSpec::pairing("pairs", distinct_pairs(rng, n, count), mode));
    }
    if rng.random_bool(0.5) {
        let count = rng.random_range(1..=2);
        b = b.constraint(ConstraintSpec::precedence("order", distinct_pairs(rng, n, count)));
    }
    if rng.random_bool(0.5) {
        let eligible: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| if rng.random_bool(0.8) { 1.0 } else { 0.0 }).collect())
            .collect();
        b = b.constraint(ConstraintSpec::resource_task_aggregate(
            "eligible",
            Table::Uniform(1.0),
            Relation::Le,
            Table::ByResourceTask(eligible),
        ));
    }
    if rng.random_bool(0.3) {
        let limit = rng.random_range(1..=3) as f64;
        b = b.constraint(ConstraintSpec::custom("route_length", move |s, _| {
            s.routes()
                .iter()
                .map(|r| Residual::Inequality(r.len() as f64 - limit))
                .collect()
        }));
    }
    b.build().expect("synthetic models are valid")
}

/// A random well-formed structure; tasks may repeat or be missing.
pub fn random_structure<R: Rng>(rng: &mut R, model: &ProblemModel) -> SolutionStructure {
    let n = model.task_count();
    let routes = (0..model.resource_count())
        .map(|i| {
            if n == 0 {
                return Vec::new();
            }
            let len = rng.random_range(0..=model.position_capacity(i).min(n));
            (0..len).map(|_| rng.random_range(0..n)).collect()
        })
        .collect();
    SolutionStructure::from_routes(routes)
}
