//! Resource-task data model.
//!
//! A problem is a fixed set of resources, a fixed set of tasks and a rule
//! for judging any placement of tasks onto resource positions. The rule is
//! made of derived attribute tensors, one objective and an ordered list of
//! constraints. Indices are 0-based throughout: resource `i` is
//! `resources()[i]`, task `j` is `tasks()[j]`.

mod attribute;
mod constraint;
pub mod description;
mod objective;
mod structure;
mod table;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use attribute::{
    evaluate_vrptw_attributes, AttributeEvaluator, AttributeFn, AttributeTensor, Attributes, ServiceTimes,
};
pub use constraint::{ConstraintKind, ConstraintSpec, PairingMode, Residual, ResidualFn, Template};
pub use objective::{ObjectiveFn, ObjectiveKind, ObjectiveSpec, Sense};
pub use structure::{AssignmentTensor, SolutionStructure};
pub use table::{Relation, Table};

pub(crate) use constraint::Occupancy;

use crate::error::{Error, Result};
use constraint::EvalInput;

/// Violations below this are treated as zero.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

/// Whether positions of a resource carry an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositionOrder {
    /// Assignment variable: a sub-assignment is a multiset.
    Unordered,
    /// Sequence variable: a sub-assignment is a sequence.
    Ordered,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Resource {
    #[serde(default)]
    pub attributes: BTreeMap<String, f64>,
    /// Maximum number of positions; `None` means one per task.
    #[serde(default)]
    pub position_capacity: Option<usize>,
}

impl Resource {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            attributes: BTreeMap::new(),
            position_capacity: Some(capacity),
        }
    }

    pub fn attribute(mut self, name: impl Into<String>, value: f64) -> Self {
        self.attributes.insert(name.into(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Task {
    #[serde(default)]
    pub attributes: BTreeMap<String, f64>,
}

impl Task {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn attribute(mut self, name: impl Into<String>, value: f64) -> Self {
        self.attributes.insert(name.into(), value);
        self
    }
}

/// Structure plus its cached objective value and violation vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluatedSolution {
    pub structure: SolutionStructure,
    pub objective: f64,
    /// One entry per constraint of the model, in model order.
    pub violations: Vec<f64>,
}

impl EvaluatedSolution {
    pub fn is_feasible(&self) -> bool {
        self.violations.iter().all(|&v| v == 0.0)
    }

    pub fn violation_sum(&self) -> f64 {
        self.violations.iter().sum()
    }
}

/// Lookup tables derived from pairing and precedence constraints.
#[derive(Debug, Clone, Default)]
pub(crate) struct Links {
    /// `partners[j]`: tasks paired with `j` by this constraint.
    pub partners: Vec<Vec<usize>>,
    /// `before[j]`: tasks that must precede `j`.
    pub before: Vec<Vec<usize>>,
    /// `after[j]`: tasks that must follow `j`.
    pub after: Vec<Vec<usize>>,
}

/// Immutable problem description; shareable across threads.
#[derive(Debug, Clone)]
pub struct ProblemModel {
    name: String,
    resources: Vec<Resource>,
    tasks: Vec<Task>,
    order: PositionOrder,
    attributes: Vec<AttributeEvaluator>,
    objective: ObjectiveSpec,
    constraints: Vec<ConstraintSpec>,
    links: Vec<Links>,
}

impl ProblemModel {
    pub fn builder(name: impl Into<String>, order: PositionOrder) -> ModelBuilder {
        ModelBuilder {
            name: name.into(),
            order,
            resources: Vec::new(),
            tasks: Vec::new(),
            attributes: Vec::new(),
            objective: None,
            constraints: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn resource_count(&self) -> usize {
        self.resources.len()
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    pub fn order(&self) -> PositionOrder {
        self.order
    }

    pub fn is_ordered(&self) -> bool {
        self.order == PositionOrder::Ordered
    }

    pub fn objective(&self) -> &ObjectiveSpec {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.objective.sense
    }

    pub fn constraints(&self) -> &[ConstraintSpec] {
        &self.constraints
    }

    pub fn attribute_evaluators(&self) -> &[AttributeEvaluator] {
        &self.attributes
    }

    pub(crate) fn links(&self, constraint: usize) -> &Links {
        &self.links[constraint]
    }

    /// Number of positions resource `i` offers; unbounded resources get one
    /// per task.
    pub fn position_capacity(&self, resource: usize) -> usize {
        self.resources[resource].position_capacity.unwrap_or(self.tasks.len())
    }

    /// Largest position capacity over all resources.
    pub fn max_positions(&self) -> usize {
        (0..self.resource_count())
            .map(|i| self.position_capacity(i))
            .max()
            .unwrap_or(0)
    }

    pub fn empty_structure(&self) -> SolutionStructure {
        SolutionStructure::empty(self.resource_count())
    }

    /// Rejects structures that reference unknown resources or tasks or that
    /// overflow a resource's positions.
    pub fn check_structure(&self, structure: &SolutionStructure) -> Result<()> {
        if structure.resource_count() != self.resource_count() {
            return Err(Error::DimensionMismatch(format!(
                "structure has {} resources, model has {}",
                structure.resource_count(),
                self.resource_count()
            )));
        }
        for (i, route) in structure.routes().iter().enumerate() {
            if route.len() > self.position_capacity(i) {
                return Err(Error::DimensionMismatch(format!(
                    "resource {i} holds {} tasks but has {} positions",
                    route.len(),
                    self.position_capacity(i)
                )));
            }
            if let Some(&j) = route.iter().find(|&&j| j >= self.task_count()) {
                return Err(Error::DimensionMismatch(format!(
                    "resource {i} references task {j}, model has {} tasks",
                    self.task_count()
                )));
            }
        }
        Ok(())
    }

    /// Computes the objective value and the violation vector of a structure.
    pub fn evaluate(&self, structure: SolutionStructure) -> Result<EvaluatedSolution> {
        self.check_structure(&structure)?;
        Ok(self.evaluate_unchecked(structure))
    }

    pub(crate) fn evaluate_unchecked(&self, structure: SolutionStructure) -> EvaluatedSolution {
        debug_assert!(self.check_structure(&structure).is_ok());
        let attributes = self.attributes(&structure);
        let objective = self.objective.value(&structure, &attributes);
        let violations = self.violations_with(&structure, &attributes);
        EvaluatedSolution {
            structure,
            objective,
            violations,
        }
    }

    /// All attribute tensors of a structure.
    pub fn attributes(&self, structure: &SolutionStructure) -> Attributes {
        Attributes::compute(&self.attributes, structure)
    }

    fn violations_with(&self, structure: &SolutionStructure, attributes: &Attributes) -> Vec<f64> {
        let occupancy = Occupancy::new(structure, self.task_count());
        let input = EvalInput {
            structure,
            attributes,
            occupancy: &occupancy,
            tasks: self.task_count(),
            ordered: self.is_ordered(),
        };
        self.constraints
            .iter()
            .map(|c| {
                let v = c.violation(&input);
                if v < FEASIBILITY_TOLERANCE {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    }

    /// Binary assignment tensor of a structure under this model's dimensions.
    pub fn assignment_tensor(&self, structure: &SolutionStructure) -> AssignmentTensor {
        structure.to_assignment_tensor(self.task_count())
    }
}

pub struct ModelBuilder {
    name: String,
    order: PositionOrder,
    resources: Vec<Resource>,
    tasks: Vec<Task>,
    attributes: Vec<AttributeEvaluator>,
    objective: Option<ObjectiveSpec>,
    constraints: Vec<ConstraintSpec>,
}

impl ModelBuilder {
    pub fn resource(mut self, resource: Resource) -> Self {
        self.resources.push(resource);
        self
    }

    pub fn resources(mut self, resources: impl IntoIterator<Item = Resource>) -> Self {
        self.resources.extend(resources);
        self
    }

    pub fn task(mut self, task: Task) -> Self {
        self.tasks.push(task);
        self
    }

    pub fn tasks(mut self, tasks: impl IntoIterator<Item = Task>) -> Self {
        self.tasks.extend(tasks);
        self
    }

    pub fn attribute(mut self, evaluator: AttributeEvaluator) -> Self {
        self.attributes.push(evaluator);
        self
    }

    pub fn objective(mut self, objective: ObjectiveSpec) -> Self {
        self.objective = Some(objective);
        self
    }

    pub fn constraint(mut self, constraint: ConstraintSpec) -> Self {
        self.constraints.push(constraint);
        self
    }

    pub fn build(self) -> Result<ProblemModel> {
        let m = self.resources.len();
        let n = self.tasks.len();
        let objective = self
            .objective
            .ok_or_else(|| Error::InvalidModel("model has no objective".into()))?;
        if m == 0 {
            return Err(Error::InvalidModel("model has no resources".into()));
        }
        if let Some(i) = self.resources.iter().position(|r| r.position_capacity == Some(0)) {
            return Err(Error::InvalidModel(format!("resource {i} has zero positions")));
        }
        if let ObjectiveKind::AssignmentCost(t) = &objective.kind {
            if !t.fits(m, n) {
                return Err(Error::InvalidModel("cost table shape".into()));
            }
        }
        let mut links = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            validate_constraint(c, m, n)?;
            links.push(build_links(c, n));
        }
        Ok(ProblemModel {
            name: self.name,
            resources: self.resources,
            tasks: self.tasks,
            order: self.order,
            attributes: self.attributes,
            objective,
            constraints: self.constraints,
            links,
        })
    }
}

fn validate_constraint(c: &ConstraintSpec, m: usize, n: usize) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidModel(format!("constraint '{}': {why}", c.name)));
    match &c.kind {
        ConstraintKind::ResourceAggregate {
            coefficients,
            thresholds,
            ..
        } => {
            if !coefficients.fits(m, n) || !thresholds.fits(m, n) || !thresholds.is_task_free() {
                return bad("table shape");
            }
        }
        ConstraintKind::TaskAggregate {
            coefficients,
            thresholds,
            ..
        } => {
            if !coefficients.fits(m, n) || !thresholds.fits(m, n) || !thresholds.is_resource_free() {
                return bad("table shape");
            }
        }
        ConstraintKind::ResourceTaskAggregate {
            coefficients,
            thresholds,
            ..
        } => {
            if !coefficients.fits(m, n) || !thresholds.fits(m, n) {
                return bad("table shape");
            }
        }
        ConstraintKind::Pairing { pairs, .. } | ConstraintKind::Precedence { pairs } => {
            if pairs.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
                return bad("pair references an unknown task or pairs a task with itself");
            }
        }
        ConstraintKind::Custom(_) => {}
    }
    Ok(())
}

fn build_links(c: &ConstraintSpec, n: usize) -> Links {
    match &c.kind {
        ConstraintKind::Pairing { pairs, .. } => {
            let mut partners = vec![Vec::new(); n];
            for &(a, b) in pairs {
                partners[a].push(b);
                partners[b].push(a);
            }
            Links {
                partners,
                ..Links::default()
            }
        }
        ConstraintKind::Precedence { pairs } => {
            let mut before = vec![Vec::new(); n];
            let mut after = vec![Vec::new(); n];
            for &(b, a) in pairs {
                before[a].push(b);
                after[b].push(a);
            }
            Links {
                before,
                after,
                ..Links::default()
            }
        }
        _ => Links::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ProblemModel {
        ProblemModel::builder("tiny", PositionOrder::Unordered)
            .resources([Resource::with_capacity(2), Resource::new()])
            .tasks([Task::new(), Task::new(), Task::new()])
            .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
            .constraint(ConstraintSpec::each_task_once("once"))
            .build()
            .unwrap()
    }

    #[test]
    fn unknown_task_is_a_dimension_mismatch() {
        let m = tiny();
        let s = SolutionStructure::from_routes(vec![vec![0], vec![7]]);
        assert!(matches!(m.evaluate(s), Err(Error::DimensionMismatch(_))));
        let s = SolutionStructure::from_routes(vec![vec![0]]);
        assert!(matches!(m.evaluate(s), Err(Error::DimensionMismatch(_))));
        let s = SolutionStructure::from_routes(vec![vec![0, 1, 2], vec![]]);
        assert!(matches!(m.evaluate(s), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn each_once_counts_missing_and_duplicate_tasks() {
        let m = tiny();
        let e = m
            .evaluate(SolutionStructure::from_routes(vec![vec![0, 0], vec![]]))
            .unwrap();
        // task 0 twice (|2-1|), tasks 1 and 2 missing (1 each)
        assert_eq!(e.violations, vec![3.0]);
        assert_eq!(e.objective, 1.0);
        assert!(!e.is_feasible());
        let e = m
            .evaluate(SolutionStructure::from_routes(vec![vec![0, 2], vec![1]]))
            .unwrap();
        assert!(e.is_feasible());
        assert_eq!(e.objective, 2.0);
    }

    #[test]
    fn unbounded_capacity_defaults_to_task_count() {
        let m = tiny();
        assert_eq!(m.position_capacity(0), 2);
        assert_eq!(m.position_capacity(1), 3);
        assert_eq!(m.max_positions(), 3);
    }

    #[test]
    fn build_rejects_bad_tables_and_pairs() {
        let base = || {
            ProblemModel::builder("bad", PositionOrder::Unordered)
                .resources([Resource::new()])
                .tasks([Task::new(), Task::new()])
                .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
        };
        let r = base()
            .constraint(ConstraintSpec::resource_aggregate(
                "cap",
                Table::ByTask(vec![1.0]),
                Relation::Le,
                Table::Uniform(1.0),
            ))
            .build();
        assert!(matches!(r, Err(Error::InvalidModel(_))));
        let r = base()
            .constraint(ConstraintSpec::pairing("p", vec![(0, 0)], PairingMode::SameResource))
            .build();
        assert!(matches!(r, Err(Error::InvalidModel(_))));
        let r = ProblemModel::builder("none", PositionOrder::Ordered)
            .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
            .build();
        assert!(matches!(r, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn precedence_only_applies_to_ordered_models() {
        let build = |order| {
            ProblemModel::builder("prec", order)
                .resources([Resource::new()])
                .tasks([Task::new(), Task::new()])
                .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
                .constraint(ConstraintSpec::precedence("p", vec![(0, 1)]))
                .build()
                .unwrap()
        };
        let s = SolutionStructure::from_routes(vec![vec![1, 0]]);
        assert_eq!(
            build(PositionOrder::Ordered).evaluate(s.clone()).unwrap().violations,
            vec![1.0]
        );
        assert_eq!(
            build(PositionOrder::Unordered).evaluate(s).unwrap().violations,
            vec![0.0]
        );
        let ok = SolutionStructure::from_routes(vec![vec![0, 1]]);
        assert_eq!(
            build(PositionOrder::Ordered).evaluate(ok).unwrap().violations,
            vec![0.0]
        );
    }
}
