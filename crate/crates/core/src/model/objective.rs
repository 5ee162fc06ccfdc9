use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::attribute::Attributes;
use super::structure::SolutionStructure;
use super::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

impl Sense {
    /// `Less` when `a` is the better objective value.
    #[inline]
    pub fn cmp_values(self, a: f64, b: f64) -> Ordering {
        match self {
            Sense::Min => a.total_cmp(&b),
            Sense::Max => b.total_cmp(&a),
        }
    }
}

pub type ObjectiveFn = dyn Fn(&SolutionStructure, &Attributes) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum ObjectiveKind {
    /// `Σ c[i][j]` over every unit assignment.
    AssignmentCost(Table),
    /// Number of resources holding at least one task.
    UsedResources,
    /// Largest value of the named attribute tensor (0 when empty).
    MaxAttribute(String),
    /// Sum of the named attribute tensor.
    SumAttribute(String),
    Custom(Arc<ObjectiveFn>),
}

impl fmt::Debug for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::AssignmentCost(t) => f.debug_tuple("AssignmentCost").field(t).finish(),
            ObjectiveKind::UsedResources => f.write_str("UsedResources"),
            ObjectiveKind::MaxAttribute(a) => f.debug_tuple("MaxAttribute").field(a).finish(),
            ObjectiveKind::SumAttribute(a) => f.debug_tuple("SumAttribute").field(a).finish(),
            ObjectiveKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    pub sense: Sense,
    pub kind: ObjectiveKind,
}

impl ObjectiveSpec {
    pub fn new(sense: Sense, kind: ObjectiveKind) -> Self {
        Self { sense, kind }
    }

    pub fn custom<F>(sense: Sense, f: F) -> Self
    where
        F: Fn(&SolutionStructure, &Attributes) -> f64 + Send + Sync + 'static,
    {
        Self::new(sense, ObjectiveKind::Custom(Arc::new(f)))
    }

    pub(crate) fn value(&self, structure: &SolutionStructure, attributes: &Attributes) -> f64 {
        match &self.kind {
            ObjectiveKind::AssignmentCost(table) => structure.cells().map(|(i, _, j)| table.at(i, j)).sum(),
            ObjectiveKind::UsedResources => structure.routes().iter().filter(|r| !r.is_empty()).count() as f64,
            ObjectiveKind::MaxAttribute(name) => attributes
                .get(name)
                .map(|t| t.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max))
                .filter(|v| v.is_finite())
                .unwrap_or(0.0),
            ObjectiveKind::SumAttribute(name) => attributes.get(name).map(|t| t.iter().flatten().sum()).unwrap_or(0.0),
            ObjectiveKind::Custom(f) => f(structure, attributes),
        }
    }
}
