use std::fmt;
use std::sync::Arc;

use super::structure::SolutionStructure;

/// Values derived from a structure, laid out as `tensor[resource][position]`.
///
/// Evaluators are free to use another layout (one value per resource, for
/// example) as long as the consumers agree on it.
pub type AttributeTensor = Vec<Vec<f64>>;

pub type AttributeFn = dyn Fn(&SolutionStructure) -> AttributeTensor + Send + Sync;

/// A named, pure function from a structure to an attribute tensor.
#[derive(Clone)]
pub struct AttributeEvaluator {
    name: String,
    compute: Arc<AttributeFn>,
}

impl AttributeEvaluator {
    pub fn new<F>(name: impl Into<String>, compute: F) -> Self
    where
        F: Fn(&SolutionStructure) -> AttributeTensor + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            compute: Arc::new(compute),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn compute(&self, structure: &SolutionStructure) -> AttributeTensor {
        (self.compute)(structure)
    }
}

impl fmt::Debug for AttributeEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AttributeEvaluator")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// All attribute tensors computed for one structure, in evaluator order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Attributes {
    entries: Vec<(String, AttributeTensor)>,
}

impl Attributes {
    pub(crate) fn compute(evaluators: &[AttributeEvaluator], structure: &SolutionStructure) -> Self {
        Self {
            entries: evaluators
                .iter()
                .map(|e| (e.name.clone(), e.compute(structure)))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&AttributeTensor> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AttributeTensor)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }
}

/// Start and end service times of a routing structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceTimes {
    pub start: AttributeTensor,
    pub end: AttributeTensor,
}

/// Start/end times computed by the plain recursion: the first task of a
/// route starts at its travel time from the depot, every later task starts
/// at its predecessor's *start* plus the travel time between the two, and
/// ends `service[j]` after it starts.
///
/// `travel` is indexed over `0..=n` with 0 the depot and task `j` at `j + 1`.
/// There is no waiting and the predecessor's service duration is not added;
/// see `problems::vrptw` for the clock used by the routing adapter.
pub fn evaluate_vrptw_attributes(structure: &SolutionStructure, travel: &[Vec<f64>], service: &[f64]) -> ServiceTimes {
    let mut start = Vec::with_capacity(structure.resource_count());
    let mut end = Vec::with_capacity(structure.resource_count());
    for route in structure.routes() {
        let mut s_row = Vec::with_capacity(route.len());
        let mut e_row = Vec::with_capacity(route.len());
        let mut prev: Option<(usize, f64)> = None;
        for &j in route {
            let s = match prev {
                None => travel[0][j + 1],
                Some((p, ps)) => ps + travel[p + 1][j + 1],
            };
            s_row.push(s);
            e_row.push(s + service[j]);
            prev = Some((j, s));
        }
        start.push(s_row);
        end.push(e_row);
    }
    ServiceTimes { start, end }
}
