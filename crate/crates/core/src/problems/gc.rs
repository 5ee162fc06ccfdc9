use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ConstraintSpec, ObjectiveKind, ObjectiveSpec, PairingMode, PositionOrder, ProblemModel, Resource, Sense, Task,
};

/// Graph coloring with a fixed palette; the number of colors used is
/// minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcInstance {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub colors: usize,
}

impl GcInstance {
    pub fn validate(&self) -> Result<()> {
        if self.colors == 0 {
            return Err(Error::InvalidInstance("no colors".into()));
        }
        if let Some(&(a, b)) = self
            .edges
            .iter()
            .find(|&&(a, b)| a == b || a >= self.nodes || b >= self.nodes)
        {
            return Err(Error::InvalidInstance(format!("bad edge ({a}, {b})")));
        }
        Ok(())
    }

    pub fn max_degree(&self) -> usize {
        let mut degree = vec![0usize; self.nodes];
        for &(a, b) in &self.edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        degree.into_iter().max().unwrap_or(0)
    }
}

pub fn model_gc(inst: &GcInstance) -> Result<ProblemModel> {
    inst.validate()?;
    ProblemModel::builder("gc", PositionOrder::Unordered)
        .resources((0..inst.colors).map(|_| Resource::new()))
        .tasks((0..inst.nodes).map(|_| Task::new()))
        .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
        .constraint(ConstraintSpec::each_task_once("color_once"))
        .constraint(ConstraintSpec::pairing(
            "adjacent",
            inst.edges.clone(),
            PairingMode::DifferentResource,
        ))
        .build()
}
