use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ConstraintSpec, ObjectiveKind, ObjectiveSpec, PairingMode, PositionOrder, ProblemModel, Relation, Resource, Sense,
    Table, Task,
};

/// Bin packing with conflicts: conflicting items may not share a bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BppcInstance {
    pub capacity: f64,
    pub sizes: Vec<f64>,
    /// Undirected item pairs.
    pub conflicts: Vec<(usize, usize)>,
}

impl BppcInstance {
    pub fn items(&self) -> usize {
        self.sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.capacity > 0.0) {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        if self.sizes.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvalidInstance("item sizes must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.conflicts {
            if a == b || a >= self.items() || b >= self.items() {
                return Err(Error::InvalidInstance(format!("bad conflict ({a}, {b})")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidInstance(format!("duplicate conflict ({a}, {b})")));
            }
        }
        Ok(())
    }
}

/// One bin per item, so every instance without oversized items has a
/// feasible packing.
pub fn model_bppc(inst: &BppcInstance) -> Result<ProblemModel> {
    inst.validate()?;
    let bins = inst.items().max(1);
    ProblemModel::builder("bppc", PositionOrder::Unordered)
        .resources((0..bins).map(|_| Resource::new()))
        .tasks(inst.sizes.iter().map(|&s| Task::new().attribute("size", s)))
        .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
        .constraint(ConstraintSpec::resource_aggregate(
            "capacity",
            Table::ByTask(inst.sizes.clone()),
            Relation::Le,
            Table::Uniform(inst.capacity),
        ))
        .constraint(ConstraintSpec::pairing(
            "conflicts",
            inst.conflicts.clone(),
            PairingMode::DifferentResource,
        ))
        .constraint(ConstraintSpec::each_task_once("pack_once"))
        .build()
}
