use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ConstraintSpec, ObjectiveKind, ObjectiveSpec, PositionOrder, ProblemModel, Relation, Resource, Sense, Table, Task,
};

/// Generalized assignment: each job goes to exactly one agent, agent
/// capacities bound the summed demands, total cost is minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapInstance {
    pub capacities: Vec<f64>,
    /// `demands[agent][job]`
    pub demands: Vec<Vec<f64>>,
    /// `costs[agent][job]`
    pub costs: Vec<Vec<f64>>,
}

impl GapInstance {
    pub fn agents(&self) -> usize {
        self.capacities.len()
    }

    pub fn jobs(&self) -> usize {
        self.costs.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.agents();
        let n = self.jobs();
        if m == 0 {
            return Err(Error::InvalidInstance("no agents".into()));
        }
        if self.demands.len() != m || self.costs.len() != m {
            return Err(Error::InvalidInstance(
                "demand and cost tables need one row per agent".into(),
            ));
        }
        if self.demands.iter().chain(&self.costs).any(|row| row.len() != n) {
            return Err(Error::InvalidInstance("ragged demand or cost table".into()));
        }
        if self.capacities.iter().any(|&c| !(c > 0.0)) || self.demands.iter().flatten().any(|&d| !(d > 0.0)) {
            return Err(Error::InvalidInstance("capacities and demands must be positive".into()));
        }
        if self.costs.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInstance("costs must be finite".into()));
        }
        Ok(())
    }
}

pub fn model_gap(inst: &GapInstance) -> Result<ProblemModel> {
    inst.validate()?;
    ProblemModel::builder("gap", PositionOrder::Unordered)
        .resources(
            inst.capacities
                .iter()
                .map(|&c| Resource::new().attribute("capacity", c)),
        )
        .tasks((0..inst.jobs()).map(|_| Task::new()))
        .objective(ObjectiveSpec::new(
            Sense::Min,
            ObjectiveKind::AssignmentCost(Table::ByResourceTask(inst.costs.clone())),
        ))
        .constraint(ConstraintSpec::resource_aggregate(
            "capacity",
            Table::ByResourceTask(inst.demands.clone()),
            Relation::Le,
            Table::ByResource(inst.capacities.clone()),
        ))
        .constraint(ConstraintSpec::each_task_once("assign_once"))
        .build()
}
