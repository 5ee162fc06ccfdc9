use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AttributeEvaluator, AttributeTensor, ConstraintSpec, ObjectiveSpec, PositionOrder, ProblemModel, Relation,
    Residual, Resource, Sense, SolutionStructure, Table, Task,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Customer {
    pub demand: f64,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

/// Capacitated routing with time windows from a single depot.
///
/// `travel` is indexed over `0..=n`: 0 is the depot and customer `j` sits at
/// `j + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VrptwInstance {
    pub vehicles: usize,
    pub capacity: f64,
    pub customers: Vec<Customer>,
    pub travel: Vec<Vec<f64>>,
    /// Latest return time at the depot.
    pub depot_due: f64,
}

impl VrptwInstance {
    /// Euclidean travel times between `points` (depot first).
    pub fn from_points(
        vehicles: usize,
        capacity: f64,
        points: &[(f64, f64)],
        customers: Vec<Customer>,
        depot_due: f64,
    ) -> Self {
        let travel = points
            .iter()
            .map(|a| {
                points
                    .iter()
                    .map(|b| {
                        let (dx, dy) = (a.0 - b.0, a.1 - b.1);
                        (dx * dx + dy * dy).sqrt()
                    })
                    .collect()
            })
            .collect();
        Self {
            vehicles,
            capacity,
            customers,
            travel,
            depot_due,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.customers.len();
        if self.vehicles == 0 {
            return Err(Error::InvalidInstance("no vehicles".into()));
        }
        if !(self.capacity > 0.0) {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        if self.travel.len() != n + 1 || self.travel.iter().any(|r| r.len() != n + 1) {
            return Err(Error::InvalidInstance("travel matrix must be (n+1)x(n+1)".into()));
        }
        if self.travel.iter().flatten().any(|&t| !(t >= 0.0)) {
            return Err(Error::InvalidInstance("travel times must be nonnegative".into()));
        }
        if let Some(j) = self
            .customers
            .iter()
            .position(|c| !(c.ready <= c.due) || c.demand < 0.0 || c.service < 0.0)
        {
            return Err(Error::InvalidInstance(format!(
                "customer {j} has a bad window, demand or service"
            )));
        }
        Ok(())
    }

    /// Route travel time including the legs from and back to the depot.
    pub fn route_length(&self, route: &[usize]) -> f64 {
        let mut prev = 0;
        let mut total = 0.0;
        for &j in route {
            total += self.travel[prev][j + 1];
            prev = j + 1;
        }
        if !route.is_empty() {
            total += self.travel[prev][0];
        }
        total
    }
}

/// Service start times `[vehicle][position]`: a vehicle leaves the depot at
/// 0, waits for the window to open on early arrival, and leaves a customer
/// once service ends.
pub fn service_start_times(inst: &VrptwInstance, structure: &SolutionStructure) -> AttributeTensor {
    structure
        .routes()
        .iter()
        .map(|route| {
            let mut clock = 0.0;
            let mut at = 0;
            route
                .iter()
                .map(|&j| {
                    let c = &inst.customers[j];
                    let start = (clock + inst.travel[at][j + 1]).max(c.ready);
                    clock = start + c.service;
                    at = j + 1;
                    start
                })
                .collect()
        })
        .collect()
}

pub fn model_vrptw(inst: &VrptwInstance) -> Result<ProblemModel> {
    inst.validate()?;
    let shared = Arc::new(inst.clone());
    let demands: Vec<f64> = inst.customers.iter().map(|c| c.demand).collect();

    let for_start = Arc::clone(&shared);
    let for_end = Arc::clone(&shared);
    let for_windows = Arc::clone(&shared);
    let for_cost = Arc::clone(&shared);
    let for_load = Arc::clone(&shared);
    ProblemModel::builder("vrptw", PositionOrder::Ordered)
        .resources((0..inst.vehicles).map(|_| Resource::new().attribute("capacity", inst.capacity)))
        .tasks(inst.customers.iter().map(|c| {
            Task::new()
                .attribute("demand", c.demand)
                .attribute("ready", c.ready)
                .attribute("due", c.due)
                .attribute("service", c.service)
        }))
        .attribute(AttributeEvaluator::new("start", move |s| {
            service_start_times(&for_start, s)
        }))
        .attribute(AttributeEvaluator::new("end", move |s| {
            let mut t = service_start_times(&for_end, s);
            for (i, row) in t.iter_mut().enumerate() {
                for (k, v) in row.iter_mut().enumerate() {
                    *v += for_end.customers[s.route(i)[k]].service;
                }
            }
            t
        }))
        .attribute(AttributeEvaluator::new("load", move |s| {
            s.routes()
                .iter()
                .map(|r| {
                    r.iter()
                        .scan(0.0, |acc, &j| {
                            *acc += for_load.customers[j].demand;
                            Some(*acc)
                        })
                        .collect()
                })
                .collect()
        }))
        .objective(ObjectiveSpec::custom(Sense::Min, move |s, _| {
            s.routes().iter().map(|r| for_cost.route_length(r)).sum()
        }))
        .constraint(ConstraintSpec::resource_aggregate(
            "capacity",
            Table::ByTask(demands),
            Relation::Le,
            Table::Uniform(inst.capacity),
        ))
        .constraint(ConstraintSpec::each_task_once("visit_once"))
        .constraint(ConstraintSpec::custom("time_windows", move |s, attrs| {
            let inst = &for_windows;
            let start = attrs.get("start").expect("start times are computed");
            let end = attrs.get("end").expect("end times are computed");
            let mut rows = Vec::new();
            for (i, route) in s.routes().iter().enumerate() {
                for (k, &j) in route.iter().enumerate() {
                    let c = &inst.customers[j];
                    rows.push(Residual::Inequality(start[i][k] - c.due));
                    rows.push(Residual::Inequality(c.ready - start[i][k]));
                }
                if let (Some(&last), Some(&e)) = (route.last(), end[i].last()) {
                    rows.push(Residual::Inequality(e + inst.travel[last + 1][0] - inst.depot_due));
                }
            }
            rows
        }))
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn customer(demand: f64, ready: f64, due: f64) -> Customer {
        Customer {
            demand,
            ready,
            due,
            service: 1.0,
        }
    }

    #[test]
    fn single_customer_round_trip() {
        let inst = VrptwInstance::from_points(
            1,
            10.0,
            &[(0.0, 0.0), (3.0, 4.0)],
            vec![customer(1.0, 0.0, f64::INFINITY)],
            f64::INFINITY,
        );
        let model = model_vrptw(&inst).unwrap();
        let e = model.evaluate(SolutionStructure::from_routes(vec![vec![0]])).unwrap();
        assert_eq!(e.objective, 10.0);
        assert!(e.is_feasible());
    }

    #[test]
    fn early_arrival_waits_and_late_arrival_violates() {
        let inst = VrptwInstance::from_points(
            1,
            10.0,
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
            vec![customer(1.0, 5.0, 6.0), customer(1.0, 0.0, 6.5)],
            100.0,
        );
        let model = model_vrptw(&inst).unwrap();
        let s = SolutionStructure::from_routes(vec![vec![0, 1]]);
        assert_eq!(service_start_times(&inst, &s), vec![vec![5.0, 7.0]]);
        let e = model.evaluate(s).unwrap();
        assert_eq!(e.violations, vec![0.0, 0.0, 0.5]);
        let e = model
            .evaluate(SolutionStructure::from_routes(vec![vec![1, 0]]))
            .unwrap();
        assert!(e.is_feasible());
    }

    #[test]
    fn overloaded_fleet_is_infeasible() {
        let inst = VrptwInstance::from_points(
            1,
            1.0,
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
            vec![customer(1.0, 0.0, 50.0), customer(1.0, 0.0, 50.0)],
            100.0,
        );
        let model = model_vrptw(&inst).unwrap();
        let e = model
            .evaluate(SolutionStructure::from_routes(vec![vec![0, 1]]))
            .unwrap();
        assert_eq!(e.violations[0], 1.0);
    }
}
