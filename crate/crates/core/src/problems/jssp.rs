use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AttributeEvaluator, AttributeTensor, ConstraintSpec, ObjectiveKind, ObjectiveSpec, PositionOrder, ProblemModel,
    Relation, Residual, Resource, Sense, SolutionStructure, Table, Task,
};

/// One step of a job: the machine it needs and for how long.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Operation {
    pub machine: usize,
    pub duration: f64,
}

/// Job shop: every job runs its operations in the listed order, each on its
/// own machine; makespan is minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsspInstance {
    pub machines: usize,
    pub jobs: Vec<Vec<Operation>>,
}

impl JsspInstance {
    pub fn validate(&self) -> Result<()> {
        if self.machines == 0 {
            return Err(Error::InvalidInstance("no machines".into()));
        }
        for (j, ops) in self.jobs.iter().enumerate() {
            let mut seen = vec![false; self.machines];
            for op in ops {
                if op.machine >= self.machines {
                    return Err(Error::InvalidInstance(format!(
                        "job {j} uses unknown machine {}",
                        op.machine
                    )));
                }
                if std::mem::replace(&mut seen[op.machine], true) {
                    return Err(Error::InvalidInstance(format!(
                        "job {j} visits machine {} twice",
                        op.machine
                    )));
                }
                if !(op.duration >= 0.0) || !op.duration.is_finite() {
                    return Err(Error::InvalidInstance(format!("job {j} has a bad duration")));
                }
            }
        }
        Ok(())
    }

    /// Operations in job-major order; task `t` of the model is `flat()[t]`.
    pub fn flat(&self) -> Vec<FlatOperation> {
        let mut out = Vec::new();
        for (job, ops) in self.jobs.iter().enumerate() {
            for (step, op) in ops.iter().enumerate() {
                out.push(FlatOperation {
                    job,
                    step,
                    machine: op.machine,
                    duration: op.duration,
                });
            }
        }
        out
    }

    /// Largest machine load or job length.
    pub fn trivial_lower_bound(&self) -> f64 {
        let mut load = vec![0.0; self.machines];
        let mut longest: f64 = 0.0;
        for ops in &self.jobs {
            longest = longest.max(ops.iter().map(|o| o.duration).sum());
            for o in ops {
                load[o.machine] += o.duration;
            }
        }
        load.into_iter().fold(longest, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatOperation {
    pub job: usize,
    pub step: usize,
    pub machine: usize,
    pub duration: f64,
}

/// End times `[machine][position]` of the semi-active schedule encoded by
/// the machine sequences.
///
/// An operation starts once its machine is free and every placed copy of its
/// job predecessor has finished. When no machine head is ready (the
/// sequences disagree with job order), the lowest-index machine with work
/// left starts its head anyway, using whatever predecessor copies are done.
pub fn schedule_end_times(ops: &[FlatOperation], structure: &SolutionStructure) -> AttributeTensor {
    let m = structure.resource_count();
    let n = ops.len();
    let pred: Vec<Option<usize>> = (0..n).map(|t| (ops[t].step > 0).then(|| t - 1)).collect();
    let mut copies = vec![0usize; n];
    for (_, _, t) in structure.cells() {
        copies[t] += 1;
    }
    let mut done = vec![0usize; n];
    let mut finish = vec![0.0f64; n];
    let mut ready = vec![0.0f64; m];
    let mut next = vec![0usize; m];
    let mut end: AttributeTensor = structure.routes().iter().map(|r| vec![0.0; r.len()]).collect();
    let mut remaining = structure.assigned_count();

    while remaining > 0 {
        let pending = |i: usize| next[i] < structure.route(i).len();
        let head_ready = |i: usize| {
            let t = structure.route(i)[next[i]];
            pred[t].is_none_or(|p| done[p] == copies[p])
        };
        let i = (0..m)
            .find(|&i| pending(i) && head_ready(i))
            .or_else(|| (0..m).find(|&i| pending(i)))
            .expect("work remains");
        let t = structure.route(i)[next[i]];
        let job_ready = pred[t].map_or(0.0, |p| finish[p]);
        let e = ready[i].max(job_ready) + ops[t].duration;
        end[i][next[i]] = e;
        ready[i] = e;
        finish[t] = finish[t].max(e);
        done[t] += 1;
        next[i] += 1;
        remaining -= 1;
    }
    end
}

pub fn model_jssp(inst: &JsspInstance) -> Result<ProblemModel> {
    inst.validate()?;
    let ops = Arc::new(inst.flat());
    let n = ops.len();
    let eligible: Vec<Vec<f64>> = (0..inst.machines)
        .map(|i| ops.iter().map(|o| if o.machine == i { 1.0 } else { 0.0 }).collect())
        .collect();

    let decode_ops = Arc::clone(&ops);
    let order_ops = Arc::clone(&ops);
    ProblemModel::builder("jssp", PositionOrder::Ordered)
        .resources((0..inst.machines).map(|_| Resource::new()))
        .tasks(ops.iter().map(|o| {
            Task::new()
                .attribute("job", o.job as f64)
                .attribute("machine", o.machine as f64)
                .attribute("duration", o.duration)
        }))
        .attribute(AttributeEvaluator::new("end", move |s| {
            schedule_end_times(&decode_ops, s)
        }))
        .objective(ObjectiveSpec::new(
            Sense::Min,
            ObjectiveKind::MaxAttribute("end".into()),
        ))
        .constraint(ConstraintSpec::each_task_once("schedule_once"))
        .constraint(ConstraintSpec::resource_task_aggregate(
            "machine",
            Table::Uniform(1.0),
            Relation::Le,
            Table::ByResourceTask(eligible),
        ))
        .constraint(ConstraintSpec::custom("job_order", move |s, attrs| {
            let end = attrs.get("end").expect("end times are computed");
            // first placed copy of each operation
            let mut first: Vec<Option<(f64, f64)>> = vec![None; n];
            for (i, k, t) in s.cells() {
                let e = end[i][k];
                let slot = &mut first[t];
                if slot.is_none() {
                    *slot = Some((e - order_ops[t].duration, e));
                }
            }
            (1..n)
                .filter(|&t| order_ops[t].step > 0)
                .filter_map(|t| match (first[t - 1], first[t]) {
                    (Some((_, pe)), Some((s, _))) => Some(Residual::Inequality(if s < pe - 1e-9 { 1.0 } else { 0.0 })),
                    _ => None,
                })
                .collect()
        }))
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(machine: usize, duration: f64) -> Operation {
        Operation { machine, duration }
    }

    #[test]
    fn single_operation_makespan() {
        let inst = JsspInstance {
            machines: 1,
            jobs: vec![vec![op(0, 7.0)]],
        };
        let model = model_jssp(&inst).unwrap();
        let e = model.evaluate(SolutionStructure::from_routes(vec![vec![0]])).unwrap();
        assert_eq!(e.objective, 7.0);
        assert!(e.is_feasible());
    }

    #[test]
    fn crossing_sequences_deadlock_and_violate_job_order() {
        // job 0: m0 then m1; job 1: m1 then m0
        let inst = JsspInstance {
            machines: 2,
            jobs: vec![vec![op(0, 3.0), op(1, 2.0)], vec![op(1, 2.0), op(0, 4.0)]],
        };
        let model = model_jssp(&inst).unwrap();
        // m0: (0,1) job1's second op before job0's first; m1: job0's second before job1's first
        let bad = model
            .evaluate(SolutionStructure::from_routes(vec![vec![3, 0], vec![1, 2]]))
            .unwrap();
        assert!(!bad.is_feasible());
        let good = model
            .evaluate(SolutionStructure::from_routes(vec![vec![0, 3], vec![2, 1]]))
            .unwrap();
        assert!(good.is_feasible());
        // m0: op0 [0,3], op3 waits for op2 [0,2] -> [3,7]; m1: op2 [0,2], op1 [3,5]
        assert_eq!(good.objective, 7.0);
    }

    #[test]
    fn wrong_machine_is_a_violation() {
        let inst = JsspInstance {
            machines: 2,
            jobs: vec![vec![op(0, 1.0)]],
        };
        let model = model_jssp(&inst).unwrap();
        let e = model
            .evaluate(SolutionStructure::from_routes(vec![vec![], vec![0]]))
            .unwrap();
        assert_eq!(e.violations, vec![0.0, 1.0, 0.0]);
    }
}
