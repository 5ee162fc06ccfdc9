//! JSON model-description format.
//!
//! ```json
//! {
//!   "name": "toy",
//!   "order": "unordered",
//!   "resources": [{"attributes": {"capacity": 5}}, {"position_capacity": 3}],
//!   "tasks": [{"attributes": {"demand": 2}}, {}],
//!   "objective": {"sense": "min", "builtin": "assignment_cost",
//!                 "costs": {"by_resource_task": [[1, 2], [3, 4]]}},
//!   "constraints": [
//!     {"name": "cap", "template": "resource_aggregate",
//!      "coefficients": {"by_task": [2, 1]}, "relation": "<=",
//!      "thresholds": {"by_resource": [5, 5]}},
//!     {"name": "once", "template": "task_aggregate",
//!      "coefficients": {"uniform": 1}, "relation": "=", "thresholds": {"uniform": 1}},
//!     {"name": "apart", "template": "pairing", "pairs": [[0, 1]],
//!      "mode": "different_resource"}
//!   ]
//! }
//! ```
//!
//! Task and resource references are 0-based list positions. Attribute
//! evaluators, custom residuals and custom objectives only exist in code, so
//! models using them have no description.

use serde::{Deserialize, Serialize};

use super::{
    ConstraintKind, ConstraintSpec, ObjectiveKind, ObjectiveSpec, PairingMode, PositionOrder, ProblemModel, Relation,
    Resource, Sense, Table, Task,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescription {
    #[serde(default)]
    pub name: String,
    pub order: PositionOrder,
    pub resources: Vec<Resource>,
    pub tasks: Vec<Task>,
    pub objective: ObjectiveDescription,
    #[serde(default)]
    pub constraints: Vec<ConstraintDescription>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveDescription {
    pub sense: Sense,
    #[serde(flatten)]
    pub builtin: BuiltinObjective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case")]
pub enum BuiltinObjective {
    AssignmentCost { costs: Table },
    UsedResources,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDescription {
    pub name: String,
    #[serde(flatten)]
    pub template: TemplateDescription,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "template", rename_all = "snake_case")]
pub enum TemplateDescription {
    ResourceAggregate {
        coefficients: Table,
        relation: Relation,
        thresholds: Table,
    },
    TaskAggregate {
        coefficients: Table,
        relation: Relation,
        thresholds: Table,
    },
    Pairing {
        pairs: Vec<(usize, usize)>,
        mode: PairingMode,
    },
    Precedence {
        pairs: Vec<(usize, usize)>,
    },
    ResourceTaskAggregate {
        coefficients: Table,
        relation: Relation,
        thresholds: Table,
    },
}

impl ModelDescription {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model descriptions always serialize")
    }

    pub fn build(&self) -> Result<ProblemModel> {
        let kind = match &self.objective.builtin {
            BuiltinObjective::AssignmentCost { costs } => ObjectiveKind::AssignmentCost(costs.clone()),
            BuiltinObjective::UsedResources => ObjectiveKind::UsedResources,
        };
        let mut builder = ProblemModel::builder(self.name.clone(), self.order)
            .resources(self.resources.iter().cloned())
            .tasks(self.tasks.iter().cloned())
            .objective(ObjectiveSpec::new(self.objective.sense, kind));
        for c in &self.constraints {
            let kind = match c.template.clone() {
                TemplateDescription::ResourceAggregate {
                    coefficients,
                    relation,
                    thresholds,
                } => ConstraintKind::ResourceAggregate {
                    coefficients,
                    thresholds,
                    relation,
                },
                TemplateDescription::TaskAggregate {
                    coefficients,
                    relation,
                    thresholds,
                } => ConstraintKind::TaskAggregate {
                    coefficients,
                    thresholds,
                    relation,
                },
                TemplateDescription::Pairing { pairs, mode } => ConstraintKind::Pairing { pairs, mode },
                TemplateDescription::Precedence { pairs } => ConstraintKind::Precedence { pairs },
                TemplateDescription::ResourceTaskAggregate {
                    coefficients,
                    relation,
                    thresholds,
                } => ConstraintKind::ResourceTaskAggregate {
                    coefficients,
                    thresholds,
                    relation,
                },
            };
            builder = builder.constraint(ConstraintSpec::new(c.name.clone(), kind));
        }
        builder.build()
    }
}

impl ProblemModel {
    /// The model as a description, if it uses only templates and a builtin
    /// objective.
    pub fn describe(&self) -> Result<ModelDescription> {
        if !self.attribute_evaluators().is_empty() {
            return Err(Error::InvalidModel("attribute evaluators cannot be described".into()));
        }
        let builtin = match &self.objective().kind {
            ObjectiveKind::AssignmentCost(t) => BuiltinObjective::AssignmentCost { costs: t.clone() },
            ObjectiveKind::UsedResources => BuiltinObjective::UsedResources,
            other => return Err(Error::InvalidModel(format!("objective {other:?} has no description"))),
        };
        let mut constraints = Vec::with_capacity(self.constraints().len());
        for c in self.constraints() {
            let template = match c.kind.clone() {
                ConstraintKind::ResourceAggregate {
                    coefficients,
                    thresholds,
                    relation,
                } => TemplateDescription::ResourceAggregate {
                    coefficients,
                    relation,
                    thresholds,
                },
                ConstraintKind::TaskAggregate {
                    coefficients,
                    thresholds,
                    relation,
                } => TemplateDescription::TaskAggregate {
                    coefficients,
                    relation,
                    thresholds,
                },
                ConstraintKind::Pairing { pairs, mode } => TemplateDescription::Pairing { pairs, mode },
                ConstraintKind::Precedence { pairs } => TemplateDescription::Precedence { pairs },
                ConstraintKind::ResourceTaskAggregate {
                    coefficients,
                    thresholds,
                    relation,
                } => TemplateDescription::ResourceTaskAggregate {
                    coefficients,
                    relation,
                    thresholds,
                },
                ConstraintKind::Custom(_) => {
                    return Err(Error::InvalidModel(format!(
                        "custom constraint '{}' has no description",
                        c.name
                    )))
                }
            };
            constraints.push(ConstraintDescription {
                name: c.name.clone(),
                template,
            });
        }
        Ok(ModelDescription {
            name: self.name().to_string(),
            order: self.order(),
            resources: self.resources().to_vec(),
            tasks: self.tasks().to_vec(),
            objective: ObjectiveDescription {
                sense: self.sense(),
                builtin,
            },
            constraints,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SolutionStructure;

    const DOC_EXAMPLE: &str = r#"{
      "name": "toy",
      "order": "unordered",
      "resources": [{"attributes": {"capacity": 5}}, {"position_capacity": 3}],
      "tasks": [{"attributes": {"demand": 2}}, {}],
      "objective": {"sense": "min", "builtin": "assignment_cost",
                    "costs": {"by_resource_task": [[1, 2], [3, 4]]}},
      "constraints": [
        {"name": "cap", "template": "resource_aggregate",
         "coefficients": {"by_task": [2, 1]}, "relation": "<=",
         "thresholds": {"by_resource": [5, 5]}},
        {"name": "once", "template": "task_aggregate",
         "coefficients": {"uniform": 1}, "relation": "=", "thresholds": {"uniform": 1}},
        {"name": "apart", "template": "pairing", "pairs": [[0, 1]],
         "mode": "different_resource"}
      ]
    }"#;

    #[test]
    fn documented_example_parses_and_evaluates() {
        let d = ModelDescription::from_json(DOC_EXAMPLE).unwrap();
        let model = d.build().unwrap();
        assert_eq!(model.resource_count(), 2);
        assert_eq!(model.resources()[1].position_capacity, Some(3));
        let e = model
            .evaluate(SolutionStructure::from_routes(vec![vec![0], vec![1]]))
            .unwrap();
        assert_eq!(e.objective, 1.0 + 4.0);
        assert!(e.is_feasible());
        let e = model
            .evaluate(SolutionStructure::from_routes(vec![vec![0, 1], vec![]]))
            .unwrap();
        assert_eq!(e.violations, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn describe_round_trips() {
        let d = ModelDescription::from_json(DOC_EXAMPLE).unwrap();
        let again = d.build().unwrap().describe().unwrap();
        assert_eq!(again, d);
        let reparsed = ModelDescription::from_json(&again.to_json()).unwrap();
        assert_eq!(reparsed, d);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = DOC_EXAMPLE.replace("\"order\"", "\"ordering_typo\": 1, \"order\"");
        assert!(ModelDescription::from_json(&text).is_err());
    }
}
