use serde::{Deserialize, Serialize};

/// Coefficient or threshold table indexed by `(resource, task)`.
///
/// Templates only read the indices that make sense for them: a resource
/// threshold ignores the task index, a task threshold ignores the resource.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    Uniform(f64),
    ByResource(Vec<f64>),
    ByTask(Vec<f64>),
    ByResourceTask(Vec<Vec<f64>>),
}

impl Table {
    #[inline]
    pub fn at(&self, resource: usize, task: usize) -> f64 {
        match self {
            Table::Uniform(v) => *v,
            Table::ByResource(v) => v[resource],
            Table::ByTask(v) => v[task],
            Table::ByResourceTask(v) => v[resource][task],
        }
    }

    /// Checks that every lookup the template can make is in bounds.
    pub(crate) fn fits(&self, resources: usize, tasks: usize) -> bool {
        match self {
            Table::Uniform(v) => v.is_finite(),
            Table::ByResource(v) => v.len() == resources && v.iter().all(|x| x.is_finite()),
            Table::ByTask(v) => v.len() == tasks && v.iter().all(|x| x.is_finite()),
            Table::ByResourceTask(rows) => {
                rows.len() == resources && rows.iter().all(|r| r.len() == tasks && r.iter().all(|x| x.is_finite()))
            }
        }
    }

    /// True when the value does not depend on the task index.
    pub(crate) fn is_task_free(&self) -> bool {
        matches!(self, Table::Uniform(_) | Table::ByResource(_))
    }

    /// True when the value does not depend on the resource index.
    pub(crate) fn is_resource_free(&self) -> bool {
        matches!(self, Table::Uniform(_) | Table::ByTask(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    #[serde(alias = "<=")]
    Le,
    #[serde(alias = ">=")]
    Ge,
    #[serde(alias = "=")]
    Eq,
}

impl Relation {
    /// Violation of `expr (rel) threshold`: `max{0, expr - θ}` for `≤`,
    /// `max{0, θ - expr}` for `≥` and `|expr - θ|` for `=`.
    #[inline]
    pub fn violation(self, expr: f64, threshold: f64) -> f64 {
        match self {
            Relation::Le => (expr - threshold).max(0.0),
            Relation::Ge => (threshold - expr).max(0.0),
            Relation::Eq => (expr - threshold).abs(),
        }
    }

    /// Whether the relation caps the expression from above.
    #[inline]
    pub fn has_upper_bound(self) -> bool {
        matches!(self, Relation::Le | Relation::Eq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_violations() {
        assert_eq!(Relation::Le.violation(5.0, 3.0), 2.0);
        assert_eq!(Relation::Le.violation(2.0, 3.0), 0.0);
        assert_eq!(Relation::Ge.violation(2.0, 3.0), 1.0);
        assert_eq!(Relation::Ge.violation(4.0, 3.0), 0.0);
        assert_eq!(Relation::Eq.violation(0.0, 3.0), 3.0);
        assert_eq!(Relation::Eq.violation(6.0, 3.0), 3.0);
    }

    #[test]
    fn table_shapes() {
        assert!(Table::ByTask(vec![1.0, 2.0]).fits(3, 2));
        assert!(!Table::ByTask(vec![1.0]).fits(3, 2));
        assert!(Table::ByResourceTask(vec![vec![0.0; 2]; 3]).fits(3, 2));
        assert!(!Table::Uniform(f64::NAN).fits(1, 1));
        assert_eq!(
            Table::ByResourceTask(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).at(1, 0),
            3.0
        );
    }

    #[test]
    fn relation_parses_symbols() {
        let r: Relation = serde_json::from_str("\"<=\"").unwrap();
        assert_eq!(r, Relation::Le);
        let r: Relation = serde_json::from_str("\"eq\"").unwrap();
        assert_eq!(r, Relation::Eq);
    }
}
