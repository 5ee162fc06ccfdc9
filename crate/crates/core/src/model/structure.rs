use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Tasks assigned to positions of resources.
///
/// `routes[i]` lists the task indices held by resource `i`, position `k`
/// being `routes[i][k]`. Positions are contiguous by construction. Whether
/// the order is meaningful is a property of the model, not of the structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SolutionStructure {
    routes: Vec<Vec<usize>>,
}

impl SolutionStructure {
    /// Structure with `resources` empty sub-assignments.
    pub fn empty(resources: usize) -> Self {
        Self {
            routes: vec![Vec::new(); resources],
        }
    }

    pub fn from_routes(routes: Vec<Vec<usize>>) -> Self {
        Self { routes }
    }

    pub fn resource_count(&self) -> usize {
        self.routes.len()
    }

    pub fn routes(&self) -> &[Vec<usize>] {
        &self.routes
    }

    pub fn route(&self, resource: usize) -> &[usize] {
        &self.routes[resource]
    }

    pub fn route_mut(&mut self, resource: usize) -> &mut Vec<usize> {
        &mut self.routes[resource]
    }

    pub fn into_routes(self) -> Vec<Vec<usize>> {
        self.routes
    }

    /// Number of unit assignments.
    pub fn assigned_count(&self) -> usize {
        self.routes.iter().map(Vec::len).sum()
    }

    /// Largest number of tasks held by one resource.
    pub fn max_load(&self) -> usize {
        self.routes.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.routes.iter().all(Vec::is_empty)
    }

    /// Every `(resource, position, task)` triple.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.routes
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(k, &j)| (i, k, j)))
    }

    /// Sorted multiset of assigned tasks.
    pub fn task_multiset(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.routes.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// Copy with each sub-assignment sorted; identifies structures that an
    /// unordered model cannot tell apart.
    pub fn canonical_unordered(&self) -> Self {
        let mut routes = self.routes.clone();
        for r in &mut routes {
            r.sort_unstable();
        }
        Self { routes }
    }

    /// Binary assignment tensor `y[i][j][k] = 1 ⇔ routes[i][k] = j`.
    pub fn to_assignment_tensor(&self, tasks: usize) -> AssignmentTensor {
        AssignmentTensor {
            resources: self.routes.len(),
            tasks,
            entries: self.cells().map(|(i, k, j)| (i, j, k)).collect(),
        }
    }
}

/// Sparse 0/1 tensor over `(resource, task, position)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentTensor {
    resources: usize,
    tasks: usize,
    entries: BTreeSet<(usize, usize, usize)>,
}

impl AssignmentTensor {
    pub fn get(&self, resource: usize, task: usize, position: usize) -> u8 {
        u8::from(self.entries.contains(&(resource, task, position)))
    }

    /// Sum over all entries; equals the number of occupied positions.
    pub fn sum(&self) -> usize {
        self.entries.len()
    }

    /// `Σ_j y[i][j][k]` for one cell.
    pub fn position_sum(&self, resource: usize, position: usize) -> usize {
        self.entries
            .iter()
            .filter(|&&(i, _, k)| i == resource && k == position)
            .count()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.resources, self.tasks)
    }

    /// Nonzero entries as `(resource, task, position)`.
    pub fn nonzero(&self) -> impl Iterator<Item = &(usize, usize, usize)> {
        self.entries.iter()
    }
}
