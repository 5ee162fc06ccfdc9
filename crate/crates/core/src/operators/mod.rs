//! Problem-independent operators over [`SolutionStructure`](crate::model::SolutionStructure)s.

pub mod construction;
pub mod crossover;
pub mod neighborhood;

pub use construction::{
    destroy, destroy_repair, feasible_assignment, initial_solution, repair, ConstructionState, InsertionRule,
    StepOutcome,
};
pub use crossover::{
    crossover_operation, single_point_append, single_point_crossover, tournament, two_point_crossover,
};
pub use neighborhood::{apply_neighborhood, MoveOutcome, NeighborhoodKind};
