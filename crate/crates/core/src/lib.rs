//! Generic resource-task optimization: a declarative problem model,
//! constraint-aware ranking, problem-independent search operators, a
//! Q-learning operator selector and the metaheuristics built on top of them.

pub mod context;
pub mod error;
pub mod model;
pub mod operators;
pub mod oracle;
pub mod problems;
pub mod qlearning;
pub mod ranking;
pub mod solver;

pub use context::SearchContext;
pub use error::{Error, Result};
pub use model::{EvaluatedSolution, ProblemModel, SolutionStructure};
