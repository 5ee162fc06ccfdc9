//! Benchmark harness: instance file formats, seeded experiments and the
//! `rtopt` command line.

pub mod cli;
pub mod experiment;
pub mod formats;

pub use experiment::{compute_gap, run_experiment, Algorithm, ExperimentConfig, ExperimentOutcome, ResultRow, RunRow};
pub use formats::{parse_instance, parse_str, write_instance, Format, FormatError};
