//! Encodings of benchmark problems as resource-task models.

pub mod bppc;
pub mod fixtures;
pub mod gap;
pub mod gc;
pub mod jssp;
pub mod synthetic;
pub mod vrptw;

pub use bppc::{model_bppc, BppcInstance};
pub use gap::{model_gap, GapInstance};
pub use gc::{model_gc, GcInstance};
pub use jssp::{model_jssp, JsspInstance, Operation};
pub use vrptw::{model_vrptw, Customer, VrptwInstance};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::ProblemModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Gap,
    Bppc,
    Gc,
    Jssp,
    Vrptw,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::Gap,
        ProblemKind::Bppc,
        ProblemKind::Gc,
        ProblemKind::Jssp,
        ProblemKind::Vrptw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Gap => "gap",
            ProblemKind::Bppc => "bppc",
            ProblemKind::Gc => "gc",
            ProblemKind::Jssp => "jssp",
            ProblemKind::Vrptw => "vrptw",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| format!("unknown problem `{s}` (expected gap, bppc, gc, jssp or vrptw)"))
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A parsed instance of one of the supported problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", content = "instance", rename_all = "lowercase")]
pub enum Instance {
    Gap(GapInstance),
    Bppc(BppcInstance),
    Gc(GcInstance),
    Jssp(JsspInstance),
    Vrptw(VrptwInstance),
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Gap(_) => ProblemKind::Gap,
            Instance::Bppc(_) => ProblemKind::Bppc,
            Instance::Gc(_) => ProblemKind::Gc,
            Instance::Jssp(_) => ProblemKind::Jssp,
            Instance::Vrptw(_) => ProblemKind::Vrptw,
        }
    }

    pub fn model(&self) -> Result<ProblemModel> {
        match self {
            Instance::Gap(i) => model_gap(i),
            Instance::Bppc(i) => model_bppc(i),
            Instance::Gc(i) => model_gc(i),
            Instance::Jssp(i) => model_jssp(i),
            Instance::Vrptw(i) => model_vrptw(i),
        }
    }
}
