//! Readers and writers for the benchmark file formats.

mod bppc;
mod dimacs;
mod gap;
mod solomon;
mod taillard;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rtopt_core::problems::{Instance, ProblemKind};
use thiserror::Error;

pub use bppc::{parse_bppc, write_bppc};
pub use dimacs::{parse_dimacs, write_dimacs};
pub use gap::{parse_gap, parse_gap_all, write_gap};
pub use solomon::{parse_solomon, write_solomon};
pub use taillard::{parse_taillard, write_taillard};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid instance: {0}")]
    Invalid(#[from] rtopt_core::Error),
}

impl FormatError {
    pub(crate) fn at(line: usize, reason: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    OrLibraryGap,
    BppConflict,
    DimacsCol,
    TaillardJssp,
    SolomonVrptw,
    NativeJson,
}

impl Format {
    pub const ALL: [Format; 6] = [
        Format::OrLibraryGap,
        Format::BppConflict,
        Format::DimacsCol,
        Format::TaillardJssp,
        Format::SolomonVrptw,
        Format::NativeJson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Format::OrLibraryGap => "or-library-gap",
            Format::BppConflict => "bpp-conflict",
            Format::DimacsCol => "dimacs-col",
            Format::TaillardJssp => "taillard-jssp",
            Format::SolomonVrptw => "solomon-vrptw",
            Format::NativeJson => "native-json",
        }
    }

    /// The conventional file format for a problem.
    pub fn for_problem(kind: ProblemKind) -> Format {
        match kind {
            ProblemKind::Gap => Format::OrLibraryGap,
            ProblemKind::Bppc => Format::BppConflict,
            ProblemKind::Gc => Format::DimacsCol,
            ProblemKind::Jssp => Format::TaillardJssp,
            ProblemKind::Vrptw => Format::SolomonVrptw,
        }
    }

    /// `.json` files are native; anything else follows the problem kind.
    pub fn infer(path: &Path, problem: Option<ProblemKind>) -> Result<Format> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            return Ok(Format::NativeJson);
        }
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("col")) {
            return Ok(Format::DimacsCol);
        }
        problem
            .map(Format::for_problem)
            .ok_or_else(|| FormatError::UnsupportedFormat(format!("cannot tell the format of {}", path.display())))
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let short = match lower.as_str() {
            "gap" | "orlib" => Some(Format::OrLibraryGap),
            "bppc" => Some(Format::BppConflict),
            "dimacs" | "col" => Some(Format::DimacsCol),
            "taillard" => Some(Format::TaillardJssp),
            "solomon" => Some(Format::SolomonVrptw),
            "json" | "native" => Some(Format::NativeJson),
            _ => None,
        };
        short
            .or_else(|| Format::ALL.into_iter().find(|f| f.name() == lower))
            .ok_or_else(|| FormatError::UnsupportedFormat(s.to_string()))
    }
}

pub fn parse_str(text: &str, format: Format) -> Result<Instance> {
    Ok(match format {
        Format::OrLibraryGap => Instance::Gap(parse_gap(text)?),
        Format::BppConflict => Instance::Bppc(parse_bppc(text)?),
        Format::DimacsCol => Instance::Gc(parse_dimacs(text)?),
        Format::TaillardJssp => Instance::Jssp(parse_taillard(text)?),
        Format::SolomonVrptw => Instance::Vrptw(parse_solomon(text)?),
        Format::NativeJson => {
            let inst: Instance = serde_json::from_str(text).map_err(|e| FormatError::at(e.line(), e.to_string()))?;
            inst.model()?;
            inst
        }
    })
}

pub fn parse_instance(path: &Path, format: Format) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_str(&text, format)
}

/// Serializes an instance. Solomon files need coordinates, so they go
/// through [`write_solomon`] instead.
pub fn write_instance(inst: &Instance, format: Format) -> Result<String> {
    match (inst, format) {
        (_, Format::NativeJson) => Ok(serde_json::to_string_pretty(inst).expect("instances serialize") + "\n"),
        (Instance::Gap(i), Format::OrLibraryGap) => Ok(write_gap(i)),
        (Instance::Bppc(i), Format::BppConflict) => Ok(write_bppc(i)),
        (Instance::Gc(i), Format::DimacsCol) => Ok(write_dimacs(i)),
        (Instance::Jssp(i), Format::TaillardJssp) => write_taillard(i),
        (Instance::Vrptw(_), Format::SolomonVrptw) => Err(FormatError::UnsupportedFormat(
            "solomon output needs customer coordinates".into(),
        )),
        (inst, format) => Err(FormatError::UnsupportedFormat(format!(
            "{} instances cannot be written as {format}",
            inst.kind()
        ))),
    }
}

/// Whitespace tokens tagged with their 1-based line numbers.
pub(crate) struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    pub fn new(text: &'a str) -> Self {
        let items: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Self {
            items,
            pos: 0,
            last_line: text.lines().count(),
        }
    }

    /// Line of the next token, or one past the end.
    pub fn line(&self) -> usize {
        self.items.get(self.pos).map_or(self.last_line + 1, |t| t.0)
    }

    pub fn is_empty(&self) -> bool {
        self.pos >= self.items.len()
    }

    fn next_raw(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let t =
            self.items.get(self.pos).copied().ok_or_else(|| {
                FormatError::at(self.last_line + 1, format!("unexpected end of file, expected {what}"))
            })?;
        self.pos += 1;
        Ok(t)
    }

    pub fn usize(&mut self, what: &str) -> Result<usize> {
        let (line, t) = self.next_raw(what)?;
        t.parse()
            .map_err(|_| FormatError::at(line, format!("expected {what}, found `{t}`")))
    }

    pub fn f64(&mut self, what: &str) -> Result<f64> {
        let (line, t) = self.next_raw(what)?;
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| FormatError::at(line, format!("expected {what}, found `{t}`")))
    }
}

/// Numbers on one line, with the line number for diagnostics.
pub(crate) fn numbers(line_no: usize, line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| FormatError::at(line_no, format!("expected a number, found `{t}`")))
        })
        .collect()
}

pub(crate) fn join<T: fmt::Display>(values: impl IntoIterator<Item = T>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}
