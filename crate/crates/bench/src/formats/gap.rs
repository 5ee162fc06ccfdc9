//! OR-Library GAP files: a problem count, then per problem `m n`, the
//! `m x n` cost matrix, the `m x n` demand matrix and `m` capacities.

use rtopt_core::problems::GapInstance;

use super::{join, FormatError, Result, Tokens};

fn matrix(t: &mut Tokens, m: usize, n: usize, what: &str) -> Result<Vec<Vec<f64>>> {
    (0..m)
        .map(|i| {
            (0..n)
                .map(|j| t.f64(&format!("{what} ({}, {})", i + 1, j + 1)))
                .collect()
        })
        .collect()
}

/// Every problem in the file.
pub fn parse_gap_all(text: &str) -> Result<Vec<GapInstance>> {
    let mut t = Tokens::new(text);
    let count = t.usize("problem count")?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let line = t.line();
        let m = t.usize("agent count")?;
        let n = t.usize("job count")?;
        if m == 0 {
            return Err(FormatError::at(line, "a problem needs at least one agent"));
        }
        let costs = matrix(&mut t, m, n, "cost")?;
        let demands = matrix(&mut t, m, n, "demand")?;
        let capacities = (0..m)
            .map(|i| t.f64(&format!("capacity {}", i + 1)))
            .collect::<Result<_>>()?;
        let inst = GapInstance {
            capacities,
            demands,
            costs,
        };
        inst.validate().map_err(|e| FormatError::at(line, e.to_string()))?;
        out.push(inst);
    }
    if !t.is_empty() {
        return Err(FormatError::at(t.line(), "trailing data after the last problem"));
    }
    Ok(out)
}

/// The first problem in the file.
pub fn parse_gap(text: &str) -> Result<GapInstance> {
    parse_gap_all(text)?
        .into_iter()
        .next()
        .ok_or_else(|| FormatError::at(1, "the file holds no problems"))
}

pub fn write_gap(inst: &GapInstance) -> String {
    let mut s = format!("1\n{} {}\n", inst.agents(), inst.jobs());
    for row in inst.costs.iter().chain(&inst.demands) {
        s += &join(row);
        s.push('\n');
    }
    s += &join(&inst.capacities);
    s.push('\n');
    s
}
