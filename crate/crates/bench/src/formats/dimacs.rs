//! DIMACS graph files: `c` comments, a `p edge n m` header and `e u v`
//! lines with 1-based nodes.
//!
//! The number of available colors is read from a `c colors k` comment and
//! defaults to the maximum degree plus one.

use rtopt_core::problems::GcInstance;

use super::{FormatError, Result};

pub fn parse_dimacs(text: &str) -> Result<GcInstance> {
    let mut nodes = None;
    let mut colors = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut words = line.split_whitespace();
        let Some(tag) = words.next() else { continue };
        let rest: Vec<&str> = words.collect();
        let number = |t: &str, what: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| FormatError::at(line_no, format!("expected {what}, found `{t}`")))
        };
        match tag {
            "c" => {
                if let ["colors", k] = rest[..] {
                    colors = Some(number(k, "a color count")?);
                }
            }
            "p" => {
                if nodes.is_some() {
                    return Err(FormatError::at(line_no, "duplicate problem line"));
                }
                let ["edge" | "edges" | "col", n, m] = rest[..] else {
                    return Err(FormatError::at(
                        line_no,
                        "problem line must be `p edge <nodes> <edges>`",
                    ));
                };
                nodes = Some(number(n, "a node count")?);
                number(m, "an edge count")?;
            }
            "e" => {
                let n = nodes.ok_or_else(|| FormatError::at(line_no, "edge before the problem line"))?;
                let [u, v] = rest[..] else {
                    return Err(FormatError::at(line_no, "edge line must be `e <u> <v>`"));
                };
                let (u, v) = (number(u, "a node")?, number(v, "a node")?);
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(FormatError::at(
                        line_no,
                        format!("edge ({u}, {v}) leaves the node range 1..={n}"),
                    ));
                }
                if u == v {
                    return Err(FormatError::at(line_no, format!("self-loop on node {u}")));
                }
                let (u, v) = (u - 1, v - 1);
                if !edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)) {
                    edges.push((u, v));
                }
            }
            other => return Err(FormatError::at(line_no, format!("unknown line type `{other}`"))),
        }
    }
    let nodes = nodes.ok_or_else(|| FormatError::at(text.lines().count() + 1, "missing problem line"))?;
    let mut inst = GcInstance {
        nodes,
        edges,
        colors: 0,
    };
    inst.colors = colors.unwrap_or_else(|| inst.max_degree() + 1);
    inst.validate()?;
    Ok(inst)
}

pub fn write_dimacs(inst: &GcInstance) -> String {
    let mut s = format!("c colors {}\np edge {} {}\n", inst.colors, inst.nodes, inst.edges.len());
    for &(u, v) in &inst.edges {
        s += &format!("e {} {}\n", u + 1, v + 1);
    }
    s
}
