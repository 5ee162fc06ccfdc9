//! Bin packing with conflicts: a `n C` header, then one line per item with
//! its 1-based id, its weight and the ids it conflicts with.

use rtopt_core::problems::BppcInstance;

use super::{numbers, FormatError, Result};

pub fn parse_bppc(text: &str) -> Result<BppcInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_line, header) = lines.next().ok_or_else(|| FormatError::at(1, "missing `n C` header"))?;
    let header = numbers(header_line, header)?;
    let [n, capacity] = header[..] else {
        return Err(FormatError::at(header_line, "header must be `n C`"));
    };
    if n.fract() != 0.0 || n < 0.0 {
        return Err(FormatError::at(header_line, "item count must be a nonnegative integer"));
    }
    let n = n as usize;
    let mut sizes = Vec::with_capacity(n);
    let mut conflicts = Vec::new();
    let mut last_line = header_line;
    for item in 0..n {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| FormatError::at(last_line + 1, format!("expected {n} item lines, found {item}")))?;
        last_line = line_no;
        let row = numbers(line_no, line)?;
        if row.len() < 2 {
            return Err(FormatError::at(line_no, "item line needs an id and a weight"));
        }
        if row[0] != (item + 1) as f64 {
            return Err(FormatError::at(
                line_no,
                format!("expected item id {}, found {}", item + 1, row[0]),
            ));
        }
        sizes.push(row[1]);
        for &other in &row[2..] {
            if other.fract() != 0.0 || other < 1.0 || other > n as f64 {
                return Err(FormatError::at(line_no, format!("conflict with unknown item {other}")));
            }
            let other = other as usize - 1;
            if other == item {
                return Err(FormatError::at(line_no, "an item cannot conflict with itself"));
            }
            let pair = (item.min(other), item.max(other));
            if !conflicts.contains(&pair) {
                conflicts.push(pair);
            }
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(FormatError::at(line_no, "more item lines than announced"));
    }
    let inst = BppcInstance {
        capacity,
        sizes,
        conflicts,
    };
    inst.validate()
        .map_err(|e| FormatError::at(header_line, e.to_string()))?;
    Ok(inst)
}

/// Each conflict is listed once, on the line of its lower-numbered item.
pub fn write_bppc(inst: &BppcInstance) -> String {
    let mut s = format!("{} {}\n", inst.items(), inst.capacity);
    for (j, size) in inst.sizes.iter().enumerate() {
        s += &format!("{} {}", j + 1, size);
        for &(a, b) in &inst.conflicts {
            if a.min(b) == j {
                s += &format!(" {}", a.max(b) + 1);
            }
        }
        s.push('\n');
    }
    s
}
