//! Taillard job shop files: an optional `Nb of jobs, Nb of Machines, ...`
//! caption, a line starting with the job and machine counts, then a
//! `Times` matrix and a `Machines` matrix (1-based), one row per job.

use rtopt_core::problems::{JsspInstance, Operation};

use super::{join, numbers, FormatError, Result};

fn is_caption(line: &str) -> bool {
    line.chars().any(|c| c.is_ascii_alphabetic())
}

pub fn parse_taillard(text: &str) -> Result<JsspInstance> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let end = text.lines().count() + 1;
    let mut at = 0;
    let mut next = |what: &str| -> Result<(usize, &str)> {
        let l = lines
            .get(at)
            .copied()
            .ok_or_else(|| FormatError::at(end, format!("unexpected end of file, expected {what}")))?;
        at += 1;
        Ok(l)
    };

    let (mut line_no, mut line) = next("the job and machine counts")?;
    if line.to_ascii_lowercase().starts_with("nb of jobs") {
        (line_no, line) = next("the job and machine counts")?;
    }
    let header = numbers(line_no, line)?;
    let (jobs, machines) = match header[..] {
        [j, m, ..] if j.fract() == 0.0 && m.fract() == 0.0 && j >= 0.0 && m >= 1.0 => (j as usize, m as usize),
        _ => return Err(FormatError::at(line_no, "expected `<jobs> <machines>`")),
    };

    let mut block = |title: &str| -> Result<Vec<(usize, Vec<f64>)>> {
        let (line_no, line) = next(title)?;
        if !line.eq_ignore_ascii_case(title) {
            return Err(FormatError::at(line_no, format!("expected `{title}`, found `{line}`")));
        }
        (0..jobs)
            .map(|j| {
                let (line_no, line) = next(&format!("{title} row {}", j + 1))?;
                if is_caption(line) {
                    return Err(FormatError::at(
                        line_no,
                        format!("expected {jobs} rows of {title}, found {j}"),
                    ));
                }
                let row = numbers(line_no, line)?;
                if row.len() != machines {
                    return Err(FormatError::at(
                        line_no,
                        format!("expected {machines} values, found {}", row.len()),
                    ));
                }
                Ok((line_no, row))
            })
            .collect()
    };
    let times = block("Times")?;
    let order = block("Machines")?;
    if let Some(&(line_no, _)) = lines.get(at) {
        return Err(FormatError::at(line_no, "trailing data after the machine matrix"));
    }

    let mut out = Vec::with_capacity(jobs);
    for ((_, durations), (line_no, ms)) in times.into_iter().zip(order) {
        let mut ops = Vec::with_capacity(machines);
        for (d, m) in durations.into_iter().zip(ms) {
            if m.fract() != 0.0 || m < 1.0 || m > machines as f64 {
                return Err(FormatError::at(line_no, format!("machine {m} outside 1..={machines}")));
            }
            ops.push(Operation {
                machine: m as usize - 1,
                duration: d,
            });
        }
        out.push(ops);
    }
    let inst = JsspInstance { machines, jobs: out };
    inst.validate()?;
    Ok(inst)
}

/// Only rectangular instances (every job visits every machine) fit the
/// matrix layout.
pub fn write_taillard(inst: &JsspInstance) -> Result<String> {
    if inst.jobs.iter().any(|j| j.len() != inst.machines) {
        return Err(FormatError::UnsupportedFormat(
            "taillard files need one operation per job and machine".into(),
        ));
    }
    let mut s = format!(
        "Nb of jobs, Nb of Machines\n{} {}\nTimes\n",
        inst.jobs.len(),
        inst.machines
    );
    for job in &inst.jobs {
        s += &join(job.iter().map(|o| o.duration));
        s.push('\n');
    }
    s += "Machines\n";
    for job in &inst.jobs {
        s += &join(job.iter().map(|o| o.machine + 1));
        s.push('\n');
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "Nb of jobs, Nb of Machines, Time seed, Machine seed, Upper bound, Lower bound\n\
        2 2 1 1 7 7\nTimes\n3 2\n2 4\nMachines\n1 2\n2 1\n";

    #[test]
    fn reads_the_caption_form() {
        let inst = parse_taillard(SMALL).unwrap();
        assert_eq!(inst.machines, 2);
        assert_eq!(
            inst.jobs[1][0],
            Operation {
                machine: 1,
                duration: 2.0
            }
        );
    }

    #[test]
    fn caption_is_optional() {
        let bare = SMALL.split_once('\n').unwrap().1;
        assert_eq!(parse_taillard(bare).unwrap(), parse_taillard(SMALL).unwrap());
    }

    #[test]
    fn truncated_matrix_reports_its_line() {
        let cut = "2 2\nTimes\n3 2\nMachines\n1 2\n2 1\n";
        assert!(matches!(parse_taillard(cut), Err(FormatError::Parse { line: 4, .. })));
        let short = "2 2\nTimes\n3 2\n2\nMachines\n1 2\n2 1\n";
        assert!(matches!(parse_taillard(short), Err(FormatError::Parse { line: 4, .. })));
        let eof = "2 2\nTimes\n3 2\n2 4\nMachines\n1 2\n";
        assert!(matches!(parse_taillard(eof), Err(FormatError::Parse { line: 7, .. })));
    }
}
