//! Solomon VRPTW files: a name line, a `VEHICLE` block with the fleet size
//! and capacity, and a `CUSTOMER` table whose row 0 is the depot. Travel
//! times are Euclidean distances.

use rtopt_core::problems::{Customer, VrptwInstance};

use super::{numbers, FormatError, Result};

pub fn parse_solomon(text: &str) -> Result<VrptwInstance> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let end = text.lines().count() + 1;
    let find = |title: &str| {
        lines
            .iter()
            .position(|(_, l)| l.eq_ignore_ascii_case(title))
            .ok_or_else(|| FormatError::at(end, format!("missing `{title}` section")))
    };

    let vehicle = find("VEHICLE")?;
    // the column caption sits between the title and the numbers
    let (line_no, line) = lines
        .get(vehicle + 2)
        .copied()
        .ok_or_else(|| FormatError::at(end, "unexpected end of file in the vehicle block"))?;
    let fleet = numbers(line_no, line)?;
    let [count, capacity] = fleet[..] else {
        return Err(FormatError::at(line_no, "vehicle line must be `<number> <capacity>`"));
    };
    if count.fract() != 0.0 || count < 1.0 {
        return Err(FormatError::at(line_no, "vehicle count must be a positive integer"));
    }

    let customer = find("CUSTOMER")?;
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for &(line_no, line) in lines.iter().skip(customer + 2) {
        let row = numbers(line_no, line)?;
        let [id, x, y, demand, ready, due, service] = row[..] else {
            return Err(FormatError::at(
                line_no,
                format!("expected 7 columns, found {}", row.len()),
            ));
        };
        if id != rows.len() as f64 {
            return Err(FormatError::at(
                line_no,
                format!("expected customer {}, found {id}", rows.len()),
            ));
        }
        points.push((x, y));
        rows.push((
            line_no,
            Customer {
                demand,
                ready,
                due,
                service,
            },
        ));
    }
    let Some(&(_, depot)) = rows.first() else {
        return Err(FormatError::at(end, "the customer table has no depot row"));
    };
    let customers: Vec<Customer> = rows[1..].iter().map(|r| r.1).collect();
    for (line_no, c) in &rows[1..] {
        if c.ready > c.due || c.demand < 0.0 || c.service < 0.0 {
            return Err(FormatError::at(*line_no, "bad time window, demand or service time"));
        }
    }
    let inst = VrptwInstance::from_points(count as usize, capacity, &points, customers, depot.due);
    inst.validate()?;
    Ok(inst)
}

/// `points` holds the depot followed by every customer.
pub fn write_solomon(name: &str, inst: &VrptwInstance, points: &[(f64, f64)]) -> Result<String> {
    if points.len() != inst.customers.len() + 1 {
        return Err(FormatError::UnsupportedFormat(format!(
            "expected {} coordinates, got {}",
            inst.customers.len() + 1,
            points.len()
        )));
    }
    let mut s = format!(
        "{name}\n\nVEHICLE\nNUMBER     CAPACITY\n{:>5}{:>13}\n\nCUSTOMER\n\
         CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE TIME\n\n",
        inst.vehicles, inst.capacity
    );
    let depot = Customer {
        demand: 0.0,
        ready: 0.0,
        due: inst.depot_due,
        service: 0.0,
    };
    for (id, (c, p)) in std::iter::once(&depot).chain(&inst.customers).zip(points).enumerate() {
        s += &format!(
            "{id:>5}{:>10}{:>10}{:>10}{:>12}{:>11}{:>11}\n",
            p.0, p.1, c.demand, c.ready, c.due, c.service
        );
    }
    Ok(s)
}
