//! Tiny instances small enough for exhaustive search.

use super::{BppcInstance, Customer, GapInstance, GcInstance, Instance, JsspInstance, Operation, VrptwInstance};

pub fn gap_1() -> GapInstance {
    GapInstance {
        capacities: vec![6.0, 5.0],
        demands: vec![vec![3.0, 2.0, 4.0, 2.0], vec![2.0, 3.0, 3.0, 3.0]],
        costs: vec![vec![4.0, 6.0, 3.0, 7.0], vec![5.0, 2.0, 6.0, 4.0]],
    }
}

pub fn gap_2() -> GapInstance {
    GapInstance {
        capacities: vec![8.0, 7.0, 6.0],
        demands: vec![
            vec![4.0, 3.0, 5.0, 2.0, 3.0, 4.0],
            vec![3.0, 4.0, 2.0, 4.0, 2.0, 3.0],
            vec![2.0, 3.0, 4.0, 3.0, 4.0, 2.0],
        ],
        costs: vec![
            vec![9.0, 4.0, 7.0, 3.0, 8.0, 6.0],
            vec![5.0, 8.0, 3.0, 7.0, 4.0, 9.0],
            vec![6.0, 5.0, 8.0, 4.0, 6.0, 3.0],
        ],
    }
}

/// Six items, the three largest pairwise in conflict.
pub fn bppc_1() -> BppcInstance {
    BppcInstance {
        capacity: 10.0,
        sizes: vec![7.0, 6.0, 5.0, 4.0, 3.0, 2.0],
        conflicts: vec![(0, 1), (1, 2), (0, 2), (0, 4), (1, 3)],
    }
}

pub fn bppc_2() -> BppcInstance {
    BppcInstance {
        capacity: 9.0,
        sizes: vec![5.0, 4.0, 4.0, 3.0, 3.0, 2.0],
        conflicts: vec![(0, 1), (2, 3), (3, 4), (1, 5)],
    }
}

/// Eight nodes, four colors available.
pub fn gc_1() -> GcInstance {
    GcInstance {
        nodes: 8,
        edges: vec![
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 3),
            (5, 6),
            (6, 7),
            (7, 0),
            (1, 6),
        ],
        colors: 4,
    }
}

/// Five-cycle with a pendant node.
pub fn gc_2() -> GcInstance {
    GcInstance {
        nodes: 6,
        edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)],
        colors: 4,
    }
}

fn job(ops: &[(usize, f64)]) -> Vec<Operation> {
    ops.iter()
        .map(|&(machine, duration)| Operation { machine, duration })
        .collect()
}

/// Two jobs on two machines in opposite orders.
pub fn jssp_1() -> JsspInstance {
    JsspInstance {
        machines: 2,
        jobs: vec![job(&[(0, 3.0), (1, 2.0)]), job(&[(1, 2.0), (0, 4.0)])],
    }
}

pub fn jssp_2() -> JsspInstance {
    JsspInstance {
        machines: 2,
        jobs: vec![
            job(&[(0, 3.0), (1, 4.0)]),
            job(&[(1, 2.0), (0, 5.0)]),
            job(&[(0, 4.0), (1, 1.0)]),
        ],
    }
}

fn customer(demand: f64, ready: f64, due: f64, service: f64) -> Customer {
    Customer {
        demand,
        ready,
        due,
        service,
    }
}

/// Depot plus customer coordinates of [`vrptw_1`].
pub const VRPTW_1_POINTS: [(f64, f64); 5] = [(0.0, 0.0), (0.0, 5.0), (5.0, 5.0), (5.0, 0.0), (10.0, 5.0)];

/// One vehicle, four customers.
pub fn vrptw_1() -> VrptwInstance {
    VrptwInstance::from_points(
        1,
        10.0,
        &VRPTW_1_POINTS,
        vec![
            customer(2.0, 0.0, 20.0, 1.0),
            customer(2.0, 10.0, 30.0, 1.0),
            customer(2.0, 0.0, 50.0, 1.0),
            customer(2.0, 20.0, 40.0, 1.0),
        ],
        100.0,
    )
}

/// Depot plus customer coordinates of [`vrptw_2`].
pub const VRPTW_2_POINTS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (-5.0, 0.0),
    (-5.0, 5.0),
    (0.0, 8.0),
    (6.0, 2.0),
    (6.0, -4.0),
];

/// Two vehicles, five customers.
pub fn vrptw_2() -> VrptwInstance {
    VrptwInstance::from_points(
        2,
        5.0,
        &VRPTW_2_POINTS,
        vec![
            customer(2.0, 0.0, 30.0, 2.0),
            customer(2.0, 0.0, 40.0, 2.0),
            customer(1.0, 10.0, 50.0, 2.0),
            customer(3.0, 0.0, 25.0, 2.0),
            customer(2.0, 15.0, 60.0, 2.0),
        ],
        120.0,
    )
}

/// The five primary fixtures, one per problem.
pub fn primary() -> Vec<(&'static str, Instance)> {
    vec![
        ("T-GAP-1", Instance::Gap(gap_1())),
        ("T-BPPC-1", Instance::Bppc(bppc_1())),
        ("T-GC-1", Instance::Gc(gc_1())),
        ("T-JSSP-1", Instance::Jssp(jssp_1())),
        ("T-VRPTW-1", Instance::Vrptw(vrptw_1())),
    ]
}

/// The primary fixtures plus a second instance per problem.
pub fn suite() -> Vec<(&'static str, Instance)> {
    let mut all = primary();
    all.extend([
        ("T-GAP-2", Instance::Gap(gap_2())),
        ("T-BPPC-2", Instance::Bppc(bppc_2())),
        ("T-GC-2", Instance::Gc(gc_2())),
        ("T-JSSP-2", Instance::Jssp(jssp_2())),
        ("T-VRPTW-2", Instance::Vrptw(vrptw_2())),
    ]);
    all
}
