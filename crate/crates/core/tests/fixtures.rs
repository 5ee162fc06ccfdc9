//! Fixture optima: independent brute force over the raw instance data,
//! checked against the generic oracle and the frozen values.

use rtopt_core::oracle::brute_force;
use rtopt_core::problems::{fixtures, BppcInstance, GapInstance, GcInstance, Instance, JsspInstance, VrptwInstance};

/// Every assignment of `n` items to `k` labels.
fn assignments(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % k;
                code /= k;
                d
            })
            .collect()
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn gap_optimum(inst: &GapInstance) -> Option<f64> {
    let (m, n) = (inst.agents(), inst.jobs());
    assignments(n, m)
        .filter(|a| {
            (0..m).all(|i| (0..n).filter(|&j| a[j] == i).map(|j| inst.demands[i][j]).sum::<f64>() <= inst.capacities[i])
        })
        .map(|a| (0..n).map(|j| inst.costs[a[j]][j]).sum::<f64>())
        .min_by(f64::total_cmp)
}

fn bppc_optimum(inst: &BppcInstance) -> Option<f64> {
    let n = inst.items();
    assignments(n, n)
        .filter(|a| inst.conflicts.iter().all(|&(x, y)| a[x] != a[y]))
        .filter(|a| (0..n).all(|b| (0..n).filter(|&j| a[j] == b).map(|j| inst.sizes[j]).sum::<f64>() <= inst.capacity))
        .map(|a| {
            let mut used = a.clone();
            used.sort_unstable();
            used.dedup();
            used.len() as f64
        })
        .min_by(f64::total_cmp)
}

fn gc_optimum(inst: &GcInstance) -> Option<f64> {
    assignments(inst.nodes, inst.colors)
        .filter(|a| inst.edges.iter().all(|&(x, y)| a[x] != a[y]))
        .map(|a| {
            let mut used = a.clone();
            used.sort_unstable();
            used.dedup();
            used.len() as f64
        })
        .min_by(f64::total_cmp)
}

/// Longest-path makespan of the disjunctive graph fixed by `orders`, or
/// `None` when the machine orders create a cycle.
fn makespan(inst: &JsspInstance, orders: &[Vec<(usize, usize)>]) -> Option<f64> {
    let mut ops = Vec::new();
    for (j, job) in inst.jobs.iter().enumerate() {
        for (k, o) in job.iter().enumerate() {
            ops.push(((j, k), o.duration));
        }
    }
    let idx = |jk: (usize, usize)| ops.iter().position(|&(x, _)| x == jk).unwrap();
    let mut succ = vec![Vec::new(); ops.len()];
    let mut indeg = vec![0; ops.len()];
    let mut edge = |a: usize, b: usize, succ: &mut Vec<Vec<usize>>| {
        succ[a].push(b);
        indeg[b] += 1;
    };
    for (j, job) in inst.jobs.iter().enumerate() {
        for k in 1..job.len() {
            edge(idx((j, k - 1)), idx((j, k)), &mut succ);
        }
    }
    for order in orders {
        for w in order.windows(2) {
            edge(idx(w[0]), idx(w[1]), &mut succ);
        }
    }
    let mut start = vec![0.0f64; ops.len()];
    let mut queue: Vec<usize> = (0..ops.len()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    let mut best: f64 = 0.0;
    while let Some(v) = queue.pop() {
        seen += 1;
        let end = start[v] + ops[v].1;
        best = best.max(end);
        for &w in &succ[v] {
            start[w] = start[w].max(end);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    (seen == ops.len()).then_some(best)
}

fn jssp_optimum(inst: &JsspInstance) -> Option<f64> {
    let per_machine: Vec<Vec<(usize, usize)>> = (0..inst.machines)
        .map(|m| {
            let mut v = Vec::new();
            for (j, job) in inst.jobs.iter().enumerate() {
                for (k, o) in job.iter().enumerate() {
                    if o.machine == m {
                        v.push((j, k));
                    }
                }
            }
            v
        })
        .collect();
    let choices: Vec<Vec<Vec<(usize, usize)>>> = per_machine
        .iter()
        .map(|ops| {
            let idx: Vec<usize> = (0..ops.len()).collect();
            permutations(&idx)
                .into_iter()
                .map(|p| p.iter().map(|&i| ops[i]).collect())
                .collect()
        })
        .collect();
    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; inst.machines];
    loop {
        let orders: Vec<Vec<(usize, usize)>> = (0..inst.machines).map(|m| choices[m][pick[m]].clone()).collect();
        if let Some(c) = makespan(inst, &orders) {
            best = Some(best.map_or(c, |b: f64| b.min(c)));
        }
        let mut m = 0;
        loop {
            if m == inst.machines {
                return best;
            }
            pick[m] += 1;
            if pick[m] < choices[m].len() {
                break;
            }
            pick[m] = 0;
            m += 1;
        }
    }
}

fn route_cost(inst: &VrptwInstance, route: &[usize]) -> Option<f64> {
    let mut clock = 0.0f64;
    let mut at = 0;
    let mut load = 0.0;
    let mut cost = 0.0;
    for &j in route {
        let c = &inst.customers[j];
        let arrive = clock + inst.travel[at][j + 1];
        cost += inst.travel[at][j + 1];
        let begin = arrive.max(c.ready);
        if begin > c.due {
            return None;
        }
        clock = begin + c.service;
        load += c.demand;
        at = j + 1;
    }
    if route.is_empty() {
        return Some(0.0);
    }
    cost += inst.travel[at][0];
    (load <= inst.capacity && clock + inst.travel[at][0] <= inst.depot_due).then_some(cost)
}

fn vrptw_optimum(inst: &VrptwInstance) -> Option<f64> {
    let n = inst.customers.len();
    let mut best: Option<f64> = None;
    for order in permutations(&(0..n).collect::<Vec<_>>()) {
        // cut the visiting order into one route per vehicle
        for cuts in assignments(inst.vehicles - 1, n + 1) {
            let mut cuts = cuts.clone();
            cuts.sort_unstable();
            let mut bounds = vec![0];
            bounds.extend(cuts);
            bounds.push(n);
            let total: Option<f64> = bounds.windows(2).map(|w| route_cost(inst, &order[w[0]..w[1]])).sum();
            if let Some(t) = total {
                best = Some(best.map_or(t, |b: f64| b.min(t)));
            }
        }
    }
    best
}

fn independent_optimum(inst: &Instance) -> Option<f64> {
    match inst {
        Instance::Gap(i) => gap_optimum(i),
        Instance::Bppc(i) => bppc_optimum(i),
        Instance::Gc(i) => gc_optimum(i),
        Instance::Jssp(i) => jssp_optimum(i),
        Instance::Vrptw(i) => vrptw_optimum(i),
    }
}

const FROZEN: [(&str, f64); 10] = [
    ("T-GAP-1", 17.0),
    ("T-BPPC-1", 3.0),
    ("T-GC-1", 3.0),
    ("T-JSSP-1", 7.0),
    ("T-VRPTW-1", 27.071067811865476),
    ("T-GAP-2", 22.0),
    ("T-BPPC-2", 3.0),
    ("T-GC-2", 3.0),
    ("T-JSSP-2", 12.0),
    ("T-VRPTW-2", 43.36660976611004),
];

#[test]
fn oracle_agrees_with_independent_enumeration_and_frozen_optima() {
    for (id, inst) in fixtures::suite() {
        let expected = FROZEN.iter().find(|(f, _)| *f == id).unwrap().1;
        let independent = independent_optimum(&inst).expect("fixture is feasible");
        assert!(
            (independent - expected).abs() < 1e-9,
            "{id}: independent {independent} vs frozen {expected}"
        );

        let model = inst.model().unwrap();
        let oracle = brute_force(&model, 1_000_000).unwrap();
        assert!(oracle.is_feasible(), "{id}");
        assert!(
            (oracle.best.objective - expected).abs() < 1e-9,
            "{id}: oracle {}",
            oracle.best.objective
        );

        // the oracle's structure re-evaluates to the same value
        let again = model.evaluate(oracle.best.structure.clone()).unwrap();
        assert_eq!(again.objective, oracle.best.objective, "{id}");
        assert!(again.is_feasible());
    }
}

#[test]
fn c5_needs_three_colors_and_edgeless_needs_one() {
    let c5 = GcInstance {
        nodes: 5,
        edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        colors: 3,
    };
    let model = rtopt_core::problems::model_gc(&c5).unwrap();
    assert_eq!(brute_force(&model, 1 << 20).unwrap().best.objective, 3.0);
    let edgeless = GcInstance {
        nodes: 4,
        edges: vec![],
        colors: 3,
    };
    let model = rtopt_core::problems::model_gc(&edgeless).unwrap();
    assert_eq!(brute_force(&model, 1 << 20).unwrap().best.objective, 1.0);
}

#[test]
fn oversized_gap_job_leaves_positive_violation() {
    let inst = GapInstance {
        capacities: vec![2.0, 2.0],
        demands: vec![vec![3.0, 1.0], vec![3.0, 1.0]],
        costs: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
    };
    let model = rtopt_core::problems::model_gap(&inst).unwrap();
    let r = brute_force(&model, 1 << 20).unwrap();
    assert!(!r.is_feasible());
    assert!(r.best.violation_sum() > 0.0);
}

#[test]
fn single_agent_single_job_cost() {
    let inst = GapInstance {
        capacities: vec![5.0],
        demands: vec![vec![2.0]],
        costs: vec![vec![9.0]],
    };
    let model = rtopt_core::problems::model_gap(&inst).unwrap();
    assert_eq!(brute_force(&model, 10).unwrap().best.objective, 9.0);
}

#[test]
fn clique_needs_one_bin_per_member() {
    let inst = BppcInstance {
        capacity: 100.0,
        sizes: vec![1.0; 4],
        conflicts: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    };
    let model = rtopt_core::problems::model_bppc(&inst).unwrap();
    assert_eq!(brute_force(&model, 1 << 20).unwrap().best.objective, 4.0);
}
