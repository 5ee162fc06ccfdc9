use rtopt_core::model::description::ModelDescription;
use rtopt_core::model::{ObjectiveKind, ObjectiveSpec, PositionOrder, ProblemModel, Resource, Sense, Task};
use rtopt_core::problems::{fixtures, model_bppc, model_gap, model_gc, model_jssp};
use rtopt_core::qlearning::SelectionMode;
use rtopt_core::solver::{solve, RunReport, SolverConfig, TraceEvent, Variant};

const ALL: [Variant; 5] = [Variant::Sa, Variant::Ts, Variant::Vns, Variant::Lns, Variant::Ga];

fn budgeted(variant: Variant, seed: u64, evaluations: u64) -> SolverConfig {
    SolverConfig {
        time_limit_s: None,
        max_evaluations: Some(evaluations),
        ..SolverConfig::new(variant, seed)
    }
}

fn assert_monotone(report: &RunReport) {
    for w in report.trace.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(
            b.violation_sum <= a.violation_sum + 1e-9 || a.violation_sum > 0.0,
            "{a:?} -> {b:?}"
        );
        if a.violation_sum == 0.0 {
            assert_eq!(b.violation_sum, 0.0, "{a:?} -> {b:?}");
            assert!(b.best_objective <= a.best_objective, "{a:?} -> {b:?}");
        }
        assert!(b.evaluations >= a.evaluations);
    }
}

#[test]
fn runs_are_reproducible_under_an_evaluation_budget() {
    let model = model_gap(&fixtures::gap_2()).unwrap();
    for variant in ALL {
        let a = solve(&model, &budgeted(variant, 9, 3000)).unwrap();
        let b = solve(&model, &budgeted(variant, 9, 3000)).unwrap();
        assert_eq!(a.best, b.best, "{variant:?}");
        assert_eq!(a.evaluations, b.evaluations);
        let strip = |r: &RunReport| -> Vec<(u64, f64, f64, TraceEvent)> {
            r.trace
                .iter()
                .map(|p| (p.evaluations, p.best_objective, p.violation_sum, p.event))
                .collect()
        };
        assert_eq!(strip(&a), strip(&b), "{variant:?}");
    }
}

#[test]
fn reported_best_never_worsens() {
    let models = [
        model_gap(&fixtures::gap_2()).unwrap(),
        model_bppc(&fixtures::bppc_2()).unwrap(),
        model_jssp(&fixtures::jssp_2()).unwrap(),
    ];
    for model in &models {
        for variant in ALL {
            for seed in 0..3 {
                let r = solve(model, &budgeted(variant, seed, 2000)).unwrap();
                assert_monotone(&r);
                let last = r.trace.last().unwrap();
                assert_eq!(last.event, TraceEvent::Final);
                assert_eq!(last.best_objective, r.best.objective);
            }
        }
    }
}

#[test]
fn zero_task_model_returns_at_once() {
    let model = ProblemModel::builder("empty", PositionOrder::Unordered)
        .resources([Resource::new(), Resource::new()])
        .tasks(Vec::<Task>::new())
        .objective(ObjectiveSpec::new(Sense::Min, ObjectiveKind::UsedResources))
        .build()
        .unwrap();
    for variant in ALL {
        let r = solve(&model, &SolverConfig::new(variant, 0)).unwrap();
        assert!(r.best.structure.is_empty());
        assert!(!r.trace.is_empty());
        assert!(r.elapsed.as_secs_f64() < 1.0);
    }
}

#[test]
fn stalling_triggers_a_perturbation() {
    let model = model_gc(&fixtures::gc_1()).unwrap();
    for variant in [Variant::Sa, Variant::Ts, Variant::Vns, Variant::Lns] {
        let config = SolverConfig {
            time_limit_s: None,
            max_iterations: Some(60),
            perturbation_trigger: 2,
            ..SolverConfig::new(variant, 1)
        };
        let r = solve(&model, &config).unwrap();
        assert!(r.perturbations > 0, "{variant:?}");
        assert!(
            r.trace.iter().any(|p| p.event == TraceEvent::Perturbation),
            "{variant:?}"
        );
    }
}

#[test]
fn ga_without_variation_keeps_its_best() {
    let model = model_gap(&fixtures::gap_2()).unwrap();
    let mut config = SolverConfig {
        time_limit_s: None,
        max_iterations: Some(200),
        ..SolverConfig::new(Variant::Ga, 4)
    };
    config.ga.crossover_rate = 0.0;
    config.ga.mutation_rate = 0.0;
    let r = solve(&model, &config).unwrap();
    assert_monotone(&r);
    // without variation no new individuals appear after the first generation
    let improvements = r.trace.iter().filter(|p| p.event == TraceEvent::Improved).count();
    assert_eq!(improvements, 0);

    // an evaluation budget alone still ends a run that stops evaluating
    let mut config = budgeted(Variant::Ga, 4, 5000);
    config.ga.crossover_rate = 0.0;
    config.ga.mutation_rate = 0.0;
    let r = solve(&model, &config).unwrap();
    assert!(r.evaluations < 5000);
}

#[test]
fn target_stops_the_search() {
    let model = model_gap(&fixtures::gap_1()).unwrap();
    for variant in ALL {
        let config = SolverConfig {
            target: Some(17.0),
            time_limit_s: Some(5.0),
            ..SolverConfig::new(variant, 2)
        };
        let r = solve(&model, &config).unwrap();
        assert!(r.best.is_feasible());
        assert_eq!(r.best.objective, 17.0, "{variant:?}");
    }
}

#[test]
fn every_selection_mode_runs() {
    let model = model_jssp(&fixtures::jssp_1()).unwrap();
    for mode in [
        SelectionMode::QLearning,
        SelectionMode::SuccessRate,
        SelectionMode::Random,
    ] {
        let config = SolverConfig {
            selection: mode,
            ..budgeted(Variant::Vns, 0, 1500)
        };
        let r = solve(&model, &config).unwrap();
        assert!(model.check_structure(&r.best.structure).is_ok());
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let model = model_gap(&fixtures::gap_1()).unwrap();
    let mut c = SolverConfig::new(Variant::Sa, 0);
    c.candidates = 0;
    assert!(solve(&model, &c).is_err());
    let mut c = SolverConfig::new(Variant::Ga, 0);
    c.ga.population = 1;
    assert!(solve(&model, &c).is_err());
}

#[test]
fn declarative_adapters_survive_a_description_round_trip() {
    let models = [
        model_gap(&fixtures::gap_1()).unwrap(),
        model_bppc(&fixtures::bppc_1()).unwrap(),
        model_gc(&fixtures::gc_1()).unwrap(),
    ];
    for model in &models {
        let text = model.describe().unwrap().to_json();
        let rebuilt = ModelDescription::from_json(&text).unwrap().build().unwrap();
        let a = rtopt_core::oracle::brute_force(model, 1_000_000).unwrap();
        let b = rtopt_core::oracle::brute_force(&rebuilt, 1_000_000).unwrap();
        assert_eq!(a.best, b.best);
    }
}
