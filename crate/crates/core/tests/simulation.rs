use orthoreg::{
    benchmark, generate_trial, norm, run_simulation, Error, SimConfig, SimReport, Solver, XSpec,
};

fn config(solver: Solver) -> SimConfig {
    SimConfig {
        beta0: -0.5,
        beta1: 3.0,
        sigma: 0.25,
        n_obs: 30,
        n_trials: 500,
        x_spec: XSpec::Uniform { a: -1.0, b: 2.0 },
        seed: 0xDEC0DE,
        solver,
    }
}

fn stats(r: &SimReport) -> [f64; 5] {
    [
        r.mean_beta0,
        r.mean_beta1,
        r.sd_beta0,
        r.sd_beta1,
        r.mean_sigma2_hat,
    ]
}

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn report_independent_of_thread_count() {
    let cfg = config(Solver::Both);
    let single = with_threads(1, || run_simulation(&cfg).unwrap());
    let many = with_threads(6, || run_simulation(&cfg).unwrap());
    assert_eq!(
        stats(&single).map(f64::to_bits),
        stats(&many).map(f64::to_bits)
    );
    assert_eq!(
        single.max_solver_discrepancy.map(f64::to_bits),
        many.max_solver_discrepancy.map(f64::to_bits)
    );
}

#[test]
fn repeated_runs_are_bit_identical() {
    let cfg = config(Solver::Projection);
    let a = run_simulation(&cfg).unwrap();
    let b = run_simulation(&cfg).unwrap();
    assert_eq!(stats(&a).map(f64::to_bits), stats(&b).map(f64::to_bits));
}

#[test]
fn trial_streams_do_not_overlap() {
    let cfg = config(Solver::Projection);
    let mut seen = std::collections::HashSet::new();
    for i in 0..cfg.n_trials {
        let d = generate_trial(&cfg, i).unwrap();
        for v in d.x().iter().chain(d.y().iter()) {
            assert!(
                seen.insert(v.to_bits()),
                "value repeated across trials at trial {i}"
            );
        }
    }
}

#[test]
fn solver_discrepancy_within_bound() {
    let cfg = config(Solver::Both);
    let r = run_simulation(&cfg).unwrap();
    let max_y = (0..cfg.n_trials)
        .map(|i| norm(generate_trial(&cfg, i).unwrap().y()))
        .fold(0.0, f64::max);
    assert!(r.max_solver_discrepancy.unwrap() <= 1e-8 * (1.0 + max_y));
}

#[test]
fn statistics_match_between_solvers() {
    let p = run_simulation(&config(Solver::Projection)).unwrap();
    let n = run_simulation(&config(Solver::NormalEquations)).unwrap();
    for (a, b) in stats(&p).iter().zip(stats(&n)) {
        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
    }
}

#[test]
fn degenerate_trial_names_its_index() {
    // a uniform draw on an interval this narrow collapses to one value
    let cfg = SimConfig {
        x_spec: XSpec::Uniform {
            a: 1.0,
            b: 1.0 + f64::EPSILON,
        },
        ..config(Solver::Projection)
    };
    match run_simulation(&cfg) {
        Err(Error::TrialFailed { trial, source }) => {
            assert_eq!(trial, 0);
            assert!(source.is_numerical());
        }
        other => panic!("expected a trial failure, got {other:?}"),
    }
    assert!(matches!(
        run_simulation(&SimConfig {
            solver: Solver::NormalEquations,
            ..cfg.clone()
        }),
        Err(Error::TrialFailed { trial: 0, .. })
    ));
}

#[test]
fn benchmark_uses_identical_data_for_both_solvers() {
    let cfg = SimConfig {
        n_trials: 20,
        ..config(Solver::Both)
    };
    let r = benchmark(&cfg).unwrap();
    assert_eq!(r.trials.len(), 20);
    assert!(r.trials.iter().enumerate().all(|(i, t)| t.trial == i));
    assert!(r
        .trials
        .iter()
        .all(|t| t.projection > 0.0 && t.normal_equations > 0.0));
    assert!(r.max_solver_discrepancy <= r.discrepancy_tolerance);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["projection", "normal_equations"] {
        assert!(json["wall_time_per_trial"][key]["median"].as_f64().unwrap() > 0.0);
    }
}
