//! Acceptance gate: one test per criterion, each printing a PASS line with
//! its runtime. Run with `cargo test --test acceptance -- --nocapture` to
//! see the per-criterion lines.

use annealmax::anneal::{
    is_local_opt_at_p, run_alg1, solve_beta_unconstrained, solve_beta_unconstrained_numeric,
    unconstrained_fixed_point_residual, verify_tight_trajectory, Alg1Config,
};
use annealmax::anneal_matroid::{
    matroid_fixed_point_residual, matroid_t0, matroid_v0, run_alg2, solve_beta_matroid,
    solve_beta_matroid_numeric, Alg2Config,
};
use annealmax::hardness::{
    gap_base_ell, gap_instance1, min_gap_cardinality, min_gap_instance2, TailScale,
};
use annealmax::matroid::{ConvexCombination, MatroidOracle};
use annealmax::multilinear::{
    f_eval, mix_point, second_derivative_bound, EvalMode, Evaluator, Point,
};
use annealmax::oracle::{brute_force_max, run_default_lemma_corpus, Constraint};
use annealmax::setfn::{random_instance, tight_example, RandomKind, Subset};
use std::time::Instant;

fn report(criterion: &str, detail: &str, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("ACCEPTANCE {criterion}: PASS ({elapsed:.2} s) {detail}");
    assert!(
        elapsed < budget_s,
        "{criterion} exceeded its runtime budget: {elapsed:.2} s >= {budget_s} s"
    );
}

#[test]
fn criterion_1_tight_example_golden_numbers() {
    let started = Instant::now();
    let fixture = tight_example();

    let bf = brute_force_max(&fixture, Constraint::Unconstrained).unwrap();
    assert_eq!(bf.value, 35.0);
    assert_eq!(bf.maximizers, vec![Subset::from_elements(&[4, 5, 6, 7])]);

    let a = Subset::from_elements(&[1, 3, 5, 7]);
    let x = mix_point(fixture.ground(), a, 0.75).unwrap();
    assert_eq!(f_eval(&fixture, &x, EvalMode::ClosedForm).unwrap().value, 16.25);
    assert!((f_eval(&fixture, &x, EvalMode::Exact).unwrap().value - 16.25).abs() < 1e-12);

    for k in 0..=25 {
        let p = 0.50 + 0.01 * k as f64;
        assert!(is_local_opt_at_p(&fixture, a, p).unwrap().is_opt, "A fails at p = {p}");
    }
    let report_t = verify_tight_trajectory(&fixture).unwrap();
    assert!(report_t.checks.iter().all(|c| c.passed));
    let b = report_t.second_set;
    assert_eq!(b, Subset::from_elements(&[2, 3, 6, 7]));
    for k in 0..=25 {
        let p = 0.75 + 0.01 * k as f64;
        assert!(is_local_opt_at_p(&fixture, b, p).unwrap().is_opt, "B fails at p = {p}");
    }

    let quad = [a, a.complement(8), b, b.complement(8)];
    let ceiling = quad.iter().map(|&s| fixture.eval(s).unwrap()).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(ceiling, 17.0);
    assert_eq!(report_t.ratio, 17.0 / 35.0);

    report("C1", "tight-example goldens 35 / 16.25 / 17 / 17:35", started, 1.0);
}

#[test]
fn criterion_2_analysis_constants() {
    let started = Instant::now();

    let beta1 = solve_beta_unconstrained();
    assert!(beta1 > 0.41);
    let closed_form = {
        let s2 = std::f64::consts::SQRT_2;
        (34.0 - 10.0 * s2 + (69.0 + 50.0 * s2) * (8.0 * s2 - 11.0).sqrt()) / 239.0
    };
    assert!((beta1 - closed_form).abs() <= 1e-9);
    assert!((beta1 - solve_beta_unconstrained_numeric().unwrap()).abs() <= 1e-9);
    assert!(unconstrained_fixed_point_residual(beta1).unwrap().abs() <= 1e-6);

    let beta2 = solve_beta_matroid();
    let matroid_closed = {
        let s5 = 5f64.sqrt();
        (2.0 + s5) * (-5.0 + s5 + (-2.0 + 6.0 * s5).sqrt()) / 8.0
    };
    assert!(beta2 > 0.325);
    assert!((beta2 - matroid_closed).abs() <= 1e-9);
    assert!((beta2 - solve_beta_matroid_numeric().unwrap()).abs() <= 1e-9);
    assert!(matroid_fixed_point_residual(beta2).unwrap().abs() <= 1e-6);
    assert!((matroid_t0() - 0.5 * (3.0 - 5f64.sqrt())).abs() <= 1e-15);
    assert!((matroid_v0() - 0.5 * (1.0 - matroid_t0())).abs() <= 1e-15);
    assert!((matroid_v0() - 0.309).abs() < 5e-4);

    report(
        "C2",
        &format!("beta_unconstrained = {beta1:.9}, beta_matroid = {beta2:.9}"),
        started,
        0.1,
    );
}

#[test]
fn criterion_3_symmetry_gaps() {
    let started = Instant::now();

    let one = gap_instance1(TailScale::Limit).unwrap();
    assert!((one.gap_value - (1.0 - (-0.5f64).exp())).abs() <= 1e-6);
    assert!((one.gap_value - 0.393469).abs() <= 1e-6 + 1e-7);

    for (ell, expected) in [(2, 0.5f64), (3, 1.0 / 3.0), (4, 0.25), (5, 0.2)] {
        let g = gap_base_ell(ell, TailScale::Limit).unwrap();
        assert!((g.gap_value - (1.0 - (-expected).exp())).abs() <= 1e-6, "ell = {ell}");
    }

    let two = min_gap_instance2(TailScale::Limit).unwrap();
    assert!((two.gap_value - 0.4773).abs() <= 5e-4, "gamma_two = {}", two.gap_value);
    assert!((two.alpha.unwrap() - 0.3513).abs() <= 5e-3, "alpha_two = {:?}", two.alpha);

    let card = min_gap_cardinality(TailScale::Limit).unwrap();
    assert!((card.gap_value - 0.49098).abs() <= 5e-4, "gamma_card = {}", card.gap_value);
    assert!((card.alpha.unwrap() - 0.15).abs() <= 1e-2, "alpha_card = {:?}", card.alpha);

    // Closed forms against the generic evaluator at the symmetrized point.
    for k in 1..=12usize {
        let g = gap_instance1(TailScale::Finite(k)).unwrap();
        let (oracle, _) = annealmax::hardness::build_instance1(k).unwrap();
        let ev = Evaluator::new(&oracle, EvalMode::ClosedForm).unwrap();
        let coords: Vec<f64> = (0..oracle.n())
            .map(|i| if i < 2 { 0.5 } else { 1.0 / (2.0 * k as f64) })
            .collect();
        let direct = ev.value(&Point::new(coords).unwrap()).unwrap();
        assert!((direct - g.gap_value).abs() <= 1e-12, "k = {k}");
    }

    report(
        "C3",
        &format!(
            "gap_one = {:.6}, gamma_two = {:.4}, gamma_card = {:.5}",
            one.gap_value, two.gap_value, card.gap_value
        ),
        started,
        5.0,
    );
}

#[test]
fn criterion_4_algorithm1_corpus() {
    let started = Instant::now();
    let cfg = Alg1Config { delta: 0.005, mode: Some(EvalMode::Exact), ..Alg1Config::default() };
    let mut worst_ratio = f64::INFINITY;
    for seed in 0..100u64 {
        let n = 5 + (seed as usize % 6);
        let kind = if seed % 2 == 0 { RandomKind::DigraphCut } else { RandomKind::Coverage };
        let density = 0.3 + 0.06 * (seed % 5) as f64;
        let oracle = random_instance(kind, n, density, (1.0, 10.0), seed).unwrap();
        let opt = brute_force_max(&oracle, Constraint::Unconstrained).unwrap().value;
        let trace = run_alg1(&oracle, &cfg).unwrap();
        assert!(
            trace.best_value <= opt + 1e-9,
            "seed {seed}: value {} exceeds OPT {opt}",
            trace.best_value
        );
        if opt > 0.0 {
            let ratio = trace.best_value / opt;
            worst_ratio = worst_ratio.min(ratio);
            assert!(
                ratio >= 0.40,
                "seed {seed}: ratio {ratio} below 0.40 (value {}, opt {opt})",
                trace.best_value
            );
        } else {
            assert_eq!(trace.best_value, 0.0);
        }
    }
    report(
        "C4",
        &format!("100 seeded runs, worst ratio {worst_ratio:.4} >= 0.40"),
        started,
        60.0,
    );
}

#[test]
fn criterion_5_algorithm2_corpus() {
    let started = Instant::now();
    let mut worst_ratio = f64::INFINITY;
    for seed in 0..50u64 {
        let n = 5 + (seed as usize % 6);
        let kind = if seed % 2 == 0 { RandomKind::DigraphCut } else { RandomKind::Coverage };
        let oracle = random_instance(kind, n, 0.4, (1.0, 10.0), 1000 + seed).unwrap();
        let matroid = if seed % 3 == 2 {
            let cut = n / 2;
            MatroidOracle::partition(
                n,
                vec![
                    Subset::from_elements(&(0..cut).collect::<Vec<_>>()),
                    Subset::from_elements(&(cut..n).collect::<Vec<_>>()),
                ],
                vec![1, 2],
            )
            .unwrap()
        } else {
            MatroidOracle::uniform(n, 1 + (seed as usize % 3)).unwrap()
        };
        let cfg = Alg2Config {
            n_sets: Some(n * n),
            mode: Some(EvalMode::Exact),
            ..Alg2Config::default()
        };
        let out = run_alg2(&oracle, &matroid, &cfg).unwrap();
        let opt = brute_force_max(&oracle, Constraint::MatroidIndependent(&matroid))
            .unwrap()
            .value;
        assert!(matroid.is_independent(out.best_set), "seed {seed}: dependent answer");
        assert!(out.best_value <= opt + 1e-9, "seed {seed}: beats brute force");

        // Per-run invariants from the trace.
        let n_sets = n * n;
        let delta = 1.0 / n_sets as f64;
        let slack = (n * n) as f64 * delta * delta * second_derivative_bound(&oracle).unwrap()
            + 1e-9;
        for (k, rec) in out.trace.iter().enumerate() {
            let cc = ConvexCombination::new(oracle.ground(), rec.sets.clone(), &matroid).unwrap();
            cc.validate(&matroid).unwrap();
            let cap = (rec.t * n_sets as f64 + 0.5).floor() as u32;
            assert!(
                cc.counts().iter().all(|&c| c <= cap),
                "seed {seed}: box violated at t = {}",
                rec.t
            );
            if let Some(next) = out.trace.get(k + 1) {
                assert!(
                    next.f_point >= rec.f_point - slack,
                    "seed {seed}: F dropped {} -> {} at t = {}",
                    rec.f_point,
                    next.f_point,
                    rec.t
                );
            }
        }

        if opt > 0.0 {
            let ratio = out.best_value / opt;
            worst_ratio = worst_ratio.min(ratio);
            assert!(
                ratio >= 0.30,
                "seed {seed}: ratio {ratio} below 0.30 (value {}, opt {opt})",
                out.best_value
            );
        } else {
            assert_eq!(out.best_value, 0.0);
        }
    }
    report(
        "C5",
        &format!("50 seeded constrained runs, worst ratio {worst_ratio:.4} >= 0.30"),
        started,
        120.0,
    );
}

#[test]
fn criterion_6_lemma_property_suite() {
    let started = Instant::now();
    let report_suite = run_default_lemma_corpus(42).unwrap();
    for check in &report_suite.checks {
        assert!(check.trials > 0, "{} ran no trials", check.name);
        assert!(
            check.passed(),
            "{} violated: max violation {} > tol {} (witness {:?})",
            check.name,
            check.max_violation,
            check.tolerance,
            check.witness
        );
    }
    let names: Vec<&str> = report_suite.checks.iter().map(|c| c.name).collect();
    for required in annealmax::oracle::LEMMA_CHECK_NAMES {
        assert!(names.contains(&required), "missing check {required}");
    }
    report(
        "C6",
        &format!("{} lemma checks, zero violations", report_suite.checks.len()),
        started,
        120.0,
    );
}

#[test]
fn criterion_7_documented_substitutions() {
    let started = Instant::now();
    // The value-oracle query lower bounds are statements over all
    // algorithms; their numeric thresholds are reproduced by criterion 3.
    // The asymptotic schedules stay available even though the corpus runs
    // use desk-scale parameters: delta = 1/n^3 validates for Algorithm 1
    // and N = n^4 resolves for Algorithm 2.
    let n = 6usize;
    let cfg1 = Alg1Config { delta: 1.0 / (n * n * n) as f64, ..Alg1Config::default() };
    cfg1.validate().unwrap();
    let cfg2 = Alg2Config { paper_schedule: true, ..Alg2Config::default() };
    assert_eq!(cfg2.resolve_n_sets(n), n.pow(4));
    report(
        "C7",
        "query lower bounds covered by C3; analysis schedules validated, corpus scale by C4-C6",
        started,
        1.0,
    );
}
