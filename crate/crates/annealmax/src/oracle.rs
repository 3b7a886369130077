//! Ground truth and the executable property harness: exhaustive maximization
//! under each supported constraint, exhaustive enumeration of discrete local
//! optima, and the lemma suite that turns the analysis inequalities into
//! checks against brute force.

use crate::anneal::{self, Alg1Config};
use crate::anneal_matroid::{self, Alg2Config};
use crate::error::{Error, Result};
use crate::matroid::{ConvexCombination, MatroidOracle};
use crate::multilinear::{
    self, lovasz_threshold_eval, mix_point, second_derivative_bound, two_threshold_eval, EvalMode,
    Evaluator, Point,
};
use crate::rounding;
use crate::setfn::{random_instance, tight_example, RandomKind, SetFunctionOracle, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Feasible family for [`brute_force_max`].
#[derive(Clone, Copy, Debug)]
pub enum Constraint<'a> {
    Unconstrained,
    Cardinality(usize),
    MatroidIndependent(&'a MatroidOracle),
    MatroidBase(&'a MatroidOracle),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Unconstrained,
    Cardinality(usize),
    MatroidIndependent,
    MatroidBase,
}

#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub value: f64,
    /// Every feasible maximizer, ascending by mask.
    pub maximizers: Vec<Subset>,
    pub kind: ConstraintKind,
}

impl BruteForceResult {
    pub fn first(&self) -> Subset {
        self.maximizers[0]
    }
}

/// Exact maximum and all maximizers over the feasible family.
/// `n <= 20` unconstrained; `n <= 24` when the constraint prunes.
pub fn brute_force_max(oracle: &SetFunctionOracle, constraint: Constraint) -> Result<BruteForceResult> {
    let n = oracle.n();
    let (kind, limit): (ConstraintKind, usize) = match constraint {
        Constraint::Unconstrained => (ConstraintKind::Unconstrained, 20),
        Constraint::Cardinality(k) => (ConstraintKind::Cardinality(k), 24),
        Constraint::MatroidIndependent(_) => (ConstraintKind::MatroidIndependent, 24),
        Constraint::MatroidBase(_) => (ConstraintKind::MatroidBase, 24),
    };
    if n > limit {
        return Err(Error::BruteForceTooLarge { n, max: limit });
    }
    let feasible = |s: Subset| -> bool {
        match constraint {
            Constraint::Unconstrained => true,
            Constraint::Cardinality(k) => s.len() <= k,
            Constraint::MatroidIndependent(m) => m.is_independent(s),
            Constraint::MatroidBase(m) => m.is_base(s),
        }
    };
    let mut value = f64::NEG_INFINITY;
    let mut maximizers = Vec::new();
    for s in oracle.ground().subsets() {
        if !feasible(s) {
            continue;
        }
        let v = oracle.eval_unchecked(s);
        if v > value {
            value = v;
            maximizers.clear();
            maximizers.push(s);
        } else if v == value {
            maximizers.push(s);
        }
    }
    if maximizers.is_empty() {
        return Err(Error::Precondition("empty feasible family".into()));
    }
    Ok(BruteForceResult { value, maximizers, kind })
}

/// All sets `A` that pass the local-optimality certificate at `p`.
/// Requires `n <= 12`.
pub fn enumerate_discrete_local_optima(oracle: &SetFunctionOracle, p: f64) -> Result<Vec<Subset>> {
    let n = oracle.n();
    if n > 12 {
        return Err(Error::BruteForceTooLarge { n, max: 12 });
    }
    if p == 0.5 {
        return Ok(oracle.ground().subsets().collect());
    }
    let ev = Evaluator::auto(oracle)?;
    let mut out = Vec::new();
    for s in oracle.ground().subsets() {
        if anneal::is_local_opt_with(&ev, s, p)?.is_opt {
            out.push(s);
        }
    }
    Ok(out)
}

/// Centralized lemma tolerances: exact identities and closed forms at 1e-9,
/// inequalities involving optimized quantities at 1e-6.
pub mod tol {
    pub const IDENTITY: f64 = 1e-9;
    pub const OPTIMIZED: f64 = 1e-6;
}

/// One property checked over some number of trials. `max_violation` is the
/// largest observed excess over the inequality being asserted (negative
/// values mean margin); the check passes while it stays within `tolerance`.
#[derive(Clone, Debug)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub trials: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub witness: Option<String>,
}

impl LemmaCheck {
    fn new(name: &'static str, tolerance: f64) -> LemmaCheck {
        LemmaCheck { name, trials: 0, max_violation: f64::NEG_INFINITY, tolerance, witness: None }
    }

    pub fn passed(&self) -> bool {
        self.trials == 0 || self.max_violation <= self.tolerance
    }

    fn observe(&mut self, violation: f64, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if violation > self.max_violation {
            self.max_violation = violation;
            if violation > self.tolerance {
                self.witness = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: &LemmaCheck) {
        self.trials += other.trials;
        if other.max_violation > self.max_violation {
            self.max_violation = other.max_violation;
            if let Some(w) = &other.witness {
                self.witness = Some(w.clone());
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LemmaSuiteReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(LemmaCheck::passed)
    }

    pub fn merge(&mut self, other: LemmaSuiteReport) {
        for check in other.checks {
            match self.checks.iter_mut().find(|c| c.name == check.name) {
                Some(mine) => mine.merge(&check),
                None => self.checks.push(check),
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const CHECK_SUBMOD_CHANGE_UPPER: &str = "submod-change-upper-bound";
const CHECK_SUBMOD_CHANGE_LOWER: &str = "submod-change-lower-bound";
const CHECK_TAYLOR: &str = "taylor-second-order";
const CHECK_THRESHOLD: &str = "threshold-lovasz";
const CHECK_TWO_THRESHOLD: &str = "two-threshold-partition";
const CHECK_SIGN_CONDITIONS: &str = "local-opt-sign-conditions";
const CHECK_DRIFT_BOUND: &str = "drift-bound-at-local-opt";
const CHECK_MATCHING_GAIN: &str = "matching-gain-per-step";
const CHECK_MATCHING_WEIGHT: &str = "matching-weight-vs-gain";
const CHECK_OPT_BOUND: &str = "gain-vs-opt-bound";
const CHECK_COMPLEMENTARY: &str = "complementary-local-opt-bound";
const CHECK_ROUNDING: &str = "rounding-preserves-value";
const CHECK_GRAD_FD: &str = "gradient-finite-difference";
const CHECK_MODE_AGREEMENT: &str = "mode-agreement-closed-exact";
const CHECK_MODE_MONTE_CARLO: &str = "mode-agreement-monte-carlo";

/// Names in report order, used by the CLI to print a stable table.
pub const LEMMA_CHECK_NAMES: [&str; 15] = [
    CHECK_SUBMOD_CHANGE_UPPER,
    CHECK_SUBMOD_CHANGE_LOWER,
    CHECK_TAYLOR,
    CHECK_THRESHOLD,
    CHECK_TWO_THRESHOLD,
    CHECK_SIGN_CONDITIONS,
    CHECK_DRIFT_BOUND,
    CHECK_MATCHING_GAIN,
    CHECK_MATCHING_WEIGHT,
    CHECK_OPT_BOUND,
    CHECK_COMPLEMENTARY,
    CHECK_ROUNDING,
    CHECK_GRAD_FD,
    CHECK_MODE_AGREEMENT,
    CHECK_MODE_MONTE_CARLO,
];

fn random_point(n: usize, rng: &mut ChaCha8Rng) -> Point {
    Point::new((0..n).map(|_| rng.gen_range(0.0..=1.0)).collect()).expect("in range")
}

/// Both directions of the submodular first-order change bound: for `x <= x'`,
/// `F(x') <= F(x) + (x'-x)·∇F(x)` and `F(x') >= F(x) + (x'-x)·∇F(x')`.
pub fn check_submod_change(
    oracle: &SetFunctionOracle,
    trials: usize,
    seed: u64,
) -> Result<[LemmaCheck; 2]> {
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut upper = LemmaCheck::new(CHECK_SUBMOD_CHANGE_UPPER, tol::IDENTITY);
    let mut lower = LemmaCheck::new(CHECK_SUBMOD_CHANGE_LOWER, tol::IDENTITY);
    for _ in 0..trials {
        let lo = random_point(n, &mut rng);
        let hi = Point::new(
            (0..n).map(|i| rng.gen_range(lo.get(i)..=1.0)).collect(),
        )
        .expect("in range");
        let f_lo = ev.value(&lo)?;
        let f_hi = ev.value(&hi)?;
        let g_lo = ev.grad(&lo)?;
        let g_hi = ev.grad(&hi)?;
        let lin_lo: f64 = (0..n).map(|i| (hi.get(i) - lo.get(i)) * g_lo[i]).sum();
        let lin_hi: f64 = (0..n).map(|i| (hi.get(i) - lo.get(i)) * g_hi[i]).sum();
        upper.observe(f_hi - (f_lo + lin_lo), || format!("x={:?} x'={:?}", lo, hi));
        lower.observe((f_lo + lin_hi) - f_hi, || format!("x={:?} x'={:?}", lo, hi));
    }
    Ok([upper, lower])
}

/// Second-order accuracy of the gradient step:
/// `|F(x+y) - F(x) - y·∇F(x)| <= δ²n²·sup|∂²F|` for `y ∈ [-δ, δ]^n`.
pub fn check_taylor(oracle: &SetFunctionOracle, trials: usize, seed: u64) -> Result<LemmaCheck> {
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let n = oracle.n();
    let delta = 0.05;
    let bound = delta * delta * (n * n) as f64 * second_derivative_bound(oracle)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = LemmaCheck::new(CHECK_TAYLOR, tol::IDENTITY);
    for _ in 0..trials {
        let x = Point::new((0..n).map(|_| rng.gen_range(delta..=(1.0 - delta))).collect())?;
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-delta..=delta)).collect();
        let shifted = Point::new((0..n).map(|i| x.get(i) + y[i]).collect())?;
        let grad = ev.grad(&x)?;
        let lin: f64 = (0..n).map(|i| y[i] * grad[i]).sum();
        let residual = (ev.value(&shifted)? - ev.value(&x)? - lin).abs();
        check.observe(residual - bound, || format!("x={x:?} y={y:?}"));
    }
    Ok(check)
}

/// `F(x) >= E_λ[f(T_{>λ}(x))]`.
pub fn check_threshold(oracle: &SetFunctionOracle, trials: usize, seed: u64) -> Result<LemmaCheck> {
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = LemmaCheck::new(CHECK_THRESHOLD, tol::IDENTITY);
    for _ in 0..trials {
        let x = random_point(oracle.n(), &mut rng);
        let violation = lovasz_threshold_eval(oracle, &x)? - ev.value(&x)?;
        check.observe(violation, || format!("x={x:?}"));
    }
    Ok(check)
}

/// `F(x) >= E[f((T_{>λ1}(x) ∩ X1) ∪ (T_{>λ2}(x) ∩ X2))]` for random
/// partitions `X = X1 ∪ X2`.
pub fn check_two_threshold(
    oracle: &SetFunctionOracle,
    trials: usize,
    seed: u64,
) -> Result<LemmaCheck> {
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = LemmaCheck::new(CHECK_TWO_THRESHOLD, tol::IDENTITY);
    for _ in 0..trials {
        let x = random_point(n, &mut rng);
        let x1 = Subset(rng.gen_range(0..(1u32 << n)));
        let violation = two_threshold_eval(oracle, &x, x1)? - ev.value(&x)?;
        check.observe(violation, || format!("x={x:?} X1={x1}"));
    }
    Ok(check)
}

/// Gradient components against central finite differences (exact, since `F`
/// is affine per coordinate).
pub fn check_gradient_finite_difference(
    oracle: &SetFunctionOracle,
    trials: usize,
    seed: u64,
) -> Result<LemmaCheck> {
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = LemmaCheck::new(CHECK_GRAD_FD, tol::OPTIMIZED);
    for _ in 0..trials {
        let x = Point::new((0..n).map(|_| rng.gen_range(0.1..=0.9)).collect())?;
        let grad = ev.grad(&x)?;
        for (i, &gi) in grad.iter().enumerate() {
            let h = 0.05;
            let up = ev.value(&x.with_coord(i, x.get(i) + h))?;
            let dn = ev.value(&x.with_coord(i, x.get(i) - h))?;
            let fd = (up - dn) / (2.0 * h);
            check.observe((gi - fd).abs(), || format!("x={x:?} i={i}"));
        }
    }
    Ok(check)
}

/// Closed form vs exact enumeration on cut functions, and Monte-Carlo
/// within four standard errors of exact.
pub fn check_mode_agreement(
    oracle: &SetFunctionOracle,
    points: usize,
    mc_trials: usize,
    seed: u64,
) -> Result<Vec<LemmaCheck>> {
    let exact = Evaluator::new(oracle, EvalMode::Exact)?;
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if oracle.is_cut_function() {
        let closed = Evaluator::new(oracle, EvalMode::ClosedForm)?;
        let mut check = LemmaCheck::new(CHECK_MODE_AGREEMENT, tol::IDENTITY);
        for _ in 0..points {
            let x = random_point(n, &mut rng);
            check.observe((closed.value(&x)? - exact.value(&x)?).abs(), || format!("x={x:?}"));
        }
        out.push(check);
    }
    let mut mc_check = LemmaCheck::new(CHECK_MODE_MONTE_CARLO, 0.0);
    for trial in 0..mc_trials {
        let x = random_point(n, &mut rng);
        let mode = EvalMode::MonteCarlo { samples: 100_000, seed: seed.wrapping_add(trial as u64) };
        let est = multilinear::f_eval(oracle, &x, mode)?;
        let se = est.std_err.expect("monte-carlo returns a standard error");
        let diff = (est.value - exact.value(&x)?).abs();
        mc_check.observe(diff - 4.0 * se, || format!("x={x:?} diff={diff} se={se}"));
    }
    out.push(mc_check);
    Ok(out)
}

/// Local searches land on certified local optima (sign conditions within
/// 1e-9) whose temperature derivative is nonnegative, and certified optima
/// satisfy the drift bound
/// `(1-p)·dF/dp >= OPT - 2F(x_p(A)) - (2p-1)·f(Ā)` against brute force.
fn check_unconstrained_local_opt(
    oracle: &SetFunctionOracle,
    seed: u64,
    sign: &mut LemmaCheck,
    drift: &mut LemmaCheck,
) -> Result<()> {
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let n = oracle.n();
    let opt = brute_force_max(oracle, Constraint::Unconstrained)?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = Alg1Config { ls_eps: 0.0, ..Alg1Config::default() };

    let visit = |a: Subset, p: f64, sign: &mut LemmaCheck, drift: &mut LemmaCheck| -> Result<()> {
        // At p = 1/2 the point does not depend on A, so flip optimality
        // carries no sign information; the conditions bind only for p > 1/2.
        if p <= 0.5 {
            return Ok(());
        }
        let cert = anneal::is_local_opt_with(&ev, a, p)?;
        let worst = cert
            .entries
            .iter()
            .map(|e| if e.in_set { -e.partial } else { e.partial })
            .fold(f64::NEG_INFINITY, f64::max);
        let dp: f64 = cert
            .entries
            .iter()
            .map(|e| if e.in_set { e.partial } else { -e.partial })
            .sum();
        sign.observe(worst.max(-dp), || format!("A={a} p={p}"));
        // Hypothesis guard: the drift bound assumes certified optimality.
        if cert.is_opt {
            let x = mix_point(oracle.ground(), a, p)?;
            let f_point = ev.value(&x)?;
            let f_comp = oracle.eval(a.complement(n))?;
            let lhs = (1.0 - p) * dp;
            let rhs = opt - 2.0 * f_point - (2.0 * p - 1.0) * f_comp;
            drift.observe(rhs - lhs, || format!("A={a} p={p}"));
        }
        Ok(())
    };

    // Standalone searches from random starts at random temperatures.
    for _ in 0..3 {
        let p = rng.gen_range(0.5..1.0);
        let a0 = Subset(rng.gen_range(0..(1u32 << n)));
        let a = anneal::local_search_at_p(oracle, a0, p, &cfg)?;
        visit(a, p, sign, drift)?;
    }
    // Every per-temperature record of a full run.
    let trace = anneal::run_alg1(oracle, &cfg)?;
    for rec in &trace.records {
        visit(rec.set, rec.p, sign, drift)?;
    }
    Ok(())
}

/// The constrained-run checks: per-step matching gain, matching weight
/// against the gain toward the optimum, the optimum bound at fractional
/// local optima, and the complementary-solution bound.
fn check_constrained_run(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    gain: &mut LemmaCheck,
    weight: &mut LemmaCheck,
    opt_bound: &mut LemmaCheck,
    complementary: &mut LemmaCheck,
) -> Result<()> {
    let n = oracle.n();
    let ev = Evaluator::new(oracle, EvalMode::Exact)?;
    let cfg = Alg2Config { ls_eps: 0.0, ..Alg2Config::default() };
    let n_sets = cfg.resolve_n_sets(n);
    let delta = 1.0 / n_sets as f64;
    let bf = brute_force_max(oracle, Constraint::MatroidIndependent(matroid))?;
    let opt = bf.value;
    let c = bf.first();
    let sup_mixed = second_derivative_bound(oracle)?;
    let out = anneal_matroid::run_alg2(oracle, matroid, &cfg)?;

    for (k, rec) in out.trace.iter().enumerate() {
        let cc = ConvexCombination::new(oracle.ground(), rec.sets.clone(), matroid)?;
        // Hypothesis guard: all of these checks assume a fractional local
        // optimum at this temperature.
        if !anneal_matroid::is_fractional_local_opt(&ev, matroid, &cc, rec.t)? {
            continue;
        }
        let x = cc.point();
        let g = ev.directional_gain(&x, c)?;

        if let Some(next) = out.trace.get(k + 1) {
            let lhs = next.f_point - rec.f_point;
            let rhs = delta * rec.matching_weight
                - (n * n) as f64 * delta * delta * sup_mixed;
            gain.observe(rhs - lhs, || format!("t={}", rec.t));
        }
        if rec.t <= 1.0 - 1.0 / n as f64 + 1e-12 {
            let target = g / ((1.0 - rec.t) * n_sets as f64);
            weight.observe(target - rec.matching_weight, || format!("t={}", rec.t));
        }
        let rhs = opt - 2.0 * rec.f_point - 2.0 * rec.best_comp * rec.t;
        opt_bound.observe(rhs - g, || format!("t={}", rec.t));

        // Every threshold-restricted discrete local optimum S obeys
        // 2 f(S) >= f(S ∪ C') for C' = C ∩ T_{<=λ}.
        for (allowed, s) in anneal_matroid::threshold_local_optima(oracle, matroid, &cc, &cfg) {
            let c_restricted = c.intersect(allowed);
            let lhs = oracle.eval_unchecked(s.union(c_restricted));
            complementary.observe(lhs - 2.0 * oracle.eval_unchecked(s), || {
                format!("t={} allowed={allowed} S={s}", rec.t)
            });
        }
    }
    Ok(())
}

/// Merge rounding keeps the multilinear value: `f(S) >= F(x) - 1e-9`.
fn check_rounding(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    trials: usize,
    seed: u64,
    check: &mut LemmaCheck,
) -> Result<()> {
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n_sets = rng.gen_range(2..=8);
        let mut sets = Vec::with_capacity(n_sets);
        for _ in 0..n_sets {
            let mut s = Subset::EMPTY;
            for i in 0..n {
                if rng.gen::<f64>() < 0.4 && matroid.is_independent(s.with(i)) {
                    s = s.with(i);
                }
            }
            sets.push(s);
        }
        let cc = ConvexCombination::new(oracle.ground(), sets, matroid)?;
        let out = rounding::merge_round(oracle, matroid, &cc)?;
        check.observe(out.input_value - out.value, || format!("cc={:?}", cc.sets()));
        if !matroid.is_independent(out.set) {
            check.observe(f64::INFINITY, || format!("dependent output {}", out.set));
        }
    }
    Ok(())
}

/// Run every lemma check that applies to this instance. Point counts are
/// per instance; the corpus driver aggregates them to the documented
/// totals.
pub fn lemma_suite(
    oracle: &SetFunctionOracle,
    matroid: Option<&MatroidOracle>,
    seed: u64,
) -> Result<LemmaSuiteReport> {
    let mut report = LemmaSuiteReport::default();
    let [upper, lower] = check_submod_change(oracle, 8, seed ^ 0x5eed_0001)?;
    report.checks.push(upper);
    report.checks.push(lower);
    report.checks.push(check_taylor(oracle, 5, seed ^ 0x5eed_0002)?);
    report.checks.push(check_threshold(oracle, 25, seed ^ 0x5eed_0003)?);
    report.checks.push(check_two_threshold(oracle, 5, seed ^ 0x5eed_0004)?);
    report.checks.push(check_gradient_finite_difference(oracle, 3, seed ^ 0x5eed_0005)?);
    for check in check_mode_agreement(oracle, 3, 2, seed ^ 0x5eed_0006)? {
        report.checks.push(check);
    }

    let mut sign = LemmaCheck::new(CHECK_SIGN_CONDITIONS, tol::IDENTITY);
    let mut drift = LemmaCheck::new(CHECK_DRIFT_BOUND, tol::OPTIMIZED);
    check_unconstrained_local_opt(oracle, seed ^ 0x5eed_0007, &mut sign, &mut drift)?;
    report.checks.push(sign);
    report.checks.push(drift);

    let fallback;
    let rounding_matroid = match matroid {
        Some(m) => m,
        None => {
            fallback = MatroidOracle::uniform(oracle.n(), oracle.n().div_ceil(2))?;
            &fallback
        }
    };
    let mut round = LemmaCheck::new(CHECK_ROUNDING, tol::IDENTITY);
    check_rounding(oracle, rounding_matroid, 5, seed ^ 0x5eed_0008, &mut round)?;
    report.checks.push(round);

    if let Some(m) = matroid {
        let mut gain = LemmaCheck::new(CHECK_MATCHING_GAIN, tol::IDENTITY);
        let mut weight = LemmaCheck::new(CHECK_MATCHING_WEIGHT, tol::OPTIMIZED);
        let mut opt_bound = LemmaCheck::new(CHECK_OPT_BOUND, tol::OPTIMIZED);
        let mut complementary = LemmaCheck::new(CHECK_COMPLEMENTARY, tol::OPTIMIZED);
        check_constrained_run(oracle, m, &mut gain, &mut weight, &mut opt_bound, &mut complementary)?;
        report.checks.push(gain);
        report.checks.push(weight);
        report.checks.push(opt_bound);
        report.checks.push(complementary);
    }
    Ok(report)
}

/// The seeded default corpus behind `verify` and the acceptance gate:
/// unconstrained instances sized so the per-lemma trial totals meet the
/// documented counts, the tight example, and a set of matroid-constrained
/// instances for the exchange-graph lemmas.
pub fn run_default_lemma_corpus(seed: u64) -> Result<LemmaSuiteReport> {
    let mut report = LemmaSuiteReport::default();
    report.merge(lemma_suite(&tight_example(), None, seed)?);

    for idx in 0..40u64 {
        let n = 4 + (idx as usize % 5);
        let kind = if idx % 2 == 0 { RandomKind::DigraphCut } else { RandomKind::Coverage };
        let density = 0.3 + 0.05 * (idx % 5) as f64;
        let oracle = random_instance(kind, n, density, (0.5, 6.0), seed.wrapping_add(idx))?;
        report.merge(lemma_suite(&oracle, None, seed.wrapping_mul(31).wrapping_add(idx))?);
    }
    // A couple of larger unconstrained instances for the drift bound.
    for idx in 0..4u64 {
        let n = 9 + (idx as usize % 2);
        let oracle =
            random_instance(RandomKind::DigraphCut, n, 0.35, (0.5, 6.0), seed.wrapping_add(100 + idx))?;
        report.merge(lemma_suite(&oracle, None, seed.wrapping_mul(37).wrapping_add(idx))?);
    }

    for idx in 0..12u64 {
        let n = 6 + (idx as usize % 3);
        let kind = if idx % 2 == 0 { RandomKind::DigraphCut } else { RandomKind::Coverage };
        let oracle = random_instance(kind, n, 0.4, (0.5, 6.0), seed.wrapping_add(200 + idx))?;
        let matroid = match idx % 3 {
            0 => MatroidOracle::uniform(n, 2)?,
            1 => MatroidOracle::uniform(n, 3)?,
            _ => {
                let cut = n / 2;
                MatroidOracle::partition(
                    n,
                    vec![
                        Subset::from_elements(&(0..cut).collect::<Vec<_>>()),
                        Subset::from_elements(&(cut..n).collect::<Vec<_>>()),
                    ],
                    vec![1, 2],
                )?
            }
        };
        report.merge(lemma_suite(&oracle, Some(&matroid), seed.wrapping_mul(41).wrapping_add(idx))?);
    }

    // Stable order for reporting.
    report.checks.sort_by_key(|c| {
        LEMMA_CHECK_NAMES.iter().position(|n| *n == c.name).unwrap_or(usize::MAX)
    });
    Ok(report)
}
