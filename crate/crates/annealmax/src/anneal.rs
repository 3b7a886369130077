//! Simulated annealing for unconstrained submodular maximization: a sweep of
//! the mix parameter `p` from 1/2 to 1, running flip local search on
//! `F(x_p(A))` at each step and keeping the best discrete value of `A` or its
//! complement seen anywhere along the way. Also the local-optimality
//! verifier, the tight-example trajectory certifier, and the closed-form
//! analysis constants for the unconstrained guarantee.

use crate::error::{Error, Result};
use crate::multilinear::{mix_point, EvalMode, Evaluator};
use crate::setfn::{SetFunctionOracle, Subset};

#[derive(Clone, Debug)]
pub struct Alg1Config {
    /// Temperature step of the sweep.
    pub delta: f64,
    pub p_start: f64,
    pub p_end: f64,
    /// Relative improvement a flip must clear to be taken.
    pub ls_eps: f64,
    /// Absolute slack added to the improvement threshold.
    pub abs_eps: f64,
    /// `None` picks exact enumeration when tractable, else closed form.
    pub mode: Option<EvalMode>,
    pub seed: u64,
}

impl Default for Alg1Config {
    fn default() -> Self {
        Alg1Config {
            delta: 0.01,
            p_start: 0.5,
            p_end: 1.0,
            ls_eps: 1e-9,
            abs_eps: 0.0,
            mode: None,
            seed: 0,
        }
    }
}

impl Alg1Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 0.5) {
            return Err(Error::Precondition(format!("delta {} not in (0, 0.5]", self.delta)));
        }
        if !(self.ls_eps >= 0.0 && self.abs_eps >= 0.0) {
            return Err(Error::Precondition("ls_eps and abs_eps must be nonnegative".into()));
        }
        if !(0.5..1.0).contains(&self.p_start) || self.p_end > 1.0 || self.p_end <= self.p_start {
            return Err(Error::Precondition(format!(
                "p range [{}, {}) invalid",
                self.p_start, self.p_end
            )));
        }
        Ok(())
    }

    pub fn resolve_mode(&self, oracle: &SetFunctionOracle) -> Result<EvalMode> {
        match self.mode {
            Some(m) => Ok(m),
            None => EvalMode::auto(oracle),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Alg1Record {
    pub p: f64,
    pub set: Subset,
    /// `F(x_p(A))` after the local search at this `p`.
    pub f_point: f64,
    pub f_set: f64,
    pub f_complement: f64,
    pub best_so_far: f64,
}

#[derive(Clone, Debug)]
pub struct Alg1Trace {
    pub records: Vec<Alg1Record>,
    pub best_value: f64,
    pub best_set: Subset,
}

fn improves(candidate: f64, current: f64, cfg: &Alg1Config) -> bool {
    candidate > current * (1.0 + cfg.ls_eps) + cfg.abs_eps
}

fn local_search_with(
    ev: &Evaluator,
    a0: Subset,
    p: f64,
    cfg: &Alg1Config,
    mut on_flip: impl FnMut(Subset),
) -> Result<Subset> {
    let n = ev.oracle().n();
    let mut a = a0;
    let mut current = ev.value(&mix_point(ev.oracle().ground(), a, p)?)?;
    loop {
        let mut flipped = false;
        for i in 0..n {
            let candidate_set = a.toggle(i);
            let candidate = ev.value(&mix_point(ev.oracle().ground(), candidate_set, p)?)?;
            if improves(candidate, current, cfg) {
                a = candidate_set;
                current = candidate;
                on_flip(a);
                flipped = true;
                break;
            }
        }
        if !flipped {
            return Ok(a);
        }
    }
}

/// Flip local search on `A ↦ F(x_p(A))`: takes the first improving flip in
/// ascending element order until none clears the threshold.
pub fn local_search_at_p(
    oracle: &SetFunctionOracle,
    a0: Subset,
    p: f64,
    cfg: &Alg1Config,
) -> Result<Subset> {
    check_p(p)?;
    oracle.ground().check_subset(a0)?;
    let ev = Evaluator::new(oracle, cfg.resolve_mode(oracle)?)?;
    local_search_with(&ev, a0, p, cfg, |_| {})
}

fn check_p(p: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("p = {p} not in [1/2, 1]")));
    }
    Ok(())
}

/// Per-element record of the local-optimality certificate: the partial
/// derivative at `x_p(A)` and the exact value change of flipping `i`
/// (they are tied by single-coordinate linearity of `F`).
#[derive(Clone, Debug)]
pub struct CertificateEntry {
    pub element: usize,
    pub in_set: bool,
    pub partial: f64,
    pub flip_delta: f64,
}

#[derive(Clone, Debug)]
pub struct LocalOptCertificate {
    pub is_opt: bool,
    pub entries: Vec<CertificateEntry>,
    pub first_violation: Option<usize>,
}

pub const LOCAL_OPT_TOL: f64 = 1e-9;

/// Local optimality of `A` at `p`: `∂F/∂x_i >= -1e-9` for `i ∈ A` and
/// `<= 1e-9` for `i ∉ A`. At `p = 1/2` the point does not depend on `A` at
/// all, so every set is locally optimal by the flip criterion.
pub fn is_local_opt_at_p(
    oracle: &SetFunctionOracle,
    a: Subset,
    p: f64,
) -> Result<LocalOptCertificate> {
    let ev = Evaluator::auto(oracle)?;
    is_local_opt_with(&ev, a, p)
}

pub fn is_local_opt_with(ev: &Evaluator, a: Subset, p: f64) -> Result<LocalOptCertificate> {
    check_p(p)?;
    ev.oracle().ground().check_subset(a)?;
    let x = mix_point(ev.oracle().ground(), a, p)?;
    let grad = ev.grad(&x)?;
    let mut entries = Vec::with_capacity(grad.len());
    let mut first_violation = None;
    for (i, &g) in grad.iter().enumerate() {
        let in_set = a.contains(i);
        let flip_delta = if in_set { (1.0 - 2.0 * p) * g } else { (2.0 * p - 1.0) * g };
        let ok = if p == 0.5 {
            true
        } else if in_set {
            g >= -LOCAL_OPT_TOL
        } else {
            g <= LOCAL_OPT_TOL
        };
        if !ok && first_violation.is_none() {
            first_violation = Some(i);
        }
        entries.push(CertificateEntry { element: i, in_set, partial: g, flip_delta });
    }
    Ok(LocalOptCertificate { is_opt: first_violation.is_none(), entries, first_violation })
}

/// Algorithm 1: sweep `p` upward from 1/2, maintaining the current set
/// across temperature increments, and return the best discrete value of `A`
/// or its complement encountered (tracked after every accepted flip).
pub fn run_alg1(oracle: &SetFunctionOracle, cfg: &Alg1Config) -> Result<Alg1Trace> {
    cfg.validate()?;
    let ev = Evaluator::new(oracle, cfg.resolve_mode(oracle)?)?;
    let mut a = Subset::EMPTY;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_set = a;
    let consider = |s: Subset, best_value: &mut f64, best_set: &mut Subset| {
        for cand in [s, s.complement(oracle.n())] {
            let v = oracle.eval_unchecked(cand);
            if v > *best_value {
                *best_value = v;
                *best_set = cand;
            }
        }
    };
    consider(a, &mut best_value, &mut best_set);

    let mut records = Vec::new();
    let mut k = 0u32;
    loop {
        let p = cfg.p_start + f64::from(k) * cfg.delta;
        if p >= cfg.p_end - 1e-12 {
            break;
        }
        let a_next = local_search_with(&ev, a, p, cfg, |flipped| {
            consider(flipped, &mut best_value, &mut best_set);
        })?;
        a = a_next;
        let f_point = ev.value(&mix_point(oracle.ground(), a, p)?)?;
        records.push(Alg1Record {
            p,
            set: a,
            f_point,
            f_set: oracle.eval_unchecked(a),
            f_complement: oracle.eval_unchecked(a.complement(oracle.n())),
            best_so_far: best_value,
        });
        k += 1;
    }
    Ok(Alg1Trace { records, best_value, best_set })
}

/// One check of the tight-example trajectory report.
#[derive(Clone, Debug)]
pub struct TrajectoryCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct TightTrajectoryReport {
    pub checks: Vec<TrajectoryCheck>,
    pub first_set: Subset,
    pub second_set: Subset,
    pub opt: f64,
    pub ceiling: f64,
    pub ratio: f64,
}

const TIGHT_A: [usize; 4] = [1, 3, 5, 7];

/// Certify the adversarial trajectory of the 8-vertex fixture: `{1,3,5,7}`
/// locally optimal on the grid `p ∈ {0.50, .., 0.75}`, a brute-force-located
/// second set (`{2,3,6,7}`) locally optimal on `{0.75, .., 1.00}` with the
/// same crossing value `F(x_{3/4}) = 16.25`, and a discrete ceiling of 17
/// against the optimum 35. The printed figure labels the second set
/// inconsistently, so it is located by exhaustive search rather than taken
/// from the text: among all sets locally optimal across the upper grid with
/// crossing value 16.25, the one whose best discrete value (set or
/// complement) is worst.
pub fn verify_tight_trajectory(oracle: &SetFunctionOracle) -> Result<TightTrajectoryReport> {
    let n = oracle.n();
    if n != 8 {
        return Err(Error::TightTrajectory(format!("fixture must have 8 vertices, got {n}")));
    }
    let ev = Evaluator::auto(oracle)?;
    let a = Subset::from_elements(&TIGHT_A);
    let mut checks = Vec::new();
    let fail = |name: &str| Err(Error::TightTrajectory(name.to_string()));

    let lower_grid: Vec<f64> = (0..=25).map(|k| 0.50 + 0.01 * k as f64).collect();
    let upper_grid: Vec<f64> = (0..=25).map(|k| 0.75 + 0.01 * k as f64).collect();

    // Brute-force optimum.
    let mut opt = f64::NEG_INFINITY;
    let mut opt_set = Subset::EMPTY;
    for s in oracle.ground().subsets() {
        let v = oracle.eval_unchecked(s);
        if v > opt {
            opt = v;
            opt_set = s;
        }
    }
    let opt_ok = opt == 35.0 && opt_set == Subset::from_elements(&[4, 5, 6, 7]);
    checks.push(TrajectoryCheck {
        name: "optimum-35-at-4567".into(),
        passed: opt_ok,
        detail: format!("max f = {opt} at {opt_set}"),
    });
    if !opt_ok {
        return fail("optimum-35-at-4567");
    }

    let a_ok = lower_grid
        .iter()
        .all(|&p| is_local_opt_with(&ev, a, p).map(|c| c.is_opt).unwrap_or(false));
    checks.push(TrajectoryCheck {
        name: "first-set-local-opt-on-[0.50,0.75]".into(),
        passed: a_ok,
        detail: format!("{a} on 26-point grid"),
    });
    if !a_ok {
        return fail("first-set-local-opt-on-[0.50,0.75]");
    }

    let crossing = ev.value(&mix_point(oracle.ground(), a, 0.75)?)?;
    let crossing_ok = crossing == 16.25;
    checks.push(TrajectoryCheck {
        name: "first-set-crossing-value-16.25".into(),
        passed: crossing_ok,
        detail: format!("F(x_3/4(A)) = {crossing}"),
    });
    if !crossing_ok {
        return fail("first-set-crossing-value-16.25");
    }

    // Locate the adversarial continuation by brute force.
    let mut second: Option<(f64, Subset)> = None;
    for s in oracle.ground().subsets() {
        let on_grid = upper_grid
            .iter()
            .all(|&p| is_local_opt_with(&ev, s, p).map(|c| c.is_opt).unwrap_or(false));
        if !on_grid {
            continue;
        }
        if ev.value(&mix_point(oracle.ground(), s, 0.75)?)? != 16.25 {
            continue;
        }
        let ceiling = oracle
            .eval_unchecked(s)
            .max(oracle.eval_unchecked(s.complement(n)));
        let better = match second {
            None => true,
            Some((c, _)) => ceiling < c,
        };
        if better {
            second = Some((ceiling, s));
        }
    }
    let Some((_, b)) = second else {
        checks.push(TrajectoryCheck {
            name: "second-set-located".into(),
            passed: false,
            detail: "no set is locally optimal across [0.75, 1.00] with crossing value 16.25".into(),
        });
        return fail("second-set-located");
    };
    let b_expected = b == Subset::from_elements(&[2, 3, 6, 7]);
    checks.push(TrajectoryCheck {
        name: "second-set-located".into(),
        passed: b_expected,
        detail: format!("located {b}"),
    });
    if !b_expected {
        return fail("second-set-located");
    }

    let b_crossing = ev.value(&mix_point(oracle.ground(), b, 0.75)?)?;
    let b_cross_ok = b_crossing == 16.25;
    checks.push(TrajectoryCheck {
        name: "second-set-crossing-value-16.25".into(),
        passed: b_cross_ok,
        detail: format!("F(x_3/4(B)) = {b_crossing}"),
    });
    if !b_cross_ok {
        return fail("second-set-crossing-value-16.25");
    }

    let ceiling = [a, a.complement(n), b, b.complement(n)]
        .iter()
        .map(|&s| oracle.eval_unchecked(s))
        .fold(f64::NEG_INFINITY, f64::max);
    let ceiling_ok = ceiling == 17.0;
    checks.push(TrajectoryCheck {
        name: "discrete-ceiling-17".into(),
        passed: ceiling_ok,
        detail: format!("max{{f(A), f(comp A), f(B), f(comp B)}} = {ceiling}"),
    });
    if !ceiling_ok {
        return fail("discrete-ceiling-17");
    }

    Ok(TightTrajectoryReport {
        checks,
        first_set: a,
        second_set: b,
        opt,
        ceiling,
        ratio: ceiling / opt,
    })
}

/// Solution of the annealing differential inequality
/// `(1-p) Φ'(p) >= 1 - 2Φ(p) - (2p-1)β` with `Φ(p0) = v0`:
/// a lower bound on the run value at any later `p`.
pub fn phi_lower_bound(p: f64, p0: f64, v0: f64, beta: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&p0) {
        return Err(Error::Precondition(format!("p0 = {p0} not in [1/2, 1)")));
    }
    if p <= p0 || p >= 1.0 {
        return Err(Error::Precondition(format!("p = {p} must lie in (p0, 1)")));
    }
    if beta < 0.0 {
        return Err(Error::Precondition(format!("beta = {beta} must be nonnegative")));
    }
    let u = 1.0 - p;
    let u0 = 1.0 - p0;
    let d = 0.5 * (1.0 - beta) + 2.0 * beta * u0 - v0;
    Ok(0.5 * (1.0 - beta) + 2.0 * beta * u - (u * u) / (u0 * u0) * d)
}

/// Value of a local optimum at mix parameter `p = 1 - q` when both the set
/// and its complement are worth at most `beta`:
/// `F(x_p(A)) >= (1 - q^2)/2 - q(1-2q)β`, valid for `q ∈ [1/3, 1/(1+√2)]`.
pub fn starting_point_bound(q: f64, beta: f64) -> Result<f64> {
    let upper = 1.0 / (1.0 + std::f64::consts::SQRT_2);
    if !(q >= 1.0 / 3.0 - 1e-12 && q <= upper + 1e-12) {
        return Err(Error::Precondition(format!("q = {q} outside [1/3, 1/(1+sqrt 2)]")));
    }
    Ok(0.5 * (1.0 - q * q) - q * (1.0 - 2.0 * q) * beta)
}

/// The sweep start used for the unconstrained constant: `p0 = √2/(1+√2)`.
pub fn unconstrained_p0() -> f64 {
    2.0 - std::f64::consts::SQRT_2
}

/// Unconstrained approximation constant: the fixed point of the annealing
/// bound started from `p0 = √2/(1+√2)` with the local-optimum starting
/// value. Closed form `(34 - 10√2 + (69 + 50√2)·√(8√2 - 11)) / 239`,
/// which exceeds 0.41.
pub fn solve_beta_unconstrained() -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    (34.0 - 10.0 * s2 + (69.0 + 50.0 * s2) * (8.0 * s2 - 11.0).sqrt()) / 239.0
}

/// Maximize `phi_lower_bound(·, p0, v0, beta)` over `p ∈ (p0, 1)` by golden
/// section; returns `(argmax p, maximum)`.
pub fn max_phi_lower_bound(p0: f64, v0: f64, beta: f64) -> Result<(f64, f64)> {
    let phi = |p: f64| phi_lower_bound(p, p0, v0, beta);
    let (mut lo, mut hi) = (p0 + 1e-12, 1.0 - 1e-12);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = phi(c)?;
    let mut fd = phi(d)?;
    while hi - lo > 1e-12 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = phi(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = phi(d)?;
        }
    }
    let p_star = 0.5 * (lo + hi);
    Ok((p_star, phi(p_star)?))
}

/// Residual of the fixed-point property at `beta`:
/// `max_p Φ(p; p0, v0(beta), beta) - beta` with `v0` from
/// [`starting_point_bound`] at `q0 = 1 - p0`.
pub fn unconstrained_fixed_point_residual(beta: f64) -> Result<f64> {
    let p0 = unconstrained_p0();
    let v0 = starting_point_bound(1.0 - p0, beta)?;
    let (_, phi_max) = max_phi_lower_bound(p0, v0, beta)?;
    Ok(phi_max - beta)
}

/// Independent route to the unconstrained constant: bisect the fixed-point
/// residual. Used to cross-check the closed form.
pub fn solve_beta_unconstrained_numeric() -> Result<f64> {
    let (mut lo, mut hi) = (0.40, 0.42);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if unconstrained_fixed_point_residual(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfn::{random_instance, tight_example, DirectedHypergraph, RandomKind, SetFunctionOracle};

    fn subset(e: &[usize]) -> Subset {
        Subset::from_elements(e)
    }

    #[test]
    fn local_search_is_identity_at_half() {
        let f = tight_example();
        let cfg = Alg1Config::default();
        for raw in [0u32, 5, 37, 255] {
            assert_eq!(local_search_at_p(&f, Subset(raw), 0.5, &cfg).unwrap(), Subset(raw));
        }
    }

    #[test]
    fn tight_first_set_is_stable_at_p06() {
        let f = tight_example();
        let cfg = Alg1Config::default();
        let a = subset(&[1, 3, 5, 7]);
        assert_eq!(local_search_at_p(&f, a, 0.6, &cfg).unwrap(), a);
    }

    #[test]
    fn constant_function_local_search_is_identity() {
        let f = SetFunctionOracle::hypergraph_cut(DirectedHypergraph::from_arcs(1, &[]).unwrap());
        let cfg = Alg1Config::default();
        assert_eq!(local_search_at_p(&f, Subset(1), 0.8, &cfg).unwrap(), Subset(1));
    }

    #[test]
    fn local_opt_certificates_on_fixture() {
        let f = tight_example();
        let a = subset(&[1, 3, 5, 7]);
        assert!(is_local_opt_at_p(&f, a, 0.6).unwrap().is_opt);
        let c = is_local_opt_at_p(&f, a, 0.8).unwrap();
        assert!(!c.is_opt);
        // Component 5 has partial 3q - p = -0.2 < 0 with 5 in the set;
        // component 0 (outside the set, partial -12q + 4p = 0.8 > 0) trips
        // first in ascending order.
        assert_eq!(c.first_violation, Some(0));
        assert!((c.entries[0].partial - 0.8).abs() < 1e-12);
        assert!((c.entries[5].partial + 0.2).abs() < 1e-12);
        assert!(is_local_opt_at_p(&f, subset(&[2, 3, 6, 7]), 0.8).unwrap().is_opt);
    }

    #[test]
    fn certificate_flip_deltas_match_direct_differences() {
        let f = tight_example();
        let ev = Evaluator::auto(&f).unwrap();
        let a = subset(&[0, 2, 5]);
        let p = 0.7;
        let cert = is_local_opt_with(&ev, a, p).unwrap();
        let base = ev.value(&mix_point(f.ground(), a, p).unwrap()).unwrap();
        for e in &cert.entries {
            let flipped = ev
                .value(&mix_point(f.ground(), a.toggle(e.element), p).unwrap())
                .unwrap();
            assert!((e.flip_delta - (flipped - base)).abs() < 1e-9);
        }
    }

    #[test]
    fn single_edge_run_finds_the_tail() {
        let f = SetFunctionOracle::hypergraph_cut(
            DirectedHypergraph::from_arcs(2, &[(0, 1, 1.0)]).unwrap(),
        );
        let trace = run_alg1(&f, &Alg1Config::default()).unwrap();
        assert_eq!(trace.best_value, 1.0);
        assert_eq!(trace.best_set, Subset(1));
    }

    #[test]
    fn zero_function_run_returns_zero() {
        let f = SetFunctionOracle::modular(vec![0.0, 0.0, 0.0]).unwrap();
        let trace = run_alg1(&f, &Alg1Config::default()).unwrap();
        assert_eq!(trace.best_value, 0.0);
    }

    #[test]
    fn tight_example_run_lands_between_17_and_35() {
        let f = tight_example();
        let trace = run_alg1(&f, &Alg1Config::default()).unwrap();
        assert!(trace.best_value >= 17.0 && trace.best_value <= 35.0, "{}", trace.best_value);
    }

    #[test]
    fn trace_f_values_nearly_monotone() {
        for seed in 0..10 {
            let f = random_instance(RandomKind::DigraphCut, 7, 0.5, (1.0, 8.0), seed).unwrap();
            let cfg = Alg1Config::default();
            let trace = run_alg1(&f, &cfg).unwrap();
            let f_max = f.value_upper_bound();
            let slack = 2.0 * cfg.delta * cfg.delta * 49.0 * f_max;
            for w in trace.records.windows(2) {
                assert!(
                    w[1].f_point >= w[0].f_point - slack,
                    "seed {seed}: drop {} -> {}",
                    w[0].f_point,
                    w[1].f_point
                );
            }
        }
    }

    #[test]
    fn tight_trajectory_report_passes() {
        let f = tight_example();
        let report = verify_tight_trajectory(&f).unwrap();
        assert!(report.checks.iter().all(|c| c.passed));
        assert_eq!(report.second_set, subset(&[2, 3, 6, 7]));
        assert_eq!(report.ceiling, 17.0);
        assert_eq!(report.opt, 35.0);
        assert!((report.ratio - 17.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn perturbed_fixture_fails_trajectory() {
        // Change arc 3 -> 4 weight from 11 to 1: the derivative balance at
        // vertex 3 breaks.
        let arcs: Vec<(usize, usize, f64)> = crate::setfn::TIGHT_EXAMPLE_ARCS
            .iter()
            .map(|&(u, v, w)| (u, v, if (u, v) == (3, 4) { 1.0 } else { w as f64 }))
            .collect();
        let f = SetFunctionOracle::hypergraph_cut(DirectedHypergraph::from_arcs(8, &arcs).unwrap());
        assert!(matches!(verify_tight_trajectory(&f), Err(Error::TightTrajectory(_))));
    }

    #[test]
    fn phi_lower_bound_initial_condition_limit() {
        let v = phi_lower_bound(2.0 / 3.0 + 1e-9, 2.0 / 3.0, 0.4, 0.4).unwrap();
        assert!((v - 0.4).abs() < 1e-8);
        assert!(phi_lower_bound(0.6, 0.6, 0.4, 0.4).is_err());
        assert!(phi_lower_bound(0.55, 0.6, 0.4, 0.4).is_err());
    }

    #[test]
    fn phi_bound_from_two_thirds_peaks_at_61_150() {
        let (p_star, phi_max) = max_phi_lower_bound(2.0 / 3.0, 0.4, 0.4).unwrap();
        assert!((p_star - 11.0 / 15.0).abs() < 1e-6);
        assert!((phi_max - 61.0 / 150.0).abs() < 1e-12);
    }

    #[test]
    fn phi_bound_from_uniform_random_start_stays_below_two_fifths() {
        for k in 1..100 {
            let p = 0.5 + 0.005 * k as f64;
            assert!(phi_lower_bound(p, 0.5, 0.25, 0.4).unwrap() < 0.4);
        }
    }

    #[test]
    fn starting_point_bound_domain_and_values() {
        assert!(starting_point_bound(0.5, 0.4).is_err());
        let v = starting_point_bound(1.0 / 3.0, 0.3).unwrap();
        assert!((v - (4.0 / 9.0 - 0.3 / 9.0)).abs() < 1e-12);
        let q0 = 1.0 / (1.0 + std::f64::consts::SQRT_2);
        assert!(starting_point_bound(q0, 0.41).is_ok());
    }

    #[test]
    fn beta_unconstrained_exceeds_041_and_is_a_fixed_point() {
        let beta = solve_beta_unconstrained();
        assert!(beta > 0.41);
        let residual = unconstrained_fixed_point_residual(beta).unwrap();
        assert!(residual.abs() <= 1e-6, "residual {residual}");
        let numeric = solve_beta_unconstrained_numeric().unwrap();
        assert!((beta - numeric).abs() <= 1e-9, "closed {beta} vs numeric {numeric}");
    }

    #[test]
    fn p0_constant() {
        assert!((unconstrained_p0() - 0.585786437626905).abs() < 1e-12);
    }
}
