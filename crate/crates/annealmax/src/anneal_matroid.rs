//! Simulated annealing under a matroid independence constraint: fractional
//! local search inside the boxed matroid polytope `P_t(M)`, a discrete
//! complementary-solution check over the threshold sets `T_{<=λ}(x)`, and a
//! temperature relaxation that raises the box by moving along a max-weight
//! matching of the fractional exchange graph. The fractional state is the
//! explicit combination `x = (1/N) Σ 1_{I_ℓ}`, edited one member set at a
//! time so the representation invariant is never broken.

use crate::error::{Error, Result};
use crate::matroid::{exchange_candidate, ConvexCombination, ExchangeChoice, MatroidOracle};
use crate::multilinear::{EvalMode, Evaluator, Point};
use crate::rounding::merge_round_with;
use crate::setfn::{SetFunctionOracle, Subset};

#[derive(Clone, Debug)]
pub struct Alg2Config {
    /// Combination size `N`; `None` picks `max(n^2, 64)`. The step is always
    /// `delta = 1/N`.
    pub n_sets: Option<usize>,
    /// Use the analysis schedule `N = n^4` instead of the default.
    pub paper_schedule: bool,
    pub ls_eps: f64,
    pub abs_eps: f64,
    pub mode: Option<EvalMode>,
    pub seed: u64,
}

impl Default for Alg2Config {
    fn default() -> Self {
        Alg2Config {
            n_sets: None,
            paper_schedule: false,
            ls_eps: 1e-9,
            abs_eps: 0.0,
            mode: None,
            seed: 0,
        }
    }
}

impl Alg2Config {
    pub fn resolve_n_sets(&self, n: usize) -> usize {
        if self.paper_schedule {
            n.pow(4)
        } else {
            self.n_sets.unwrap_or_else(|| (n * n).max(64))
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let n_sets = self.resolve_n_sets(n);
        if n_sets < n {
            return Err(Error::Precondition(format!(
                "combination size {n_sets} must be at least n = {n}"
            )));
        }
        if !(self.ls_eps >= 0.0 && self.abs_eps >= 0.0) {
            return Err(Error::Precondition("ls_eps and abs_eps must be nonnegative".into()));
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

fn improves(candidate: f64, current: f64, cfg: &Alg2Config) -> bool {
    candidate > current * (1.0 + cfg.ls_eps) + cfg.abs_eps
}

/// Box capacity in membership counts: `x_i <= t` iff `count_i <= t*N`.
/// `t` is always a grid value `m/N`, so the rounding is exact.
fn box_capacity(t: f64, n_sets: usize) -> u32 {
    (t * n_sets as f64 + 0.5).floor() as u32
}

/// Fractional local search at box level `t`: while some move
/// `v ∈ {±e_i, e_i - e_j}` with `x + δv ∈ P_t(M)` improves `F`, take the
/// first one (single additions in ascending element order, then removals,
/// then swaps), realized by editing the first member set that admits it.
pub fn fractional_local_search(
    ev: &Evaluator,
    matroid: &MatroidOracle,
    cc: &mut ConvexCombination,
    t: f64,
    cfg: &Alg2Config,
) -> Result<()> {
    let n = cc.ground().n();
    let n_sets = cc.n_sets();
    let delta = 1.0 / n_sets as f64;
    let cap = box_capacity(t, n_sets);
    let mut current = ev.value(&cc.point())?;
    loop {
        let x = cc.point();
        let mut applied = false;

        for i in 0..n {
            if cc.count(i) + 1 > cap {
                continue;
            }
            let Some(l) = find_set_for_add(matroid, cc, i) else { continue };
            let candidate = ev.value(&x.with_coord(i, x.get(i) + delta))?;
            if improves(candidate, current, cfg) {
                cc.replace_set(l, cc.set(l).with(i));
                current = candidate;
                applied = true;
                break;
            }
        }
        if applied {
            continue;
        }

        for i in 0..n {
            if cc.count(i) == 0 {
                continue;
            }
            let l = (0..n_sets).find(|&l| cc.set(l).contains(i)).expect("count > 0");
            let candidate = ev.value(&x.with_coord(i, x.get(i) - delta))?;
            if improves(candidate, current, cfg) {
                cc.replace_set(l, cc.set(l).without(i));
                current = candidate;
                applied = true;
                break;
            }
        }
        if applied {
            continue;
        }

        'swaps: for i in 0..n {
            if cc.count(i) + 1 > cap {
                continue;
            }
            for j in 0..n {
                if i == j || cc.count(j) == 0 {
                    continue;
                }
                let Some(l) = find_set_for_swap(matroid, cc, i, j) else { continue };
                let candidate =
                    ev.value(&x.with_coord(i, x.get(i) + delta).with_coord(j, x.get(j) - delta))?;
                if improves(candidate, current, cfg) {
                    cc.replace_set(l, cc.set(l).without(j).with(i));
                    current = candidate;
                    applied = true;
                    break 'swaps;
                }
            }
        }
        if !applied {
            return Ok(());
        }
    }
}

/// Certify that no move in the fractional move set strictly improves `F`
/// at box level `t` (threshold zero). Used to hypothesis-guard the checks
/// that assume fractional local optimality.
pub fn is_fractional_local_opt(
    ev: &Evaluator,
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
    t: f64,
) -> Result<bool> {
    let n = cc.ground().n();
    let n_sets = cc.n_sets();
    let delta = 1.0 / n_sets as f64;
    let cap = box_capacity(t, n_sets);
    let x = cc.point();
    let current = ev.value(&x)?;
    for i in 0..n {
        if cc.count(i) < cap
            && find_set_for_add(matroid, cc, i).is_some()
            && ev.value(&x.with_coord(i, x.get(i) + delta))? > current
        {
            return Ok(false);
        }
        if cc.count(i) > 0 && ev.value(&x.with_coord(i, x.get(i) - delta))? > current {
            return Ok(false);
        }
    }
    for i in 0..n {
        if cc.count(i) + 1 > cap {
            continue;
        }
        for j in 0..n {
            if i == j || cc.count(j) == 0 || find_set_for_swap(matroid, cc, i, j).is_none() {
                continue;
            }
            let cand =
                ev.value(&x.with_coord(i, x.get(i) + delta).with_coord(j, x.get(j) - delta))?;
            if cand > current {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn find_set_for_add(matroid: &MatroidOracle, cc: &ConvexCombination, i: usize) -> Option<usize> {
    (0..cc.n_sets()).find(|&l| {
        let s = cc.set(l);
        !s.contains(i) && matroid.is_independent(s.with(i))
    })
}

fn find_set_for_swap(
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
    i: usize,
    j: usize,
) -> Option<usize> {
    (0..cc.n_sets()).find(|&l| {
        let s = cc.set(l);
        !s.contains(i) && s.contains(j) && matroid.is_independent(s.without(j).with(i))
    })
}

/// Discrete local search (add/delete/swap, first improvement, ascending
/// indices) for `f` over independent subsets of `allowed`, from the empty
/// set.
pub(crate) fn discrete_local_search(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    allowed: Subset,
    ls_eps: f64,
    abs_eps: f64,
) -> Subset {
    let cfg = Alg2Config { ls_eps, abs_eps, ..Alg2Config::default() };
    let mut s = Subset::EMPTY;
    let mut current = oracle.eval_unchecked(s);
    loop {
        let mut applied = false;
        for i in allowed.minus(s).members() {
            if matroid.is_independent(s.with(i)) {
                let cand = oracle.eval_unchecked(s.with(i));
                if improves(cand, current, &cfg) {
                    s = s.with(i);
                    current = cand;
                    applied = true;
                    break;
                }
            }
        }
        if applied {
            continue;
        }
        for i in s.members() {
            let cand = oracle.eval_unchecked(s.without(i));
            if improves(cand, current, &cfg) {
                s = s.without(i);
                current = cand;
                applied = true;
                break;
            }
        }
        if applied {
            continue;
        }
        'swaps: for i in allowed.minus(s).members() {
            for j in s.members() {
                let next = s.without(j).with(i);
                if matroid.is_independent(next) {
                    let cand = oracle.eval_unchecked(next);
                    if improves(cand, current, &cfg) {
                        s = next;
                        current = cand;
                        applied = true;
                        break 'swaps;
                    }
                }
            }
        }
        if !applied {
            return s;
        }
    }
}

/// The per-threshold searches behind [`complementary_check`]: for each
/// distinct threshold λ among the coordinate values of `x` (plus 0), the
/// ground subset `T_{<=λ}(x) = {i : x_i <= λ}` and the discrete local
/// optimum found inside it.
pub fn threshold_local_optima(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
    cfg: &Alg2Config,
) -> Vec<(Subset, Subset)> {
    let n = oracle.n();
    // Thresholds as membership counts, exact in integer arithmetic.
    let mut levels: Vec<u32> = cc.counts().to_vec();
    levels.push(0);
    levels.sort_unstable();
    levels.dedup();
    let mut out = Vec::with_capacity(levels.len());
    for &level in &levels {
        let mut allowed = Subset::EMPTY;
        for i in 0..n {
            if cc.count(i) <= level {
                allowed = allowed.with(i);
            }
        }
        let s = discrete_local_search(oracle, matroid, allowed, cfg.ls_eps, cfg.abs_eps);
        out.push((allowed, s));
    }
    out
}

/// Complementary solution check: the best discrete local optimum over all
/// threshold subsets, with its witness.
pub fn complementary_check(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
    cfg: &Alg2Config,
) -> Result<(f64, Subset)> {
    let mut best = (f64::NEG_INFINITY, Subset::EMPTY);
    for (_, s) in threshold_local_optima(oracle, matroid, cc, cfg) {
        let v = oracle.eval_unchecked(s);
        if v > best.0 {
            best = (v, s);
        }
    }
    Ok(best)
}

/// One edge of the fractional exchange graph: saturated element `i`, member
/// set index `l` with `i ∉ I_l`, the removal choice `b_l(i)`, and weight
/// `∂F/∂x_i - ∂F/∂x_{b_l(i)}`.
#[derive(Clone, Debug)]
pub struct ExchangeEdge {
    pub element: usize,
    pub set_index: usize,
    pub removal: ExchangeChoice,
    pub weight: f64,
}

/// Bipartite graph between box-saturated elements and the `N` member sets.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub saturated: Vec<usize>,
    pub edges: Vec<ExchangeEdge>,
    pub grad: Vec<f64>,
}

/// Build the exchange graph at box level `t`. The gradient is computed once
/// at the current point; saturation is tested on the exact membership
/// counts.
pub fn build_exchange_graph(
    ev: &Evaluator,
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
    t: f64,
) -> Result<ExchangeGraph> {
    let n = cc.ground().n();
    let cap = box_capacity(t, cc.n_sets());
    let grad = ev.grad(&cc.point())?;
    let saturated: Vec<usize> = (0..n).filter(|&i| cc.count(i) == cap).collect();
    let mut edges = Vec::new();
    for &i in &saturated {
        for l in 0..cc.n_sets() {
            if cc.set(l).contains(i) {
                continue;
            }
            let removal = exchange_candidate(matroid, cc.set(l), i, &grad)
                .map_err(|_| Error::NoFeasibleExchange { element: i, set_index: l })?;
            let weight = grad[i] - removal.grad_value(&grad);
            edges.push(ExchangeEdge { element: i, set_index: l, removal, weight });
        }
    }
    Ok(ExchangeGraph { saturated, edges, grad })
}

/// A matching in the exchange graph: pairwise disjoint `(element, set)`
/// pairs and their total weight.
#[derive(Clone, Debug, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
    edge_indices: Vec<usize>,
}

impl Matching {
    pub fn edges<'g>(&'g self, g: &'g ExchangeGraph) -> impl Iterator<Item = &'g ExchangeEdge> + 'g {
        self.edge_indices.iter().map(move |&k| &g.edges[k])
    }
}

/// Exact maximum-weight matching over the strictly positive edges (edges
/// with `w <= 0` are never included; excluding them cannot reduce the
/// maximum weight), via shortest augmenting paths with potentials on a
/// dense cost matrix padded with one zero-cost skip column per left vertex.
pub fn max_weight_matching(g: &ExchangeGraph) -> Matching {
    let mut lefts: Vec<usize> =
        g.edges.iter().filter(|e| e.weight > 0.0).map(|e| e.element).collect();
    lefts.sort_unstable();
    lefts.dedup();
    if lefts.is_empty() {
        return Matching::default();
    }
    let mut rights: Vec<usize> =
        g.edges.iter().filter(|e| e.weight > 0.0).map(|e| e.set_index).collect();
    rights.sort_unstable();
    rights.dedup();

    let rows = lefts.len();
    let real_cols = rights.len();
    let cols = real_cols + rows;
    let mut cost = vec![vec![f64::INFINITY; cols]; rows];
    let mut edge_of = vec![vec![usize::MAX; real_cols]; rows];
    for (k, e) in g.edges.iter().enumerate() {
        if e.weight <= 0.0 {
            continue;
        }
        let r = lefts.binary_search(&e.element).unwrap();
        let c = rights.binary_search(&e.set_index).unwrap();
        if -e.weight < cost[r][c] {
            cost[r][c] = -e.weight;
            edge_of[r][c] = k;
        }
    }
    for (r, row) in cost.iter_mut().enumerate() {
        row[real_cols + r] = 0.0; // skip column
    }

    let assignment = min_cost_assignment(&cost);

    let mut m = Matching::default();
    for (r, c) in assignment.into_iter().enumerate() {
        if c < real_cols && cost[r][c] < 0.0 {
            let k = edge_of[r][c];
            m.pairs.push((g.edges[k].element, g.edges[k].set_index));
            m.weight += g.edges[k].weight;
            m.edge_indices.push(k);
        }
    }
    m
}

/// Shortest-augmenting-path assignment on a dense `rows x cols` cost matrix
/// (`rows <= cols`), minimizing total cost; returns the column assigned to
/// each row.
fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let rows = cost.len();
    let cols = cost[0].len();
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut owner = vec![0usize; cols + 1]; // 1-indexed rows; 0 = free
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![usize::MAX; rows];
    for (j, &own) in owner.iter().enumerate().skip(1) {
        if own != 0 {
            assignment[own - 1] = j - 1;
        }
    }
    assignment
}

/// Apply a matching: replace `I_l` by `I_l - b_l(i) + i` for every matched
/// edge. Every coordinate increases by at most `1/N`, so the point stays in
/// `P_{t+delta}(M)`.
pub fn apply_matching(
    cc: &mut ConvexCombination,
    matching: &Matching,
    g: &ExchangeGraph,
) -> Result<()> {
    for e in matching.edges(g) {
        let s = cc.set(e.set_index);
        let next = match e.removal {
            ExchangeChoice::Empty => s.with(e.element),
            ExchangeChoice::Element(j) => s.without(j).with(e.element),
        };
        cc.replace_set(e.set_index, next);
    }
    Ok(())
}

/// Per-temperature record of a constrained run.
#[derive(Clone, Debug)]
pub struct Alg2Record {
    pub t: f64,
    /// `F(x)` at the fractional local optimum reached at this `t`.
    pub f_point: f64,
    /// Best complementary value found at this step alone.
    pub comp_value: f64,
    /// Running maximum of complementary values (including this step).
    pub best_comp: f64,
    pub matching_weight: f64,
    /// Member sets at the fractional local optimum.
    pub sets: Vec<Subset>,
}

#[derive(Clone, Debug)]
pub struct Alg2Result {
    pub trace: Vec<Alg2Record>,
    pub best_value: f64,
    pub best_set: Subset,
    pub rounded_value: f64,
    pub rounded_set: Subset,
    pub final_point: Point,
}

/// Algorithm 2: sweep the box level `t` from 0 to 1 in steps of `1/N`; at
/// each step run the fractional local search, the complementary check, and
/// the matching-based temperature relaxation. The answer is the better of
/// the merged-rounded final fractional solution and the best complementary
/// solution, always an independent set.
pub fn run_alg2(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    cfg: &Alg2Config,
) -> Result<Alg2Result> {
    let n = oracle.n();
    if matroid.n() != n {
        return Err(Error::DimensionMismatch { got: matroid.n(), expected: n });
    }
    cfg.validate(n)?;
    let n_sets = cfg.resolve_n_sets(n);
    let ev = Evaluator::new(oracle, cfg.resolve_mode(oracle)?)?;
    let mut cc = ConvexCombination::all_empty(oracle.ground(), n_sets);
    let mut trace = Vec::with_capacity(n_sets);
    let mut best_comp = (f64::NEG_INFINITY, Subset::EMPTY);

    for m in 0..n_sets {
        let t = m as f64 / n_sets as f64;
        fractional_local_search(&ev, matroid, &mut cc, t, cfg)?;
        let f_point = ev.value(&cc.point())?;
        let sets = cc.sets().to_vec();
        let (comp_value, comp_set) = complementary_check(oracle, matroid, &cc, cfg)?;
        if comp_value > best_comp.0 {
            best_comp = (comp_value, comp_set);
        }
        let graph = build_exchange_graph(&ev, matroid, &cc, t)?;
        let matching = max_weight_matching(&graph);
        apply_matching(&mut cc, &matching, &graph)?;
        debug_assert!(cc.validate(matroid).is_ok());
        // Relaxation raises the box by exactly one count.
        let next_cap = box_capacity(t, n_sets) + 1;
        if cc.counts().iter().any(|&c| c > next_cap) {
            return Err(Error::Precondition(format!(
                "temperature relaxation left the box at t = {t}"
            )));
        }
        trace.push(Alg2Record {
            t,
            f_point,
            comp_value,
            best_comp: best_comp.0,
            matching_weight: matching.weight,
            sets,
        });
    }

    let rounded = merge_round_with(&ev, matroid, &cc)?;
    let (best_value, best_set) = if rounded.value >= best_comp.0 {
        (rounded.value, rounded.set)
    } else {
        best_comp
    };
    Ok(Alg2Result {
        trace,
        best_value,
        best_set,
        rounded_value: rounded.value,
        rounded_set: rounded.set,
        final_point: cc.point(),
    })
}

/// Start of the constrained analysis: `t0 = (3 - √5)/2`, where a fractional
/// local optimum is worth at least `v0 = (1 - t0)/2 ≈ 0.309`.
pub fn matroid_t0() -> f64 {
    (3.0 - 5f64.sqrt()) / 2.0
}

pub fn matroid_v0() -> f64 {
    (1.0 - matroid_t0()) / 2.0
}

/// Constrained approximation constant:
/// `(1/8)(2+√5)(-5+√5+√(-2+6√5)) ≈ 0.3255871`, which exceeds 0.325.
pub fn solve_beta_matroid() -> f64 {
    let s5 = 5f64.sqrt();
    (2.0 + s5) * (-5.0 + s5 + (6.0 * s5 - 2.0).sqrt()) / 8.0
}

/// Solution of `(1-t) Φ'(t) >= 1 - 2Φ(t) - 2tβ` with `Φ(t0) = v0`.
pub fn phi_lower_bound_matroid(t: f64, t0: f64, v0: f64, beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t0) {
        return Err(Error::Precondition(format!("t0 = {t0} not in [0, 1)")));
    }
    if t <= t0 || t >= 1.0 {
        return Err(Error::Precondition(format!("t = {t} must lie in (t0, 1)")));
    }
    if beta < 0.0 {
        return Err(Error::Precondition(format!("beta = {beta} must be nonnegative")));
    }
    let u = 1.0 - t;
    let u0 = 1.0 - t0;
    let d = 0.5 + beta - 2.0 * beta * t0 - v0;
    Ok(0.5 + beta - 2.0 * beta * t - (u * u) / (u0 * u0) * d)
}

/// Maximize `phi_lower_bound_matroid(·, t0, v0, beta)` over `t ∈ (t0, 1)`.
pub fn max_phi_matroid(t0: f64, v0: f64, beta: f64) -> Result<(f64, f64)> {
    let phi = |t: f64| phi_lower_bound_matroid(t, t0, v0, beta);
    let (mut lo, mut hi) = (t0 + 1e-12, 1.0 - 1e-12);
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
    let t_star = 0.5 * (lo + hi);
    Ok((t_star, phi(t_star)?))
}

/// `max_t Φ(t; t0, v0, beta) - beta` at the canonical start.
pub fn matroid_fixed_point_residual(beta: f64) -> Result<f64> {
    let (_, phi_max) = max_phi_matroid(matroid_t0(), matroid_v0(), beta)?;
    Ok(phi_max - beta)
}

/// Bisection route to the constrained constant, for cross-checking the
/// closed form.
pub fn solve_beta_matroid_numeric() -> Result<f64> {
    let (mut lo, mut hi) = (0.31, 0.34);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if matroid_fixed_point_residual(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
