//! The multilinear extension `F(x) = E[f(R)]`, where `R` contains each
//! element `i` independently with probability `x_i`, together with its
//! gradient, mixed partials, the `x_p(A)` construction, and the exact
//! threshold (Lovász) evaluations used by the analysis inequalities.

use crate::error::{Error, Result};
use crate::setfn::{GroundSet, OracleKind, SetFunctionOracle, Subset, MAX_EXHAUSTIVE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A point of the solid cube `[0,1]^X`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Point> {
        for (index, &value) in coords.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::CoordinateOutOfRange { index, value });
            }
        }
        Ok(Point { coords })
    }

    pub fn uniform(n: usize, value: f64) -> Result<Point> {
        Point::new(vec![value; n])
    }

    pub fn indicator(ground: GroundSet, s: Subset) -> Point {
        let coords = (0..ground.n()).map(|i| if s.contains(i) { 1.0 } else { 0.0 }).collect();
        Point { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Copy with coordinate `i` replaced by `v`.
    pub fn with_coord(&self, i: usize, v: f64) -> Point {
        let mut coords = self.coords.clone();
        coords[i] = v;
        Point { coords }
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Point {
        Point { coords }
    }
}

/// `x_p(A)`: coordinate `p` on `A` and `1-p` off `A`.
pub fn mix_point(ground: GroundSet, a: Subset, p: f64) -> Result<Point> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("mix probability {p} not in [0,1]")));
    }
    ground.check_subset(a)?;
    let coords = (0..ground.n()).map(|i| if a.contains(i) { p } else { 1.0 - p }).collect();
    Ok(Point { coords })
}

/// How `F` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalMode {
    /// Per-edge product formula; hypergraph-cut oracles only.
    ClosedForm,
    /// Full enumeration over the value table; `n <= 20`.
    Exact,
    /// Unbiased sampling. Every call replays the same substream derived from
    /// the seed, so paired evaluations share common random numbers and
    /// results do not depend on scheduling.
    MonteCarlo { samples: u64, seed: u64 },
}

impl EvalMode {
    /// Exact enumeration when tractable, otherwise the closed form for cut
    /// functions.
    pub fn auto(oracle: &SetFunctionOracle) -> Result<EvalMode> {
        if oracle.n() <= MAX_EXHAUSTIVE {
            Ok(EvalMode::Exact)
        } else if oracle.is_cut_function() {
            Ok(EvalMode::ClosedForm)
        } else {
            Err(Error::ExactTooLarge { n: oracle.n(), max: MAX_EXHAUSTIVE })
        }
    }
}

/// `F` value with a standard error when it is a sampled estimate.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub std_err: Option<f64>,
}

/// Evaluates `F` and its derivatives for one oracle in one mode. Pure and
/// shareable across threads; the exact mode precomputes the value table once.
pub struct Evaluator<'a> {
    oracle: &'a SetFunctionOracle,
    mode: EvalMode,
    table: Option<Vec<f64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(oracle: &'a SetFunctionOracle, mode: EvalMode) -> Result<Evaluator<'a>> {
        let table = match mode {
            EvalMode::ClosedForm => {
                if !oracle.is_cut_function() {
                    return Err(Error::ClosedFormUnsupported);
                }
                None
            }
            EvalMode::Exact => Some(oracle.value_table()?),
            EvalMode::MonteCarlo { samples, .. } => {
                if samples == 0 {
                    return Err(Error::Precondition("monte-carlo sample count must be >= 1".into()));
                }
                None
            }
        };
        Ok(Evaluator { oracle, mode, table })
    }

    pub fn auto(oracle: &'a SetFunctionOracle) -> Result<Evaluator<'a>> {
        Evaluator::new(oracle, EvalMode::auto(oracle)?)
    }

    pub fn oracle(&self) -> &SetFunctionOracle {
        self.oracle
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        if x.len() != self.oracle.n() {
            return Err(Error::DimensionMismatch { got: x.len(), expected: self.oracle.n() });
        }
        Ok(())
    }

    /// `F(x)`, with a standard error in Monte-Carlo mode.
    pub fn estimate(&self, x: &Point) -> Result<Estimate> {
        self.check_point(x)?;
        match self.mode {
            EvalMode::ClosedForm => Ok(Estimate { value: self.closed_form(x.coords()), std_err: None }),
            EvalMode::Exact => Ok(Estimate { value: self.exact(x.coords()), std_err: None }),
            EvalMode::MonteCarlo { samples, seed } => {
                let (value, std_err) = self.monte_carlo(x.coords(), samples, seed);
                Ok(Estimate { value, std_err: Some(std_err) })
            }
        }
    }

    /// `F(x)` as a bare value.
    pub fn value(&self, x: &Point) -> Result<f64> {
        Ok(self.estimate(x)?.value)
    }

    fn closed_form(&self, x: &[f64]) -> f64 {
        let OracleKind::HypergraphCut(g) = self.oracle.kind() else {
            unreachable!("mode checked at construction")
        };
        let mut total = 0.0;
        for e in &g.edges {
            let mut miss = 1.0;
            for u in e.tails.members() {
                miss *= 1.0 - x[u];
            }
            total += e.weight * (1.0 - miss) * (1.0 - x[e.head]);
        }
        total
    }

    fn exact(&self, x: &[f64]) -> f64 {
        let table = self.table.as_ref().expect("mode checked at construction");
        let n = self.oracle.n();
        let mut buf = table.clone();
        // Contract coordinates from the top bit down:
        // buf[s] <- (1-x_i) buf[s] + x_i buf[s + 2^i].
        for i in (0..n).rev() {
            let half = 1usize << i;
            for s in 0..half {
                buf[s] = (1.0 - x[i]) * buf[s] + x[i] * buf[s + half];
            }
        }
        buf[0]
    }

    fn monte_carlo(&self, x: &[f64], samples: u64, seed: u64) -> (f64, f64) {
        let n = self.oracle.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..samples {
            let mut mask = 0u32;
            for (i, &xi) in x.iter().enumerate().take(n) {
                if rng.gen::<f64>() < xi {
                    mask |= 1 << i;
                }
            }
            let v = self.oracle.eval_unchecked(Subset(mask));
            sum += v;
            sum_sq += v * v;
        }
        let m = samples as f64;
        let mean = sum / m;
        let var = if samples > 1 { (sum_sq - sum * sum / m).max(0.0) / (m - 1.0) } else { 0.0 };
        (mean, (var / m).sqrt())
    }

    /// Gradient component `∂F/∂x_i = F(x_{i→1}) - F(x_{i→0})`. `F` is affine
    /// in each coordinate, so this is exact in closed-form and exact modes
    /// and a paired (common random numbers) estimate in Monte-Carlo mode.
    pub fn grad_component(&self, x: &Point, i: usize) -> Result<f64> {
        self.check_point(x)?;
        self.oracle.ground().check_element(i)?;
        match self.mode {
            EvalMode::ClosedForm => Ok(self.closed_form_grad_component(x.coords(), i)),
            _ => {
                let hi = self.value(&x.with_coord(i, 1.0))?;
                let lo = self.value(&x.with_coord(i, 0.0))?;
                Ok(hi - lo)
            }
        }
    }

    fn closed_form_grad_component(&self, x: &[f64], i: usize) -> f64 {
        let OracleKind::HypergraphCut(g) = self.oracle.kind() else {
            unreachable!("mode checked at construction")
        };
        let mut total = 0.0;
        for e in &g.edges {
            if e.tails.contains(i) {
                let mut miss = 1.0;
                for u in e.tails.members() {
                    if u != i {
                        miss *= 1.0 - x[u];
                    }
                }
                total += e.weight * miss * (1.0 - x[e.head]);
            } else if e.head == i {
                let mut miss = 1.0;
                for u in e.tails.members() {
                    miss *= 1.0 - x[u];
                }
                total -= e.weight * (1.0 - miss);
            }
        }
        total
    }

    pub fn grad(&self, x: &Point) -> Result<Vec<f64>> {
        (0..self.oracle.n()).map(|i| self.grad_component(x, i)).collect()
    }

    /// `∂²F/∂x_i∂x_j` via the four-point evaluation
    /// `F(1,1) - F(1,0) - F(0,1) + F(0,0)` over coordinates `(i, j)`.
    pub fn mixed_partial(&self, x: &Point, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::Precondition("mixed partial needs i != j".into()));
        }
        self.check_point(x)?;
        self.oracle.ground().check_element(i)?;
        self.oracle.ground().check_element(j)?;
        let f11 = self.value(&x.with_coord(i, 1.0).with_coord(j, 1.0))?;
        let f10 = self.value(&x.with_coord(i, 1.0).with_coord(j, 0.0))?;
        let f01 = self.value(&x.with_coord(i, 0.0).with_coord(j, 1.0))?;
        let f00 = self.value(&x.with_coord(i, 0.0).with_coord(j, 0.0))?;
        Ok(f11 - f10 - f01 + f00)
    }

    /// `G(x) = (1_C - x) · ∇F(x)`: the derivative of `F` along the segment
    /// from `x` toward the indicator of `C`.
    pub fn directional_gain(&self, x: &Point, c: Subset) -> Result<f64> {
        self.check_point(x)?;
        self.oracle.ground().check_subset(c)?;
        let grad = self.grad(x)?;
        let mut total = 0.0;
        for (i, &g) in grad.iter().enumerate() {
            if c.contains(i) {
                total += (1.0 - x.get(i)) * g;
            } else {
                total -= x.get(i) * g;
            }
        }
        Ok(total)
    }
}

/// `F(x)` for a one-off call; builds the evaluator internally.
pub fn f_eval(oracle: &SetFunctionOracle, x: &Point, mode: EvalMode) -> Result<Estimate> {
    Evaluator::new(oracle, mode)?.estimate(x)
}

pub fn grad(oracle: &SetFunctionOracle, x: &Point, mode: EvalMode) -> Result<Vec<f64>> {
    Evaluator::new(oracle, mode)?.grad(x)
}

pub fn mixed_partial(
    oracle: &SetFunctionOracle,
    x: &Point,
    i: usize,
    j: usize,
    mode: EvalMode,
) -> Result<f64> {
    Evaluator::new(oracle, mode)?.mixed_partial(x, i, j)
}

pub fn directional_gain(
    oracle: &SetFunctionOracle,
    x: &Point,
    c: Subset,
    mode: EvalMode,
) -> Result<f64> {
    Evaluator::new(oracle, mode)?.directional_gain(x, c)
}

/// Exact `E_{λ~U[0,1]}[f(T_{>λ}(y))]` where `T_{>λ}(y) = {i : y_i > λ}`,
/// computed by sorting the distinct coordinate values and weighting each
/// level set by its measure. This is the Lovász extension of `f`.
pub fn lovasz_threshold_eval(oracle: &SetFunctionOracle, y: &Point) -> Result<f64> {
    if y.len() != oracle.n() {
        return Err(Error::DimensionMismatch { got: y.len(), expected: oracle.n() });
    }
    let mut levels: Vec<f64> = y.coords().to_vec();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    // λ in (v_j+1, v_j) yields T = { i : y_i >= v_j }; the interval above the
    // largest value yields the empty set. Threshold boundaries have measure 0.
    let mut total = (1.0 - levels[0]) * oracle.eval(Subset::EMPTY)?;
    for (j, &v) in levels.iter().enumerate() {
        let below = levels.get(j + 1).copied().unwrap_or(0.0);
        if v > below {
            total += (v - below) * oracle.eval(level_set_at_least(y, v))?;
        }
    }
    Ok(total)
}

fn level_set_at_least(y: &Point, v: f64) -> Subset {
    let mut mask = 0u32;
    for (i, &c) in y.coords().iter().enumerate() {
        if c >= v {
            mask |= 1 << i;
        }
    }
    Subset(mask)
}

/// Exact `E[f((T_{>λ₁}(x) ∩ X₁) ∪ (T_{>λ₂}(x) ∩ X₂))]` over independent
/// uniform thresholds, computed over the product of the two level-set
/// decompositions. `x2` is the complement of `x1`.
pub fn two_threshold_eval(oracle: &SetFunctionOracle, x: &Point, x1: Subset) -> Result<f64> {
    if x.len() != oracle.n() {
        return Err(Error::DimensionMismatch { got: x.len(), expected: oracle.n() });
    }
    oracle.ground().check_subset(x1)?;
    let x2 = x1.complement(oracle.n());
    let blocks = [x1, x2];
    // Per block: (measure, level set restricted to the block) pairs.
    let mut decomposed: Vec<Vec<(f64, Subset)>> = Vec::with_capacity(2);
    for &block in &blocks {
        let mut levels: Vec<f64> = block.members().map(|i| x.get(i)).collect();
        levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
        levels.dedup();
        let mut parts = Vec::new();
        let top = levels.first().copied().unwrap_or(0.0);
        if top < 1.0 {
            parts.push((1.0 - top, Subset::EMPTY));
        }
        for (j, &v) in levels.iter().enumerate() {
            let below = levels.get(j + 1).copied().unwrap_or(0.0);
            if v > below {
                parts.push((v - below, level_set_at_least(x, v).intersect(block)));
            }
        }
        decomposed.push(parts);
    }
    let mut total = 0.0;
    for &(m1, s1) in &decomposed[0] {
        for &(m2, s2) in &decomposed[1] {
            total += m1 * m2 * oracle.eval(s1.union(s2))?;
        }
    }
    Ok(total)
}

/// `max_{S,i,j} |f(S+i+j) - f(S+i) - f(S+j) + f(S)|`, an upper bound for
/// `sup |∂²F/∂x_i∂x_j|` over the cube. Requires `n <= 20`.
pub fn second_derivative_bound(oracle: &SetFunctionOracle) -> Result<f64> {
    let n = oracle.n();
    let table = oracle.value_table()?;
    let mut bound: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for raw in 0..(1u32 << n) {
                let s = Subset(raw);
                if s.contains(i) || s.contains(j) {
                    continue;
                }
                let d = table[s.with(i).with(j).0 as usize]
                    - table[s.with(i).0 as usize]
                    - table[s.with(j).0 as usize]
                    + table[raw as usize];
                bound = bound.max(d.abs());
            }
        }
    }
    Ok(bound)
}
