//! Ground sets, bitmask subsets, set-function oracles, instance generators,
//! and the 8-vertex tight-example fixture.
//!
//! Elements are identified with indices `0..n-1` and subsets with `n`-bit
//! masks, so exact algorithms cap the ground set at 30 elements and
//! exhaustive checks at 20.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Largest ground set representable as a bitmask here.
pub const MAX_GROUND: usize = 30;
/// Largest ground set for exhaustive (2^n) enumeration.
pub const MAX_EXHAUSTIVE: usize = 20;

/// A subset of the ground set, stored as an n-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_elements(elements: &[usize]) -> Subset {
        let mut mask = 0u32;
        for &e in elements {
            mask |= 1 << e;
        }
        Subset(mask)
    }

    pub fn full(n: usize) -> Subset {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn toggle(self, i: usize) -> Subset {
        Subset(self.0 ^ 1 << i)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersect(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.members().collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.members().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The ground set `X = {0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<GroundSet> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSetSize { n, max: MAX_GROUND });
        }
        Ok(GroundSet { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn full(self) -> Subset {
        Subset::full(self.n)
    }

    pub fn subset_count(self) -> usize {
        1usize << self.n
    }

    /// All subsets as masks `0 .. 2^n`.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        (0..self.subset_count() as u32).map(Subset)
    }

    pub fn check_subset(self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::SubsetOutOfRange { n: self.n })
        }
    }

    pub fn check_element(self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: i, n: self.n })
        }
    }
}

/// A directed hyperedge `(U, v)`: nonempty tail set `U`, single head `v ∉ U`.
/// It is cut by `S` iff `U ∩ S ≠ ∅` and `v ∉ S`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedHyperedge {
    pub tails: Subset,
    pub head: usize,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct DirectedHypergraph {
    pub ground: GroundSet,
    pub edges: Vec<DirectedHyperedge>,
}

impl DirectedHypergraph {
    pub fn new(ground: GroundSet, edges: Vec<DirectedHyperedge>) -> Result<DirectedHypergraph> {
        for e in &edges {
            ground.check_element(e.head)?;
            ground.check_subset(e.tails)?;
            if e.tails.is_empty() {
                return Err(Error::InvalidSetFunction("hyperedge with empty tail set".into()));
            }
            if e.tails.contains(e.head) {
                return Err(Error::InvalidSetFunction(format!(
                    "hyperedge head {} appears among its tails",
                    e.head
                )));
            }
            if e.weight.is_nan() || e.weight < 0.0 {
                return Err(Error::InvalidSetFunction(format!(
                    "hyperedge weight {} is negative or NaN",
                    e.weight
                )));
            }
        }
        Ok(DirectedHypergraph { ground, edges })
    }

    /// Convenience for plain digraphs: each `(tail, head, weight)` triple
    /// becomes a singleton-tail hyperedge.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize, f64)]) -> Result<DirectedHypergraph> {
        let ground = GroundSet::new(n)?;
        let edges = arcs
            .iter()
            .map(|&(u, v, w)| DirectedHyperedge { tails: Subset::from_elements(&[u]), head: v, weight: w })
            .collect();
        DirectedHypergraph::new(ground, edges)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

#[derive(Clone, Debug)]
pub struct CoverageItem {
    pub weight: f64,
    pub covered_by: Subset,
}

/// Payload of a [`SetFunctionOracle`].
#[derive(Clone, Debug)]
pub enum OracleKind {
    /// Weighted directed-hypergraph cut: `f(S) = Σ_{(U,v) ∈ δ(S)} w`.
    HypergraphCut(DirectedHypergraph),
    /// Explicit table of all `2^n` values.
    ExplicitTable(Vec<f64>),
    /// Modular: `f(S) = Σ_{i ∈ S} w_i`.
    Modular(Vec<f64>),
    /// Weighted coverage: `f(S) = Σ_{items hit by S} w`.
    Coverage(Vec<CoverageItem>),
}

/// A nonnegative set function `f : 2^X → R_+` accessed by value queries.
/// Immutable after construction; evaluation is pure and deterministic.
#[derive(Clone, Debug)]
pub struct SetFunctionOracle {
    ground: GroundSet,
    kind: OracleKind,
}

impl SetFunctionOracle {
    pub fn hypergraph_cut(graph: DirectedHypergraph) -> SetFunctionOracle {
        SetFunctionOracle { ground: graph.ground, kind: OracleKind::HypergraphCut(graph) }
    }

    pub fn explicit_table(n: usize, values: Vec<f64>) -> Result<SetFunctionOracle> {
        let ground = GroundSet::new(n)?;
        if n > MAX_EXHAUSTIVE {
            return Err(Error::ExactTooLarge { n, max: MAX_EXHAUSTIVE });
        }
        if values.len() != ground.subset_count() {
            return Err(Error::InvalidSetFunction(format!(
                "table has {} entries, expected 2^{} = {}",
                values.len(),
                n,
                ground.subset_count()
            )));
        }
        if let Some(s) = values.iter().position(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidSetFunction(format!(
                "f({:?}) = {} is negative or NaN",
                Subset(s as u32),
                values[s]
            )));
        }
        Ok(SetFunctionOracle { ground, kind: OracleKind::ExplicitTable(values) })
    }

    pub fn modular(weights: Vec<f64>) -> Result<SetFunctionOracle> {
        let ground = GroundSet::new(weights.len())?;
        if let Some(i) = weights.iter().position(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidSetFunction(format!(
                "modular weight {} for element {} is negative or NaN",
                weights[i], i
            )));
        }
        Ok(SetFunctionOracle { ground, kind: OracleKind::Modular(weights) })
    }

    pub fn coverage(n: usize, items: Vec<CoverageItem>) -> Result<SetFunctionOracle> {
        let ground = GroundSet::new(n)?;
        for it in &items {
            ground.check_subset(it.covered_by)?;
            if it.weight.is_nan() || it.weight < 0.0 {
                return Err(Error::InvalidSetFunction(format!(
                    "coverage item weight {} is negative or NaN",
                    it.weight
                )));
            }
        }
        Ok(SetFunctionOracle { ground, kind: OracleKind::Coverage(items) })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn is_cut_function(&self) -> bool {
        matches!(self.kind, OracleKind::HypergraphCut(_))
    }

    /// `f(S)`.
    pub fn eval(&self, s: Subset) -> Result<f64> {
        self.ground.check_subset(s)?;
        Ok(self.eval_unchecked(s))
    }

    pub(crate) fn eval_unchecked(&self, s: Subset) -> f64 {
        match &self.kind {
            OracleKind::HypergraphCut(g) => g
                .edges
                .iter()
                .filter(|e| !e.tails.intersect(s).is_empty() && !s.contains(e.head))
                .map(|e| e.weight)
                .sum(),
            OracleKind::ExplicitTable(t) => t[s.0 as usize],
            OracleKind::Modular(w) => s.members().map(|i| w[i]).sum(),
            OracleKind::Coverage(items) => items
                .iter()
                .filter(|it| !it.covered_by.intersect(s).is_empty())
                .map(|it| it.weight)
                .sum(),
        }
    }

    /// All `2^n` values indexed by mask. Requires `n <= 20`.
    pub fn value_table(&self) -> Result<Vec<f64>> {
        let n = self.n();
        if n > MAX_EXHAUSTIVE {
            return Err(Error::ExactTooLarge { n, max: MAX_EXHAUSTIVE });
        }
        Ok(self.ground.subsets().map(|s| self.eval_unchecked(s)).collect())
    }

    /// An upper bound on `max_S f(S)`, cheap to compute for every kind.
    pub fn value_upper_bound(&self) -> f64 {
        match &self.kind {
            OracleKind::HypergraphCut(g) => g.total_weight(),
            OracleKind::ExplicitTable(t) => t.iter().cloned().fold(0.0, f64::max),
            OracleKind::Modular(w) => w.iter().sum(),
            OracleKind::Coverage(items) => items.iter().map(|it| it.weight).sum(),
        }
    }
}

/// Witness of a submodularity violation: marginal of `i` grows when `j`
/// is added, i.e. `f(S+i+j) - f(S+i) - f(S+j) + f(S) > 0`.
#[derive(Clone, Debug)]
pub struct SubmodularityWitness {
    pub base: Subset,
    pub i: usize,
    pub j: usize,
    pub excess: f64,
}

#[derive(Clone, Debug)]
pub struct SubmodularityCheck {
    pub ok: bool,
    pub witness: Option<SubmodularityWitness>,
}

fn second_difference(table: &[f64], s: Subset, i: usize, j: usize) -> f64 {
    let si = s.with(i);
    let sj = s.with(j);
    let sij = si.with(j);
    table[sij.0 as usize] - table[si.0 as usize] - table[sj.0 as usize] + table[s.0 as usize]
}

/// Exhaustive submodularity check over all `(S, i, j)` triples with
/// `i, j ∉ S`, `i < j`. Requires `n <= 20`.
pub fn check_submodular(oracle: &SetFunctionOracle) -> Result<SubmodularityCheck> {
    let n = oracle.n();
    let table = oracle.value_table()?;
    const TOL: f64 = 1e-9;
    for i in 0..n {
        for j in (i + 1)..n {
            let outside = Subset::full(n).without(i).without(j);
            let mut s = 0u32;
            loop {
                let base = Subset(s);
                let excess = second_difference(&table, base, i, j);
                if excess > TOL {
                    return Ok(SubmodularityCheck {
                        ok: false,
                        witness: Some(SubmodularityWitness { base, i, j, excess }),
                    });
                }
                if s == outside.0 {
                    break;
                }
                // next subset of `outside`
                s = (s.wrapping_sub(outside.0)) & outside.0;
                if s == 0 {
                    break;
                }
            }
        }
    }
    Ok(SubmodularityCheck { ok: true, witness: None })
}

/// Seeded sampled check for ground sets too large to enumerate.
pub fn check_submodular_sampled(
    oracle: &SetFunctionOracle,
    trials: usize,
    seed: u64,
) -> Result<SubmodularityCheck> {
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const TOL: f64 = 1e-9;
    for _ in 0..trials {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let raw: u32 = rng.gen_range(0..1u32 << n);
        let base = Subset(raw).without(i).without(j);
        let excess = oracle.eval(base.with(i).with(j))? - oracle.eval(base.with(i))?
            - oracle.eval(base.with(j))?
            + oracle.eval(base)?;
        if excess > TOL {
            return Ok(SubmodularityCheck {
                ok: false,
                witness: Some(SubmodularityWitness { base, i, j, excess }),
            });
        }
    }
    Ok(SubmodularityCheck { ok: true, witness: None })
}

/// The 8-vertex weighted digraph on which the unconstrained annealing sweep
/// can get stuck at value 17 while the optimum `{4,5,6,7}` has value 35.
/// Integer weights, so every golden number below is exact in f64.
pub const TIGHT_EXAMPLE_ARCS: [(usize, usize, u32); 13] = [
    (7, 3, 8),
    (3, 7, 4),
    (4, 3, 1),
    (3, 4, 11),
    (5, 3, 3),
    (3, 5, 1),
    (6, 3, 4),
    (0, 6, 4),
    (4, 0, 12),
    (4, 2, 3),
    (2, 4, 1),
    (7, 1, 4),
    (1, 4, 4),
];

/// Build the tight-example fixture as a singleton-tail hypergraph cut oracle.
pub fn tight_example() -> SetFunctionOracle {
    let arcs: Vec<(usize, usize, f64)> =
        TIGHT_EXAMPLE_ARCS.iter().map(|&(u, v, w)| (u, v, w as f64)).collect();
    SetFunctionOracle::hypergraph_cut(
        DirectedHypergraph::from_arcs(8, &arcs).expect("fixture is well formed"),
    )
}

/// Kinds supported by [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    DigraphCut,
    Coverage,
}

impl std::str::FromStr for RandomKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<RandomKind> {
        match s {
            "digraph-cut" => Ok(RandomKind::DigraphCut),
            "coverage" => Ok(RandomKind::Coverage),
            other => Err(Error::UnsupportedKind(other.into())),
        }
    }
}

/// Seeded random nonnegative submodular instance. Identical arguments give a
/// bit-identical instance.
pub fn random_instance(
    kind: RandomKind,
    n: usize,
    density: f64,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<SetFunctionOracle> {
    GroundSet::new(n)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Precondition(format!("density {density} not in [0,1]")));
    }
    let (lo, hi) = weight_range;
    if !(lo >= 0.0 && hi >= lo) {
        return Err(Error::Precondition(format!("bad weight range [{lo},{hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw_weight = |rng: &mut ChaCha8Rng| if hi > lo { rng.gen_range(lo..hi) } else { lo };
    match kind {
        RandomKind::DigraphCut => {
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u == v {
                        continue;
                    }
                    let keep = rng.gen::<f64>() < density;
                    let w = draw_weight(&mut rng);
                    if keep {
                        arcs.push((u, v, w));
                    }
                }
            }
            Ok(SetFunctionOracle::hypergraph_cut(DirectedHypergraph::from_arcs(n, &arcs)?))
        }
        RandomKind::Coverage => {
            let item_count = (2 * n).max(1);
            let mut items = Vec::with_capacity(item_count);
            for _ in 0..item_count {
                let mut covered = 0u32;
                for e in 0..n {
                    if rng.gen::<f64>() < density {
                        covered |= 1 << e;
                    }
                }
                let w = draw_weight(&mut rng);
                if covered != 0 {
                    items.push(CoverageItem { weight: w, covered_by: Subset(covered) });
                }
            }
            SetFunctionOracle::coverage(n, items)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight_cut_by_hand(s: Subset) -> f64 {
        // Independent oracle: plain weighted directed-cut sum over the arc list.
        TIGHT_EXAMPLE_ARCS
            .iter()
            .filter(|&&(u, v, _)| s.contains(u) && !s.contains(v))
            .map(|&(_, _, w)| w as f64)
            .sum()
    }

    #[test]
    fn tight_example_golden_values() {
        let f = tight_example();
        assert_eq!(f.eval(Subset::from_elements(&[4, 5, 6, 7])).unwrap(), 35.0);
        assert_eq!(f.eval(Subset::EMPTY).unwrap(), 0.0);
        assert_eq!(f.eval(Subset::from_elements(&[1, 3, 5, 7])).unwrap(), 15.0);
        assert_eq!(TIGHT_EXAMPLE_ARCS.len(), 13);
        let total: u32 = TIGHT_EXAMPLE_ARCS.iter().map(|&(_, _, w)| w).sum();
        assert_eq!(total, 60);
    }

    #[test]
    fn tight_example_exhaustive_max_is_35() {
        let f = tight_example();
        let mut best = (f64::NEG_INFINITY, Subset::EMPTY);
        for s in f.ground().subsets() {
            let v = f.eval(s).unwrap();
            if v > best.0 {
                best = (v, s);
            }
        }
        assert_eq!(best.0, 35.0);
        assert_eq!(best.1, Subset::from_elements(&[4, 5, 6, 7]));
    }

    #[test]
    fn cut_matches_plain_directed_cut_on_all_subsets() {
        let f = tight_example();
        for s in f.ground().subsets() {
            assert_eq!(f.eval(s).unwrap(), tight_cut_by_hand(s));
        }
    }

    #[test]
    fn empty_set_cuts_nothing() {
        let f = random_instance(RandomKind::DigraphCut, 6, 0.5, (1.0, 5.0), 3).unwrap();
        assert_eq!(f.eval(Subset::EMPTY).unwrap(), 0.0);
    }

    #[test]
    fn eval_rejects_out_of_range_subsets() {
        let f = tight_example();
        assert!(matches!(
            f.eval(Subset(1 << 9)),
            Err(Error::SubsetOutOfRange { .. })
        ));
    }

    #[test]
    fn cut_and_coverage_instances_are_submodular() {
        let f = tight_example();
        assert!(check_submodular(&f).unwrap().ok);
        let g = random_instance(RandomKind::Coverage, 6, 0.5, (1.0, 5.0), 1).unwrap();
        assert!(check_submodular(&g).unwrap().ok);
    }

    #[test]
    fn and_table_is_rejected_with_witness() {
        // f = AND of two bits: supermodular.
        let f = SetFunctionOracle::explicit_table(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let check = check_submodular(&f).unwrap();
        assert!(!check.ok);
        let w = check.witness.unwrap();
        assert_eq!(w.base, Subset::EMPTY);
        assert_eq!((w.i, w.j), (0, 1));
    }

    #[test]
    fn random_instance_is_deterministic() {
        let a = random_instance(RandomKind::DigraphCut, 8, 0.4, (1.0, 10.0), 7).unwrap();
        let b = random_instance(RandomKind::DigraphCut, 8, 0.4, (1.0, 10.0), 7).unwrap();
        for s in a.ground().subsets() {
            assert_eq!(a.eval(s).unwrap(), b.eval(s).unwrap());
        }
    }

    #[test]
    fn single_vertex_digraph_is_identically_zero() {
        let f = random_instance(RandomKind::DigraphCut, 1, 0.9, (1.0, 10.0), 5).unwrap();
        assert_eq!(f.eval(Subset::EMPTY).unwrap(), 0.0);
        assert_eq!(f.eval(Subset(1)).unwrap(), 0.0);
    }

    #[test]
    fn generated_values_are_nonnegative() {
        for seed in 0..5 {
            for kind in [RandomKind::DigraphCut, RandomKind::Coverage] {
                let f = random_instance(kind, 7, 0.5, (0.5, 4.0), seed).unwrap();
                for s in f.ground().subsets() {
                    assert!(f.eval(s).unwrap() >= 0.0);
                }
            }
        }
    }

    #[test]
    fn sampled_submodularity_check() {
        let f = tight_example();
        assert!(check_submodular_sampled(&f, 2000, 1).unwrap().ok);
        let and = SetFunctionOracle::explicit_table(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(!check_submodular_sampled(&and, 2000, 1).unwrap().ok);
    }

    proptest::proptest! {
        // Singleton-tail hypergraph cut agrees with a plain weighted
        // directed-cut computation on every subset.
        #[test]
        fn cut_identity_on_random_digraphs(
            n in 2usize..8,
            arcs in proptest::collection::vec((0usize..8, 0usize..8, 1u32..20), 0..20),
        ) {
            let arcs: Vec<(usize, usize, f64)> = arcs
                .into_iter()
                .filter(|&(u, v, _)| u < n && v < n && u != v)
                .map(|(u, v, w)| (u, v, w as f64))
                .collect();
            let f = SetFunctionOracle::hypergraph_cut(
                DirectedHypergraph::from_arcs(n, &arcs).unwrap(),
            );
            for s in f.ground().subsets() {
                let plain: f64 = arcs
                    .iter()
                    .filter(|&&(u, v, _)| s.contains(u) && !s.contains(v))
                    .map(|&(_, _, w)| w)
                    .sum();
                proptest::prop_assert_eq!(f.eval(s).unwrap(), plain);
            }
        }
    }

    #[test]
    fn hyperedge_validation() {
        let ground = GroundSet::new(4).unwrap();
        let bad_head = DirectedHypergraph::new(
            ground,
            vec![DirectedHyperedge { tails: Subset::from_elements(&[0, 1]), head: 1, weight: 1.0 }],
        );
        assert!(bad_head.is_err());
        let empty_tail = DirectedHypergraph::new(
            ground,
            vec![DirectedHyperedge { tails: Subset::EMPTY, head: 1, weight: 1.0 }],
        );
        assert!(empty_tail.is_err());
    }
}
