//! Matroid independence oracles, the exchange-element query of the
//! constrained algorithm, and the explicit convex-combination representation
//! `x = (1/N) Σ 1_{I_ℓ}` whose membership counts realize the point exactly.

use crate::error::{Error, Result};
use crate::multilinear::Point;
use crate::setfn::{GroundSet, Subset};
use std::fmt;
use std::sync::Arc;

type IndependencePredicate = Arc<dyn Fn(Subset) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum MatroidKind {
    /// Independent iff `|S| <= k`.
    Uniform { k: usize },
    /// Independent iff `|S ∩ block_j| <= caps_j` for every block. Elements
    /// outside every block are unconstrained.
    Partition { blocks: Vec<Subset>, caps: Vec<usize> },
    /// Arbitrary predicate adapter for tests; no performance guarantee and
    /// no structural validation beyond `I(∅) = true`.
    Custom(IndependencePredicate),
}

impl fmt::Debug for MatroidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatroidKind::Uniform { k } => write!(f, "Uniform {{ k: {k} }}"),
            MatroidKind::Partition { blocks, caps } => {
                write!(f, "Partition {{ blocks: {blocks:?}, caps: {caps:?} }}")
            }
            MatroidKind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MatroidOracle {
    ground: GroundSet,
    kind: MatroidKind,
}

impl MatroidOracle {
    pub fn uniform(n: usize, k: usize) -> Result<MatroidOracle> {
        let ground = GroundSet::new(n)?;
        Ok(MatroidOracle { ground, kind: MatroidKind::Uniform { k } })
    }

    pub fn partition(n: usize, blocks: Vec<Subset>, caps: Vec<usize>) -> Result<MatroidOracle> {
        let ground = GroundSet::new(n)?;
        if blocks.len() != caps.len() {
            return Err(Error::InvalidMatroid(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                caps.len()
            )));
        }
        let mut seen = Subset::EMPTY;
        for b in &blocks {
            ground.check_subset(*b)?;
            if !seen.intersect(*b).is_empty() {
                return Err(Error::InvalidMatroid("partition blocks overlap".into()));
            }
            seen = seen.union(*b);
        }
        Ok(MatroidOracle { ground, kind: MatroidKind::Partition { blocks, caps } })
    }

    pub fn custom<F>(n: usize, pred: F) -> Result<MatroidOracle>
    where
        F: Fn(Subset) -> bool + Send + Sync + 'static,
    {
        let ground = GroundSet::new(n)?;
        if !pred(Subset::EMPTY) {
            return Err(Error::InvalidMatroid("empty set must be independent".into()));
        }
        Ok(MatroidOracle { ground, kind: MatroidKind::Custom(Arc::new(pred)) })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn is_independent(&self, s: Subset) -> bool {
        if !s.is_subset_of(self.ground.full()) {
            return false;
        }
        match &self.kind {
            MatroidKind::Uniform { k } => s.len() <= *k,
            MatroidKind::Partition { blocks, caps } => blocks
                .iter()
                .zip(caps)
                .all(|(b, &cap)| s.intersect(*b).len() <= cap),
            MatroidKind::Custom(pred) => pred(s),
        }
    }

    /// Is `S` a base, i.e. independent and inclusion-maximal?
    pub fn is_base(&self, s: Subset) -> bool {
        if !self.is_independent(s) {
            return false;
        }
        (0..self.n()).all(|i| s.contains(i) || !self.is_independent(s.with(i)))
    }

    /// Upper bound on the rank, used to size enumerations.
    pub fn rank_upper_bound(&self) -> usize {
        match &self.kind {
            MatroidKind::Uniform { k } => (*k).min(self.n()),
            MatroidKind::Partition { blocks, caps } => {
                let covered: usize = blocks.iter().zip(caps).map(|(b, &c)| c.min(b.len())).sum();
                let free = self.n() - blocks.iter().map(|b| b.len()).sum::<usize>();
                (covered + free).min(self.n())
            }
            MatroidKind::Custom(_) => self.n(),
        }
    }
}

/// The formal element of the exchange query: either a ground-set element to
/// remove, or the distinguished empty slot (whose gradient value is zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeChoice {
    Empty,
    Element(usize),
}

impl ExchangeChoice {
    pub fn grad_value(self, grad: &[f64]) -> f64 {
        match self {
            ExchangeChoice::Empty => 0.0,
            ExchangeChoice::Element(j) => grad[j],
        }
    }
}

/// `b_ℓ(i)`: among all `j ∈ I_ℓ ∪ {Empty}` with `I_ℓ - j + i` independent,
/// the one minimizing the gradient value (Empty counts as 0 and is feasible
/// only when `I_ℓ + i` is independent). Ties break toward Empty first, then
/// the lowest element index.
pub fn exchange_candidate(
    matroid: &MatroidOracle,
    i_l: Subset,
    i: usize,
    grad: &[f64],
) -> Result<ExchangeChoice> {
    matroid.ground().check_element(i)?;
    if i_l.contains(i) {
        return Err(Error::Precondition(format!("element {i} already in the set")));
    }
    let mut best: Option<(f64, ExchangeChoice)> = None;
    if matroid.is_independent(i_l.with(i)) {
        best = Some((0.0, ExchangeChoice::Empty));
    }
    for j in i_l.members() {
        if matroid.is_independent(i_l.without(j).with(i)) {
            let v = grad[j];
            let better = match best {
                None => true,
                Some((bv, _)) => v < bv,
            };
            if better {
                best = Some((v, ExchangeChoice::Element(j)));
            }
        }
    }
    best.map(|(_, c)| c).ok_or(Error::NoFeasibleExchange { element: i, set_index: usize::MAX })
}

/// The Algorithm-2 state: `N` independent sets whose membership frequencies
/// realize the fractional point `x = (1/N) Σ 1_{I_ℓ}` exactly.
#[derive(Clone, Debug)]
pub struct ConvexCombination {
    ground: GroundSet,
    sets: Vec<Subset>,
    counts: Vec<u32>,
}

impl ConvexCombination {
    pub fn new(ground: GroundSet, sets: Vec<Subset>, matroid: &MatroidOracle) -> Result<ConvexCombination> {
        if sets.is_empty() {
            return Err(Error::Precondition("combination needs at least one set".into()));
        }
        for (set_index, s) in sets.iter().enumerate() {
            ground.check_subset(*s)?;
            if !matroid.is_independent(*s) {
                return Err(Error::DependentMember { set_index });
            }
        }
        let mut counts = vec![0u32; ground.n()];
        for s in &sets {
            for i in s.members() {
                counts[i] += 1;
            }
        }
        Ok(ConvexCombination { ground, sets, counts })
    }

    pub fn all_empty(ground: GroundSet, n_sets: usize) -> ConvexCombination {
        ConvexCombination {
            ground,
            sets: vec![Subset::EMPTY; n_sets],
            counts: vec![0; ground.n()],
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn set(&self, l: usize) -> Subset {
        self.sets[l]
    }

    /// Membership count of element `i` (so `x_i = count_i / N` exactly).
    pub fn count(&self, i: usize) -> u32 {
        self.counts[i]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn replace_set(&mut self, l: usize, new: Subset) {
        let old = self.sets[l];
        for i in old.minus(new).members() {
            self.counts[i] -= 1;
        }
        for i in new.minus(old).members() {
            self.counts[i] += 1;
        }
        self.sets[l] = new;
    }

    /// The induced fractional point.
    pub fn point(&self) -> Point {
        let n_sets = self.n_sets() as f64;
        Point::from_raw(self.counts.iter().map(|&c| c as f64 / n_sets).collect())
    }

    /// Every member independent and cached counts consistent with the sets.
    pub fn validate(&self, matroid: &MatroidOracle) -> Result<()> {
        for (set_index, s) in self.sets.iter().enumerate() {
            if !matroid.is_independent(*s) {
                return Err(Error::DependentMember { set_index });
            }
        }
        let mut counts = vec![0u32; self.ground.n()];
        for s in &self.sets {
            for i in s.members() {
                counts[i] += 1;
            }
        }
        if counts != self.counts {
            return Err(Error::Precondition("combination counts out of sync".into()));
        }
        Ok(())
    }
}

/// `x = (1/N) Σ 1_{I_ℓ}` as a point.
pub fn combination_point(cc: &ConvexCombination) -> Point {
    cc.point()
}

/// Membership in `P_t(M) = P(M) ∩ [0,t]^X` for a combination of independent
/// sets reduces to the box: every coordinate at most `t` (tolerance 1e-12).
pub fn in_boxed_polytope(cc: &ConvexCombination, t: f64) -> bool {
    let n_sets = cc.n_sets() as f64;
    cc.counts().iter().all(|&c| c as f64 / n_sets <= t + 1e-12)
}
