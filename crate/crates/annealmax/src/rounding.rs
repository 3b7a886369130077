//! Lossless rounding of a convex combination of independent sets to a single
//! independent set: member sets are merged pairwise along elementary
//! exchange directions `e_i - e_j`. Restricted to such a segment `F` is
//! convex (the mixed partial of a submodular multilinear extension is
//! nonpositive), so greedily taking the better endpoint never loses value
//! and the final integral set satisfies `f(S) >= F(x)`.

use crate::error::{Error, Result};
use crate::matroid::{ConvexCombination, MatroidOracle};
use crate::multilinear::{Evaluator, Point};
use crate::setfn::{SetFunctionOracle, Subset};

/// One elementary edit applied while merging two member sets.
#[derive(Clone, Debug)]
pub struct ElementaryMove {
    /// True if the edit was applied to the accumulator (first) set.
    pub to_first: bool,
    pub added: Option<usize>,
    pub removed: Option<usize>,
}

/// Record of merging one incoming member set into the accumulator.
#[derive(Clone, Debug)]
pub struct MergeStep {
    /// Index (into the input combination) of a representative of the
    /// accumulated group.
    pub first_index: usize,
    /// Index of the incoming set.
    pub second_index: usize,
    pub moves: Vec<ElementaryMove>,
    pub f_before: f64,
    pub f_after: f64,
}

#[derive(Clone, Debug)]
pub struct RoundingOutcome {
    pub set: Subset,
    pub value: f64,
    pub steps: Vec<MergeStep>,
    /// `F` at the input point, for the `f(S) >= F(x)` guarantee.
    pub input_value: f64,
}

struct Merger<'a> {
    ev: &'a Evaluator<'a>,
    matroid: &'a MatroidOracle,
    /// Membership counts over all groups; the point is counts / total.
    counts: Vec<u32>,
    total: u32,
}

impl<'a> Merger<'a> {
    fn point(&self) -> Point {
        Point::from_raw(self.counts.iter().map(|&c| c as f64 / self.total as f64).collect())
    }

    fn value(&self) -> Result<f64> {
        self.ev.value(&self.point())
    }

    /// Merge `(first, u)` and `(second, w)` into a single set of weight
    /// `u + w`, never decreasing `F`.
    fn merge_pair(
        &mut self,
        mut first: Subset,
        u: u32,
        mut second: Subset,
        w: u32,
        moves: &mut Vec<ElementaryMove>,
    ) -> Result<Subset> {
        while first != second {
            if first.len() < second.len() {
                self.equalize(&mut first, u, &mut second, w, true, moves)?;
            } else if second.len() < first.len() {
                self.equalize(&mut second, w, &mut first, u, false, moves)?;
            } else {
                self.swap(&mut first, u, &mut second, w, moves)?;
            }
        }
        Ok(first)
    }

    /// `|small| < |large|`: pick `j ∈ large∖small` with `small + j`
    /// independent and move along `e_j` to the better endpoint (grow the
    /// small set or shrink the large one). `small_is_first` tracks which
    /// argument is the accumulator, for the move log.
    fn equalize(
        &mut self,
        small: &mut Subset,
        small_weight: u32,
        large: &mut Subset,
        large_weight: u32,
        small_is_first: bool,
        moves: &mut Vec<ElementaryMove>,
    ) -> Result<()> {
        let j = large
            .minus(*small)
            .members()
            .find(|&j| self.matroid.is_independent(small.with(j)))
            .ok_or(Error::NoFeasibleExchange { element: usize::MAX, set_index: usize::MAX })?;
        let before = self.value()?;
        // Grow endpoint: j joins the small set.
        self.counts[j] += small_weight;
        let grow = self.value()?;
        // Shrink endpoint: j leaves the large set.
        self.counts[j] -= small_weight + large_weight;
        let shrink = self.value()?;
        if grow >= shrink {
            self.counts[j] += small_weight + large_weight;
            *small = small.with(j);
            moves.push(ElementaryMove { to_first: small_is_first, added: Some(j), removed: None });
            debug_assert!(grow >= before - 1e-12);
        } else {
            *large = large.without(j);
            moves.push(ElementaryMove { to_first: !small_is_first, added: None, removed: Some(j) });
            debug_assert!(shrink >= before - 1e-12);
        }
        Ok(())
    }

    /// Equal sizes: strong exchange pair `(i, j)`, move along `e_i - e_j`
    /// to the better endpoint.
    fn swap(
        &mut self,
        first: &mut Subset,
        u: u32,
        second: &mut Subset,
        w: u32,
        moves: &mut Vec<ElementaryMove>,
    ) -> Result<()> {
        let i = first.minus(*second).members().next().expect("sets differ");
        let j = second
            .minus(*first)
            .members()
            .find(|&j| {
                self.matroid.is_independent(first.without(i).with(j))
                    && self.matroid.is_independent(second.without(j).with(i))
            })
            .ok_or(Error::NoFeasibleExchange { element: i, set_index: usize::MAX })?;
        #[cfg(debug_assertions)]
        {
            let mixed = self.ev.mixed_partial(&self.point(), i, j)?;
            debug_assert!(mixed <= 1e-12, "segment not convex: mixed partial {mixed}");
        }
        let before = self.value()?;
        // Endpoint A: first loses i, gains j.
        self.counts[i] -= u;
        self.counts[j] += u;
        let toward_a = self.value()?;
        // Endpoint B: second loses j, gains i.
        self.counts[i] += u + w;
        self.counts[j] -= u + w;
        let toward_b = self.value()?;
        let prefer_b = match toward_b.partial_cmp(&toward_a).expect("finite values") {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            // Tie: keep the lower-indexed element in the merged set.
            std::cmp::Ordering::Equal => i < j,
        };
        if prefer_b {
            *second = second.without(j).with(i);
            moves.push(ElementaryMove { to_first: false, added: Some(i), removed: Some(j) });
            debug_assert!(toward_b >= before - 1e-12);
        } else {
            self.counts[i] -= u + w;
            self.counts[j] += u + w;
            *first = first.without(i).with(j);
            moves.push(ElementaryMove { to_first: true, added: Some(j), removed: Some(i) });
            debug_assert!(toward_a >= before - 1e-12);
        }
        Ok(())
    }
}

/// Round `cc` to a single independent set with `f(S) >= F(x) - 1e-9`,
/// deterministically. The step log replays to the same result.
pub fn merge_round(
    oracle: &SetFunctionOracle,
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
) -> Result<RoundingOutcome> {
    let ev = Evaluator::auto(oracle)?;
    merge_round_with(&ev, matroid, cc)
}

pub fn merge_round_with(
    ev: &Evaluator,
    matroid: &MatroidOracle,
    cc: &ConvexCombination,
) -> Result<RoundingOutcome> {
    cc.validate(matroid)?;
    let n = cc.ground().n();
    let total = cc.n_sets() as u32;
    let mut counts = vec![0u32; n];
    for (i, &c) in cc.counts().iter().enumerate() {
        counts[i] = c;
    }
    let mut merger = Merger { ev, matroid, counts, total };
    let input_value = merger.value()?;

    // Group identical member sets, keeping a representative input index.
    let mut groups: Vec<(Subset, u32, usize)> = Vec::new();
    for (idx, &s) in cc.sets().iter().enumerate() {
        match groups.iter_mut().find(|(g, _, _)| *g == s) {
            Some((_, c, _)) => *c += 1,
            None => groups.push((s, 1, idx)),
        }
    }

    let mut steps = Vec::new();
    let (mut acc, mut acc_weight, acc_rep) = groups[0];
    for &(incoming, weight, rep) in &groups[1..] {
        let f_before = merger.value()?;
        let mut moves = Vec::new();
        acc = merger.merge_pair(acc, acc_weight, incoming, weight, &mut moves)?;
        acc_weight += weight;
        let f_after = merger.value()?;
        if f_after < f_before - 1e-12 {
            return Err(Error::Precondition(format!(
                "merge step decreased F: {f_before} -> {f_after}"
            )));
        }
        steps.push(MergeStep { first_index: acc_rep, second_index: rep, moves, f_before, f_after });
    }

    debug_assert_eq!(acc_weight, total);
    let value = ev.oracle().eval(acc)?;
    Ok(RoundingOutcome { set: acc, value, steps, input_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidOracle;
    use crate::setfn::{random_instance, DirectedHypergraph, GroundSet, RandomKind, SetFunctionOracle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_combination(
        matroid: &MatroidOracle,
        ground: GroundSet,
        n_sets: usize,
        rng: &mut ChaCha8Rng,
    ) -> ConvexCombination {
        let mut sets = Vec::with_capacity(n_sets);
        for _ in 0..n_sets {
            let mut s = Subset::EMPTY;
            for i in 0..ground.n() {
                if rng.gen::<f64>() < 0.4 && matroid.is_independent(s.with(i)) {
                    s = s.with(i);
                }
            }
            sets.push(s);
        }
        ConvexCombination::new(ground, sets, matroid).unwrap()
    }

    #[test]
    fn integral_combination_rounds_to_itself() {
        let f = crate::setfn::tight_example();
        let m = MatroidOracle::uniform(8, 3).unwrap();
        let s = Subset::from_elements(&[4, 7]);
        let cc = ConvexCombination::new(f.ground(), vec![s; 4], &m).unwrap();
        let out = merge_round(&f, &m, &cc).unwrap();
        assert_eq!(out.set, s);
        assert!((out.value - out.input_value).abs() < 1e-12);
        assert!(out.steps.iter().all(|st| st.moves.is_empty()));
    }

    #[test]
    fn single_edge_two_singletons_round_to_the_tail() {
        let f = SetFunctionOracle::hypergraph_cut(
            DirectedHypergraph::from_arcs(2, &[(0, 1, 1.0)]).unwrap(),
        );
        let m = MatroidOracle::uniform(2, 1).unwrap();
        let cc = ConvexCombination::new(
            f.ground(),
            vec![Subset(0b01), Subset(0b10)],
            &m,
        )
        .unwrap();
        let out = merge_round(&f, &m, &cc).unwrap();
        assert!((out.input_value - 0.25).abs() < 1e-12);
        assert_eq!(out.set, Subset(0b01));
        assert_eq!(out.value, 1.0);
    }

    #[test]
    fn rounding_never_loses_value_and_stays_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for seed in 0..40 {
            let n = 5 + (seed as usize % 5);
            let kind = if seed % 2 == 0 { RandomKind::DigraphCut } else { RandomKind::Coverage };
            let f = random_instance(kind, n, 0.5, (0.5, 4.0), seed).unwrap();
            let m = if seed % 3 == 0 {
                MatroidOracle::uniform(n, 1 + (seed as usize % 3)).unwrap()
            } else {
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
            };
            let cc = random_combination(&m, f.ground(), 6, &mut rng);
            let out = merge_round(&f, &m, &cc).unwrap();
            assert!(m.is_independent(out.set));
            assert!(
                out.value >= out.input_value - 1e-9,
                "seed {seed}: f(S) = {} < F(x) = {}",
                out.value,
                out.input_value
            );
            for st in &out.steps {
                assert!(st.f_after >= st.f_before - 1e-12);
            }
        }
    }

    #[test]
    fn rounding_is_deterministic() {
        let f = crate::setfn::tight_example();
        let m = MatroidOracle::uniform(8, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cc = random_combination(&m, f.ground(), 8, &mut rng);
        let a = merge_round(&f, &m, &cc).unwrap();
        let b = merge_round(&f, &m, &cc).unwrap();
        assert_eq!(a.set, b.set);
        assert_eq!(a.steps.len(), b.steps.len());
    }
}
