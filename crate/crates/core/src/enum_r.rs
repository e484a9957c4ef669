//! Untwisted trees on any number of branches, and all trees (twisted or not)
//! with a given conductor.
//!
//! For `r >= 3` and a pivot `t`, every tree of `Cond(c)` splits into a prefix
//! and a suffix tree at `t` or at `t - 1` such that one of the two parts keeps
//! the conductor of its branches. The four sets below cover those cases:
//! joining at `t` or `t - 1`, with the far side either intact or stretched by
//! the joining level.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use itertools::Itertools;

use crate::enum2::cond2;
use crate::multiplicity::{compatibility, MultiplicitySequence};
use crate::numerical_enum::CondTable;
use crate::tree::{ConductorVector, TreeMatrix, UntwistedTree};

/// Pivot used by [`TreeEnumerator::cond`]: `ceil(r / 2)`.
pub fn choose_pivot(r: usize) -> usize {
    assert!(r >= 3, "pivot needs at least three branches");
    r.div_ceil(2)
}

/// A run of consecutive branches: a tree, or a single sequence.
#[derive(Clone, Copy)]
struct Part<'a> {
    seqs: &'a [MultiplicitySequence],
    gluing: &'a [u32],
}

impl<'a> Part<'a> {
    fn first(&self) -> &'a MultiplicitySequence {
        &self.seqs[0]
    }

    fn last(&self) -> &'a MultiplicitySequence {
        &self.seqs[self.seqs.len() - 1]
    }

    /// `*p` seen from the right end: `max(l(last), last gluing level)`.
    fn right_depth(&self) -> u32 {
        self.last()
            .len()
            .max(self.gluing.last().copied().unwrap_or(0))
    }

    /// `p*` seen from the left end: `max(l(first), first gluing level)`.
    fn left_depth(&self) -> u32 {
        self.first()
            .len()
            .max(self.gluing.first().copied().unwrap_or(0))
    }
}

fn join(left: Part<'_>, level: u32, right: Part<'_>) -> UntwistedTree {
    let mut seqs = Vec::with_capacity(left.seqs.len() + right.seqs.len());
    seqs.extend_from_slice(left.seqs);
    seqs.extend_from_slice(right.seqs);
    let mut gluing = Vec::with_capacity(seqs.len() - 1);
    gluing.extend_from_slice(left.gluing);
    gluing.push(level);
    gluing.extend_from_slice(right.gluing);
    UntwistedTree::from_parts(seqs, gluing)
}

/// `Cond*` for one branch or `Cond` for several.
enum Parts {
    Single(Arc<[MultiplicitySequence]>),
    Trees(Arc<[UntwistedTree]>),
}

impl Parts {
    fn iter(&self) -> Box<dyn Iterator<Item = Part<'_>> + '_> {
        match self {
            Parts::Single(seqs) => Box::new(seqs.iter().map(|m| Part {
                seqs: std::slice::from_ref(m),
                gluing: &[],
            })),
            Parts::Trees(trees) => Box::new(trees.iter().map(|t| Part {
                seqs: t.sequences(),
                gluing: t.gluing(),
            })),
        }
    }
}

/// Memoizing enumerator for `Cond(c)` and its twisted closure.
#[derive(Debug, Default)]
pub struct TreeEnumerator {
    numerical: CondTable,
    cache: RwLock<HashMap<Vec<u32>, Arc<[UntwistedTree]>>>,
}

impl TreeEnumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn numerical(&self) -> &CondTable {
        &self.numerical
    }

    /// `Cond(c)` for `c` with at least two components, sorted.
    pub fn cond(&self, c: &ConductorVector) -> Arc<[UntwistedTree]> {
        assert!(c.dim() >= 2, "trees need at least two branches");
        self.cond_slice(c.as_slice())
    }

    fn cond_slice(&self, c: &[u32]) -> Arc<[UntwistedTree]> {
        if let Some(hit) = self.cache.read().expect("cache lock").get(c) {
            return Arc::clone(hit);
        }
        let fresh: Arc<[UntwistedTree]> = if c.len() == 2 {
            cond2(&self.numerical, &conductor(c)).into()
        } else {
            self.union_at(c, choose_pivot(c.len())).into()
        };
        let mut cache = self.cache.write().expect("cache lock");
        Arc::clone(cache.entry(c.to_vec()).or_insert(fresh))
    }

    fn parts(&self, c: &[u32]) -> Parts {
        if c.len() == 1 {
            Parts::Single(self.numerical.star(c[0]))
        } else {
            Parts::Trees(self.cond_slice(c))
        }
    }

    /// Joins at `split` (branches `..split` left) with
    /// `1 <= p <= min(*p, p*, Comp)`.
    fn join_free(&self, c: &[u32], split: usize) -> Vec<UntwistedTree> {
        let lefts = self.parts(&c[..split]);
        let rights = self.parts(&c[split..]);
        let mut out = Vec::new();
        for left in lefts.iter() {
            for right in rights.iter() {
                let bound = compatibility(left.last(), right.first())
                    .min_with(left.right_depth().min(right.left_depth()));
                for level in 1..=bound {
                    out.push(join(left, level, right));
                }
            }
        }
        out
    }

    /// Joins at `split` with the first right branch stretched from conductor
    /// `k < c[split]`: `p = p* + c[split] - k <= min(*p, Comp)`.
    fn join_stretch_right(&self, c: &[u32], split: usize) -> Vec<UntwistedTree> {
        let lefts = self.parts(&c[..split]);
        let mut out = Vec::new();
        for k in 1..c[split] {
            let mut shrunk = c[split..].to_vec();
            shrunk[0] = k;
            let rights = self.parts(&shrunk);
            for right in rights.iter() {
                let level = right.left_depth() + c[split] - k;
                for left in lefts.iter() {
                    if level <= left.right_depth()
                        && compatibility(left.last(), right.first()).admits(level)
                    {
                        out.push(join(left, level, right));
                    }
                }
            }
        }
        out
    }

    /// Joins at `split` with the last left branch stretched from conductor
    /// `k < c[split - 1]`: `p = *p + c[split - 1] - k <= min(p*, Comp)`.
    fn join_stretch_left(&self, c: &[u32], split: usize) -> Vec<UntwistedTree> {
        let rights = self.parts(&c[split..]);
        let mut out = Vec::new();
        for k in 1..c[split - 1] {
            let mut shrunk = c[..split].to_vec();
            shrunk[split - 1] = k;
            let lefts = self.parts(&shrunk);
            for left in lefts.iter() {
                let level = left.right_depth() + c[split - 1] - k;
                for right in rights.iter() {
                    if level <= right.left_depth()
                        && compatibility(left.last(), right.first()).admits(level)
                    {
                        out.push(join(left, level, right));
                    }
                }
            }
        }
        out
    }

    /// Prefix on branches `1..=t` keeps its conductor, and so does the suffix.
    pub fn set_s11(&self, c: &ConductorVector, t: usize) -> Vec<UntwistedTree> {
        check_pivot(c, t);
        self.join_free(c.as_slice(), t)
    }

    /// Prefix on branches `1..=t` keeps its conductor; branch `t + 1` is
    /// stretched by the join.
    pub fn set_s12_general(&self, c: &ConductorVector, t: usize) -> Vec<UntwistedTree> {
        check_pivot(c, t);
        self.join_stretch_right(c.as_slice(), t)
    }

    /// Suffix on branches `t..=r` keeps its conductor, and so does the prefix.
    pub fn set_s21(&self, c: &ConductorVector, t: usize) -> Vec<UntwistedTree> {
        check_pivot(c, t);
        self.join_free(c.as_slice(), t - 1)
    }

    /// Suffix on branches `t..=r` keeps its conductor; branch `t - 1` is
    /// stretched by the join.
    pub fn set_s22_general(&self, c: &ConductorVector, t: usize) -> Vec<UntwistedTree> {
        check_pivot(c, t);
        self.join_stretch_left(c.as_slice(), t - 1)
    }

    fn union_at(&self, c: &[u32], t: usize) -> Vec<UntwistedTree> {
        let mut all = BTreeSet::new();
        all.extend(self.join_free(c, t));
        all.extend(self.join_stretch_right(c, t));
        all.extend(self.join_free(c, t - 1));
        all.extend(self.join_stretch_left(c, t - 1));
        all.into_iter().collect()
    }

    /// Union of the four sets at an explicit pivot `t ∈ 2..=r-1`. Sub-problems
    /// still use the default pivot.
    pub fn cond_with_pivot(&self, c: &ConductorVector, t: usize) -> Vec<UntwistedTree> {
        check_pivot(c, t);
        self.union_at(c.as_slice(), t)
    }

    /// Every multiplicity tree with conductor `c`, twisted or not, sorted by
    /// canonical key.
    pub fn cond_bar(&self, c: &ConductorVector) -> Vec<TreeMatrix> {
        let r = c.dim();
        assert!(r >= 2, "trees need at least two branches");
        let mut all = BTreeSet::new();
        for sigma in (0..r).permutations(r) {
            // T in Cond(c') with c'[i] = c[sigma[i]]; moving branch i to
            // sigma[i] yields conductor c
            let permuted: Vec<u32> = sigma.iter().map(|&s| c.as_slice()[s]).collect();
            for tree in self.cond_slice(&permuted).iter() {
                let moved = tree
                    .matrix_form()
                    .permute(&sigma)
                    .expect("valid permutation");
                all.insert(moved);
            }
        }
        all.into_iter().collect()
    }

    /// `Cond(c)` for any `r >= 1`: sequences when `r = 1`, trees otherwise.
    pub fn cond_any(&self, c: &[u32]) -> Enumeration {
        match c.len() {
            0 => Enumeration::Sequences(Vec::new()),
            1 => Enumeration::Sequences(self.numerical.cond(c[0]).to_vec()),
            _ => Enumeration::Trees(self.cond_slice(c).to_vec()),
        }
    }
}

/// Result of [`TreeEnumerator::cond_any`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    Sequences(Vec<MultiplicitySequence>),
    Trees(Vec<UntwistedTree>),
}

impl Enumeration {
    pub fn len(&self) -> usize {
        match self {
            Enumeration::Sequences(v) => v.len(),
            Enumeration::Trees(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn conductor(c: &[u32]) -> ConductorVector {
    ConductorVector::new(c.to_vec()).expect("positive components")
}

fn check_pivot(c: &ConductorVector, t: usize) {
    assert!(
        c.dim() >= 3 && (2..c.dim()).contains(&t),
        "pivot {t} out of range for {} branches",
        c.dim()
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(c: &[u32]) -> ConductorVector {
        ConductorVector::new(c.to_vec()).unwrap()
    }

    fn tree(seqs: &[&[u32]], p: &[u32]) -> UntwistedTree {
        UntwistedTree::new(
            seqs.iter()
                .map(|s| MultiplicitySequence::new(s.to_vec()).unwrap())
                .collect(),
            p.to_vec(),
        )
        .unwrap()
    }

    fn sorted(mut v: Vec<UntwistedTree>) -> Vec<UntwistedTree> {
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn pivots() {
        assert_eq!(choose_pivot(3), 2);
        assert_eq!(choose_pivot(4), 2);
        assert_eq!(choose_pivot(5), 3);
    }

    fn cond_3_2_4_trees() -> [UntwistedTree; 8] {
        [
            tree(&[&[3], &[2], &[2, 2]], &[1, 1]),
            tree(&[&[3], &[2], &[4]], &[1, 1]),
            tree(&[&[2], &[1], &[2, 2]], &[2, 1]),
            tree(&[&[2], &[1], &[2, 2]], &[2, 2]),
            tree(&[&[2], &[1], &[4]], &[2, 1]),
            tree(&[&[2], &[1], &[3]], &[2, 2]),
            tree(&[&[3], &[1], &[2, 2]], &[1, 2]),
            tree(&[&[3], &[1], &[3]], &[1, 2]),
        ]
    }

    #[test]
    fn cond_3_2_4_by_set() {
        let e = TreeEnumerator::new();
        let c = cv(&[3, 2, 4]);
        let t = cond_3_2_4_trees();
        assert_eq!(sorted(e.set_s11(&c, 2)), sorted(t[..5].to_vec()));
        assert_eq!(e.set_s12_general(&c, 2), vec![t[5].clone()]);
        assert_eq!(
            sorted(e.set_s21(&c, 2)),
            sorted(vec![t[0].clone(), t[1].clone(), t[6].clone(), t[7].clone()])
        );
        assert_eq!(
            sorted(e.set_s22_general(&c, 2)),
            sorted(vec![t[3].clone(), t[5].clone()])
        );
        assert_eq!(&*e.cond(&c), sorted(t.to_vec()).as_slice());
    }

    #[test]
    fn unit_conductor() {
        let e = TreeEnumerator::new();
        let c = cv(&[1, 1, 1]);
        let only = vec![tree(&[&[1], &[1], &[1]], &[1, 1])];
        assert_eq!(e.set_s11(&c, 2), only);
        assert_eq!(e.set_s21(&c, 2), only);
        assert!(e.set_s12_general(&c, 2).is_empty());
        assert!(e.set_s22_general(&c, 2).is_empty());
        assert_eq!(e.cond(&c).to_vec(), only);
    }

    #[test]
    fn table_entries() {
        let e = TreeEnumerator::new();
        assert_eq!(e.cond(&cv(&[4, 4, 4])).len(), 50);
        assert_eq!(e.cond(&cv(&[1, 2, 3])).len(), 2);
        assert_eq!(e.cond_bar(&cv(&[3, 2, 4])).len(), 10);
        assert_eq!(e.cond_bar(&cv(&[2, 2, 2])).len(), 5);
    }

    #[test]
    fn cond_bar_adds_the_twisted_trees() {
        let e = TreeEnumerator::new();
        let c = cv(&[3, 2, 4]);
        let bar = e.cond_bar(&c);
        let twisted: Vec<_> = bar.iter().filter(|t| !t.is_untwisted()).collect();
        assert_eq!(twisted.len(), 2);
        for t in &twisted {
            assert_eq!(t.rows(), vec![vec![1, 2], vec![1], vec![]]);
            assert_eq!(t.conductor(), c);
        }
        let untwisted: Vec<_> = bar.iter().filter_map(TreeMatrix::to_untwisted).collect();
        assert_eq!(sorted(untwisted), e.cond(&c).to_vec());
    }

    #[test]
    fn cond_bar_in_two_dimensions_is_untwisted() {
        let e = TreeEnumerator::new();
        let c = cv(&[4, 5]);
        let bar = e.cond_bar(&c);
        let direct: Vec<_> = e.cond(&c).iter().map(UntwistedTree::matrix_form).collect();
        let mut direct = direct;
        direct.sort();
        assert_eq!(bar, direct);
    }

    #[test]
    fn r_equals_one_dispatches_to_sequences() {
        let e = TreeEnumerator::new();
        assert_eq!(e.cond_any(&[4]).len(), 2);
        assert!(matches!(e.cond_any(&[5]), Enumeration::Sequences(_)));
        assert!(matches!(e.cond_any(&[4, 5]), Enumeration::Trees(_)));
    }

    #[test]
    fn general_sets_at_small_conductors_match_brute_force() {
        use crate::oracle::brute_force_cond;
        let e = TreeEnumerator::new();
        for c in [[3, 2, 2], [2, 1, 2]] {
            let c = cv(&c);
            assert_eq!(e.cond(&c).to_vec(), brute_force_cond(&c));
        }
    }
}
