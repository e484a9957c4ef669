//! Multiplicity trees of local Arf good semigroups.
//!
//! A tree on `r >= 2` branches is given by one multiplicity sequence per
//! branch plus the gluing levels `p(i, j)`: branches `i` and `j` share their
//! nodes on levels `1..=p(i, j)`. Untwisted trees only need the levels of
//! consecutive branches; the level of any other pair is the minimum over the
//! consecutive levels between them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::multiplicity::{compatibility, MultiplicitySequence};
use crate::oracle::BoxSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least two branches, got {0}")]
    TooFewBranches(usize),
    #[error("expected {expected} gluing levels, got {actual}")]
    GluingShape { expected: usize, actual: usize },
    #[error("gluing level of branches {i} and {j} must be positive")]
    ZeroLevel { i: usize, j: usize },
    #[error("branches {i} and {j} glued at level {level} beyond their compatibility")]
    Incompatible { i: usize, j: usize, level: u32 },
    #[error("gluing levels of branches {i}, {j}, {k} do not form a tree")]
    NotUltrametric { i: usize, j: usize, k: usize },
    #[error("permutation does not match the {0} branches")]
    BadPermutation(usize),
    #[error("box {bound:?} does not exceed the conductor {conductor:?}")]
    BoxTooSmall {
        bound: Vec<u32>,
        conductor: Vec<u32>,
    },
    #[error("invalid conductor vector: {0}")]
    BadConductor(String),
}

/// A conductor in `ℕ^r` with every component at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConductorVector(Vec<u32>);

impl ConductorVector {
    pub fn new(components: Vec<u32>) -> Result<Self, TreeError> {
        if components.is_empty() {
            return Err(TreeError::BadConductor("empty".into()));
        }
        if components.contains(&0) {
            return Err(TreeError::BadConductor("zero component".into()));
        }
        Ok(Self(components))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Display for ConductorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Parses the comma-separated form `3,2,4`, optionally parenthesized.
impl FromStr for ConductorVector {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let components = s
            .split(',')
            .map(|tok| {
                tok.parse::<u32>().map_err(|_| {
                    TreeError::BadConductor(format!("{tok:?} is not a natural number"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(components)
    }
}

pub(crate) fn write_tuple(f: &mut impl fmt::Write, values: &[u32]) -> fmt::Result {
    f.write_char('(')?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{v}")?;
    }
    f.write_char(')')
}

/// An untwisted tree `T_E = (p_1, ..., p_{r-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UntwistedTree {
    seqs: Vec<MultiplicitySequence>,
    gluing: Vec<u32>,
}

impl UntwistedTree {
    pub fn new(seqs: Vec<MultiplicitySequence>, gluing: Vec<u32>) -> Result<Self, TreeError> {
        if seqs.len() < 2 {
            return Err(TreeError::TooFewBranches(seqs.len()));
        }
        if gluing.len() != seqs.len() - 1 {
            return Err(TreeError::GluingShape {
                expected: seqs.len() - 1,
                actual: gluing.len(),
            });
        }
        for (i, &level) in gluing.iter().enumerate() {
            if level == 0 {
                return Err(TreeError::ZeroLevel { i: i + 1, j: i + 2 });
            }
            if !compatibility(&seqs[i], &seqs[i + 1]).admits(level) {
                return Err(TreeError::Incompatible {
                    i: i + 1,
                    j: i + 2,
                    level,
                });
            }
        }
        Ok(Self { seqs, gluing })
    }

    /// Caller guarantees the invariants checked by [`UntwistedTree::new`].
    pub(crate) fn from_parts(seqs: Vec<MultiplicitySequence>, gluing: Vec<u32>) -> Self {
        debug_assert!(Self::new(seqs.clone(), gluing.clone()).is_ok());
        Self { seqs, gluing }
    }

    pub fn sequences(&self) -> &[MultiplicitySequence] {
        &self.seqs
    }

    /// Consecutive gluing levels `p_1, ..., p_{r-1}`.
    pub fn gluing(&self) -> &[u32] {
        &self.gluing
    }

    pub fn branches(&self) -> usize {
        self.seqs.len()
    }

    /// For each branch, the last level before it becomes a lone chain of 1s:
    /// `max(l(M_i), p_{i-1}, p_i)`.
    pub fn depths(&self) -> Vec<u32> {
        (0..self.seqs.len())
            .map(|i| {
                let left = if i > 0 { self.gluing[i - 1] } else { 0 };
                let right = self.gluing.get(i).copied().unwrap_or(0);
                self.seqs[i].len().max(left).max(right)
            })
            .collect()
    }

    pub fn conductor(&self) -> ConductorVector {
        let c = self
            .seqs
            .iter()
            .zip(self.depths())
            .map(|(m, depth)| m.prefix_sum(depth))
            .collect();
        ConductorVector(c)
    }

    pub fn matrix_form(&self) -> TreeMatrix {
        let r = self.seqs.len();
        let mut levels = Vec::with_capacity(r * (r - 1) / 2);
        for i in 0..r {
            let mut running = u32::MAX;
            for j in i + 1..r {
                running = running.min(self.gluing[j - 1]);
                levels.push(running);
            }
        }
        TreeMatrix {
            seqs: self.seqs.clone(),
            levels,
        }
    }

    /// The same tree read from the last branch to the first.
    pub fn reversed(&self) -> Self {
        let mut seqs = self.seqs.clone();
        seqs.reverse();
        let mut gluing = self.gluing.clone();
        gluing.reverse();
        Self { seqs, gluing }
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        encode_key(&self.seqs, &self.gluing)
    }
}

impl fmt::Display for UntwistedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sequences(f, &self.seqs)?;
        f.write_str(" p=")?;
        write_tuple(f, &self.gluing)?;
        write!(f, " c={}", self.conductor())
    }
}

fn write_sequences(f: &mut fmt::Formatter<'_>, seqs: &[MultiplicitySequence]) -> fmt::Result {
    f.write_str("E={")?;
    for (i, m) in seqs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{m}")?;
    }
    f.write_str("}")
}

/// Sequence entries each closed by a zero word, then the levels; all words
/// big-endian, so byte order matches the derived order for equal `r`.
fn encode_key(seqs: &[MultiplicitySequence], levels: &[u32]) -> Vec<u8> {
    let mut key = Vec::new();
    for m in seqs {
        for &e in m.entries() {
            key.extend_from_slice(&e.to_be_bytes());
        }
        key.extend_from_slice(&0u32.to_be_bytes());
    }
    for &p in levels {
        key.extend_from_slice(&p.to_be_bytes());
    }
    key
}

/// A general, possibly twisted, tree with its full gluing matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeMatrix {
    seqs: Vec<MultiplicitySequence>,
    /// Strict upper triangle, row-major: `p(0,1), p(0,2), ..., p(r-2,r-1)`.
    levels: Vec<u32>,
}

impl TreeMatrix {
    /// `rows[i]` lists `p(i, j)` for `j > i` (0-based), so the last row is
    /// empty and may be omitted.
    pub fn new(seqs: Vec<MultiplicitySequence>, rows: Vec<Vec<u32>>) -> Result<Self, TreeError> {
        let r = seqs.len();
        if r < 2 {
            return Err(TreeError::TooFewBranches(r));
        }
        let mut rows = rows;
        if rows.len() == r - 1 {
            rows.push(Vec::new());
        }
        let shape_ok = rows.len() == r
            && rows
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == r - 1 - i);
        if !shape_ok {
            return Err(TreeError::GluingShape {
                expected: r * (r - 1) / 2,
                actual: rows.iter().map(Vec::len).sum(),
            });
        }
        let tree = Self {
            seqs,
            levels: rows.into_iter().flatten().collect(),
        };
        tree.validate()?;
        Ok(tree)
    }

    fn validate(&self) -> Result<(), TreeError> {
        let r = self.seqs.len();
        for i in 0..r {
            for j in i + 1..r {
                let level = self.level(i, j);
                if level == 0 {
                    return Err(TreeError::ZeroLevel { i: i + 1, j: j + 1 });
                }
                if !compatibility(&self.seqs[i], &self.seqs[j]).admits(level) {
                    return Err(TreeError::Incompatible {
                        i: i + 1,
                        j: j + 1,
                        level,
                    });
                }
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                for k in j + 1..r {
                    let mut t = [self.level(i, j), self.level(j, k), self.level(i, k)];
                    t.sort_unstable();
                    if t[0] != t[1] {
                        return Err(TreeError::NotUltrametric {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn index(r: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < r);
        i * (2 * r - i - 1) / 2 + (j - i - 1)
    }

    pub fn sequences(&self) -> &[MultiplicitySequence] {
        &self.seqs
    }

    pub fn branches(&self) -> usize {
        self.seqs.len()
    }

    /// Gluing level of branches `i != j` (0-based, either order).
    pub fn level(&self, i: usize, j: usize) -> u32 {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.levels[Self::index(self.seqs.len(), lo, hi)]
    }

    /// Upper-triangular rows, `rows[i] = [p(i, i+1), ..., p(i, r-1)]`.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        let r = self.seqs.len();
        (0..r)
            .map(|i| (i + 1..r).map(|j| self.level(i, j)).collect())
            .collect()
    }

    /// `max(l(M_i), max_j p(i, j))` for each branch.
    pub fn depths(&self) -> Vec<u32> {
        let r = self.seqs.len();
        (0..r)
            .map(|i| {
                (0..r)
                    .filter(|&j| j != i)
                    .map(|j| self.level(i, j))
                    .fold(self.seqs[i].len(), u32::max)
            })
            .collect()
    }

    pub fn conductor(&self) -> ConductorVector {
        let c = self
            .seqs
            .iter()
            .zip(self.depths())
            .map(|(m, depth)| m.prefix_sum(depth))
            .collect();
        ConductorVector(c)
    }

    pub fn is_untwisted(&self) -> bool {
        let r = self.seqs.len();
        (0..r).all(|i| {
            let mut running = u32::MAX;
            (i + 1..r).all(|j| {
                running = running.min(self.level(j - 1, j));
                self.level(i, j) == running
            })
        })
    }

    /// The consecutive-level vector, if the tree is untwisted.
    pub fn to_untwisted(&self) -> Option<UntwistedTree> {
        self.is_untwisted().then(|| UntwistedTree {
            seqs: self.seqs.clone(),
            gluing: (1..self.seqs.len()).map(|j| self.level(j - 1, j)).collect(),
        })
    }

    /// Moves branch `i` to position `sigma[i]`.
    pub fn permute(&self, sigma: &[usize]) -> Result<Self, TreeError> {
        let r = self.seqs.len();
        let mut seen = vec![false; r];
        if sigma.len() != r
            || sigma
                .iter()
                .any(|&s| s >= r || std::mem::replace(&mut seen[s], true))
        {
            return Err(TreeError::BadPermutation(r));
        }
        let mut seqs = vec![MultiplicitySequence::one(); r];
        for (i, m) in self.seqs.iter().enumerate() {
            seqs[sigma[i]] = m.clone();
        }
        let mut levels = vec![0; self.levels.len()];
        for i in 0..r {
            for j in i + 1..r {
                let (a, b) = (sigma[i].min(sigma[j]), sigma[i].max(sigma[j]));
                levels[Self::index(r, a, b)] = self.level(i, j);
            }
        }
        Ok(Self { seqs, levels })
    }

    /// Some permutation that untwists the tree, with the untwisted image.
    pub fn untwist(&self) -> (Vec<usize>, UntwistedTree) {
        use itertools::Itertools;
        let r = self.seqs.len();
        (0..r)
            .permutations(r)
            .find_map(|sigma| {
                let image = self.permute(&sigma).expect("valid permutation");
                image.to_untwisted().map(|t| (sigma, t))
            })
            .expect("every multiplicity tree untwists under some permutation")
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        encode_key(&self.seqs, &self.levels)
    }

    /// Branch classes glued at `level` (1-based); classes are listed by their
    /// smallest branch.
    pub fn glue_classes(&self, level: u32) -> Vec<Vec<usize>> {
        let r = self.seqs.len();
        let mut assigned = vec![false; r];
        let mut classes = Vec::new();
        for i in 0..r {
            if assigned[i] {
                continue;
            }
            let class: Vec<usize> = (i..r)
                .filter(|&j| j == i || (!assigned[j] && self.level(i, j) >= level))
                .collect();
            for &j in &class {
                assigned[j] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Nodes of the tree level by level, each branch followed until its first
    /// unit node `e_i`.
    pub fn nodes(&self) -> Vec<TreeNode> {
        let depths = self.depths();
        let top = depths.iter().max().copied().unwrap_or(0) + 1;
        let mut nodes = Vec::new();
        for level in 1..=top {
            for class in self.glue_classes(level) {
                if class.iter().all(|&i| level > depths[i] + 1) {
                    continue;
                }
                nodes.push(TreeNode {
                    level,
                    vector: self.node_vector(level, &class),
                    branches: class,
                });
            }
        }
        nodes
    }

    fn node_vector(&self, level: u32, class: &[usize]) -> Vec<u32> {
        let mut v = vec![0; self.seqs.len()];
        for &h in class {
            v[h] = self.seqs[h].get(level);
        }
        v
    }

    /// All subtree sums rooted at the root, clipped componentwise to `bound`.
    ///
    /// A rooted subtree is fixed by how deep it reaches along each branch,
    /// `a_i >= 1`; the node of class `C` on level `j` is included iff some
    /// branch of `C` reaches level `j`.
    pub fn expand_semigroup_in_box(&self, bound: &[u32]) -> Result<BoxSemigroup, TreeError> {
        let r = self.seqs.len();
        let conductor = self.conductor();
        if bound.len() != r
            || bound
                .iter()
                .zip(conductor.as_slice())
                .any(|(&b, &c)| b < c + 1)
        {
            return Err(TreeError::BoxTooSmall {
                bound: bound.to_vec(),
                conductor: conductor.into_inner(),
            });
        }
        let max_glue = self.levels.iter().copied().max().unwrap_or(0);
        let classes: Vec<Vec<Vec<usize>>> = (1..=max_glue)
            .map(|level| self.glue_classes(level))
            .collect();
        // class_of[j-1][h] = index of h's class on level j
        let class_of: Vec<Vec<usize>> = classes
            .iter()
            .map(|cls| {
                let mut owner = vec![0; r];
                for (ci, class) in cls.iter().enumerate() {
                    for &h in class {
                        owner[h] = ci;
                    }
                }
                owner
            })
            .collect();
        let reach_max: Vec<u32> = bound.iter().map(|&b| b.max(max_glue).max(1)).collect();

        let mut out = BoxSemigroup::empty(bound.to_vec());
        out.insert(&vec![0; r]);
        let mut reach = vec![1u32; r];
        let mut sum = vec![0u32; r];
        loop {
            for h in 0..r {
                let mut total = 0u64;
                let deepest = reach.iter().copied().max().unwrap_or(1);
                for level in 1..=deepest {
                    let included = if level <= max_glue {
                        let cls = &classes[level as usize - 1][class_of[level as usize - 1][h]];
                        cls.iter().any(|&i| reach[i] >= level)
                    } else {
                        reach[h] >= level
                    };
                    if included {
                        total += u64::from(self.seqs[h].get(level));
                        if total >= u64::from(bound[h]) {
                            break;
                        }
                    }
                }
                sum[h] = total.min(u64::from(bound[h])) as u32;
            }
            out.insert(&sum);

            // odometer over reach in [1, reach_max]
            let mut pos = 0;
            while pos < r {
                if reach[pos] < reach_max[pos] {
                    reach[pos] += 1;
                    break;
                }
                reach[pos] = 1;
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sequences(f, &self.seqs)?;
        f.write_str(" P=")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i + 1 == self.seqs.len() {
                break;
            }
            if i > 0 {
                f.write_str("/")?;
            }
            write_tuple(f, row)?;
        }
        write!(f, " c={}", self.conductor())
    }
}

/// A node of a multiplicity tree: the branches through it on `level` and its
/// vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub level: u32,
    pub branches: Vec<usize>,
    pub vector: Vec<u32>,
}
