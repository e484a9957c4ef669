//! Brute-force verification: axiom checks on finite truncations of good
//! semigroups and exhaustive filtering of candidate trees.

use std::collections::BTreeSet;
use std::fmt;

use crate::multiplicity::{compatibility, MultiplicitySequence};
use crate::numerical_enum::cond_numerical_oracle;
use crate::tree::{write_tuple, ConductorVector, UntwistedTree};

/// A subset of `ℕ^r` truncated to the box `[0, bound]`.
///
/// A stored coordinate equal to `bound[h]` stands for every value
/// `>= bound[h]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSemigroup {
    bound: Vec<u32>,
    strides: Vec<usize>,
    members: Vec<bool>,
}

impl BoxSemigroup {
    pub fn empty(bound: Vec<u32>) -> Self {
        let mut strides = Vec::with_capacity(bound.len());
        let mut size = 1usize;
        for &b in &bound {
            strides.push(size);
            size *= b as usize + 1;
        }
        Self {
            bound,
            strides,
            members: vec![false; size],
        }
    }

    pub fn from_elements<'a>(
        bound: Vec<u32>,
        elements: impl IntoIterator<Item = &'a [u32]>,
    ) -> Self {
        let mut s = Self::empty(bound);
        for e in elements {
            s.insert(e);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.bound.len()
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    fn offset(&self, v: &[u32]) -> usize {
        v.iter()
            .zip(&self.bound)
            .zip(&self.strides)
            .map(|((&x, &b), &s)| x.min(b) as usize * s)
            .sum()
    }

    fn point(&self, mut offset: usize) -> Vec<u32> {
        self.bound
            .iter()
            .map(|&b| {
                let side = b as usize + 1;
                let x = offset % side;
                offset /= side;
                x as u32
            })
            .collect()
    }

    /// Inserts `v` clipped to the box.
    pub fn insert(&mut self, v: &[u32]) {
        let at = self.offset(v);
        self.members[at] = true;
    }

    /// Membership of `v` clipped to the box.
    pub fn contains(&self, v: &[u32]) -> bool {
        self.members[self.offset(v)]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.point(i))
    }

    /// Least `δ` such that every point of the box above `δ` is a member.
    ///
    /// For a good semigroup whose conductor lies strictly inside the box this
    /// is exactly its conductor.
    pub fn conductor(&self) -> Option<Vec<u32>> {
        // full[o]: every box point >= point(o) is a member
        let mut full = vec![false; self.members.len()];
        for o in (0..self.members.len()).rev() {
            if !self.members[o] {
                continue;
            }
            let p = self.point(o);
            full[o] = (0..self.dim()).all(|h| p[h] == self.bound[h] || full[o + self.strides[h]]);
        }
        let candidates: Vec<Vec<u32>> = full
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(o, _)| self.point(o))
            .collect();
        let least: Vec<u32> = (0..self.dim())
            .map(|h| candidates.iter().map(|c| c[h]).min())
            .collect::<Option<_>>()?;
        full[self.offset(&least)].then_some(least)
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub violation: Option<String>,
}

impl CheckLine {
    fn pass(name: &'static str) -> Self {
        Self {
            name,
            violation: None,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            violation: Some(detail),
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "PASS {}", self.name),
            Some(detail) => write!(f, "FAIL {}: {}", self.name, detail),
        }
    }
}

/// Result of a batch of checks; one line per check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.violation.is_none())
    }

    pub fn first_violation(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.violation.is_some())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn tuple(v: &[u32]) -> String {
    let mut s = String::new();
    write_tuple(&mut s, v).expect("write to string");
    s
}

fn add_clipped(a: &[u32], b: &[u32], bound: &[u32]) -> Vec<u32> {
    a.iter()
        .zip(b)
        .zip(bound)
        .map(|((&x, &y), &m)| (x + y).min(m))
        .collect()
}

fn is_saturated(v: &[u32], bound: &[u32], h: usize) -> bool {
    v[h] >= bound[h]
}

/// Checks the good-semigroup axioms inside the box: the zero vector,
/// closure under addition and componentwise minimum, the equal-coordinate
/// witness property, and a conductor with `margin` room above it.
pub fn check_good_axioms(s: &BoxSemigroup, margin: u32) -> Report {
    let bound = s.bound().to_vec();
    let r = s.dim();
    let elems: Vec<Vec<u32>> = s.elements().collect();
    let mut lines = Vec::new();

    lines.push(if s.contains(&vec![0; r]) {
        CheckLine::pass("zero")
    } else {
        CheckLine::fail("zero", "zero vector missing".into())
    });

    let min_closure = elems.iter().enumerate().find_map(|(i, a)| {
        elems[i + 1..].iter().find_map(|b| {
            let m: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect();
            (!s.contains(&m))
                .then(|| format!("min{}{} = {} not in S", tuple(a), tuple(b), tuple(&m)))
        })
    });
    lines.push(match min_closure {
        None => CheckLine::pass("min-closure"),
        Some(d) => CheckLine::fail("min-closure", d),
    });

    let add_closure = elems.iter().enumerate().find_map(|(i, a)| {
        elems[i..].iter().find_map(|b| {
            let sum = add_clipped(a, b, &bound);
            (!s.contains(&sum))
                .then(|| format!("{} + {} = {} not in S", tuple(a), tuple(b), tuple(&sum)))
        })
    });
    lines.push(match add_closure {
        None => CheckLine::pass("add-closure"),
        Some(d) => CheckLine::fail("add-closure", d),
    });

    let witness = elems.iter().enumerate().find_map(|(ia, a)| {
        elems[ia + 1..].iter().find_map(|b| {
            (0..r).find_map(|i| {
                if a[i] != b[i] || is_saturated(a, &bound, i) {
                    return None;
                }
                let found = elems.iter().any(|c| {
                    c[i] > a[i]
                        && (0..r).filter(|&j| j != i).all(|j| {
                            let m = a[j].min(b[j]);
                            if a[j] != b[j] {
                                c[j] == m
                            } else {
                                c[j] >= m
                            }
                        })
                });
                (!found).then(|| {
                    format!(
                        "no witness above {} and {} in coordinate {}",
                        tuple(a),
                        tuple(b),
                        i + 1
                    )
                })
            })
        })
    });
    lines.push(match witness {
        None => CheckLine::pass("witness"),
        Some(d) => CheckLine::fail("witness", d),
    });

    lines.push(match s.conductor() {
        Some(c) if c.iter().zip(&bound).all(|(&x, &b)| x + margin <= b) => {
            CheckLine::pass("conductor")
        }
        Some(c) => CheckLine::fail(
            "conductor",
            format!("conductor {} leaves less than {margin} room", tuple(&c)),
        ),
        None => CheckLine::fail("conductor", "no conductor inside the box".into()),
    });

    Report { lines }
}

/// Checks that `S(α) - α` is closed under addition and minimum for every
/// `α ∈ S` at least `margin` below the box boundary.
pub fn check_arf(s: &BoxSemigroup, margin: u32) -> Report {
    let bound = s.bound().to_vec();
    let elems: Vec<Vec<u32>> = s.elements().collect();
    let violation = elems
        .iter()
        .filter(|alpha| alpha.iter().zip(&bound).all(|(&x, &b)| x + margin <= b))
        .find_map(|alpha| {
            let above: Vec<&Vec<u32>> = elems
                .iter()
                .filter(|beta| beta.iter().zip(alpha.iter()).all(|(&x, &y)| x >= y))
                .collect();
            above.iter().enumerate().find_map(|(i, b1)| {
                above[i..].iter().find_map(|b2| {
                    let sum: Vec<u32> = b1
                        .iter()
                        .zip(b2.iter())
                        .zip(alpha.iter())
                        .zip(&bound)
                        .map(|(((&x, &y), &a), &m)| (x + y - a).min(m))
                        .collect();
                    let min: Vec<u32> = b1.iter().zip(b2.iter()).map(|(&x, &y)| x.min(y)).collect();
                    if !s.contains(&sum) {
                        Some(format!(
                            "{} + {} - {} = {} not in S",
                            tuple(b1),
                            tuple(b2),
                            tuple(alpha),
                            tuple(&sum)
                        ))
                    } else if !s.contains(&min) {
                        Some(format!("min{}{} not in S", tuple(b1), tuple(b2)))
                    } else {
                        None
                    }
                })
            })
        });
    Report {
        lines: vec![match violation {
            None => CheckLine::pass("arf"),
            Some(d) => CheckLine::fail("arf", d),
        }],
    }
}

/// Every untwisted tree with conductor `c`, found by filtering all candidate
/// trees whose branches have conductor at most `c[i]` and whose gluing
/// levels are at most `max(c)`.
///
/// Meant for desk-scale conductors (two or three branches, small entries).
pub fn brute_force_cond(c: &ConductorVector) -> Vec<UntwistedTree> {
    let c = c.as_slice();
    let cap = c.iter().copied().max().unwrap_or(0);
    let pools: Vec<Vec<MultiplicitySequence>> = c
        .iter()
        .map(|&ci| {
            let mut pool = vec![MultiplicitySequence::one()];
            for m in 2..=ci {
                pool.extend(cond_numerical_oracle(m));
            }
            pool
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut choice: Vec<MultiplicitySequence> = Vec::with_capacity(c.len());
    let mut gluing: Vec<u32> = Vec::with_capacity(c.len().saturating_sub(1));
    extend_candidates(&pools, cap, c, &mut choice, &mut gluing, &mut found);
    found.into_iter().collect()
}

fn extend_candidates(
    pools: &[Vec<MultiplicitySequence>],
    cap: u32,
    target: &[u32],
    choice: &mut Vec<MultiplicitySequence>,
    gluing: &mut Vec<u32>,
    found: &mut BTreeSet<UntwistedTree>,
) {
    let depth = choice.len();
    if depth == pools.len() {
        if let Ok(tree) = UntwistedTree::new(choice.clone(), gluing.clone()) {
            if tree.conductor().as_slice() == target {
                found.insert(tree);
            }
        }
        return;
    }
    for m in &pools[depth] {
        if depth == 0 {
            choice.push(m.clone());
            extend_candidates(pools, cap, target, choice, gluing, found);
            choice.pop();
            continue;
        }
        let bound = compatibility(&choice[depth - 1], m).min_with(cap);
        for p in 1..=bound {
            choice.push(m.clone());
            gluing.push(p);
            extend_candidates(pools, cap, target, choice, gluing, found);
            gluing.pop();
            choice.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numerical(elements: &[u32], bound: u32) -> BoxSemigroup {
        let points: Vec<[u32; 1]> = elements.iter().map(|&e| [e]).collect();
        let mut s = BoxSemigroup::from_elements(vec![bound], points.iter().map(|p| p.as_slice()));
        for x in elements.last().copied().unwrap_or(0)..=bound {
            s.insert(&[x]);
        }
        s
    }

    #[test]
    fn box_membership_saturates() {
        let mut s = BoxSemigroup::empty(vec![3, 3]);
        s.insert(&[7, 1]);
        assert!(s.contains(&[3, 1]));
        assert!(s.contains(&[9, 1]));
        assert!(!s.contains(&[2, 1]));
        assert_eq!(s.elements().collect::<Vec<_>>(), vec![vec![3, 1]]);
    }

    #[test]
    fn min_closure_counterexample() {
        let mut s = BoxSemigroup::empty(vec![5, 5]);
        s.insert(&[0, 0]);
        s.insert(&[1, 2]);
        s.insert(&[2, 1]);
        for x in 3..=5 {
            for y in 3..=5 {
                s.insert(&[x, y]);
            }
        }
        let report = check_good_axioms(&s, 2);
        assert!(!report.passed());
        let first = report.first_violation().unwrap();
        assert_eq!(first.name, "min-closure");
        assert!(first.violation.as_deref().unwrap().contains("(1,1)"));
    }

    #[test]
    fn non_arf_numerical_semigroup_fails() {
        // <3,5> = {0,3,5,6,8,->}; S(3) - 3 contains 2 but not 4
        let s = numerical(&[0, 3, 5, 6, 8], 12);
        assert!(check_good_axioms(&s, 2).passed());
        let report = check_arf(&s, 2);
        assert!(!report.passed());
        // the Arf semigroup of [3,2] = {0,3,5,->}
        let s = numerical(&[0, 3, 5], 10);
        assert!(check_arf(&s, 2).passed());
    }

    #[test]
    fn full_cone_passes() {
        let mut s = BoxSemigroup::empty(vec![4, 4]);
        for x in 0..=4 {
            for y in 0..=4 {
                s.insert(&[x, y]);
            }
        }
        assert!(check_good_axioms(&s, 2).passed());
        assert!(check_arf(&s, 2).passed());
        assert_eq!(s.conductor(), Some(vec![0, 0]));
    }

    #[test]
    fn brute_force_small() {
        let c = ConductorVector::new(vec![1, 1]).unwrap();
        assert_eq!(brute_force_cond(&c).len(), 1);
        let c = ConductorVector::new(vec![4, 5]).unwrap();
        assert_eq!(brute_force_cond(&c).len(), 9);
        let c = ConductorVector::new(vec![3, 2, 4]).unwrap();
        assert_eq!(brute_force_cond(&c).len(), 8);
    }

    #[test]
    fn report_lines_are_prefixed() {
        let s = numerical(&[0, 3, 5, 6, 8], 12);
        let text = check_arf(&s, 2).to_string();
        assert!(text.starts_with("FAIL arf: "));
        let text = check_arf(&numerical(&[0, 2], 6), 2).to_string();
        assert_eq!(text, "PASS arf\n");
    }
}
