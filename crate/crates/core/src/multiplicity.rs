//! Multiplicity sequences and the Arf numerical semigroups they encode.
//!
//! A multiplicity sequence is a non-increasing sequence of positive integers
//! that is eventually constant at 1 and in which every term is the sum of a
//! run of consecutive following terms. It is stored by its finite prefix up
//! to the last entry different from 1; the constant sequence is stored as
//! `[1]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("multiplicity sequence is empty")]
    Empty,
    #[error("entry {index} is zero")]
    ZeroEntry { index: usize },
    #[error("entries are not non-increasing at position {index}")]
    NotNonIncreasing { index: usize },
    #[error("entry {index} ({value}) is not a sum of consecutive successors")]
    EntryNotSumOfSuccessors { index: usize, value: u32 },
    #[error("trailing 1 in finite encoding")]
    TrailingOne,
    #[error("entries sum past the supported range")]
    TooLarge,
    #[error("malformed sequence literal: {0}")]
    Syntax(String),
}

/// Upper bound on the entry sum accepted by [`MultiplicitySequence::new`].
pub const MAX_CONDUCTOR: u32 = 1 << 24;

/// A validated multiplicity sequence in its finite encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicitySequence {
    entries: Vec<u32>,
}

impl MultiplicitySequence {
    /// Validates `raw` as the finite encoding of a multiplicity sequence.
    pub fn new(raw: Vec<u32>) -> Result<Self, SequenceError> {
        if raw.is_empty() {
            return Err(SequenceError::Empty);
        }
        if let Some(index) = raw.iter().position(|&m| m == 0) {
            return Err(SequenceError::ZeroEntry { index: index + 1 });
        }
        if let Some(index) = raw.windows(2).position(|w| w[0] < w[1]) {
            return Err(SequenceError::NotNonIncreasing { index: index + 2 });
        }
        if raw.len() > 1 && raw[raw.len() - 1] == 1 {
            return Err(SequenceError::TrailingOne);
        }
        if raw.iter().map(|&m| u64::from(m)).sum::<u64>() + raw.len() as u64
            > u64::from(MAX_CONDUCTOR)
        {
            return Err(SequenceError::TooLarge);
        }
        for (i, &value) in raw.iter().enumerate() {
            if successor_run_end(&raw, i + 1).is_none() {
                return Err(SequenceError::EntryNotSumOfSuccessors {
                    index: i + 1,
                    value,
                });
            }
        }
        Ok(Self { entries: raw })
    }

    /// The constant sequence `[1]`, whose semigroup is all of ℕ.
    pub fn one() -> Self {
        Self { entries: vec![1] }
    }

    /// Strips trailing 1s before validating, so `[2,1,1]` becomes `[2]`.
    pub fn normalized(mut raw: Vec<u32>) -> Result<Self, SequenceError> {
        while raw.len() > 1 && raw[raw.len() - 1] == 1 {
            raw.pop();
        }
        Self::new(raw)
    }

    /// Builds `[first, tail...]`. Fails unless `first` is an element of the
    /// semigroup of `tail` that is at least `tail[1]`.
    pub fn prepend(first: u32, tail: &Self) -> Result<Self, SequenceError> {
        if tail.is_one() {
            return Self::new(vec![first]);
        }
        if first < tail.entries[0] {
            return Err(SequenceError::NotNonIncreasing { index: 2 });
        }
        if !tail.contains(first) {
            return Err(SequenceError::EntryNotSumOfSuccessors {
                index: 1,
                value: first,
            });
        }
        let mut entries = Vec::with_capacity(tail.entries.len() + 1);
        entries.push(first);
        entries.extend_from_slice(&tail.entries);
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_one(&self) -> bool {
        self.entries == [1]
    }

    /// Number of stored entries, `l(M)`. The constant sequence has length 1.
    #[allow(clippy::len_without_is_empty)] // never empty
    pub fn len(&self) -> u32 {
        self.entries.len() as u32
    }

    /// Entry at 1-based position `k`, reading trailing 1s past the end.
    pub fn get(&self, k: u32) -> u32 {
        debug_assert!(k >= 1);
        self.entries.get(k as usize - 1).copied().unwrap_or(1)
    }

    /// Sum of the first `k` entries, reading trailing 1s past the end.
    pub fn prefix_sum(&self, k: u32) -> u32 {
        let stored = (k as usize).min(self.entries.len());
        let head: u32 = self.entries[..stored].iter().sum();
        head + (k - stored as u32)
    }

    /// Conductor of the associated Arf semigroup.
    pub fn conductor(&self) -> u32 {
        if self.is_one() {
            0
        } else {
            self.entries.iter().sum()
        }
    }

    /// Membership in `AS(M) = {0, m1, m1+m2, ..., m1+...+mk, →}`.
    pub fn contains(&self, x: u32) -> bool {
        if x == 0 || x >= self.conductor() {
            return true;
        }
        let mut acc = 0;
        for &m in &self.entries {
            acc += m;
            match acc.cmp(&x) {
                Ordering::Equal => return true,
                Ordering::Greater => return false,
                Ordering::Less => {}
            }
        }
        false
    }

    /// Elements of `AS(M)` in increasing order; the iterator never ends.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let sums = self.entries.iter().scan(0, |acc, &m| {
            *acc += m;
            Some(*acc)
        });
        std::iter::once(0)
            .chain(sums.take_while(|&x| x < self.conductor()))
            .chain(self.conductor().max(1)..)
    }

    /// The unique `s >= k+1` with `M[k] = M[k+1] + ... + M[s]`.
    pub fn s_index(&self, k: u32) -> u32 {
        assert!(k >= 1, "s_index is 1-based");
        if k as usize > self.entries.len() {
            return k + 1;
        }
        successor_run_end(&self.entries, k as usize).expect("validated sequence")
    }
}

/// For the 1-based position `k` of `entries` (extended by 1s), the index `s`
/// such that entries `k+1..=s` sum to entry `k`, if it exists.
fn successor_run_end(entries: &[u32], k: usize) -> Option<u32> {
    let target = entries[k - 1];
    let mut acc = 0u32;
    for (s, &m) in entries.iter().enumerate().skip(k) {
        acc += m;
        match acc.cmp(&target) {
            Ordering::Equal => return Some(s as u32 + 1),
            Ordering::Greater => return None,
            Ordering::Less => {}
        }
    }
    // only trailing 1s remain
    Some(entries.len() as u32 + (target - acc))
}

/// Maximum gluing level of two multiplicity sequences.
///
/// The derived order puts every finite level below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Compatibility {
    Level(u32),
    Infinite,
}

impl Compatibility {
    /// Whether a gluing level `p` is allowed.
    pub fn admits(self, p: u32) -> bool {
        match self {
            Compatibility::Level(bound) => p <= bound,
            Compatibility::Infinite => true,
        }
    }

    /// `min(self, bound)` as a plain integer.
    pub fn min_with(self, bound: u32) -> u32 {
        match self {
            Compatibility::Level(level) => level.min(bound),
            Compatibility::Infinite => bound,
        }
    }
}

impl fmt::Display for Compatibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Compatibility::Level(level) => write!(f, "{level}"),
            Compatibility::Infinite => f.write_str("inf"),
        }
    }
}

/// `Comp(a, b)`: the least `min(s_a(k), s_b(k))` over positions where the two
/// s-indices differ, or `Infinite` when the sequences coincide.
pub fn compatibility(a: &MultiplicitySequence, b: &MultiplicitySequence) -> Compatibility {
    if a == b {
        return Compatibility::Infinite;
    }
    let scan = a.len().max(b.len());
    (1..=scan)
        .filter_map(|k| {
            let (sa, sb) = (a.s_index(k), b.s_index(k));
            (sa != sb).then(|| sa.min(sb))
        })
        .min()
        .map(Compatibility::Level)
        .expect("distinct sequences differ in some s-index")
}

impl fmt::Display for MultiplicitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

/// Parses `[3,2]` (brackets optional, whitespace ignored).
impl FromStr for MultiplicitySequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix('[').unwrap_or(body);
        let body = body.strip_suffix(']').unwrap_or(body);
        if body.trim().is_empty() {
            return Err(SequenceError::Empty);
        }
        let raw = body
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| SequenceError::Syntax(tok.trim().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(raw)
    }
}
