//! Arf numerical semigroups with a prescribed conductor.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::multiplicity::MultiplicitySequence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericalError {
    #[error("Cond* is only defined for positive conductors")]
    ZeroConductor,
}

/// `Cond(n)`: every multiplicity sequence whose Arf semigroup has conductor
/// `n`, sorted.
///
/// Non-recursive sweep: the working sets `T(i)` hold the sequences of
/// conductor `i` with `M[1] + i <= n`, and each one either closes into a
/// member `[n - i, M]` of the result or is extended to `[k, M]` in `T(i + k)`.
pub fn cond_numerical(n: u32) -> Vec<MultiplicitySequence> {
    match n {
        0 => return vec![MultiplicitySequence::one()],
        1 => return Vec::new(),
        _ => {}
    }
    let single = |m: u32| MultiplicitySequence::new(vec![m]).expect("single entry");
    let mut result = vec![single(n)];
    if n < 4 {
        return result;
    }
    // working[i] holds T(i) for 2 <= i <= n - 2
    let mut working: Vec<Vec<MultiplicitySequence>> = (0..=n - 2)
        .map(|i| {
            if (2..=n / 2).contains(&i) {
                vec![single(i)]
            } else {
                Vec::new()
            }
        })
        .collect();
    for i in 2..=n - 2 {
        // extensions land in T(i + k) with k >= 2, never in T(i)
        let current = std::mem::take(&mut working[i as usize]);
        for m in &current {
            if m.contains(n - i) {
                result.push(
                    MultiplicitySequence::prepend(n - i, m).expect("n - i is in AS(M) and >= M[1]"),
                );
            }
            let elements = m.elements().skip_while(|&k| k < 2);
            for k in elements.take_while(|&k| k <= (n - i) / 2) {
                let extended =
                    MultiplicitySequence::prepend(k, m).expect("k is in AS(M) and >= M[1]");
                working[(i + k) as usize].push(extended);
            }
        }
    }
    result.sort();
    result
}

/// `Cond*(c)`: `Cond(c)` for `c != 1` and `Cond(0) = {[1]}` for `c = 1`.
pub fn cond_star(c: u32) -> Result<Vec<MultiplicitySequence>, NumericalError> {
    match c {
        0 => Err(NumericalError::ZeroConductor),
        1 => Ok(cond_numerical(0)),
        _ => Ok(cond_numerical(c)),
    }
}

/// Plain recursive enumeration of `Cond(n)`, used to cross-check
/// [`cond_numerical`]: `Cond(n)` is `[n]` together with every `[m, M]` for
/// `M ∈ Cond(n - m)` and `m ∈ AS(M)`. Shares nothing with the sweep beyond
/// the sequence type, and every result goes through full validation.
pub fn cond_numerical_oracle(n: u32) -> Vec<MultiplicitySequence> {
    cond_numerical_oracle_upto(n).pop().expect("level n")
}

/// `Cond(k)` for every `k <= n`, each sorted, from a single bottom-up pass of
/// [`cond_numerical_oracle`].
pub fn cond_numerical_oracle_upto(n: u32) -> Vec<Vec<MultiplicitySequence>> {
    let mut levels: Vec<Vec<MultiplicitySequence>> = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let level = match k {
            0 => vec![MultiplicitySequence::one()],
            1 => Vec::new(),
            _ => {
                let mut out = vec![MultiplicitySequence::new(vec![k]).expect("single entry")];
                for first in 2..=k - 2 {
                    // levels are sorted, so tails starting at or below `first` form a prefix
                    let candidates = levels[(k - first) as usize]
                        .iter()
                        .take_while(|t| t.entries()[0] <= first)
                        .filter(|t| t.contains(first));
                    for tail in candidates {
                        let mut raw = Vec::with_capacity(tail.entries().len() + 1);
                        raw.push(first);
                        raw.extend_from_slice(tail.entries());
                        if let Ok(seq) = MultiplicitySequence::new(raw) {
                            out.push(seq);
                        }
                    }
                }
                out.sort();
                out
            }
        };
        levels.push(level);
    }
    levels
}

/// Memoized `Cond` / `Cond*` lookups shared by the tree enumerators.
#[derive(Debug, Default)]
pub struct CondTable {
    memo: RwLock<HashMap<u32, Arc<[MultiplicitySequence]>>>,
}

impl CondTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cond(&self, n: u32) -> Arc<[MultiplicitySequence]> {
        if let Some(hit) = self.memo.read().expect("memo lock").get(&n) {
            return Arc::clone(hit);
        }
        let fresh: Arc<[MultiplicitySequence]> = cond_numerical(n).into();
        let mut memo = self.memo.write().expect("memo lock");
        Arc::clone(memo.entry(n).or_insert(fresh))
    }

    pub fn cond_star(&self, c: u32) -> Result<Arc<[MultiplicitySequence]>, NumericalError> {
        match c {
            0 => Err(NumericalError::ZeroConductor),
            1 => Ok(self.cond(0)),
            _ => Ok(self.cond(c)),
        }
    }

    /// `Cond*(c)` for a conductor already known to be positive.
    pub(crate) fn star(&self, c: u32) -> Arc<[MultiplicitySequence]> {
        self.cond_star(c).expect("positive conductor")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(raw: &[&[u32]]) -> Vec<MultiplicitySequence> {
        let mut v: Vec<_> = raw
            .iter()
            .map(|r| MultiplicitySequence::new(r.to_vec()).unwrap())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn small_conductors() {
        assert_eq!(cond_numerical(0), seqs(&[&[1]]));
        assert!(cond_numerical(1).is_empty());
        assert_eq!(cond_numerical(2), seqs(&[&[2]]));
        assert_eq!(cond_numerical(3), seqs(&[&[3]]));
        assert_eq!(cond_numerical(4), seqs(&[&[4], &[2, 2]]));
        assert_eq!(cond_numerical(5), seqs(&[&[5], &[3, 2]]));
    }

    #[test]
    fn cond_star_convention() {
        assert_eq!(cond_star(1).unwrap(), seqs(&[&[1]]));
        assert_eq!(cond_star(3).unwrap(), seqs(&[&[3]]));
        assert_eq!(cond_star(5).unwrap(), seqs(&[&[5], &[3, 2]]));
        assert_eq!(cond_star(0), Err(NumericalError::ZeroConductor));
    }

    #[test]
    fn oracle_small() {
        assert_eq!(cond_numerical_oracle(4), seqs(&[&[4], &[2, 2]]));
        assert_eq!(cond_numerical_oracle(2), seqs(&[&[2]]));
        assert_eq!(cond_numerical_oracle(7), cond_numerical(7));
    }

    #[test]
    fn cond_10_has_ten_members() {
        let oracle = cond_numerical_oracle(10);
        assert_eq!(oracle.len(), 10);
        assert_eq!(cond_numerical(10), oracle);
    }

    #[test]
    fn agrees_with_oracle_up_to_40() {
        for n in 0..=40 {
            assert_eq!(cond_numerical(n), cond_numerical_oracle(n), "n = {n}");
        }
    }

    #[test]
    fn members_have_the_right_conductor_and_tail() {
        for n in 2..=30 {
            for m in cond_numerical(n) {
                assert_eq!(m.conductor(), n);
                let e = m.entries();
                if e.len() >= 2 {
                    let tail = MultiplicitySequence::new(e[1..].to_vec()).unwrap();
                    assert!(cond_numerical(n - e[0]).contains(&tail));
                    assert!(tail.contains(e[0]));
                }
            }
        }
    }

    #[test]
    fn table_is_transparent() {
        let table = CondTable::new();
        let first = table.cond(12);
        let second = table.cond(12);
        assert_eq!(&*first, &*second);
        assert_eq!(&*first, cond_numerical(12).as_slice());
        assert_eq!(&*table.star(1), seqs(&[&[1]]).as_slice());
    }
}
