//! Untwisted trees on two branches with a given conductor.
//!
//! A tree `({M1, M2}, p)` has `d(i) - 1 = max(l(M_i), p)`, so each branch
//! either keeps its own conductor (`d(i) - 1 = l(M_i)`) or is stretched by
//! the gluing level. The four combinations give the sets below; their union
//! is `Cond(c)`.

use std::collections::BTreeSet;

use crate::multiplicity::compatibility;
use crate::numerical_enum::CondTable;
use crate::tree::{ConductorVector, UntwistedTree};

fn pair(c: &ConductorVector) -> (u32, u32) {
    match *c.as_slice() {
        [a, b] => (a, b),
        _ => panic!("expected a conductor in N^2, got {c}"),
    }
}

/// Neither branch stretched: `M_i ∈ Cond*(c[i])`, `1 <= p <= min(Comp, l(M1), l(M2))`.
pub fn set_s1(table: &CondTable, c: &ConductorVector) -> Vec<UntwistedTree> {
    let (c1, c2) = pair(c);
    let mut out = Vec::new();
    for m1 in table.star(c1).iter() {
        for m2 in table.star(c2).iter() {
            let bound = compatibility(m1, m2).min_with(m1.len().min(m2.len()));
            for p in 1..=bound {
                out.push(UntwistedTree::from_parts(
                    vec![m1.clone(), m2.clone()],
                    vec![p],
                ));
            }
        }
    }
    out
}

/// Second branch stretched: `M2 ∈ Cond*(k)` for `k < c[2]` with the forced
/// level `p = l(M2) + c[2] - k <= min(l(M1), Comp)`.
pub fn set_s12(table: &CondTable, c: &ConductorVector) -> Vec<UntwistedTree> {
    let (c1, c2) = pair(c);
    let mut out = Vec::new();
    for m1 in table.star(c1).iter() {
        for k in 1..c2 {
            for m2 in table.star(k).iter() {
                let p = m2.len() + c2 - k;
                if p <= m1.len() && compatibility(m1, m2).admits(p) {
                    out.push(UntwistedTree::from_parts(
                        vec![m1.clone(), m2.clone()],
                        vec![p],
                    ));
                }
            }
        }
    }
    out
}

/// First branch stretched; mirror of [`set_s12`].
pub fn set_s22(table: &CondTable, c: &ConductorVector) -> Vec<UntwistedTree> {
    let (c1, c2) = pair(c);
    let mut out = Vec::new();
    for k in 1..c1 {
        for m1 in table.star(k).iter() {
            for m2 in table.star(c2).iter() {
                let p = m1.len() + c1 - k;
                if p <= m2.len() && compatibility(m1, m2).admits(p) {
                    out.push(UntwistedTree::from_parts(
                        vec![m1.clone(), m2.clone()],
                        vec![p],
                    ));
                }
            }
        }
    }
    out
}

/// Both branches stretched to the same level
/// `p = l(M1) + c[1] - k1 = l(M2) + c[2] - k2 <= Comp`.
pub fn set_s3(table: &CondTable, c: &ConductorVector) -> Vec<UntwistedTree> {
    let (c1, c2) = pair(c);
    let mut out = Vec::new();
    for k1 in 1..c1 {
        for m1 in table.star(k1).iter() {
            let p = m1.len() + c1 - k1;
            for k2 in 1..c2 {
                // p = l(M2) + c2 - k2 needs l(M2) = p + k2 - c2 >= 1
                if p + k2 <= c2 {
                    continue;
                }
                for m2 in table.star(k2).iter() {
                    if m2.len() + c2 - k2 == p && compatibility(m1, m2).admits(p) {
                        out.push(UntwistedTree::from_parts(
                            vec![m1.clone(), m2.clone()],
                            vec![p],
                        ));
                    }
                }
            }
        }
    }
    out
}

/// `Cond(c)` for `c ∈ ℕ^2`, sorted and deduplicated.
pub fn cond2(table: &CondTable, c: &ConductorVector) -> Vec<UntwistedTree> {
    let mut all = BTreeSet::new();
    all.extend(set_s1(table, c));
    all.extend(set_s12(table, c));
    all.extend(set_s22(table, c));
    all.extend(set_s3(table, c));
    all.into_iter().collect()
}
