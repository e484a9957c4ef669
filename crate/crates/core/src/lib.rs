//! Enumeration of Arf numerical semigroups and of the multiplicity trees of
//! local Arf good semigroups of `ℕ^r`, both by conductor.

pub mod enum2;
pub mod enum_r;
pub mod format;
pub mod multiplicity;
pub mod numerical_enum;
pub mod oracle;
pub mod tree;

pub use enum_r::{choose_pivot, Enumeration, TreeEnumerator};
pub use multiplicity::{compatibility, Compatibility, MultiplicitySequence, SequenceError};
pub use numerical_enum::{
    cond_numerical, cond_numerical_oracle, cond_numerical_oracle_upto, cond_star, CondTable,
};
pub use oracle::{brute_force_cond, check_arf, check_good_axioms, BoxSemigroup, Report};
pub use tree::{ConductorVector, TreeError, TreeMatrix, TreeNode, UntwistedTree};
