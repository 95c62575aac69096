//! Partitions, permutations, and hyperoctahedral coset combinatorics.
//!
//! Everything here is exact and small-scale: partitions of n <= 12,
//! permutations of degree <= 12, and enumerations guarded by [`Limits`].
//!
//! [`Partition`] carries the scalar quantities attached to a shape (hook
//! products, irreducible dimensions, centralizer orders, content
//! polynomials).  [`Permutation`] supplies composition, cycle types, and the
//! pairing graph whose components define hyperoctahedral coset types.

mod partition;
mod permutation;

pub use partition::{factorial, hyperoctahedral_order, partitions_of, Partition};
pub use permutation::{
    coset_representative, hyperoctahedral_iter, next_permutation, symmetric_group_iter,
    CosetGraph, Permutation,
};
