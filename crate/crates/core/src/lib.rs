//! Exact moments of matrix elements of the circular orthogonal ensemble (COE).
//!
//! A COE matrix is V = U^T U with U Haar-distributed unitary.  Mixed moments
//! E[v_{i_1 i_2} ... v_{i_{2n-1} i_{2n}} conj(v_{j_1 j_2} ... v_{j_{2n-1} j_{2n}})]
//! are rational functions of the matrix size N.  This crate computes them
//! exactly: index matchings are enumerated in the symmetric group S_{2n},
//! grouped by hyperoctahedral coset type, and weighted by orthogonal
//! Weingarten functions of an indeterminate z that is evaluated at z = N + 1.
//!
//! Modules, bottom up:
//! - [`qz`]: exact univariate polynomials and rational functions over the rationals
//! - [`combinat`]: partitions, permutations, hyperoctahedral groups, coset graphs
//! - [`characters`]: symmetric group characters and zonal spherical functions
//! - [`weingarten`]: orthogonal and unitary Weingarten functions of z
//! - [`moments`]: the moment engine, closed forms, asymptotics, and oracles
//! - [`montecarlo`]: Haar sampling and statistical verification
//! - [`selftest`]: executable suite of pinned identities and examples
//! - [`cli`]: implementation of the `coe` command-line interface

pub mod characters;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod moments;
pub mod montecarlo;
pub mod qz;
pub mod selftest;
pub mod weingarten;

pub use error::{Error, Result};

/// Resource limits for enumeration-backed operations.
///
/// `n_max` bounds the moment degree n (sequences have length 2n); it also
/// bounds the symmetric group degree 2n used for character tables and the
/// integer root search window [-2 n_max, 2 n_max] of the factored display.
/// `enum_budget` bounds the number of elements any single enumeration may
/// visit (index matchings, hyperoctahedral groups, full symmetric groups).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub n_max: usize,
    pub enum_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            n_max: 6,
            enum_budget: 10_000_000,
        }
    }
}

impl Limits {
    /// Errors with a resource report unless `count` elements fit in the budget.
    pub fn charge(&self, what: &str, count: u64) -> Result<()> {
        if count > self.enum_budget {
            Err(Error::Resource(format!(
                "{what} needs {count} elements, budget is {}",
                self.enum_budget
            )))
        } else {
            Ok(())
        }
    }
}
