//! Exact dense linear algebra over prime fields.
//!
//! Everything downstream (Hom spaces, Ext groups, functor modules) reduces to
//! kernels, images, solves and quotients computed here. Pivoting always takes the
//! first nonzero entry, so every basis produced is reproducible bit for bit.

mod field;
mod matrix;
mod subspace;

pub use field::{is_prime, Field};
pub use matrix::{Matrix, Rref, Solver};
pub use subspace::{enumerate_subspaces, Quotient, Subspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("quotient requested by a space that is not a subspace")]
    NotASubspace,
}
