//! Exact scalars and integer lattice algorithms.

pub mod intmat;
pub mod lattice;
pub mod linalg;
pub mod scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("radicand {0} is not a squarefree integer >= 2")]
    BadRadicand(u64),
    #[error("mixed radicands sqrt({0}) and sqrt({1})")]
    MixedRadicands(u64, u64),
    #[error("malformed scalar `{0}`")]
    Syntax(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("zero vector has no primitive multiple")]
    ZeroVector,
    #[error("irrational entry where a rational one is required")]
    Irrational,
    #[error("sublattice is not saturated (invariant factors {0:?})")]
    NotSaturated(Vec<String>),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub use intmat::{
    hnf, integer_kernel, smith_form, smith_invariants, solve_integer, IntMatrix, SmithForm,
};
pub use lattice::{
    integer_annihilator, lattice_complement, lattice_intersect_subspace, primitive_covector,
    qspan_rank, rational_closure, LatticeBasis,
};
pub use scalar::{common_radicand, Scalar};

/// Dense vector of scalars.
pub type Vector = Vec<Scalar>;
