//! Weights, isomorphisms and Morita equivalence of framed polytopes.

mod crossed;
mod embedding;
mod iso;
mod linear;
mod weights;

use thiserror::Error;

use crate::arith::ArithError;
use crate::framing::FramingError;
use crate::polytope::PolytopeError;

pub use crossed::{
    crossed_product, crossed_product_with, decide_morita, quotient_invariant, slice_identifications,
    CrossedOptions, InequivalenceReason, MoritaVerdict, MoritaWitness, QuotientInvariant, SliceIdentification,
    UndecidedReason, WeightedPolytope,
};
pub use embedding::{verify_morita_embedding, EmbeddingReport, EmbeddingStage};
pub use iso::{framed_iso, polytope_iso, polytope_iso_with, polytope_isos, IsoOptions};
pub use weights::{facet_weight, facet_weights};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoritaError {
    #[error(transparent)]
    Framing(#[from] FramingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("slice direction is irrational; weights are undefined")]
    IrrationalSlice,
    #[error("no germ facet with index {0}")]
    FacetIndex(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polytope {which} is not canonically embedded")]
    NotCanonical { which: usize },
    #[error("neither polytope is rational-faced")]
    NotRationalFaced,
    #[error("search limit exceeded: {0}")]
    SearchLimit(String),
    #[error("framing {which} is invalid: {reason}")]
    InvalidFraming { which: usize, reason: String },
    #[error("bad identification: {0}")]
    Identification(String),
    #[error("facets over facet {facet} do not span a hyperplane")]
    HyperplaneSpan { facet: usize },
    #[error("crossed product is not regular: {detail}")]
    NotRegular { detail: String },
    #[error("embedding {which} rejected at the {stage} check: {detail}")]
    EmbeddingRejected { which: usize, stage: EmbeddingStage, detail: String },
}
