//! Exact computations on framed momentum polytopes.

pub mod affine_map;
pub mod arith;
pub mod framing;
pub mod io;
pub mod lift;
pub mod morita;
pub mod normal_form;
pub mod polytope;

pub use affine_map::IntegralAffineMap;
pub use arith::{IntMatrix, LatticeBasis, Scalar, Vector};
pub use framing::{FramedPolytope, GermFacet, IrrationalityReport};
pub use polytope::{AffineSubspace, HPolyhedron, Halfspace, Polytope, VPolytope};
