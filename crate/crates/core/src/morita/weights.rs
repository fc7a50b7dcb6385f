//! Facet weights of framings with a rational slice.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{lattice_intersect_subspace, LatticeBasis};
use crate::framing::FramedPolytope;

use super::MoritaError;

fn slice_lattice(f: &FramedPolytope) -> Result<LatticeBasis, MoritaError> {
    if !f.is_rational_slice() {
        return Err(MoritaError::IrrationalSlice);
    }
    lattice_intersect_subspace(f.ambient_dim(), &f.slice().directions).map_err(|_| MoritaError::IrrationalSlice)
}

fn weight_on(f: &FramedPolytope, lattice: &LatticeBasis, i: usize) -> Result<BigInt, MoritaError> {
    let u = &f.germ().get(i).ok_or(MoritaError::FacetIndex(i))?.covector;
    let g = lattice
        .basis_vectors
        .iter()
        .map(|b| u.iter().zip(b).map(|(x, y)| x * y).sum::<BigInt>())
        .fold(BigInt::zero(), |a, v| num_integer::Integer::gcd(&a, &v));
    if g.is_zero() {
        return Err(MoritaError::Inconsistent(format!(
            "germ facet {i} vanishes on every lattice vector of the slice"
        )));
    }
    Ok(g.abs())
}

/// Positive generator of `{<u_i, b> : b in Z^N ∩ dir L}`.
pub fn facet_weight(f: &FramedPolytope, i: usize) -> Result<BigInt, MoritaError> {
    weight_on(f, &slice_lattice(f)?, i)
}

/// Weights of all germ facets, in germ order.
pub fn facet_weights(f: &FramedPolytope) -> Result<Vec<BigInt>, MoritaError> {
    let lattice = slice_lattice(f)?;
    (0..f.germ().len()).map(|i| weight_on(f, &lattice, i)).collect()
}
