//! Degree of irrationality and the canonical embedding.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::lattice::abs_det_cols;
use crate::arith::linalg::int_dot;
use crate::arith::{integer_annihilator, lattice_complement, qspan_rank, LatticeBasis, Scalar};
use crate::polytope::{affine_hull, VPolytope};

use super::checks::is_rational_faced;
use super::FramingError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrationalityReport {
    pub dim_p: usize,
    pub daff_rank: usize,
    pub degree: usize,
    /// Integer covectors whose restrictions to `P` form a basis of the
    /// integral affine 1-forms.
    #[serde(serialize_with = "ser_vecs")]
    pub daff_basis: Vec<Vec<BigInt>>,
}

fn ser_vecs<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
}

pub fn irrationality_degree(p: &VPolytope) -> IrrationalityReport {
    let n = p.ambient_dim;
    let hull = affine_hull(p);
    let dim_p = hull.dim();
    // row i: values of dx_i on the direction basis
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|i| hull.directions.iter().map(|d| d[i].clone()).collect())
        .collect();
    let daff_rank = if dim_p == 0 { 0 } else { qspan_rank(&rows) };
    let kernel = integer_annihilator(n, &hull.directions);
    IrrationalityReport {
        dim_p,
        daff_rank,
        degree: daff_rank - dim_p,
        daff_basis: complement_basis(&kernel, daff_rank),
    }
}

/// A complement of the kernel lattice, preferring the lexicographically
/// first set of coordinate covectors that completes it to a basis.
fn complement_basis(kernel: &LatticeBasis, r: usize) -> Vec<Vec<BigInt>> {
    let n = kernel.ambient_dim;
    let unit = |i: usize| -> Vec<BigInt> {
        (0..n).map(|j| BigInt::from((i == j) as i64)).collect()
    };
    for subset in (0..n).combinations(r) {
        let mut cols = kernel.basis_vectors.clone();
        cols.extend(subset.iter().map(|&i| unit(i)));
        if abs_det_cols(n, &cols).is_one() {
            return subset.into_iter().map(unit).collect();
        }
    }
    lattice_complement(kernel)
        .expect("annihilator lattices are saturated")
        .basis_vectors
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalEmbedding {
    pub polytope: VPolytope,
    /// Rows of the map `x -> (g_1(x), ..., g_r(x))`.
    #[serde(serialize_with = "ser_vecs")]
    pub map: Vec<Vec<BigInt>>,
}

impl CanonicalEmbedding {
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.map.iter().map(|g| int_dot(g, x)).collect()
    }
}

/// `P` placed in `R^(dim P + degree)` through a basis of its integral
/// affine 1-forms.
pub fn canonical_embedding(p: &VPolytope) -> Result<CanonicalEmbedding, FramingError> {
    if p.is_empty() {
        return Err(crate::polytope::PolytopeError::Empty.into());
    }
    if p.vertices.len() > 1 && !is_rational_faced(p).rational_faced {
        return Err(FramingError::NotRationalFaced);
    }
    let report = irrationality_degree(p);
    let map = report.daff_basis;
    let image: Vec<Vec<Scalar>> = p
        .vertices
        .iter()
        .map(|v| map.iter().map(|g| int_dot(g, v)).collect())
        .collect();
    Ok(CanonicalEmbedding {
        polytope: VPolytope::new(map.len(), image),
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[&str]) -> Vec<Scalar> {
        x.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn degrees() {
        let sq = VPolytope::new(2, vec![pt(&["0", "0"]), pt(&["1", "0"]), pt(&["0", "1"]), pt(&["1", "1"])]);
        let r = irrationality_degree(&sq);
        assert_eq!((r.daff_rank, r.degree), (2, 0));
        let seg = VPolytope::new(2, vec![pt(&["0", "0"]), pt(&["1", "sqrt(2)"])]);
        let r = irrationality_degree(&seg);
        assert_eq!((r.dim_p, r.daff_rank, r.degree), (1, 2, 1));
    }

    #[test]
    fn embeddings() {
        let seg = VPolytope::new(2, vec![pt(&["0", "0"]), pt(&["1", "sqrt(2)"])]);
        let e = canonical_embedding(&seg).unwrap();
        assert_eq!(e.polytope, seg);
        let high = VPolytope::new(3, vec![pt(&["0", "0", "1"]), pt(&["1", "1", "0"])]);
        let e = canonical_embedding(&high).unwrap();
        assert_eq!(e.polytope.ambient_dim, 1);
        assert_eq!(e.polytope.vertices, vec![pt(&["0"]), pt(&["1"])]);
        let point = VPolytope::new(2, vec![pt(&["1/2", "3"])]);
        let e = canonical_embedding(&point).unwrap();
        assert_eq!(e.polytope.ambient_dim, 0);
    }
}
