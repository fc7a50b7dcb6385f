//! Flatness relations, kernel directions and local models at faces.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::linalg::{self, int_dot, to_scalars};
use crate::arith::{integer_annihilator, smith_invariants, IntMatrix, LatticeBasis, Scalar};
use crate::framing::FramedPolytope;
use crate::polytope::Halfspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("facet set {0:?} is not a face of P")]
    NotAFace(Vec<usize>),
    #[error("no vertex with index {0}")]
    VertexIndex(usize),
    #[error("slice is not transversal at the face on germ facets {facets:?}")]
    NotTransversal { facets: Vec<usize> },
}

/// Affine relations `<a_i, x> = b_i` cutting out the slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessData {
    pub relations: Vec<Halfspace>,
    /// The relation covectors read as vectors of the Lie algebra.
    pub kernel_vectors: Vec<Vec<Scalar>>,
    /// The annihilator of the slice directions has an integer basis.
    pub rational: bool,
}

pub fn flatness_relations(f: &FramedPolytope) -> FlatnessData {
    let n = f.ambient_dim();
    let relations = f.slice().equalities();
    let kernel_vectors = relations.iter().map(|h| h.covector.clone()).collect();
    let rational = integer_annihilator(n, &f.slice().directions).rank() == n - f.dim();
    FlatnessData {
        relations,
        kernel_vectors,
        rational,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDirections {
    pub basis: Vec<Vec<Scalar>>,
    /// All leaves of the kernel foliation are closed.
    pub closed_leaves: bool,
}

pub fn kernel_directions(f: &FramedPolytope) -> KernelDirections {
    let d = flatness_relations(f);
    KernelDirections {
        basis: d.kernel_vectors,
        closed_leaves: d.rational,
    }
}

/// A face of `P`: by the germ facets containing it, by a vertex, or `P`
/// itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceSpec {
    Facets(Vec<usize>),
    Vertex(usize),
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalModel {
    /// Germ facets containing the face.
    pub facets: Vec<usize>,
    pub vertices: Vec<usize>,
    pub face_dim: usize,
    /// Number of active germ facets.
    pub corank: usize,
    /// Active primitive covectors, spanning the isotropy algebra.
    #[serde(serialize_with = "ser_vecs")]
    pub isotropy: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "ser_ints")]
    pub smith_invariants: Vec<BigInt>,
    /// Integer basis of the annihilator of the isotropy algebra.
    pub m_star_basis: LatticeBasis,
    /// Directions of the slice.
    pub l_basis: Vec<Vec<Scalar>>,
    /// `l + m* = R^N`.
    pub transversal: bool,
    /// Basis of `l ∩ m*`, the direction space of the face.
    pub face_directions: Vec<Vec<Scalar>>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_vecs<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

pub fn local_model(f: &FramedPolytope, face: &FaceSpec) -> Result<LocalModel, NormalFormError> {
    let lattice = f.face_lattice();
    let facets = match face {
        FaceSpec::Facets(s) => s.clone(),
        FaceSpec::Vertex(v) => f
            .incidence()
            .vertex_active
            .get(*v)
            .cloned()
            .ok_or(NormalFormError::VertexIndex(*v))?,
        FaceSpec::Interior => vec![],
    };
    let found = lattice
        .find(&facets)
        .ok_or_else(|| NormalFormError::NotAFace(facets.clone()))?;
    let n = f.ambient_dim();
    let isotropy: Vec<Vec<BigInt>> = found.facets.iter().map(|&i| f.germ()[i].covector.clone()).collect();
    let s = isotropy.len();
    let restricted: Vec<Vec<Scalar>> = found.facets.iter().map(|&i| f.restricted_covector(i)).collect();
    let transversal = linalg::rank(&restricted, f.dim()) == s;
    if !transversal {
        return Err(NormalFormError::NotTransversal {
            facets: found.facets.clone(),
        });
    }
    let as_vectors: Vec<Vec<Scalar>> = isotropy.iter().map(|u| to_scalars(u)).collect();
    let m_star_basis = integer_annihilator(n, &as_vectors);
    let face_directions: Vec<Vec<Scalar>> = linalg::nullspace(&restricted, f.dim())
        .into_iter()
        .map(|t| {
            let mut v = vec![Scalar::zero(); n];
            for (ti, d) in t.iter().zip(&f.slice().directions) {
                if !ti.is_zero() {
                    v = linalg::add(&v, &linalg::scale(d, ti));
                }
            }
            v
        })
        .collect();
    debug_assert!(face_directions
        .iter()
        .all(|v| isotropy.iter().all(|u| int_dot(u, v).is_zero())));
    Ok(LocalModel {
        facets: found.facets.clone(),
        vertices: found.vertices.clone(),
        face_dim: found.dim,
        corank: s,
        smith_invariants: smith_invariants(&IntMatrix::from_rows(n, &isotropy)),
        isotropy,
        m_star_basis,
        l_basis: f.slice().directions.clone(),
        transversal,
        face_directions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{lift_and_frame, make_qpq};
    use crate::polytope::{AffineSubspace, HPolyhedron};

    fn ip(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn product_relations() {
        let f = make_qpq(&Scalar::one(), 1, 0).unwrap();
        let d = flatness_relations(&f);
        assert_eq!(d.relations, vec![Halfspace::from_ints(&[0, 1], 0)]);
        assert!(d.rational);
        let k = kernel_directions(&f);
        assert_eq!(k.basis, vec![ip(&[0, 1])]);
        assert!(k.closed_leaves);
    }

    #[test]
    fn full_dimensional_slice_has_no_relations() {
        let sq = crate::polytope::VPolytope::new(2, vec![ip(&[0, 0]), ip(&[1, 0]), ip(&[0, 1]), ip(&[1, 1])]);
        let f = FramedPolytope::trivial(&sq).unwrap();
        let d = flatness_relations(&f);
        assert!(d.relations.is_empty() && d.rational);
        assert!(kernel_directions(&f).basis.is_empty());
    }

    #[test]
    fn radical_slice_relations() {
        let s2: Scalar = "sqrt(2)".parse().unwrap();
        let l = AffineSubspace::new(2, ip(&[0, 0]), &[vec![Scalar::one(), s2]]);
        let germ = vec![
            crate::framing::GermFacet::from_ints(&[1, 0], Scalar::zero()),
            crate::framing::GermFacet::from_ints(&[-1, 0], Scalar::from(-1)),
        ];
        let f = FramedPolytope::new(2, l, germ).unwrap();
        let d = flatness_relations(&f);
        assert_eq!(d.relations.len(), 1);
        assert!(!d.relations[0].is_rational());
        assert!(!d.rational);
        assert!(!kernel_directions(&f).closed_leaves);
        for r in &d.relations {
            let v = &f.polytope().vertices;
            assert_eq!(r.slack(&v[0]), r.slack(&v[1]));
        }
    }

    #[test]
    fn qpq_vertex_model() {
        let f = make_qpq(&Scalar::one(), 2, 1).unwrap();
        let v = f.polytope().vertices.iter().position(|x| x == &ip(&[1, 0])).unwrap();
        let m = local_model(&f, &FaceSpec::Vertex(v)).unwrap();
        assert_eq!(m.corank, 1);
        assert_eq!(m.isotropy, vec![vec![BigInt::from(-2), BigInt::from(-1)]]);
        assert!(m.transversal);
        assert_eq!(m.face_dim, 0);
        assert!(m.face_directions.is_empty());
        assert_eq!(m.m_star_basis.rank(), 1);
        let interior = local_model(&f, &FaceSpec::Interior).unwrap();
        assert_eq!((interior.corank, interior.face_dim), (0, 1));
        assert_eq!(interior.m_star_basis.rank(), 2);
        assert!(local_model(&f, &FaceSpec::Facets(vec![0, 1])).is_err());
    }

    #[test]
    fn lifted_square_vertex() {
        let h = HPolyhedron::from_inequalities(
            2,
            vec![
                Halfspace::from_ints(&[1, 0], 0),
                Halfspace::from_ints(&[0, 1], 0),
                Halfspace::from_ints(&[-1, 0], -1),
                Halfspace::from_ints(&[0, -1], -1),
            ],
        )
        .unwrap();
        let f = lift_and_frame(&h).unwrap().framed;
        for v in 0..4 {
            let m = local_model(&f, &FaceSpec::Vertex(v)).unwrap();
            assert_eq!(m.corank, 2);
            assert_eq!(m.smith_invariants, vec![BigInt::from(1); 2]);
            assert_eq!(m.face_dim + m.corank, f.dim());
        }
    }
}
