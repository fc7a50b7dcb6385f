//! Framed polytopes `P = L ∩ Q` and their predicates.
//!
//! Germs are stored without any neighbourhood size: only the facets of `Q`
//! meeting `P` in a facet are kept, as primitive integer covectors.

mod checks;
mod irrationality;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::affine_map::IntegralAffineMap;
use crate::arith::lattice::primitive_int;
use crate::arith::linalg::{self, dot, int_dot, to_scalars};
use crate::arith::{ArithError, Scalar};
use crate::polytope::{
    affine_rank, enumerate_vertices, irredundant_hrep, AffineSubspace, FaceIncidence,
    FaceLattice, HPolyhedron, Halfspace, PolytopeError, VPolytope,
};

pub use checks::{
    is_delzant, is_rational_faced, is_regular_germ, validate, validate_parts, Certificate, Check,
    DelzantReport, FacetCertificate, RationalFacedReport, ValidationReport, Witness,
};
pub(crate) use checks::transversality;
pub use irrationality::{canonical_embedding, irrationality_degree, CanonicalEmbedding, IrrationalityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FramingError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("slice is empty")]
    Empty,
    #[error("slice is unbounded")]
    Unbounded,
    #[error("slice polytope has dimension {dim}, expected {expected}")]
    NotFullDimensional { dim: usize, expected: usize },
    #[error("slice is not transversal at the face on germ facets {facets:?}")]
    NotTransversal { facets: Vec<usize> },
    #[error("facet {0} of Q has an irrational covector")]
    IrrationalFacet(usize),
    #[error("germ facet {0} has a zero covector")]
    ZeroCovector(usize),
    #[error("polytope is not rational-faced")]
    NotRationalFaced,
    #[error("map is not unimodular")]
    NotUnimodular,
}

/// `<covector, x> >= constant` with a primitive integer covector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GermFacet {
    #[serde(serialize_with = "ser_ints")]
    pub covector: Vec<BigInt>,
    pub constant: Scalar,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl GermFacet {
    pub fn new(covector: Vec<BigInt>, constant: Scalar) -> Self {
        GermFacet { covector, constant }
    }

    pub fn from_ints(covector: &[i64], constant: Scalar) -> Self {
        GermFacet::new(covector.iter().map(|&x| BigInt::from(x)).collect(), constant)
    }

    pub fn slack(&self, x: &[Scalar]) -> Scalar {
        int_dot(&self.covector, x) - &self.constant
    }

    pub fn halfspace(&self) -> Halfspace {
        Halfspace::new(to_scalars(&self.covector), self.constant.clone())
    }

    fn primitive(&self) -> Result<GermFacet, ArithError> {
        let p = primitive_int(&self.covector)?;
        let g = self
            .covector
            .iter()
            .zip(&p)
            .find(|(_, b)| !b.is_zero())
            .map(|(a, b)| a / b)
            .expect("nonzero");
        Ok(GermFacet::new(p, &self.constant / &Scalar::from_bigint(g)))
    }
}

/// Descending by covector, then by constant.
pub fn cmp_germ_desc(a: &GermFacet, b: &GermFacet) -> std::cmp::Ordering {
    b.covector
        .cmp(&a.covector)
        .then_with(|| b.constant.cmp(&a.constant))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FramedPolytope {
    ambient_dim: usize,
    slice: AffineSubspace,
    germ: Vec<GermFacet>,
    polytope: VPolytope,
    incidence: FaceIncidence,
}

impl FramedPolytope {
    /// Normalises the slice and germ and computes `P = L ∩ germ`. The germ
    /// need not be canonical or transversal (see [`validate`]), but `P` must
    /// be nonempty, bounded and of the dimension of `L`.
    pub fn new(
        ambient_dim: usize,
        slice: AffineSubspace,
        germ: Vec<GermFacet>,
    ) -> Result<Self, FramingError> {
        if slice.base.len() != ambient_dim || slice.directions.iter().any(|d| d.len() != ambient_dim) {
            return Err(FramingError::Dimension("slice does not live in the ambient space".into()));
        }
        let slice = AffineSubspace::new(ambient_dim, slice.base, &slice.directions);
        let mut rows = Vec::with_capacity(germ.len());
        for (i, g) in germ.iter().enumerate() {
            if g.covector.len() != ambient_dim {
                return Err(FramingError::Dimension(format!("germ facet {i} has wrong length")));
            }
            rows.push(g.primitive().map_err(|_| FramingError::ZeroCovector(i))?);
        }
        rows.sort_by(cmp_germ_desc);
        rows.dedup();
        let polytope = slice_polytope(&slice, &rows)?;
        let incidence = germ_incidence(&polytope, &rows);
        Ok(FramedPolytope {
            ambient_dim,
            slice,
            germ: rows,
            polytope,
            incidence,
        })
    }

    /// `L = R^N`, germ = facets of a full-dimensional rational polytope.
    pub fn trivial(p: &VPolytope) -> Result<Self, FramingError> {
        let h = irredundant_hrep(p)?;
        if !h.equalities.is_empty() {
            return Err(PolytopeError::NotFullDimensional.into());
        }
        let germ = h
            .inequalities
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.int_covector()
                    .map(|u| GermFacet::new(u, f.constant.clone()))
                    .ok_or(FramingError::IrrationalFacet(i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        FramedPolytope::new(p.ambient_dim, AffineSubspace::whole(p.ambient_dim), germ)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn slice(&self) -> &AffineSubspace {
        &self.slice
    }

    pub fn germ(&self) -> &[GermFacet] {
        &self.germ
    }

    pub fn polytope(&self) -> &VPolytope {
        &self.polytope
    }

    pub fn incidence(&self) -> &FaceIncidence {
        &self.incidence
    }

    /// `dim L = dim P`.
    pub fn dim(&self) -> usize {
        self.slice.dim()
    }

    pub fn face_lattice(&self) -> FaceLattice {
        FaceLattice::build(&self.polytope.vertices, &self.incidence)
    }

    /// Vertices on germ facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        self.incidence.vertices_of(&[i])
    }

    /// Germ covector `i` evaluated on the slice directions.
    pub fn restricted_covector(&self, i: usize) -> Vec<Scalar> {
        self.slice
            .directions
            .iter()
            .map(|d| int_dot(&self.germ[i].covector, d))
            .collect()
    }

    /// The direction space of `L` is spanned by rational vectors.
    pub fn is_rational_slice(&self) -> bool {
        self.slice.direction_is_rational()
    }

    /// Image under an ambient map with unimodular linear part.
    pub fn transform(&self, map: &IntegralAffineMap) -> Result<FramedPolytope, FramingError> {
        let inv = map.linear.unimodular_inverse().ok_or(FramingError::NotUnimodular)?;
        let base = map.apply(&self.slice.base);
        let dirs: Vec<Vec<Scalar>> = self.slice.directions.iter().map(|d| map.apply_linear(d)).collect();
        let germ = self
            .germ
            .iter()
            .map(|g| {
                let u = inv.vec_mul(&g.covector);
                let c = &g.constant + &int_dot(&u, &map.translation);
                GermFacet::new(u, c)
            })
            .collect();
        FramedPolytope::new(self.ambient_dim, AffineSubspace::new(self.ambient_dim, base, &dirs), germ)
    }

    /// Germ as an H-polyhedron, optionally closed by a bounding box one unit
    /// beyond the coordinate range of `P`; returns the indices of the box rows.
    pub fn germ_hpolyhedron(&self, with_box: bool) -> (HPolyhedron, Vec<usize>) {
        let n = self.ambient_dim;
        let mut rows: Vec<Halfspace> = self.germ.iter().map(GermFacet::halfspace).collect();
        let mut synthetic = Vec::new();
        if with_box {
            for i in 0..n {
                let lo = self.polytope.vertices.iter().map(|v| v[i].clone()).min().unwrap();
                let hi = self.polytope.vertices.iter().map(|v| v[i].clone()).max().unwrap();
                let mut e = vec![Scalar::zero(); n];
                e[i] = Scalar::one();
                synthetic.push(rows.len());
                rows.push(Halfspace::new(e.clone(), Scalar::from_bigint(lo.floor() - BigInt::from(1))));
                synthetic.push(rows.len());
                rows.push(Halfspace::new(
                    linalg::scale(&e, &Scalar::from(-1)),
                    Scalar::from_bigint(-(hi.ceil() + BigInt::from(1))),
                ));
            }
        }
        (
            HPolyhedron {
                ambient_dim: n,
                inequalities: rows,
                equalities: vec![],
            },
            synthetic,
        )
    }

    /// Scalars appearing in the data.
    pub fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.slice
            .base
            .iter()
            .chain(self.slice.directions.iter().flatten())
            .chain(self.germ.iter().map(|g| &g.constant))
    }
}

fn slice_polytope(slice: &AffineSubspace, germ: &[GermFacet]) -> Result<VPolytope, FramingError> {
    let n = slice.dim();
    let rows: Vec<Halfspace> = germ
        .iter()
        .map(|g| {
            let a: Vec<Scalar> = slice.directions.iter().map(|d| int_dot(&g.covector, d)).collect();
            Halfspace::new(a, -g.slack(&slice.base))
        })
        .collect();
    // rows with a zero restriction are either always or never satisfied
    let mut live = Vec::new();
    for r in rows {
        if linalg::is_zero_vec(&r.covector) {
            if r.constant.is_positive() {
                return Err(FramingError::Empty);
            }
        } else {
            live.push(r);
        }
    }
    let h = HPolyhedron {
        ambient_dim: n,
        inequalities: live,
        equalities: vec![],
    };
    let t = match enumerate_vertices(&h) {
        Ok(t) => t,
        Err(PolytopeError::Unbounded) => return Err(FramingError::Unbounded),
        Err(e) => return Err(e.into()),
    };
    if t.is_empty() {
        return Err(FramingError::Empty);
    }
    let verts: Vec<Vec<Scalar>> = t.vertices.iter().map(|x| slice.point(x)).collect();
    let pts: Vec<&Vec<Scalar>> = verts.iter().collect();
    let dim = affine_rank(&pts);
    if dim != n {
        return Err(FramingError::NotFullDimensional { dim, expected: n });
    }
    Ok(VPolytope::new(slice.ambient_dim, verts))
}

fn germ_incidence(p: &VPolytope, germ: &[GermFacet]) -> FaceIncidence {
    let rows: Vec<Halfspace> = germ.iter().map(GermFacet::halfspace).collect();
    FaceIncidence::compute(&p.vertices, &rows)
}

/// Frames `L ∩ Q`, keeping only the facets of `Q` that cut `P` in a facet.
/// Equalities of `Q` are intersected into `L`. With `strict`, a
/// non-transversal intersection is an error.
pub fn slice_with(q: &HPolyhedron, l: &AffineSubspace, strict: bool) -> Result<FramedPolytope, FramingError> {
    let n = q.ambient_dim;
    if l.ambient_dim != n {
        return Err(FramingError::Dimension("slice and Q differ in dimension".into()));
    }
    let mut germ = Vec::with_capacity(q.inequalities.len());
    for (i, h) in q.inequalities.iter().enumerate() {
        let c = h.canonical();
        let u = c.int_covector().ok_or(FramingError::IrrationalFacet(i))?;
        germ.push(GermFacet::new(u, c.constant));
    }
    let l = if q.equalities.is_empty() {
        l.clone()
    } else {
        intersect_equalities(l, &q.equalities).ok_or(FramingError::Empty)?
    };
    let full = FramedPolytope::new(n, l.clone(), germ)?;
    let keep: Vec<GermFacet> = (0..full.germ.len())
        .filter(|&i| {
            let vs = full.facet_vertices(i);
            let pts: Vec<&Vec<Scalar>> = vs.iter().map(|&v| &full.polytope.vertices[v]).collect();
            !pts.is_empty() && affine_rank(&pts) + 1 == full.dim()
        })
        .map(|i| full.germ[i].clone())
        .collect();
    let framed = FramedPolytope::new(n, l, keep)?;
    if strict {
        let t = checks::transversality(&framed);
        if !t.ok {
            let facets = match t.witness {
                Some(Witness::Face { facets, .. }) => facets,
                _ => vec![],
            };
            return Err(FramingError::NotTransversal { facets });
        }
    }
    Ok(framed)
}

pub fn slice(q: &HPolyhedron, l: &AffineSubspace) -> Result<FramedPolytope, FramingError> {
    slice_with(q, l, true)
}

/// `L ∩ {equalities}`; `None` when empty.
pub fn intersect_equalities(l: &AffineSubspace, eqs: &[Halfspace]) -> Option<AffineSubspace> {
    let k = l.dim();
    let rows: Vec<Halfspace> = eqs
        .iter()
        .map(|e| {
            let a: Vec<Scalar> = l.directions.iter().map(|d| dot(&e.covector, d)).collect();
            Halfspace::new(a, -e.slack(&l.base))
        })
        .collect();
    let sub = AffineSubspace::from_equalities(k, &rows)?;
    let base = l.point(&sub.base);
    let dirs: Vec<Vec<Scalar>> = sub
        .directions
        .iter()
        .map(|t| {
            let p = l.point(t);
            linalg::sub(&p, &l.base)
        })
        .collect();
    Some(AffineSubspace::new(l.ambient_dim, base, &dirs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&v| Scalar::from(v)).collect()
    }

    pub(crate) fn quadrant_corner() -> FramedPolytope {
        let q = HPolyhedron::from_inequalities(
            2,
            vec![Halfspace::from_ints(&[1, 0], 0), Halfspace::from_ints(&[0, 1], 0)],
        )
        .unwrap();
        let l = AffineSubspace::new(2, ip(&[1, 0]), &[ip(&[1, -1])]);
        slice(&q, &l).unwrap()
    }

    #[test]
    fn quadrant_slice_is_a_segment() {
        let f = quadrant_corner();
        assert_eq!(f.germ().len(), 2);
        assert_eq!(f.polytope().vertices, vec![ip(&[0, 1]), ip(&[1, 0])]);
    }

    #[test]
    fn product_slice_drops_far_facets() {
        let q = HPolyhedron::from_inequalities(
            2,
            vec![
                Halfspace::from_ints(&[1, 0], 0),
                Halfspace::from_ints(&[-1, 0], -1),
                Halfspace::from_ints(&[0, 1], -5),
                Halfspace::from_ints(&[0, -1], -5),
            ],
        )
        .unwrap();
        let l = AffineSubspace::new(2, ip(&[0, 0]), &[ip(&[1, 0])]);
        let f = slice(&q, &l).unwrap();
        assert_eq!(f.germ().len(), 2);
        assert_eq!(f.germ()[0].covector, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn missing_slice_is_empty() {
        let q = HPolyhedron::from_inequalities(
            2,
            vec![Halfspace::from_ints(&[1, 0], 0), Halfspace::from_ints(&[0, 1], 0)],
        )
        .unwrap();
        let l = AffineSubspace::new(2, ip(&[0, -1]), &[ip(&[1, 0])]);
        assert_eq!(slice(&q, &l), Err(FramingError::Empty));
    }

    #[test]
    fn germ_box_reslices_identically() {
        let f = quadrant_corner();
        let (h, synth) = f.germ_hpolyhedron(true);
        assert_eq!(synth.len(), 4);
        assert_eq!(slice(&h, f.slice()).unwrap(), f);
    }

    #[test]
    fn transform_roundtrip() {
        let f = quadrant_corner();
        let m = IntegralAffineMap::new(
            crate::arith::IntMatrix::from_i64(&[&[2, 1], &[1, 1]]),
            ip(&[3, -1]),
        );
        let g = f.transform(&m).unwrap();
        assert_eq!(g.transform(&m.inverse().unwrap()).unwrap(), f);
    }
}
