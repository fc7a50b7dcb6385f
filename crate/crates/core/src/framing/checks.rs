//! Rationality, simplicity, transversality and regularity checks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::linalg::{self, int_dot, sub};
use crate::arith::{integer_annihilator, smith_invariants, IntMatrix, LatticeBasis, Scalar};
use crate::polytope::{affine_hull, affine_rank, is_simple, AffineSubspace, Polytope, VPolytope};

use super::{FramedPolytope, FramingError, GermFacet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A face given by the germ facets containing it, with one of its vertices.
    Face { facets: Vec<usize>, vertex: usize },
    Vertex { vertex: usize, facet_count: usize },
    Facet { facet: usize },
    Smith {
        facets: Vec<usize>,
        vertex: usize,
        #[serde(serialize_with = "ser_ints")]
        invariants: Vec<BigInt>,
    },
    Message { text: String },
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub ok: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn pass() -> Self {
        Check { ok: true, witness: None }
    }

    fn fail(w: Witness) -> Self {
        Check {
            ok: false,
            witness: Some(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub bounded: Check,
    pub transversal: Check,
    pub simple: Check,
    pub regular: Check,
    pub rational_faced: Check,
    pub germ_canonical: Check,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.bounded.ok
            && self.transversal.ok
            && self.simple.ok
            && self.regular.ok
            && self.rational_faced.ok
            && self.germ_canonical.ok
    }
}

pub(crate) fn transversality(f: &FramedPolytope) -> Check {
    let n = f.dim();
    for (v, active) in f.incidence().vertex_active.iter().enumerate() {
        let rows: Vec<Vec<Scalar>> = active.iter().map(|&i| f.restricted_covector(i)).collect();
        if linalg::rank(&rows, n) != rows.len() {
            return Check::fail(Witness::Face {
                facets: active.clone(),
                vertex: v,
            });
        }
    }
    Check::pass()
}

fn simplicity(f: &FramedPolytope) -> Check {
    let n = f.dim();
    for (v, active) in f.incidence().vertex_active.iter().enumerate() {
        if active.len() != n {
            return Check::fail(Witness::Vertex {
                vertex: v,
                facet_count: active.len(),
            });
        }
    }
    Check::pass()
}

fn germ_canonicity(f: &FramedPolytope) -> Check {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for i in 0..f.germ().len() {
        let vs = f.facet_vertices(i);
        let pts: Vec<&Vec<Scalar>> = vs.iter().map(|&v| &f.polytope().vertices[v]).collect();
        if pts.is_empty() || affine_rank(&pts) + 1 != f.dim() || seen.contains(&vs) {
            return Check::fail(Witness::Facet { facet: i });
        }
        seen.push(vs);
    }
    Check::pass()
}

/// At every face of `P` the active germ covectors have all Smith invariants 1.
/// Faces are checked through their vertices: the active set of a face is
/// contained in that of each of its vertices.
pub fn is_regular_germ(f: &FramedPolytope) -> Check {
    let n = f.ambient_dim();
    for (v, active) in f.incidence().vertex_active.iter().enumerate() {
        if active.is_empty() {
            continue;
        }
        let rows: Vec<Vec<BigInt>> = active.iter().map(|&i| f.germ()[i].covector.clone()).collect();
        let inv = smith_invariants(&IntMatrix::from_rows(n, &rows));
        if inv.len() != rows.len() || !inv.iter().all(One::is_one) {
            return Check::fail(Witness::Smith {
                facets: active.clone(),
                vertex: v,
                invariants: inv,
            });
        }
    }
    Check::pass()
}

pub fn validate(f: &FramedPolytope) -> ValidationReport {
    let rf = if f.dim() == 0 {
        Check::pass()
    } else {
        let r = is_rational_faced(f.polytope());
        match r.facets.iter().position(|c| matches!(c.certificate, Certificate::Absent { .. })) {
            None => Check::pass(),
            Some(i) => Check::fail(Witness::Message {
                text: format!("facet {i} of P has no integral certificate"),
            }),
        }
    };
    ValidationReport {
        bounded: Check::pass(),
        transversal: transversality(f),
        simple: simplicity(f),
        regular: is_regular_germ(f),
        rational_faced: rf,
        germ_canonical: germ_canonicity(f),
    }
}

/// Like [`validate`], but reports construction failures (empty or unbounded
/// slice) as a failed `bounded` flag instead of an error.
pub fn validate_parts(
    ambient_dim: usize,
    slice: AffineSubspace,
    germ: Vec<GermFacet>,
) -> Result<ValidationReport, FramingError> {
    match FramedPolytope::new(ambient_dim, slice, germ) {
        Ok(f) => Ok(validate(&f)),
        Err(e @ (FramingError::Unbounded | FramingError::Empty | FramingError::NotFullDimensional { .. })) => {
            let fail = Check::fail(Witness::Message { text: e.to_string() });
            Ok(ValidationReport {
                bounded: fail.clone(),
                transversal: fail.clone(),
                simple: fail.clone(),
                regular: fail.clone(),
                rational_faced: fail.clone(),
                germ_canonical: fail,
            })
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Integer covector constant on the facet, increasing into `P`.
    Covector {
        #[serde(serialize_with = "ser_ints")]
        covector: Vec<BigInt>,
    },
    /// Every integer covector constant on the facet is constant on `P`.
    Absent { annihilator: LatticeBasis },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetCertificate {
    pub vertices: Vec<usize>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalFacedReport {
    pub rational_faced: bool,
    /// In the facet order of the irredundant H-representation.
    pub facets: Vec<FacetCertificate>,
}

pub fn is_rational_faced(p: &VPolytope) -> RationalFacedReport {
    let n = p.ambient_dim;
    let poly = Polytope::from_v(p.clone()).expect("nonempty polytope");
    let hull = affine_hull(&poly.v);
    let mut facets = Vec::new();
    for i in 0..poly.h.inequalities.len() {
        let vs = poly.incidence.vertices_of(&[i]);
        let v0 = &poly.v.vertices[vs[0]];
        let diffs: Vec<Vec<Scalar>> = vs[1..].iter().map(|&v| sub(&poly.v.vertices[v], v0)).collect();
        let ann = integer_annihilator(n, &diffs);
        let found = ann.basis_vectors.iter().find_map(|a| {
            let vals: Vec<Scalar> = hull.directions.iter().map(|d| int_dot(a, d)).collect();
            if vals.iter().all(Scalar::is_zero) {
                return None;
            }
            // orient into P
            let inward = poly
                .v
                .vertices
                .iter()
                .all(|w| !int_dot(a, &sub(w, v0)).is_negative());
            Some(if inward {
                a.clone()
            } else {
                a.iter().map(|x| -x).collect()
            })
        });
        let certificate = match found {
            Some(covector) => Certificate::Covector { covector },
            None => Certificate::Absent { annihilator: ann },
        };
        facets.push(FacetCertificate {
            vertices: vs,
            certificate,
        });
    }
    RationalFacedReport {
        rational_faced: facets
            .iter()
            .all(|f| matches!(f.certificate, Certificate::Covector { .. })),
        facets,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantReport {
    pub delzant: bool,
    pub rational: bool,
    pub simple: bool,
    /// First vertex whose primitive facet normals fail to form a basis.
    pub witness_vertex: Option<usize>,
    #[serde(serialize_with = "ser_opt_int")]
    pub witness_determinant: Option<BigInt>,
}

fn ser_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// Rational, simple, and the primitive normals at each vertex form a
/// basis of `Z^n`.
pub fn is_delzant(p: &VPolytope) -> Result<DelzantReport, FramingError> {
    let poly = Polytope::from_v(p.clone())?;
    if poly.dim() != p.ambient_dim {
        return Err(crate::polytope::PolytopeError::NotFullDimensional.into());
    }
    let normals: Option<Vec<Vec<BigInt>>> = poly.h.inequalities.iter().map(|h| h.int_covector()).collect();
    let simple = is_simple(&poly).simple;
    let Some(normals) = normals else {
        return Ok(DelzantReport {
            delzant: false,
            rational: false,
            simple,
            witness_vertex: None,
            witness_determinant: None,
        });
    };
    let mut report = DelzantReport {
        delzant: simple,
        rational: true,
        simple,
        witness_vertex: None,
        witness_determinant: None,
    };
    if !simple {
        return Ok(report);
    }
    for (v, active) in poly.incidence.vertex_active.iter().enumerate() {
        let rows: Vec<Vec<BigInt>> = active.iter().map(|&i| normals[i].clone()).collect();
        let det = IntMatrix::from_rows(p.ambient_dim, &rows).det().abs();
        if !det.is_one() {
            report.delzant = false;
            report.witness_vertex = Some(v);
            report.witness_determinant = Some(det);
            break;
        }
    }
    debug_assert!(report.witness_determinant.as_ref().is_none_or(|d| !d.is_zero()));
    Ok(report)
}
