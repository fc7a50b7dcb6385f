//! Vertex-facet incidence and the face lattice it generates.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::linalg::{self, sub};
use crate::arith::Scalar;

use super::{Halfspace, HPolyhedron, Polytope, PolytopeError};

/// Indices of the rows tight at each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceIncidence {
    pub vertex_active: Vec<Vec<usize>>,
}

impl FaceIncidence {
    pub fn compute(vertices: &[Vec<Scalar>], rows: &[Halfspace]) -> Self {
        let vertex_active = vertices
            .iter()
            .map(|v| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, h)| h.slack(v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        FaceIncidence { vertex_active }
    }

    /// Vertices on every row of `facets`.
    pub fn vertices_of(&self, facets: &[usize]) -> Vec<usize> {
        self.vertex_active
            .iter()
            .enumerate()
            .filter(|(_, a)| facets.iter().all(|f| a.binary_search(f).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }

    /// Rows tight at every listed vertex.
    pub fn facets_of(&self, vertices: &[usize]) -> Vec<usize> {
        let mut it = vertices.iter();
        let Some(&first) = it.next() else {
            return vec![];
        };
        let mut s = self.vertex_active[first].clone();
        for &v in it {
            s.retain(|f| self.vertex_active[v].binary_search(f).is_ok());
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Rows containing the face.
    pub facets: Vec<usize>,
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// All nonempty faces, sorted by dimension then facet set.
#[derive(Clone, Debug, Serialize)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
}

pub(crate) fn affine_rank(points: &[&Vec<Scalar>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<Scalar>> = points[1..].iter().map(|p| sub(p, first)).collect();
    linalg::rank(&diffs, first.len())
}

impl FaceLattice {
    pub fn build(vertices: &[Vec<Scalar>], inc: &FaceIncidence) -> Self {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut work: Vec<Vec<usize>> = Vec::new();
        for a in &inc.vertex_active {
            if seen.insert(a.clone()) {
                work.push(a.clone());
            }
        }
        while let Some(s) = work.pop() {
            for a in &inc.vertex_active {
                let i: Vec<usize> = s.iter().copied().filter(|f| a.binary_search(f).is_ok()).collect();
                if seen.insert(i.clone()) {
                    work.push(i);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|facets| {
                let verts = inc.vertices_of(&facets);
                let pts: Vec<&Vec<Scalar>> = verts.iter().map(|&i| &vertices[i]).collect();
                Face {
                    dim: affine_rank(&pts),
                    facets,
                    vertices: verts,
                }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.facets.cmp(&b.facets)));
        FaceLattice { faces }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    /// `sum_k (-1)^k f_k` over nonempty faces including the polytope.
    pub fn euler_sum(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn find(&self, facets: &[usize]) -> Option<&Face> {
        let mut key = facets.to_vec();
        key.sort_unstable();
        key.dedup();
        self.faces.iter().find(|f| f.facets == key)
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    /// Pairs of adjacent vertices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.of_dim(1)
            .map(|f| (f.vertices[0], f.vertices[f.vertices.len() - 1]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub simple: bool,
    /// First vertex on the wrong number of facets.
    pub witness: Option<usize>,
    pub witness_facet_count: Option<usize>,
}

/// Every vertex lies on exactly `dim P` facets.
pub fn is_simple(p: &Polytope) -> SimplicityReport {
    let d = p.dim();
    for (i, a) in p.incidence.vertex_active.iter().enumerate() {
        if a.len() != d {
            return SimplicityReport {
                simple: false,
                witness: Some(i),
                witness_facet_count: Some(a.len()),
            };
        }
    }
    SimplicityReport {
        simple: true,
        witness: None,
        witness_facet_count: None,
    }
}

/// The cone of directions `d` with `<u_i, d> >= 0` for the facets active at
/// a face, placed at a relative-interior point of that face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportingCone {
    pub base: Vec<Scalar>,
    pub cone: HPolyhedron,
}

pub fn supporting_cone(p: &Polytope, facets: &[usize]) -> Result<SupportingCone, PolytopeError> {
    let lattice = p.face_lattice();
    let face = lattice
        .find(facets)
        .ok_or_else(|| PolytopeError::NotAFace(facets.to_vec()))?;
    let n = p.h.ambient_dim;
    let k = Scalar::from(face.vertices.len() as i64);
    let mut base = vec![Scalar::zero(); n];
    for &v in &face.vertices {
        base = linalg::add(&base, &p.v.vertices[v]);
    }
    let base = linalg::scale(&base, &k.recip());
    let zero = Scalar::zero();
    let ineqs = face
        .facets
        .iter()
        .map(|&i| Halfspace::new(p.h.inequalities[i].covector.clone(), zero.clone()))
        .collect();
    let eqs = p
        .h
        .equalities
        .iter()
        .map(|e| Halfspace::new(e.covector.clone(), zero.clone()))
        .collect();
    Ok(SupportingCone {
        base,
        cone: HPolyhedron {
            ambient_dim: n,
            inequalities: ineqs,
            equalities: eqs,
        },
    })
}
