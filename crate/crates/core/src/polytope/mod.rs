//! Convex polyhedra over exact scalars: H- and V-representations,
//! conversion between them, faces and supporting cones.

mod dd;
mod faces;

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::lattice::primitive_rational;
use crate::arith::linalg::{self, dot, nullspace, rref, solve, sub};
use crate::arith::Scalar;

pub use dd::cone_rays;
pub use faces::{is_simple, supporting_cone, Face, FaceIncidence, FaceLattice, SimplicityReport, SupportingCone};
pub(crate) use faces::affine_rank;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Empty,
    #[error("row {0} has a zero covector")]
    ZeroCovector(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index set {0:?} is not a face")]
    NotAFace(Vec<usize>),
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
}

/// `<covector, x> >= constant`, or `=` when used as an equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Halfspace {
    pub covector: Vec<Scalar>,
    pub constant: Scalar,
}

impl Halfspace {
    pub fn new(covector: Vec<Scalar>, constant: Scalar) -> Self {
        Halfspace { covector, constant }
    }

    pub fn from_ints(covector: &[i64], constant: i64) -> Self {
        Halfspace {
            covector: covector.iter().map(|&x| Scalar::from(x)).collect(),
            constant: Scalar::from(constant),
        }
    }

    /// `<u, x> - c`.
    pub fn slack(&self, x: &[Scalar]) -> Scalar {
        dot(&self.covector, x) - &self.constant
    }

    pub fn is_rational(&self) -> bool {
        self.covector.iter().all(Scalar::is_rational) && self.constant.is_rational()
    }

    /// Positive rescaling: primitive integer covector when rational, else
    /// division by the absolute value of the first nonzero entry.
    pub fn canonical(&self) -> Halfspace {
        let f = canonical_factor(&self.covector);
        Halfspace {
            covector: linalg::scale(&self.covector, &f),
            constant: &self.constant * &f,
        }
    }

    /// The covector as integers, when it is integral.
    pub fn int_covector(&self) -> Option<Vec<BigInt>> {
        self.covector.iter().map(Scalar::to_integer).collect()
    }
}

/// Positive factor turning `v` into its canonical multiple.
pub fn canonical_factor(v: &[Scalar]) -> Scalar {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return Scalar::one();
    };
    if v.iter().all(Scalar::is_rational) {
        let rats: Vec<_> = v.iter().map(|x| x.rational_part().clone()).collect();
        let prim = primitive_rational(&rats).expect("nonzero vector");
        let idx = v.iter().position(|x| !x.is_zero()).unwrap();
        Scalar::from_bigint(prim[idx].clone()) / first
    } else {
        first.abs().recip()
    }
}

/// The canonical positive multiple of a nonzero vector.
pub fn canonical_direction(v: &[Scalar]) -> Vec<Scalar> {
    linalg::scale(v, &canonical_factor(v))
}

pub fn cmp_vec(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Canonical order of rows: descending by covector, then by constant.
pub fn cmp_rows_desc(a: &Halfspace, b: &Halfspace) -> Ordering {
    cmp_vec(&b.covector, &a.covector).then_with(|| b.constant.cmp(&a.constant))
}

/// Canonical form of an equality system: reduced echelon rows of
/// `[U | c]`, each positively rescaled. `None` when inconsistent.
pub fn canonical_equalities(eqs: &[Halfspace], n: usize) -> Option<Vec<Halfspace>> {
    let aug: Vec<Vec<Scalar>> = eqs
        .iter()
        .map(|h| {
            let mut r = h.covector.clone();
            r.push(h.constant.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug, n + 1);
    if piv.last() == Some(&n) {
        return None;
    }
    Some(
        r.into_iter()
            .map(|mut row| {
                let c = row.pop().unwrap();
                Halfspace::new(row, c).canonical()
            })
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HPolyhedron {
    pub ambient_dim: usize,
    pub inequalities: Vec<Halfspace>,
    pub equalities: Vec<Halfspace>,
}

impl HPolyhedron {
    pub fn new(
        ambient_dim: usize,
        inequalities: Vec<Halfspace>,
        equalities: Vec<Halfspace>,
    ) -> Result<Self, PolytopeError> {
        for (i, h) in inequalities.iter().chain(&equalities).enumerate() {
            if h.covector.len() != ambient_dim {
                return Err(PolytopeError::Dimension(format!(
                    "row {i} has length {} in dimension {ambient_dim}",
                    h.covector.len()
                )));
            }
            if linalg::is_zero_vec(&h.covector) {
                return Err(PolytopeError::ZeroCovector(i));
            }
        }
        Ok(HPolyhedron {
            ambient_dim,
            inequalities,
            equalities,
        })
    }

    pub fn from_inequalities(ambient_dim: usize, rows: Vec<Halfspace>) -> Result<Self, PolytopeError> {
        HPolyhedron::new(ambient_dim, rows, vec![])
    }

    /// Rows rescaled, deduplicated and sorted. An inconsistent equality
    /// system is kept verbatim.
    pub fn canonical(&self) -> HPolyhedron {
        let mut ineqs: Vec<Halfspace> = self.inequalities.iter().map(Halfspace::canonical).collect();
        ineqs.sort_by(cmp_rows_desc);
        ineqs.dedup();
        let equalities = canonical_equalities(&self.equalities, self.ambient_dim)
            .unwrap_or_else(|| self.equalities.clone());
        HPolyhedron {
            ambient_dim: self.ambient_dim,
            inequalities: ineqs,
            equalities,
        }
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.inequalities.iter().all(|h| !h.slack(x).is_negative())
            && self.equalities.iter().all(|h| h.slack(x).is_zero())
    }

    /// Scalars appearing in the description.
    pub fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.inequalities
            .iter()
            .chain(&self.equalities)
            .flat_map(|h| h.covector.iter().chain(std::iter::once(&h.constant)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VPolytope {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<Scalar>>,
}

impl VPolytope {
    /// Sorts and deduplicates; extremality is the caller's responsibility
    /// (see [`VPolytope::hull`]).
    pub fn new(ambient_dim: usize, mut vertices: Vec<Vec<Scalar>>) -> Self {
        vertices.sort_by(|a, b| cmp_vec(a, b));
        vertices.dedup();
        VPolytope {
            ambient_dim,
            vertices,
        }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        VPolytope {
            ambient_dim,
            vertices: vec![],
        }
    }

    /// Extreme points of the convex hull of `points`.
    pub fn hull(ambient_dim: usize, points: Vec<Vec<Scalar>>) -> Self {
        let all = VPolytope::new(ambient_dim, points);
        if all.vertices.len() <= 1 {
            return all;
        }
        let h = irredundant_hrep(&all).expect("nonempty");
        let n = h.ambient_dim;
        let eqs: Vec<Vec<Scalar>> = h.equalities.iter().map(|e| e.covector.clone()).collect();
        let keep = all
            .vertices
            .iter()
            .filter(|v| {
                let mut rows = eqs.clone();
                rows.extend(
                    h.inequalities
                        .iter()
                        .filter(|f| f.slack(v).is_zero())
                        .map(|f| f.covector.clone()),
                );
                linalg::rank(&rows, n) == n
            })
            .cloned()
            .collect();
        VPolytope::new(ambient_dim, keep)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        (!self.is_empty()).then(|| affine_hull(self).dim())
    }

    pub fn is_rational(&self) -> bool {
        self.vertices.iter().flatten().all(Scalar::is_rational)
    }

    pub fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.vertices.iter().flatten()
    }
}

/// Affine subspace `base + span(directions)` in canonical form: directions
/// in reduced echelon form, base zero at the pivot columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineSubspace {
    pub ambient_dim: usize,
    pub base: Vec<Scalar>,
    pub directions: Vec<Vec<Scalar>>,
}

impl AffineSubspace {
    pub fn new(ambient_dim: usize, base: Vec<Scalar>, directions: &[Vec<Scalar>]) -> Self {
        let (dirs, piv) = rref(directions, ambient_dim);
        let mut b = base;
        for (d, &p) in dirs.iter().zip(&piv) {
            let f = b[p].clone();
            if !f.is_zero() {
                b = sub(&b, &linalg::scale(d, &f));
            }
        }
        AffineSubspace {
            ambient_dim,
            base: b,
            directions: dirs,
        }
    }

    pub fn whole(n: usize) -> Self {
        let dirs: Vec<Vec<Scalar>> = (0..n)
            .map(|i| (0..n).map(|j| Scalar::from((i == j) as i64)).collect())
            .collect();
        AffineSubspace::new(n, vec![Scalar::zero(); n], &dirs)
    }

    /// Solution set of the equalities; `None` when inconsistent.
    pub fn from_equalities(n: usize, eqs: &[Halfspace]) -> Option<Self> {
        let a: Vec<Vec<Scalar>> = eqs.iter().map(|e| e.covector.clone()).collect();
        let b: Vec<Scalar> = eqs.iter().map(|e| e.constant.clone()).collect();
        let x0 = solve(&a, &b, n)?;
        Some(AffineSubspace::new(n, x0, &nullspace(&a, n)))
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.directions
            .iter()
            .map(|d| d.iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }

    pub fn point(&self, t: &[Scalar]) -> Vec<Scalar> {
        let mut x = self.base.clone();
        for (d, ti) in self.directions.iter().zip(t) {
            if !ti.is_zero() {
                x = linalg::add(&x, &linalg::scale(d, ti));
            }
        }
        x
    }

    /// Coordinates of a point of the subspace (its pivot entries).
    pub fn coords(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.pivots().into_iter().map(|p| x[p].clone()).collect()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.point(&self.coords(x)) == x
    }

    /// Equalities cutting out the subspace, canonically.
    pub fn equalities(&self) -> Vec<Halfspace> {
        let ann = nullspace(&self.directions, self.ambient_dim);
        let eqs: Vec<Halfspace> = ann
            .into_iter()
            .map(|u| {
                let c = dot(&u, &self.base);
                Halfspace::new(u, c)
            })
            .collect();
        canonical_equalities(&eqs, self.ambient_dim).expect("consistent")
    }

    pub fn is_rational(&self) -> bool {
        self.base.iter().chain(self.directions.iter().flatten()).all(Scalar::is_rational)
    }

    pub fn direction_is_rational(&self) -> bool {
        self.directions.iter().flatten().all(Scalar::is_rational)
    }
}

pub fn affine_hull(p: &VPolytope) -> AffineSubspace {
    let v0 = p.vertices[0].clone();
    let diffs: Vec<Vec<Scalar>> = p.vertices[1..].iter().map(|v| sub(v, &v0)).collect();
    AffineSubspace::new(p.ambient_dim, v0, &diffs)
}

/// Exact vertex set of a bounded polyhedron. An empty polyhedron yields an
/// empty [`VPolytope`].
pub fn enumerate_vertices(p: &HPolyhedron) -> Result<VPolytope, PolytopeError> {
    let n = p.ambient_dim;
    let Some(hull) = AffineSubspace::from_equalities(n, &p.equalities) else {
        return Ok(VPolytope::empty(n));
    };
    let k = hull.dim();
    // homogenised rows (-c', a') over (y0, t), plus y0 >= 0
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(p.inequalities.len() + 1);
    let mut y0 = vec![Scalar::zero(); k + 1];
    y0[0] = Scalar::one();
    rows.push(y0);
    for h in &p.inequalities {
        let mut r = Vec::with_capacity(k + 1);
        r.push(h.slack(&hull.base));
        r.extend(hull.directions.iter().map(|d| dot(&h.covector, d)));
        rows.push(r);
    }
    let cone = cone_rays(&rows, k + 1);
    let mut verts = Vec::new();
    let mut recession = !cone.lineality.is_empty();
    for r in &cone.rays {
        if r[0].is_positive() {
            let inv = r[0].recip();
            let t: Vec<Scalar> = r[1..].iter().map(|x| x * &inv).collect();
            verts.push(hull.point(&t));
        } else {
            recession = true;
        }
    }
    if verts.is_empty() {
        return Ok(VPolytope::empty(n));
    }
    if recession {
        return Err(PolytopeError::Unbounded);
    }
    Ok(VPolytope::new(n, verts))
}

/// Facet-defining inequalities and affine-hull equalities of the convex
/// hull of the points, canonically scaled and sorted.
pub fn irredundant_hrep(p: &VPolytope) -> Result<HPolyhedron, PolytopeError> {
    if p.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let n = p.ambient_dim;
    let hull = affine_hull(p);
    let equalities = hull.equalities();
    let piv = hull.pivots();
    let k = piv.len();
    let mut inequalities = Vec::new();
    if k > 0 {
        let rows: Vec<Vec<Scalar>> = p
            .vertices
            .iter()
            .map(|v| {
                std::iter::once(Scalar::one())
                    .chain(piv.iter().map(|&j| v[j].clone()))
                    .collect()
            })
            .collect();
        let cone = cone_rays(&rows, k + 1);
        for w in cone.rays {
            if linalg::is_zero_vec(&w[1..]) {
                continue;
            }
            let mut u = vec![Scalar::zero(); n];
            for (a, &j) in w[1..].iter().zip(&piv) {
                u[j] = a.clone();
            }
            inequalities.push(Halfspace::new(u, -w[0].clone()).canonical());
        }
    }
    inequalities.sort_by(cmp_rows_desc);
    inequalities.dedup();
    Ok(HPolyhedron {
        ambient_dim: n,
        inequalities,
        equalities,
    })
}

/// A polytope with both representations and its vertex-facet incidence.
#[derive(Clone, Debug, Serialize)]
pub struct Polytope {
    pub v: VPolytope,
    pub h: HPolyhedron,
    pub incidence: FaceIncidence,
}

impl Polytope {
    pub fn from_v(v: VPolytope) -> Result<Self, PolytopeError> {
        let v = VPolytope::hull(v.ambient_dim, v.vertices);
        let h = irredundant_hrep(&v)?;
        let incidence = FaceIncidence::compute(&v.vertices, &h.inequalities);
        Ok(Polytope { v, h, incidence })
    }

    pub fn from_h(h: &HPolyhedron) -> Result<Self, PolytopeError> {
        let v = enumerate_vertices(h)?;
        if v.is_empty() {
            return Err(PolytopeError::Empty);
        }
        Polytope::from_v(v)
    }

    pub fn dim(&self) -> usize {
        self.h.ambient_dim - self.h.equalities.len()
    }

    pub fn face_lattice(&self) -> FaceLattice {
        FaceLattice::build(&self.v.vertices, &self.incidence)
    }
}
