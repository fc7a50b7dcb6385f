//! Box liftings, the `Q_{p,q}` family and weight retargeting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::lattice::clear_denominators;
use crate::arith::{smith_invariants, IntMatrix, Scalar};
use crate::framing::{slice_with, transversality, FramedPolytope, FramingError, GermFacet};
use crate::morita::{facet_weight, MoritaError};
use crate::polytope::{
    affine_rank, enumerate_vertices, is_simple, AffineSubspace, HPolyhedron,
    Halfspace, Polytope, PolytopeError, VPolytope,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Framing(#[from] FramingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Morita(#[from] MoritaError),
    #[error("polytope is empty")]
    Empty,
    #[error("row {0} does not define a facet")]
    Redundant(usize),
    #[error("framing is not a cubic lift: {0}")]
    NonCubic(String),
    #[error("polytope is not rational")]
    Irrational,
    #[error("polytope is not simple at vertex {vertex}")]
    NonSimple { vertex: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Clone, Debug, Default)]
pub struct LiftOptions {
    /// Drop rows that do not define a facet instead of failing.
    pub strip_redundant: bool,
    /// Scale every rational row to a primitive integer covector, integer
    /// rows included. This resets all lifted weights to 1.
    pub primitive_rows: bool,
}

/// Projection onto the first `target_dim` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateProjection {
    pub source_dim: usize,
    pub target_dim: usize,
}

impl CoordinateProjection {
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        x[..self.target_dim].to_vec()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftResult {
    pub framed: FramedPolytope,
    pub projection: CoordinateProjection,
    /// Every row has an integer linear part, so `x -> (x, Ax + b)` is an
    /// integral affine embedding.
    pub is_integral_iso: bool,
    /// Rows after normalisation; row `j` becomes the coordinate `y_j`.
    pub rows: Vec<Halfspace>,
    /// Box size `M`.
    #[serde(serialize_with = "ser_int")]
    pub bound: BigInt,
    pub transversal: bool,
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn lift_and_frame(p: &HPolyhedron) -> Result<LiftResult, LiftError> {
    lift_and_frame_with(p, &LiftOptions::default())
}

pub fn lift_and_frame_with(p: &HPolyhedron, opts: &LiftOptions) -> Result<LiftResult, LiftError> {
    let n = p.ambient_dim;
    let v = enumerate_vertices(p)?;
    if v.is_empty() {
        return Err(LiftError::Empty);
    }
    let rows = facet_rows(p, &v, opts)?;
    let k = rows.len();
    let big_n = n + k;

    let mut m = Scalar::zero();
    for x in &v.vertices {
        for c in x {
            m = m.max(c.abs());
        }
        for r in &rows {
            m = m.max(r.slack(x));
        }
    }
    let bound = (m + Scalar::one()).ceil();
    let mb = Scalar::from_bigint(bound.clone());

    let unit = |i: usize, s: i64| -> Vec<Scalar> {
        (0..big_n).map(|j| Scalar::from(if i == j { s } else { 0 })).collect()
    };
    let mut box_rows = Vec::with_capacity(2 * big_n);
    for i in 0..n {
        box_rows.push(Halfspace::new(unit(i, 1), -mb.clone()));
        box_rows.push(Halfspace::new(unit(i, -1), -mb.clone()));
    }
    for j in 0..k {
        box_rows.push(Halfspace::new(unit(n + j, 1), Scalar::zero()));
        box_rows.push(Halfspace::new(unit(n + j, -1), -mb.clone()));
    }
    let q = HPolyhedron::from_inequalities(big_n, box_rows)?;

    // y_j - <a_j, x> = -c_j, plus the equalities of P
    let mut eqs = Vec::with_capacity(k + p.equalities.len());
    for (j, r) in rows.iter().enumerate() {
        let mut u: Vec<Scalar> = r.covector.iter().map(|a| -a).collect();
        u.extend((0..k).map(|i| Scalar::from((i == j) as i64)));
        eqs.push(Halfspace::new(u, -r.constant.clone()));
    }
    for e in &p.equalities {
        let mut u = e.covector.clone();
        u.resize(big_n, Scalar::zero());
        eqs.push(Halfspace::new(u, e.constant.clone()));
    }
    let l = AffineSubspace::from_equalities(big_n, &eqs).ok_or(LiftError::Empty)?;
    let framed = slice_with(&q, &l, false)?;
    debug_assert!(framed
        .germ()
        .iter()
        .enumerate()
        .all(|(j, g)| g.covector == unit_int(big_n, n + j) && g.constant.is_zero()));

    let integer_rows = rows.iter().all(|r| r.covector.iter().all(Scalar::is_integer));
    let is_integral_iso = integer_rows && {
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = unit_int(n, i);
            c.extend(rows.iter().map(|r| r.covector[i].to_integer().expect("integer row")));
            cols.push(c);
        }
        let inv = smith_invariants(&IntMatrix::from_cols(big_n, &cols));
        inv.len() == n && inv.iter().all(One::is_one)
    };
    let transversal = transversality(&framed).ok;
    Ok(LiftResult {
        framed,
        projection: CoordinateProjection {
            source_dim: big_n,
            target_dim: n,
        },
        is_integral_iso,
        rows,
        bound,
        transversal,
    })
}

fn unit_int(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|j| BigInt::from((i == j) as i64)).collect()
}

/// Facet-defining rows of `p` in input order, with rational non-integer
/// rows scaled to coprime integers.
fn facet_rows(p: &HPolyhedron, v: &VPolytope, opts: &LiftOptions) -> Result<Vec<Halfspace>, LiftError> {
    let pts: Vec<&Vec<Scalar>> = v.vertices.iter().collect();
    let dim = affine_rank(&pts);
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for (i, r) in p.inequalities.iter().enumerate() {
        let on: Vec<usize> = (0..v.vertices.len()).filter(|&j| r.slack(&v.vertices[j]).is_zero()).collect();
        let facet_pts: Vec<&Vec<Scalar>> = on.iter().map(|&j| &v.vertices[j]).collect();
        let is_facet = dim > 0
            && !on.is_empty()
            && on.len() < v.vertices.len()
            && affine_rank(&facet_pts) + 1 == dim
            && !seen.contains(&on);
        if !is_facet {
            if opts.strip_redundant {
                continue;
            }
            return Err(LiftError::Redundant(i));
        }
        seen.push(on);
        out.push(normalize_row(r, opts.primitive_rows));
    }
    Ok(out)
}

fn normalize_row(r: &Halfspace, primitive: bool) -> Halfspace {
    if !r.is_rational() {
        return r.clone();
    }
    let integer = r.covector.iter().all(Scalar::is_integer);
    if integer && !primitive {
        return r.clone();
    }
    let rats: Vec<BigRational> = r.covector.iter().map(|x| x.as_rational().unwrap().clone()).collect();
    let ints = clear_denominators(&rats);
    let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    // ints = r.covector * s for a positive rational s
    let (j, a) = r.covector.iter().enumerate().find(|(_, a)| !a.is_zero()).unwrap();
    let s = Scalar::from_bigint(&ints[j] / &g) / a.clone();
    Halfspace::new(
        ints.iter().map(|x| Scalar::from_bigint(x / &g)).collect(),
        &r.constant * &s,
    )
}

/// The framing `Q_{p,q}` of the segment `[(0,0), (a,0)]`: germ `x >= 0` and
/// `p(x - a) + q y <= 0`, slice `y = 0`.
pub fn make_qpq(a: &Scalar, p: i64, q: i64) -> Result<FramedPolytope, LiftError> {
    if p < 1 {
        return Err(LiftError::Parameter(format!("p must be positive, got {p}")));
    }
    if p.gcd(&q) != 1 {
        return Err(LiftError::Parameter(format!("gcd({p}, {q}) != 1")));
    }
    if !a.is_positive() {
        return Err(LiftError::Parameter(format!("a must be positive, got {a}")));
    }
    let l = AffineSubspace::new(2, vec![Scalar::zero(); 2], &[vec![Scalar::one(), Scalar::zero()]]);
    let germ = vec![
        GermFacet::from_ints(&[1, 0], Scalar::zero()),
        GermFacet::from_ints(&[-p, -q], -(a * &Scalar::from(p))),
    ];
    Ok(FramedPolytope::new(2, l, germ)?)
}

/// For a cubic lift of an `n`-polytope in `R^(n+k)`: the germ is exactly
/// `y_j >= 0` in order and the slice is a graph over the `x` coordinates
/// with integer coefficients.
fn check_cubic(f: &FramedPolytope) -> Result<usize, LiftError> {
    let big_n = f.ambient_dim();
    let n = f.dim();
    let k = big_n - n;
    if f.slice().pivots() != (0..n).collect::<Vec<_>>() {
        return Err(LiftError::NonCubic("slice is not a graph over the leading coordinates".into()));
    }
    if f.germ().len() != k {
        return Err(LiftError::NonCubic(format!("expected {k} germ facets, found {}", f.germ().len())));
    }
    for (j, g) in f.germ().iter().enumerate() {
        if g.covector != unit_int(big_n, n + j) || !g.constant.is_zero() {
            return Err(LiftError::NonCubic(format!("germ facet {j} is not y_{j} >= 0")));
        }
    }
    if !f.slice().directions.iter().flatten().all(Scalar::is_integer) {
        return Err(LiftError::NonCubic("slice rows are not integral".into()));
    }
    Ok(n)
}

/// Scales the slice row of facet `i` so that its weight becomes `p`.
pub fn retarget_weights(f: &FramedPolytope, i: usize, p: &BigInt) -> Result<FramedPolytope, LiftError> {
    if !f.is_rational_slice() {
        return Err(LiftError::Irrational);
    }
    let n = check_cubic(f)?;
    if !p.is_positive() {
        return Err(LiftError::Parameter(format!("weight must be positive, got {p}")));
    }
    if i >= f.germ().len() {
        return Err(MoritaError::FacetIndex(i).into());
    }
    let w = facet_weight(f, i)?;
    let r = Scalar::from_rational(BigRational::new(p.clone(), w));
    let c = n + i;
    let mut base = f.slice().base.clone();
    base[c] = &base[c] * &r;
    let dirs: Vec<Vec<Scalar>> = f
        .slice()
        .directions
        .iter()
        .map(|d| {
            let mut d = d.clone();
            d[c] = &d[c] * &r;
            d
        })
        .collect();
    let l = AffineSubspace::new(f.ambient_dim(), base, &dirs);
    Ok(FramedPolytope::new(f.ambient_dim(), l, f.germ().to_vec())?)
}

/// Lift of a full-dimensional rational simple polytope with the given
/// weights, indexed by the facet order of [`crate::polytope::irredundant_hrep`].
pub fn realize_weighted(p: &VPolytope, weights: &[BigInt]) -> Result<FramedPolytope, LiftError> {
    if !p.is_rational() {
        return Err(LiftError::Irrational);
    }
    let poly = Polytope::from_v(p.clone())?;
    if poly.dim() != p.ambient_dim {
        return Err(PolytopeError::NotFullDimensional.into());
    }
    let s = is_simple(&poly);
    if let Some(vertex) = s.witness {
        return Err(LiftError::NonSimple { vertex });
    }
    if weights.len() != poly.h.inequalities.len() {
        return Err(LiftError::Parameter(format!(
            "{} weights for {} facets",
            weights.len(),
            poly.h.inequalities.len()
        )));
    }
    let mut f = lift_and_frame(&poly.h)?.framed;
    for (i, w) in weights.iter().enumerate() {
        f = retarget_weights(&f, i, w)?;
    }
    Ok(f)
}
