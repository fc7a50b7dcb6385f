//! Integral affine isomorphisms of polytopes and of framed polytopes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::affine_map::IntegralAffineMap;
use crate::arith::lattice::clear_denominators;
use crate::arith::linalg::sub;
use crate::arith::{IntMatrix, Scalar};
use crate::framing::{canonical_embedding, irrationality_degree, is_rational_faced, FramedPolytope};
use crate::polytope::{Polytope, PolytopeError, VPolytope};

use super::linear::{affine_vertex_maps, apply_int, integer_map, solve_block, Frame};
use super::{facet_weights, MoritaError};

#[derive(Clone, Debug, Default)]
pub struct IsoOptions {
    /// Replace inputs that are not canonically embedded by their canonical
    /// embeddings. Maps are then between the embedded copies.
    pub auto_embed: bool,
}

pub fn polytope_iso(p1: &VPolytope, p2: &VPolytope) -> Result<Option<IntegralAffineMap>, MoritaError> {
    polytope_iso_with(p1, p2, &IsoOptions::default())
}

pub fn polytope_iso_with(
    p1: &VPolytope,
    p2: &VPolytope,
    opts: &IsoOptions,
) -> Result<Option<IntegralAffineMap>, MoritaError> {
    Ok(polytope_isos(p1, p2, opts)?.into_iter().next())
}

fn rational_faced(p: &VPolytope) -> bool {
    p.vertices.len() <= 1 || is_rational_faced(p).rational_faced
}

fn embedded(p: &VPolytope, which: usize, opts: &IsoOptions) -> Result<VPolytope, MoritaError> {
    if irrationality_degree(p).daff_rank == p.ambient_dim {
        return Ok(p.clone());
    }
    if !opts.auto_embed {
        return Err(MoritaError::NotCanonical { which });
    }
    Ok(canonical_embedding(p)?.polytope)
}

fn rat_content(v: &[BigRational]) -> BigRational {
    let ints = clear_denominators(v);
    let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    if g.is_zero() {
        return BigRational::zero();
    }
    // ints = v * s for the positive s used to clear denominators
    let (j, x) = v.iter().enumerate().find(|(_, x)| !x.is_zero()).unwrap();
    let s = BigRational::from_integer(ints[j].clone()) / x;
    BigRational::from_integer(g) / s.abs()
}

/// Sorted multiset of the lattice contents of the rational and radical parts
/// of the edge vectors; unchanged by `GL(N, Z)` and translations.
fn edge_contents(p: &VPolytope, edges: &[(usize, usize)]) -> Vec<(BigRational, BigRational)> {
    let mut out: Vec<_> = edges
        .iter()
        .map(|&(a, b)| {
            let e = sub(&p.vertices[b], &p.vertices[a]);
            let r: Vec<BigRational> = e.iter().map(|x| x.rational_part().clone()).collect();
            let s: Vec<BigRational> = e.iter().map(|x| x.radical_part().clone()).collect();
            (rat_content(&r), rat_content(&s))
        })
        .collect();
    out.sort();
    out
}

/// Every integral affine isomorphism `P1 -> P2`, lexicographically sorted.
/// Polytopes that differ in rational-facedness have none; if neither is
/// rational-faced the question is refused.
pub fn polytope_isos(p1: &VPolytope, p2: &VPolytope, opts: &IsoOptions) -> Result<Vec<IntegralAffineMap>, MoritaError> {
    if p1.is_empty() || p2.is_empty() {
        return Err(PolytopeError::Empty.into());
    }
    let (rf1, rf2) = (rational_faced(p1), rational_faced(p2));
    if rf1 != rf2 {
        return Ok(vec![]);
    }
    if !rf1 {
        return Err(MoritaError::NotRationalFaced);
    }
    let q1 = embedded(p1, 1, opts)?;
    let q2 = embedded(p2, 2, opts)?;
    let n = q1.ambient_dim;
    if n != q2.ambient_dim || q1.vertices.len() != q2.vertices.len() {
        return Ok(vec![]);
    }
    if q1.vertices.len() == 1 {
        let t = sub(&q2.vertices[0], &q1.vertices[0]);
        return Ok(vec![IntegralAffineMap::new(IntMatrix::identity(n), t)]);
    }
    let a = Polytope::from_v(q1.clone())?;
    let b = Polytope::from_v(q2.clone())?;
    if a.h.inequalities.len() != b.h.inequalities.len() {
        return Ok(vec![]);
    }
    let (la, lb) = (a.face_lattice(), b.face_lattice());
    if la.f_vector() != lb.f_vector() {
        return Ok(vec![]);
    }
    let (ea, eb) = (la.edges(), lb.edges());
    if edge_contents(&a.v, &ea) != edge_contents(&b.v, &eb) {
        return Ok(vec![]);
    }
    let mut out: Vec<IntegralAffineMap> = Vec::new();
    for perm in affine_vertex_maps(&a.v.vertices, &ea, &b.v.vertices, &eb) {
        let xs: Vec<Vec<Scalar>> = a.v.vertices[1..].iter().map(|v| sub(v, &a.v.vertices[0])).collect();
        let ys: Vec<Vec<Scalar>> = perm[1..]
            .iter()
            .map(|&j| sub(&b.v.vertices[j], &b.v.vertices[perm[0]]))
            .collect();
        let Some(lin) = integer_map(&xs, &ys, n, n) else {
            continue;
        };
        if !lin.is_unimodular() {
            continue;
        }
        let t = sub(&b.v.vertices[perm[0]], &apply_int(&lin, &a.v.vertices[0]));
        let map = IntegralAffineMap::new(lin, t);
        let image = VPolytope::new(n, a.v.vertices.iter().map(|v| map.apply(v)).collect());
        if image == b.v {
            out.push(map);
        }
    }
    out.sort_by(IntegralAffineMap::lex_cmp);
    out.dedup();
    Ok(out)
}

/// Germ facet `j` of `f2` matching each germ facet of `f1` under a vertex
/// bijection, if the facet vertex sets correspond.
pub(crate) fn germ_correspondence(f1: &FramedPolytope, f2: &FramedPolytope, perm: &[usize]) -> Option<Vec<usize>> {
    let sets2: Vec<Vec<usize>> = (0..f2.germ().len()).map(|j| f2.facet_vertices(j)).collect();
    let mut used = vec![false; sets2.len()];
    let mut out = Vec::with_capacity(f1.germ().len());
    for i in 0..f1.germ().len() {
        let mut img: Vec<usize> = f1.facet_vertices(i).iter().map(|&v| perm[v]).collect();
        img.sort_unstable();
        let j = (0..sets2.len()).find(|&j| !used[j] && sets2[j] == img)?;
        used[j] = true;
        out.push(j);
    }
    (out.len() == sets2.len()).then_some(out)
}

fn split_row(u: &[BigInt], r: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    (u[..r].to_vec(), u[r..].to_vec())
}

/// An ambient map `x -> U x + t` with `U` in `GL(N, Z)` carrying `F1` onto
/// `F2`: slice onto slice and germ onto germ. The lexicographically least
/// one over all vertex correspondences is returned.
pub fn framed_iso(f1: &FramedPolytope, f2: &FramedPolytope) -> Result<Option<IntegralAffineMap>, MoritaError> {
    let n = f1.ambient_dim();
    if n != f2.ambient_dim()
        || f1.dim() != f2.dim()
        || f1.germ().len() != f2.germ().len()
        || f1.polytope().vertices.len() != f2.polytope().vertices.len()
        || f1.is_rational_slice() != f2.is_rational_slice()
    {
        return Ok(None);
    }
    if f1.is_rational_slice() {
        let mut w1 = facet_weights(f1)?;
        let mut w2 = facet_weights(f2)?;
        w1.sort();
        w2.sort();
        if w1 != w2 {
            return Ok(None);
        }
    }
    let fr1 = Frame::new(n, &f1.slice().directions, false);
    let fr2 = Frame::new(n, &f2.slice().directions, false);
    let r = fr1.rank();
    if r != fr2.rank() {
        return Ok(None);
    }
    let v1 = &f1.polytope().vertices;
    let v2 = &f2.polytope().vertices;
    let e1 = f1.face_lattice().edges();
    let e2 = f2.face_lattice().edges();
    let germ1_t: Vec<Vec<BigInt>> = f1.germ().iter().map(|g| fr1.c.vec_mul(&g.covector)).collect();
    let germ2_t: Vec<Vec<BigInt>> = f2.germ().iter().map(|g| fr2.c.vec_mul(&g.covector)).collect();

    let mut best: Option<IntegralAffineMap> = None;
    for perm in affine_vertex_maps(v1, &e1, v2, &e2) {
        let Some(sigma) = germ_correspondence(f1, f2, &perm) else {
            continue;
        };
        // block on the rational closure, read off the vertex differences
        let a = if v1.len() > 1 {
            let xs: Vec<Vec<Scalar>> = v1[1..].iter().map(|v| fr1.coords(&sub(v, &v1[0]))).collect();
            let ys: Vec<Vec<Scalar>> = perm[1..]
                .iter()
                .map(|&j| fr2.coords(&sub(&v2[j], &v2[perm[0]])))
                .collect();
            match integer_map(&xs, &ys, r, r) {
                Some(a) => a,
                None => continue,
            }
        } else {
            IntMatrix::identity(r)
        };
        if !a.is_unimodular() {
            continue;
        }
        let m = n - r;
        let mut a2 = Vec::new();
        let mut k2 = Vec::new();
        let mut k1 = Vec::new();
        let mut consistent = true;
        for (i, &j) in sigma.iter().enumerate() {
            let (b1, c1) = split_row(&germ1_t[i], r);
            let (b2, c2) = split_row(&germ2_t[j], r);
            if a.vec_mul(&b2) != b1 {
                consistent = false;
                break;
            }
            a2.push(b2);
            k2.push(c2);
            k1.push(c1);
        }
        if !consistent {
            continue;
        }
        let a2 = IntMatrix::from_rows(r, &a2);
        let k2 = IntMatrix::from_rows(m, &k2);
        let k1 = IntMatrix::from_rows(m, &k1);
        let Some((x, d)) = solve_block(&a2, &k2, &k1)? else {
            continue;
        };
        let top = a.hstack(&x);
        let bottom = IntMatrix::zeros(m, r).hstack(&d);
        let u_t = top.vstack(&bottom);
        let u = fr2.c.mul(&u_t).mul(&fr1.c_inv);
        let t = sub(&v2[perm[0]], &apply_int(&u, &v1[0]));
        let map = IntegralAffineMap::new(u, t);
        if f1.transform(&map).ok().as_ref() != Some(f2) {
            continue;
        }
        if best.as_ref().is_none_or(|b| map.lex_cmp(b) == Ordering::Less) {
            best = Some(map);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::make_qpq;

    fn ip(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    fn square() -> VPolytope {
        VPolytope::new(2, vec![ip(&[0, 0]), ip(&[1, 0]), ip(&[0, 1]), ip(&[1, 1])])
    }

    #[test]
    fn radical_translation() {
        let s2: Scalar = "sqrt(2)".parse().unwrap();
        let shifted = VPolytope::new(
            2,
            square().vertices.iter().map(|v| vec![&v[0] + &s2, v[1].clone()]).collect(),
        );
        let all = polytope_isos(&square(), &shifted, &IsoOptions::default()).unwrap();
        assert_eq!(all.len(), 8);
        let id = all.iter().find(|m| m.linear.is_identity()).unwrap();
        assert_eq!(id.translation, vec![s2, Scalar::zero()]);
    }

    #[test]
    fn shear_recovered() {
        let sh = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let image = VPolytope::new(2, square().vertices.iter().map(|v| apply_int(&sh, v)).collect());
        let all = polytope_isos(&square(), &image, &IsoOptions::default()).unwrap();
        assert!(all.iter().any(|m| m.linear == sh && m.translation == ip(&[0, 0])));
        let first = polytope_iso(&square(), &image).unwrap().unwrap();
        assert_eq!(&first, &all[0]);
    }

    #[test]
    fn lattice_length_separates_segments() {
        let a = VPolytope::new(1, vec![ip(&[0]), ip(&[1])]);
        let b = VPolytope::new(1, vec![ip(&[0]), ip(&[2])]);
        assert_eq!(polytope_iso(&a, &b).unwrap(), None);
        assert!(polytope_iso(&b, &b).unwrap().is_some());
    }

    #[test]
    fn embedding_required() {
        let d = VPolytope::new(2, vec![ip(&[0, 0]), ip(&[1, 1])]);
        let e = VPolytope::new(1, vec![ip(&[3]), ip(&[4])]);
        assert_eq!(polytope_iso(&d, &e), Err(MoritaError::NotCanonical { which: 1 }));
        let opts = IsoOptions { auto_embed: true };
        assert!(polytope_iso_with(&d, &e, &opts).unwrap().is_some());
    }

    #[test]
    fn rational_facedness_mismatch() {
        let s2: Scalar = "sqrt(2)".parse().unwrap();
        let bad = VPolytope::new(2, vec![ip(&[0, 0]), ip(&[1, 0]), vec![Scalar::one(), s2.clone()]]);
        let good = VPolytope::new(2, vec![ip(&[0, 0]), ip(&[1, 0]), ip(&[1, 1])]);
        assert_eq!(polytope_isos(&bad, &good, &IsoOptions::default()).unwrap(), vec![]);
        assert_eq!(polytope_iso(&bad, &bad), Err(MoritaError::NotRationalFaced));
    }

    #[test]
    fn qpq_reflections() {
        for (p, q) in [(1, 1), (2, 1), (3, 2), (5, 3)] {
            let a = make_qpq(&Scalar::one(), p, q).unwrap();
            let b = make_qpq(&Scalar::one(), p, -q).unwrap();
            let m = framed_iso(&a, &b).unwrap().expect("reflection");
            assert_eq!(a.transform(&m).unwrap(), b);
        }
    }

    #[test]
    fn qpq_distinct_classes() {
        let a = make_qpq(&Scalar::one(), 2, 1).unwrap();
        let b = make_qpq(&Scalar::one(), 2, 3).unwrap();
        assert_eq!(framed_iso(&a, &b).unwrap(), None);
        let c = make_qpq(&Scalar::one(), 3, 1).unwrap();
        assert_eq!(framed_iso(&a, &c).unwrap(), None);
    }

    #[test]
    fn transported_framing_recovered() {
        let f = make_qpq(&Scalar::from(2), 3, 2).unwrap();
        let s2: Scalar = "sqrt(2)".parse().unwrap();
        let phi = IntegralAffineMap::new(IntMatrix::from_i64(&[&[2, 1], &[1, 1]]), vec![s2, Scalar::from(-4)]);
        let g = f.transform(&phi).unwrap();
        let m = framed_iso(&f, &g).unwrap().unwrap();
        assert_eq!(f.transform(&m).unwrap(), g);
    }
}
