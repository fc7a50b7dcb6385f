//! Crossed products, the rational decision procedure and quotient data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::affine_map::IntegralAffineMap;
use crate::arith::linalg::{int_dot, sub};
use crate::arith::{IntMatrix, Scalar};
use crate::framing::{
    canonical_embedding, irrationality_degree, is_regular_germ, validate, FramedPolytope, GermFacet,
    IrrationalityReport, Witness,
};
use crate::normal_form::{kernel_directions, KernelDirections};
use crate::polytope::{irredundant_hrep, AffineSubspace, FaceIncidence, VPolytope};

use super::embedding::{verify_morita_embedding, EmbeddingReport, EmbeddingStage};
use super::iso::{germ_correspondence, polytope_isos, IsoOptions};
use super::linear::{apply_int, content, Frame};
use super::{facet_weights, MoritaError};

/// Lattice coordinates on a rational slice: `x = o + B tau`.
struct SliceCoords {
    frame: Frame,
    origin: Vec<Scalar>,
}

impl SliceCoords {
    fn new(f: &FramedPolytope, shear: bool) -> Self {
        SliceCoords {
            frame: Frame::new(f.ambient_dim(), &f.slice().directions, shear),
            origin: f.slice().base.clone(),
        }
    }

    fn tau(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.frame.coords(&sub(x, &self.origin))
    }

    /// Germ facet `u.x >= c` in frame coordinates: `(a, k)` with `a` the
    /// slice part, and the constant of `a.tau >= c - u.o`.
    fn facet(&self, g: &GermFacet) -> (Vec<BigInt>, Vec<BigInt>, Scalar) {
        let uc = self.frame.c.vec_mul(&g.covector);
        let r = self.frame.rank();
        (
            uc[..r].to_vec(),
            uc[r..].to_vec(),
            &g.constant - &int_dot(&g.covector, &self.origin),
        )
    }
}

/// `tau2 = A tau1 + t` between lattice coordinates on the two slices,
/// carrying vertex `i` of `P1` to vertex `vertex_map[i]` of `P2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceIdentification {
    pub linear: IntMatrix,
    pub translation: Vec<Scalar>,
    pub vertex_map: Vec<usize>,
}

fn tau_polytope(f: &FramedPolytope, sc: &SliceCoords) -> (VPolytope, Vec<Vec<Scalar>>) {
    let taus: Vec<Vec<Scalar>> = f.polytope().vertices.iter().map(|v| sc.tau(v)).collect();
    (VPolytope::new(f.dim(), taus.clone()), taus)
}

/// All identifications of the two slice polytopes in lattice coordinates.
pub fn slice_identifications(f1: &FramedPolytope, f2: &FramedPolytope) -> Result<Vec<SliceIdentification>, MoritaError> {
    if !f1.is_rational_slice() || !f2.is_rational_slice() {
        return Err(MoritaError::IrrationalSlice);
    }
    if f1.dim() != f2.dim() {
        return Ok(vec![]);
    }
    let (s1, s2) = (SliceCoords::new(f1, false), SliceCoords::new(f2, false));
    let (p1, t1) = tau_polytope(f1, &s1);
    let (p2, t2) = tau_polytope(f2, &s2);
    let maps = polytope_isos(&p1, &p2, &IsoOptions::default())?;
    Ok(maps
        .into_iter()
        .filter_map(|m| {
            let vertex_map = t1
                .iter()
                .map(|x| {
                    let y = m.apply(x);
                    t2.iter().position(|z| z == &y)
                })
                .collect::<Option<Vec<usize>>>()?;
            Some(SliceIdentification {
                linear: m.linear,
                translation: m.translation,
                vertex_map,
            })
        })
        .collect())
}

#[derive(Clone, Debug, Default)]
pub struct CrossedOptions {
    /// Use the sheared complement `K + B 1` in place of the HNF one.
    pub alternate_complement: bool,
}

/// A third framed polytope with verified embeddings of both inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaWitness {
    pub third: FramedPolytope,
    pub embed_1: IntegralAffineMap,
    pub embed_2: IntegralAffineMap,
}

impl MoritaWitness {
    pub fn reports(&self, f1: &FramedPolytope, f2: &FramedPolytope) -> (EmbeddingReport, EmbeddingReport) {
        (
            verify_morita_embedding(&self.embed_1, f1, &self.third),
            verify_morita_embedding(&self.embed_2, f2, &self.third),
        )
    }

    pub fn verify(&self, f1: &FramedPolytope, f2: &FramedPolytope) -> bool {
        let (a, b) = self.reports(f1, f2);
        a.ok && b.ok
    }
}

fn check_input(f: &FramedPolytope, which: usize) -> Result<(), MoritaError> {
    if !f.is_rational_slice() {
        return Err(MoritaError::IrrationalSlice);
    }
    let r = validate(f);
    let checks = [
        ("not transversal", &r.transversal),
        ("not simple", &r.simple),
        ("germ not regular", &r.regular),
        ("germ not canonical", &r.germ_canonical),
    ];
    for (reason, c) in checks {
        if !c.ok {
            return Err(MoritaError::InvalidFraming {
                which,
                reason: reason.into(),
            });
        }
    }
    Ok(())
}

fn scale_int(v: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x * k).collect()
}

pub fn crossed_product(
    f1: &FramedPolytope,
    f2: &FramedPolytope,
    ident: &SliceIdentification,
) -> Result<MoritaWitness, MoritaError> {
    crossed_product_with(f1, f2, ident, &CrossedOptions::default())
}

/// Builds `F3` in `R^n + R^k1 + R^k2` whose germ facet over each facet of
/// `P` is the span of the two input facets, then verifies regularity and
/// both embeddings.
pub fn crossed_product_with(
    f1: &FramedPolytope,
    f2: &FramedPolytope,
    ident: &SliceIdentification,
    opts: &CrossedOptions,
) -> Result<MoritaWitness, MoritaError> {
    check_input(f1, 1)?;
    check_input(f2, 2)?;
    let n = f1.dim();
    if f2.dim() != n || ident.linear.rows() != n || ident.linear.cols() != n {
        return Err(MoritaError::Dimension("identification does not match the slices".into()));
    }
    let a_inv = ident
        .linear
        .unimodular_inverse()
        .ok_or_else(|| MoritaError::Identification("linear part is not unimodular".into()))?;
    let sigma = germ_correspondence(f1, f2, &ident.vertex_map)
        .ok_or_else(|| MoritaError::Identification("vertex map does not carry facets to facets".into()))?;
    let s1 = SliceCoords::new(f1, opts.alternate_complement);
    let s2 = SliceCoords::new(f2, opts.alternate_complement);
    let (k1, k2) = (f1.ambient_dim() - n, f2.ambient_dim() - n);
    let n3 = n + k1 + k2;

    let mut germ = Vec::with_capacity(f1.germ().len());
    for (i, &j) in sigma.iter().enumerate() {
        let (a1, c1, d1) = s1.facet(&f1.germ()[i]);
        let (b2, c2, d2) = s2.facet(&f2.germ()[j]);
        // b2.tau2 >= d2 with tau2 = A tau1 + t
        let a2 = ident.linear.vec_mul(&b2);
        let d2 = d2 - int_dot(&b2, &ident.translation);
        let (w1, w2) = (content(&a1), content(&a2));
        if w1.is_zero() || w2.is_zero() {
            return Err(MoritaError::Inconsistent(format!("facet {i} is constant on the slice")));
        }
        let nu: Vec<BigInt> = a1.iter().map(|x| x / &w1).collect();
        let kappa = d1 / Scalar::from_bigint(w1.clone());
        if a2.iter().map(|x| x / &w2).collect::<Vec<_>>() != nu || d2 / Scalar::from_bigint(w2.clone()) != kappa {
            return Err(MoritaError::HyperplaneSpan { facet: i });
        }
        let l = w1.lcm(&w2);
        let mut u: Vec<BigInt> = scale_int(&nu, &l);
        u.extend(scale_int(&c1, &(&l / &w1)));
        u.extend(scale_int(&c2, &(&l / &w2)));
        let g = content(&u);
        let u: Vec<BigInt> = u.iter().map(|x| x / &g).collect();
        let c = kappa * Scalar::from_bigint(l) / Scalar::from_bigint(g);
        germ.push(GermFacet::new(u, c));
    }
    let dirs: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut e = vec![Scalar::zero(); n3];
            e[i] = Scalar::one();
            e
        })
        .collect();
    let third = FramedPolytope::new(n3, AffineSubspace::new(n3, vec![Scalar::zero(); n3], &dirs), germ)?;
    let reg = is_regular_germ(&third);
    if !reg.ok {
        return Err(MoritaError::NotRegular {
            detail: match reg.witness {
                Some(Witness::Smith { facets, invariants, .. }) => format!(
                    "germ facets {facets:?} have invariants [{}]",
                    invariants.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                ),
                w => format!("{w:?}"),
            },
        });
    }

    // (tau; s1) -> (tau; s1; 0)
    let mut j1 = IntMatrix::zeros(n3, n + k1);
    for i in 0..n + k1 {
        j1[(i, i)] = BigInt::one();
    }
    let lin1 = j1.mul(&s1.frame.c_inv);
    let t1: Vec<Scalar> = apply_int(&lin1, &s1.origin).into_iter().map(|x| -x).collect();
    let embed_1 = IntegralAffineMap::new(lin1, t1);

    // (tau2; s2) -> (A^-1 tau2 - A^-1 t; 0; s2)
    let mut j2 = IntMatrix::zeros(n3, n + k2);
    for r in 0..n {
        for c in 0..n {
            j2[(r, c)] = a_inv[(r, c)].clone();
        }
    }
    for i in 0..k2 {
        j2[(n + k1 + i, n + i)] = BigInt::one();
    }
    let lin2 = j2.mul(&s2.frame.c_inv);
    let shift = apply_int(&a_inv, &ident.translation);
    let mut t2: Vec<Scalar> = apply_int(&lin2, &s2.origin);
    for (i, s) in shift.iter().enumerate() {
        t2[i] = &t2[i] + s;
    }
    let t2: Vec<Scalar> = t2.into_iter().map(|x| -x).collect();
    let embed_2 = IntegralAffineMap::new(lin2, t2);

    let w = MoritaWitness { third, embed_1, embed_2 };
    let (r1, r2) = w.reports(f1, f2);
    for (which, r) in [(1, r1), (2, r2)] {
        if !r.ok {
            return Err(MoritaError::EmbeddingRejected {
                which,
                stage: r.failed.unwrap_or(EmbeddingStage::Germ),
                detail: r.detail,
            });
        }
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequivalenceReason {
    Polytopes,
    Weights,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndecidedReason {
    IrrationalSlice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "data", rename_all = "snake_case")]
pub enum MoritaVerdict {
    Equivalent(Box<MoritaWitness>),
    Inequivalent(InequivalenceReason),
    Undecided(UndecidedReason),
}

impl MoritaVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, MoritaVerdict::Equivalent(_))
    }
}

/// Morita equivalence of rational framings: the slice polytopes must be
/// isomorphic with matching facet weights under some isomorphism; a witness
/// is then built and re-verified.
pub fn decide_morita(f1: &FramedPolytope, f2: &FramedPolytope) -> Result<MoritaVerdict, MoritaError> {
    if !f1.is_rational_slice() || !f2.is_rational_slice() {
        return Ok(MoritaVerdict::Undecided(UndecidedReason::IrrationalSlice));
    }
    check_input(f1, 1)?;
    check_input(f2, 2)?;
    let idents = slice_identifications(f1, f2)?;
    if idents.is_empty() {
        return Ok(MoritaVerdict::Inequivalent(InequivalenceReason::Polytopes));
    }
    let (w1, w2) = (facet_weights(f1)?, facet_weights(f2)?);
    for ident in &idents {
        let Some(sigma) = germ_correspondence(f1, f2, &ident.vertex_map) else {
            continue;
        };
        if sigma.iter().enumerate().all(|(i, &j)| w1[i] == w2[j]) {
            let w = crossed_product(f1, f2, ident)?;
            if !w.verify(f1, f2) {
                return Err(MoritaError::Inconsistent("witness failed re-verification".into()));
            }
            return Ok(MoritaVerdict::Equivalent(Box::new(w)));
        }
    }
    Ok(MoritaVerdict::Inequivalent(InequivalenceReason::Weights))
}

/// Rational polytope in its canonical embedding with a weight on each
/// facet, in the facet order of [`irredundant_hrep`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedPolytope {
    pub polytope: VPolytope,
    #[serde(serialize_with = "ser_ints")]
    pub weights: Vec<BigInt>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientInvariant {
    Orbifold(WeightedPolytope),
    Quasifold {
        irrationality: IrrationalityReport,
        kernel: KernelDirections,
    },
}

pub fn quotient_invariant(f: &FramedPolytope) -> Result<QuotientInvariant, MoritaError> {
    if !f.is_rational_slice() {
        return Ok(QuotientInvariant::Quasifold {
            irrationality: irrationality_degree(f.polytope()),
            kernel: kernel_directions(f),
        });
    }
    let emb = canonical_embedding(f.polytope())?;
    let h = irredundant_hrep(&emb.polytope)?;
    let inc = FaceIncidence::compute(&emb.polytope.vertices, &h.inequalities);
    let image: Vec<usize> = f
        .polytope()
        .vertices
        .iter()
        .map(|v| {
            let y = emb.apply(v);
            emb.polytope.vertices.iter().position(|z| z == &y)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| MoritaError::Inconsistent("embedding lost a vertex".into()))?;
    let w = facet_weights(f)?;
    let mut weights = Vec::with_capacity(h.inequalities.len());
    for k in 0..h.inequalities.len() {
        let target = inc.vertices_of(&[k]);
        let i = (0..f.germ().len())
            .find(|&i| {
                let mut s: Vec<usize> = f.facet_vertices(i).iter().map(|&v| image[v]).collect();
                s.sort_unstable();
                s == target
            })
            .ok_or_else(|| MoritaError::Inconsistent(format!("facet {k} has no germ facet")))?;
        weights.push(w[i].clone());
    }
    Ok(QuotientInvariant::Orbifold(WeightedPolytope {
        polytope: emb.polytope,
        weights,
    }))
}
