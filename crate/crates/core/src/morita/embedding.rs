//! Checking Morita equivalence embeddings.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::affine_map::IntegralAffineMap;
use crate::arith::linalg::int_dot;
use crate::arith::Scalar;
use crate::framing::FramedPolytope;
use crate::polytope::AffineSubspace;

use super::linear::content;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingStage {
    Saturation,
    Slice,
    Germ,
    UnitMultiples,
}

impl std::fmt::Display for EmbeddingStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EmbeddingStage::Saturation => "saturation",
            EmbeddingStage::Slice => "slice",
            EmbeddingStage::Germ => "germ",
            EmbeddingStage::UnitMultiples => "unit multiples",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub ok: bool,
    /// First failing check.
    pub failed: Option<EmbeddingStage>,
    pub detail: String,
    /// For each germ facet of the target, the source facet it pulls back to.
    pub facet_map: Vec<usize>,
    /// Pullback multiples, per germ facet of the target.
    #[serde(serialize_with = "ser_ints")]
    pub multiples: Vec<BigInt>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl EmbeddingReport {
    fn fail(stage: EmbeddingStage, detail: impl Into<String>) -> Self {
        EmbeddingReport {
            ok: false,
            failed: Some(stage),
            detail: detail.into(),
            facet_map: vec![],
            multiples: vec![],
        }
    }
}

/// Checks that `eta: R^N2 -> R^N1` is a Morita equivalence embedding of
/// `from` into `to`: saturated, slice onto slice, and every germ facet of
/// `to` pulling back to exactly one germ facet of `from`.
pub fn verify_morita_embedding(eta: &IntegralAffineMap, from: &FramedPolytope, to: &FramedPolytope) -> EmbeddingReport {
    use EmbeddingStage::*;
    let (n2, n1) = (from.ambient_dim(), to.ambient_dim());
    if eta.source_dim() != n2 || eta.target_dim() != n1 {
        return EmbeddingReport::fail(
            Saturation,
            format!("map is {}x{}, expected {n1}x{n2}", eta.target_dim(), eta.source_dim()),
        );
    }
    if !eta.is_saturated() {
        return EmbeddingReport::fail(Saturation, "linear part has a nontrivial invariant factor");
    }

    let dirs: Vec<Vec<Scalar>> = from.slice().directions.iter().map(|d| eta.apply_linear(d)).collect();
    let image = AffineSubspace::new(n1, eta.apply(&from.slice().base), &dirs);
    if &image != to.slice() {
        return EmbeddingReport::fail(Slice, "image of the slice differs from the target slice");
    }
    let (pv, qv) = (&from.polytope().vertices, &to.polytope().vertices);
    if pv.len() != qv.len() {
        return EmbeddingReport::fail(Slice, "vertex counts differ");
    }
    let mut vmap = Vec::with_capacity(pv.len());
    for (i, v) in pv.iter().enumerate() {
        match qv.iter().position(|w| w == &eta.apply(v)) {
            Some(j) => vmap.push(j),
            None => return EmbeddingReport::fail(Slice, format!("vertex {i} is not mapped to a vertex")),
        }
    }

    let (g2, g1) = (from.germ(), to.germ());
    if g1.len() != g2.len() {
        return EmbeddingReport::fail(Germ, format!("{} germ facets against {}", g1.len(), g2.len()));
    }
    let mut facet_map = Vec::with_capacity(g1.len());
    let mut multiples = Vec::with_capacity(g1.len());
    let mut used = vec![false; g2.len()];
    for (j, g) in g1.iter().enumerate() {
        let u = eta.pullback(&g.covector);
        let lambda = content(&u);
        if lambda.is_zero() {
            return EmbeddingReport::fail(Germ, format!("germ facet {j} pulls back to zero"));
        }
        let c = &g.constant - &int_dot(&g.covector, &eta.translation);
        let u: Vec<BigInt> = u.iter().map(|x| x / &lambda).collect();
        let c = c / Scalar::from_bigint(lambda.clone());
        let Some(i) = g2.iter().position(|h| h.covector == u && h.constant == c) else {
            return EmbeddingReport::fail(Germ, format!("germ facet {j} pulls back to no germ facet"));
        };
        if used[i] {
            return EmbeddingReport::fail(Germ, format!("germ facet {i} is hit twice"));
        }
        used[i] = true;
        facet_map.push(i);
        multiples.push(lambda);
    }
    let inc1 = &to.incidence().vertex_active;
    for (v, active) in from.incidence().vertex_active.iter().enumerate() {
        let mut mapped: Vec<usize> = inc1[vmap[v]].iter().map(|&j| facet_map[j]).collect();
        mapped.sort_unstable();
        if &mapped != active {
            return EmbeddingReport::fail(Germ, format!("active facets differ at vertex {v}"));
        }
    }

    if let Some(j) = multiples.iter().position(|l| !l.is_one()) {
        return EmbeddingReport {
            ok: false,
            failed: Some(UnitMultiples),
            detail: format!("germ facet {j} pulls back with multiple {}", multiples[j]),
            facet_map,
            multiples,
        };
    }
    EmbeddingReport {
        ok: true,
        failed: None,
        detail: String::new(),
        facet_map,
        multiples,
    }
}
