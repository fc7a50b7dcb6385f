//! Affine maps `x -> A x + t` with integer linear part.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::linalg::{add, to_scalars};
use crate::arith::{smith_invariants, IntMatrix, Scalar};
use crate::polytope::cmp_vec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntegralAffineMap {
    /// `N_out x N_in`.
    pub linear: IntMatrix,
    pub translation: Vec<Scalar>,
}

impl IntegralAffineMap {
    pub fn new(linear: IntMatrix, translation: Vec<Scalar>) -> Self {
        assert_eq!(linear.rows(), translation.len());
        IntegralAffineMap {
            linear,
            translation,
        }
    }

    pub fn identity(n: usize) -> Self {
        IntegralAffineMap::new(IntMatrix::identity(n), vec![Scalar::zero(); n])
    }

    pub fn linear_only(linear: IntMatrix) -> Self {
        let n = linear.rows();
        IntegralAffineMap::new(linear, vec![Scalar::zero(); n])
    }

    pub fn source_dim(&self) -> usize {
        self.linear.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply_linear(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.source_dim());
        (0..self.linear.rows())
            .map(|i| {
                let row = to_scalars(&self.linear.row(i));
                crate::arith::linalg::dot(&row, x)
            })
            .collect()
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        add(&self.apply_linear(x), &self.translation)
    }

    /// `u . A`: an integer covector on the target pulled back to the source.
    pub fn pullback(&self, u: &[BigInt]) -> Vec<BigInt> {
        self.linear.vec_mul(u)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &IntegralAffineMap) -> IntegralAffineMap {
        IntegralAffineMap::new(
            self.linear.mul(&inner.linear),
            self.apply(&inner.translation),
        )
    }

    /// Injective with torsion-free cokernel.
    pub fn is_saturated(&self) -> bool {
        let inv = smith_invariants(&self.linear);
        inv.len() == self.source_dim() && inv.iter().all(One::is_one)
    }

    /// Inverse of a map with unimodular square linear part.
    pub fn inverse(&self) -> Option<IntegralAffineMap> {
        let inv = self.linear.unimodular_inverse()?;
        let lin = IntegralAffineMap::linear_only(inv);
        let t: Vec<Scalar> = lin.apply_linear(&self.translation).into_iter().map(|x| -x).collect();
        Some(IntegralAffineMap::new(lin.linear, t))
    }

    /// Lexicographic order on (linear entries, translation).
    pub fn lex_cmp(&self, o: &IntegralAffineMap) -> std::cmp::Ordering {
        let a: Vec<Vec<BigInt>> = self.linear.row_vecs();
        let b: Vec<Vec<BigInt>> = o.linear.row_vecs();
        a.cmp(&b)
            .then_with(|| cmp_vec(&self.translation, &o.translation))
    }
}
