mod common;

use common::*;
use fpt_core::arith::lattice::abs_det_cols;
use fpt_core::arith::{hnf, lattice_complement, primitive_covector, smith_invariants, solve_integer};
use fpt_core::{IntMatrix, LatticeBasis, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        let rows: Vec<Vec<BigInt>> = v.chunks(cols).map(ints).collect();
        IntMatrix::from_rows(cols, &rows)
    })
}

fn sized_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))
}

fn quadratic() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6).prop_map(|(a, b, c, d)| {
        Scalar::quadratic(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()), 2).unwrap()
    })
}

/// Every column of `b` is an integer combination of the columns of `a`.
fn spans(a: &IntMatrix, b: &IntMatrix) -> bool {
    b.col_vecs().iter().all(|c| solve_integer(a, c).is_some())
}

proptest! {
    #[test]
    fn hnf_is_a_column_basis_change(m in sized_matrix()) {
        let (h, u) = hnf(&m);
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(m.mul(&u), h.clone());
        prop_assert!(spans(&m, &h) && spans(&h, &m));
        prop_assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn smith_invariants_ignore_unimodular_factors(m in matrix(3, 3), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_unimodular(&mut r, 3), random_unimodular(&mut r, 3));
        let inv = smith_invariants(&m);
        prop_assert_eq!(smith_invariants(&a.mul(&m).mul(&b)), inv.clone());
        for w in inv.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
    }

    #[test]
    fn scalar_order_is_total(a in quadratic(), b in quadratic(), c in quadratic()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        let (x, y) = (a.to_f64(), b.to_f64());
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(a < b, x < y);
        }
    }

    #[test]
    fn primitive_covector_ignores_positive_scaling(v in prop::collection::vec(-9i64..=9, 1..5), p in 1i64..=7, q in 1i64..=7) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let s = Scalar::from_frac(p, q);
        let scaled: Vec<Scalar> = scalars(&v).iter().map(|x| x * &s).collect();
        prop_assert_eq!(primitive_covector(&scaled).unwrap(), primitive_covector(&scalars(&v)).unwrap());
    }

    #[test]
    fn complement_completes_a_basis(seed in any::<u64>(), n in 2usize..=4, r in 1usize..=3) {
        prop_assume!(r < n);
        // the first r columns of a unimodular matrix span a saturated lattice
        let u = random_unimodular(&mut rng(seed), n);
        let s = LatticeBasis::new(n, u.col_vecs()[..r].to_vec());
        let k = lattice_complement(&s).unwrap();
        let mut cols = s.basis_vectors.clone();
        cols.extend(k.basis_vectors);
        prop_assert_eq!(abs_det_cols(n, &cols), BigInt::from(1));
    }
}
