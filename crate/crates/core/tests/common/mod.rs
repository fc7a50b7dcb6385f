#![allow(dead_code)]

use std::path::PathBuf;

use fpt_core::io::{parse_document, Document};
use fpt_core::{HPolyhedron, Halfspace, IntMatrix, IntegralAffineMap, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn scalars(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from(x)).collect()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Every document of the shipped corpus, by file name.
pub fn corpus() -> Vec<(String, Document)> {
    let mut out: Vec<(String, Document)> = std::fs::read_dir(data_dir())
        .expect("data directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "fpt"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let doc = parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p.file_name().unwrap().to_string_lossy().into_owned(), doc)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn load(name: &str) -> Document {
    let text = std::fs::read_to_string(data_dir().join(name)).unwrap();
    parse_document(&text).unwrap()
}

/// A box `-b_i <= x_i <= b'_i` cut by `extra` random rows with integer
/// coefficients in `[-coef, coef]`, all strictly satisfied at the origin.
pub fn random_hpolytope(rng: &mut impl Rng, n: usize, extra: usize, coef: i64) -> HPolyhedron {
    let mut rows = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        rows.push(Halfspace::from_ints(&e, -rng.gen_range(1..=coef)));
        e[i] = -1;
        rows.push(Halfspace::from_ints(&e, -rng.gen_range(1..=coef)));
    }
    for _ in 0..extra {
        let a: Vec<i64> = loop {
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-coef..=coef)).collect();
            if a.iter().any(|&x| x != 0) {
                break a;
            }
        };
        rows.push(Halfspace::from_ints(&a, -rng.gen_range(1..=coef)));
    }
    rows.shuffle(rng);
    HPolyhedron::from_inequalities(n, rows).unwrap()
}

/// Random element of `GL(n, Z)` as a product of elementary moves.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match rng.gen_range(0..3) {
            0 if i != j => {
                let mut e = IntMatrix::identity(n);
                e[(i, j)] = BigInt::from(rng.gen_range(-2..=2));
                m = e.mul(&m);
            }
            1 => m.swap_rows(i, j),
            _ => {
                let mut f = IntMatrix::identity(n);
                f[(i, i)] = BigInt::from(-1);
                m = f.mul(&m);
            }
        }
    }
    m
}

pub fn random_affine(rng: &mut impl Rng, n: usize) -> IntegralAffineMap {
    let t = (0..n)
        .map(|_| Scalar::from_frac(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
        .collect();
    IntegralAffineMap::new(random_unimodular(rng, n), t)
}

pub fn gcd_of(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |a, b| a.gcd(b))
}

/// Solves a square rational system by elimination; `None` when singular.
pub fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let d = &f * &m[c][k];
                    m[r][k] = &m[r][k] - d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn rat(s: &Scalar) -> BigRational {
    s.as_rational().expect("rational scalar").clone()
}
