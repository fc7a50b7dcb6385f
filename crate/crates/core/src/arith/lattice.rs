//! Sublattices of `Z^N`: saturation, complements and rational spans.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::intmat::{hnf, hnf_rank, integer_kernel, smith_invariants, IntMatrix};
use super::scalar::{gcd_all, lcm_all, Scalar};
use super::ArithError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    pub ambient_dim: usize,
    #[serde(serialize_with = "ser_vecs")]
    pub basis_vectors: Vec<Vec<BigInt>>,
}

fn ser_vecs<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
}

impl LatticeBasis {
    pub fn new(ambient_dim: usize, basis_vectors: Vec<Vec<BigInt>>) -> Self {
        debug_assert!(basis_vectors.iter().all(|v| v.len() == ambient_dim));
        LatticeBasis {
            ambient_dim,
            basis_vectors,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis_vectors.len()
    }

    /// Basis vectors as the columns of an `N x r` matrix.
    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.ambient_dim, &self.basis_vectors)
    }

    pub fn from_matrix_cols(m: &IntMatrix) -> Self {
        LatticeBasis::new(m.rows(), m.col_vecs())
    }

    /// All invariant factors equal one.
    pub fn is_saturated(&self) -> bool {
        smith_invariants(&self.to_matrix())
            .iter()
            .all(One::is_one)
    }

    /// Canonical basis: the nonzero columns of the column Hermite form.
    pub fn canonical(&self) -> LatticeBasis {
        let (h, _) = hnf(&self.to_matrix());
        let r = hnf_rank(&h);
        LatticeBasis::from_matrix_cols(&h.select_cols(0..r))
    }
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = lcm_all(v.iter().map(|x| x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

/// The positive multiple of `v` with coprime integer entries.
pub fn primitive_covector(v: &[Scalar]) -> Result<Vec<BigInt>, ArithError> {
    let rats: Vec<BigRational> = v
        .iter()
        .map(|x| x.as_rational().cloned().ok_or(ArithError::Irrational))
        .collect::<Result<_, _>>()?;
    primitive_rational(&rats)
}

pub fn primitive_rational(v: &[BigRational]) -> Result<Vec<BigInt>, ArithError> {
    let ints = clear_denominators(v);
    primitive_int(&ints)
}

pub fn primitive_int(v: &[BigInt]) -> Result<Vec<BigInt>, ArithError> {
    let g = gcd_all(v.iter());
    if g.is_zero() {
        return Err(ArithError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Rational and radical parts of each vector, as rational vectors.
fn split_parts(vectors: &[Vec<Scalar>]) -> Vec<Vec<BigRational>> {
    let mut out = Vec::with_capacity(2 * vectors.len());
    for v in vectors {
        out.push(v.iter().map(|x| x.rational_part().clone()).collect());
        if v.iter().any(|x| !x.is_rational()) {
            out.push(v.iter().map(|x| x.radical_part().clone()).collect());
        }
    }
    out
}

fn rational_rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..ncols {
                let v = &m[rank][j] * &f;
                m[i][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `Q` of the given vectors after splitting each coordinate into
/// its rational and radical parts.
pub fn qspan_rank(vectors: &[Vec<Scalar>]) -> usize {
    let Some(n) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.rational_part().clone())
                .chain(v.iter().map(|x| x.radical_part().clone()))
                .collect()
        })
        .collect();
    rational_rank(&rows, 2 * n)
}

/// The lattice `{u in Z^N : <u, v> = 0 for every v}`.
pub fn integer_annihilator(n: usize, vectors: &[Vec<Scalar>]) -> LatticeBasis {
    let rows: Vec<Vec<BigInt>> = split_parts(vectors)
        .iter()
        .map(|r| clear_denominators(r))
        .collect();
    if rows.is_empty() {
        return LatticeBasis::new(n, IntMatrix::identity(n).col_vecs());
    }
    let k = integer_kernel(&IntMatrix::from_rows(n, &rows));
    LatticeBasis::from_matrix_cols(&k).canonical()
}

/// Integer basis of the smallest rational subspace containing the vectors.
pub fn rational_closure(n: usize, vectors: &[Vec<Scalar>]) -> LatticeBasis {
    let ann = integer_annihilator(n, vectors);
    if ann.rank() == 0 {
        return LatticeBasis::new(n, IntMatrix::identity(n).col_vecs());
    }
    let k = integer_kernel(&ann.to_matrix().transpose());
    LatticeBasis::from_matrix_cols(&k).canonical()
}

/// `Z^N` intersected with the span of rational vectors, canonically based.
pub fn lattice_intersect_subspace(
    n: usize,
    spanning: &[Vec<Scalar>],
) -> Result<LatticeBasis, ArithError> {
    if spanning.iter().flatten().any(|x| !x.is_rational()) {
        return Err(ArithError::Irrational);
    }
    if spanning.iter().any(|v| v.len() != n) {
        return Err(ArithError::Dimension("spanning vector length".into()));
    }
    if spanning.iter().all(|v| v.iter().all(Scalar::is_zero)) {
        return Ok(LatticeBasis::new(n, vec![]));
    }
    Ok(rational_closure(n, spanning))
}

/// A basis `K` with `S ∪ K` a basis of `Z^N`.
pub fn lattice_complement(s: &LatticeBasis) -> Result<LatticeBasis, ArithError> {
    let n = s.ambient_dim;
    let r = s.rank();
    if r == 0 {
        return Ok(LatticeBasis::new(n, IntMatrix::identity(n).col_vecs()));
    }
    let inv = smith_invariants(&s.to_matrix());
    if inv.len() != r || !inv.iter().all(One::is_one) {
        return Err(ArithError::NotSaturated(
            inv.iter().map(|x| x.to_string()).collect(),
        ));
    }
    // S^T U = [I | 0] for saturated S, so the last rows of U^{-1} complete S.
    let (_, u) = hnf(&s.to_matrix().transpose());
    let v = u.unimodular_inverse().expect("hnf transform is unimodular");
    let rows: Vec<Vec<BigInt>> = (r..n).map(|i| v.row(i)).collect();
    Ok(LatticeBasis::new(n, rows))
}

/// `|det|` of the square matrix with the given columns.
pub fn abs_det_cols(n: usize, cols: &[Vec<BigInt>]) -> BigInt {
    IntMatrix::from_cols(n, cols).det().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|x| x.parse().unwrap()).collect()
    }

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_covector(&s(&["2/3", "4/3"])).unwrap(), bv(&[1, 2]));
        assert_eq!(primitive_covector(&s(&["-4", "-6"])).unwrap(), bv(&[-2, -3]));
        assert_eq!(primitive_covector(&s(&["0", "5"])).unwrap(), bv(&[0, 1]));
        assert!(primitive_covector(&s(&["0", "0"])).is_err());
        assert!(primitive_covector(&s(&["sqrt(2)", "1"])).is_err());
    }

    #[test]
    fn intersect_examples() {
        let l = lattice_intersect_subspace(2, &[s(&["1", "1"])]).unwrap();
        assert_eq!(l.basis_vectors, vec![bv(&[1, 1])]);
        let l = lattice_intersect_subspace(2, &[s(&["1/2", "1"])]).unwrap();
        assert_eq!(l.basis_vectors, vec![bv(&[1, 2])]);
        let l = lattice_intersect_subspace(2, &[s(&["1", "0"]), s(&["0", "1"])]).unwrap();
        assert_eq!(l.basis_vectors, vec![bv(&[1, 0]), bv(&[0, 1])]);
    }

    #[test]
    fn complement_examples() {
        let k = lattice_complement(&LatticeBasis::new(2, vec![bv(&[1, 0])])).unwrap();
        assert_eq!(k.basis_vectors, vec![bv(&[0, 1])]);
        let k = lattice_complement(&LatticeBasis::new(2, vec![bv(&[1, 2])])).unwrap();
        assert_eq!(k.basis_vectors, vec![bv(&[0, 1])]);
        let full = LatticeBasis::new(2, vec![bv(&[1, 0]), bv(&[0, 1])]);
        assert_eq!(lattice_complement(&full).unwrap().rank(), 0);
        assert!(lattice_complement(&LatticeBasis::new(2, vec![bv(&[2, 0])])).is_err());
    }

    #[test]
    fn qspan_examples() {
        assert_eq!(qspan_rank(&[s(&["1", "0"]), s(&["0", "1"])]), 2);
        assert_eq!(qspan_rank(&[s(&["1"]), s(&["sqrt(2)"])]), 2);
        assert_eq!(qspan_rank(&[s(&["1", "sqrt(2)"]), s(&["2", "2*sqrt(2)"])]), 1);
    }

    #[test]
    fn annihilator_of_irrational_line_is_zero() {
        let a = integer_annihilator(2, &[s(&["1", "sqrt(2)"])]);
        assert_eq!(a.rank(), 0);
        let c = rational_closure(2, &[s(&["1", "sqrt(2)"])]);
        assert_eq!(c.rank(), 2);
    }
}
