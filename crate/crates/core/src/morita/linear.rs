//! Lattice frames, exact solving of integer maps, and unimodular matrices
//! with congruence conditions.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::linalg::{self, sub};
use crate::arith::{hnf, lattice_complement, rational_closure, smith_form, solve_integer, IntMatrix, Scalar};

use super::MoritaError;

/// Upper bound on residue classes examined by [`unimodular_with_congruences`].
pub(crate) const SEARCH_LIMIT: u64 = 200_000;

/// `C = [B | K]` with `B` a basis of the lattice points of the rational
/// closure of a direction space and `K` a complement.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub b: IntMatrix,
    pub c: IntMatrix,
    pub c_inv: IntMatrix,
}

impl Frame {
    pub fn new(n: usize, directions: &[Vec<Scalar>], shear: bool) -> Frame {
        let b = if directions.is_empty() {
            IntMatrix::zeros(n, 0)
        } else {
            rational_closure(n, directions).to_matrix()
        };
        let mut k = lattice_complement(&crate::arith::LatticeBasis::from_matrix_cols(&b))
            .expect("rational closures are saturated")
            .to_matrix();
        if shear && b.cols() > 0 {
            let ones = IntMatrix::from_rows(k.cols(), &vec![vec![BigInt::one(); k.cols()]; b.cols()]);
            k = k.add(&b.mul(&ones));
        }
        let c = b.hstack(&k);
        let c_inv = c.unimodular_inverse().expect("frame is unimodular");
        Frame { b, c, c_inv }
    }

    pub fn rank(&self) -> usize {
        self.b.cols()
    }

    /// Coordinates of `x` (a vector of the closure) in the basis `B`.
    pub fn coords(&self, x: &[Scalar]) -> Vec<Scalar> {
        let y = apply_int(&self.c_inv, x);
        y[..self.rank()].to_vec()
    }
}

pub(crate) fn apply_int(m: &IntMatrix, x: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows())
        .map(|i| linalg::int_dot(&m.row(i), x))
        .collect()
}

fn split(x: &[Scalar]) -> [Vec<BigRational>; 2] {
    [
        x.iter().map(|s| s.rational_part().clone()).collect(),
        x.iter().map(|s| s.radical_part().clone()).collect(),
    ]
}

/// The integer matrix `A` (`rows x cols`) with `A x_j = y_j` for all `j`,
/// determined through the rational and radical parts of the vectors.
/// `None` when the equations do not determine `A`, are inconsistent, or
/// force non-integer entries.
pub(crate) fn integer_map(xs: &[Vec<Scalar>], ys: &[Vec<Scalar>], cols: usize, rows: usize) -> Option<IntMatrix> {
    let mut lhs: Vec<Vec<Scalar>> = Vec::with_capacity(2 * xs.len());
    let mut rhs: Vec<Vec<Scalar>> = Vec::with_capacity(2 * xs.len());
    for (x, y) in xs.iter().zip(ys) {
        for (a, b) in split(x).into_iter().zip(split(y)) {
            lhs.push(a.into_iter().map(Scalar::from_rational).collect());
            rhs.push(b.into_iter().map(Scalar::from_rational).collect());
        }
    }
    if cols > 0 && linalg::rank(&lhs, cols) < cols {
        return None;
    }
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let b: Vec<Scalar> = rhs.iter().map(|r| r[i].clone()).collect();
        let a = linalg::solve(&lhs, &b, cols)?;
        let ints: Option<Vec<BigInt>> = a.iter().map(Scalar::to_integer).collect();
        out.push(ints?);
    }
    let m = IntMatrix::from_rows(cols, &out);
    // the solve only used a consistent subsystem if rows were dependent
    for (x, y) in xs.iter().zip(ys) {
        if &apply_int(&m, x) != y {
            return None;
        }
    }
    Some(m)
}

fn neighbours(v: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut out: Vec<usize> = edges
        .iter()
        .filter_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    out.sort_unstable();
    out
}

/// Vertex bijections `P1 -> P2` induced by real affine isomorphisms of the
/// polytopes, found by matching the edges at a base vertex.
pub(crate) fn affine_vertex_maps(
    v1: &[Vec<Scalar>],
    e1: &[(usize, usize)],
    v2: &[Vec<Scalar>],
    e2: &[(usize, usize)],
) -> Vec<Vec<usize>> {
    if v1.len() != v2.len() || v1.is_empty() {
        return vec![];
    }
    if v1.len() == 1 {
        return vec![vec![0]];
    }
    let amb = v1[0].len();
    let nb1 = neighbours(0, e1);
    let diffs: Vec<Vec<Scalar>> = nb1.iter().map(|&w| sub(&v1[w], &v1[0])).collect();
    let basis: Vec<usize> = linalg::independent_subset(&diffs, amb);
    let n = basis.len();
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|&j| diffs[j].clone()).collect();
    let rows = linalg::transpose(&cols, amb);
    let coeffs: Vec<Vec<Scalar>> = match v1
        .iter()
        .map(|x| linalg::solve(&rows, &sub(x, &v1[0]), n))
        .collect::<Option<Vec<_>>>()
    {
        Some(c) => c,
        None => return vec![],
    };
    let index: BTreeMap<&Vec<Scalar>, usize> = v2.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut out = Vec::new();
    for b in 0..v2.len() {
        let nb2 = neighbours(b, e2);
        if nb2.len() != nb1.len() {
            continue;
        }
        'tuple: for tuple in nb2.iter().permutations(n) {
            let d2: Vec<Vec<Scalar>> = tuple.iter().map(|&&w| sub(&v2[w], &v2[b])).collect();
            let mut perm = Vec::with_capacity(v1.len());
            let mut used = vec![false; v2.len()];
            for c in &coeffs {
                let mut img = v2[b].clone();
                for (l, d) in c.iter().zip(&d2) {
                    if !l.is_zero() {
                        img = linalg::add(&img, &linalg::scale(d, l));
                    }
                }
                match index.get(&img) {
                    Some(&j) if !used[j] => {
                        used[j] = true;
                        perm.push(j);
                    }
                    _ => continue 'tuple,
                }
            }
            out.push(perm);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// An integer matrix of determinant `±1` congruent to `qbar` modulo `big`,
/// given `det qbar ≡ ±1 (mod big)`.
pub(crate) fn lift_to_gl(qbar: &IntMatrix, big: &BigInt) -> IntMatrix {
    let k = qbar.rows();
    if big.is_one() || k == 0 {
        return IntMatrix::identity(k);
    }
    let sf = smith_form(qbar);
    let mut p = sf.s.unimodular_inverse().expect("unimodular");
    let qs = sf.t.unimodular_inverse().expect("unimodular");
    let mut d: Vec<BigInt> = (0..k).map(|i| sf.d[(i, i)].clone()).collect();
    let prod = d.iter().fold(BigInt::one(), |a, b| a * b).mod_floor(big);
    if !prod.is_one() {
        // prod ≡ -1: move the sign into P
        d[0] = -d[0].clone();
        for i in 0..k {
            p[(i, 0)] = -p[(i, 0)].clone();
        }
    }
    let mut x = IntMatrix::identity(k);
    let mut c = BigInt::one();
    for j in 0..k.saturating_sub(1) {
        c = (c * &d[j]).mod_floor(big);
        let a = c.clone();
        let b = mod_inverse(&a, big);
        let t: BigInt = (&a * &b - 1) / big;
        let w: BigInt = (-(t * mod_inverse(&a, big))).mod_floor(big);
        let b2 = &b + big * &w;
        let m = (&a * &b2 - 1) / (big * big);
        let mut e = IntMatrix::identity(k);
        e[(j, j)] = a;
        e[(j, j + 1)] = big.clone();
        e[(j + 1, j)] = big * m;
        e[(j + 1, j + 1)] = b2;
        x = x.mul(&e);
    }
    let q = p.mul(&x).mul(&qs);
    debug_assert!(q.det().abs().is_one());
    q
}

/// Some `Q` in `GL(k, Z)` with row `i` of `T Q` congruent to row `i` of `G`
/// modulo `h_i`. `T` and `G` have one row per modulus.
pub(crate) fn unimodular_with_congruences(
    t: &IntMatrix,
    g: &IntMatrix,
    h: &[BigInt],
) -> Result<Option<IntMatrix>, MoritaError> {
    let k = t.cols();
    let live: Vec<usize> = (0..h.len()).filter(|&i| !h[i].is_one()).collect();
    if k == 0 {
        let ok = live.iter().all(|&i| (0..g.cols()).all(|j| g[(i, j)].is_multiple_of(&h[i])));
        return Ok(ok.then(|| IntMatrix::identity(0)));
    }
    if live.is_empty() {
        return Ok(Some(IntMatrix::identity(k)));
    }
    let big = live.iter().fold(BigInt::one(), |a, &i| a.lcm(&h[i]));
    let too_many = || MoritaError::SearchLimit(format!("{k}x{k} unimodular search modulo {big}"));
    let space = num_traits::pow(big.clone(), k);
    if space > BigInt::from(SEARCH_LIMIT) {
        return Err(too_many());
    }
    let bu: u64 = big.clone().try_into().expect("bounded by the search limit");
    let mut columns: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut cands = Vec::new();
        let mut x = vec![0u64; k];
        loop {
            let xv: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
            let ok = live.iter().all(|&i| {
                let s: BigInt = (0..k).map(|c| &t[(i, c)] * &xv[c]).sum();
                (s - &g[(i, j)]).is_multiple_of(&h[i])
            });
            if ok {
                cands.push(xv);
            }
            // odometer
            let mut pos = 0;
            while pos < k {
                x[pos] += 1;
                if x[pos] < bu {
                    break;
                }
                x[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        if cands.is_empty() {
            return Ok(None);
        }
        columns.push(cands);
    }
    let mut visited: u64 = 0;
    let mut idx = vec![0usize; k];
    loop {
        visited += 1;
        if visited > SEARCH_LIMIT {
            return Err(too_many());
        }
        let cols: Vec<Vec<BigInt>> = (0..k).map(|j| columns[j][idx[j]].clone()).collect();
        let qbar = IntMatrix::from_cols(k, &cols);
        let det = qbar.det().mod_floor(&big);
        if det.is_one() || (&det + 1u32) == big {
            return Ok(Some(lift_to_gl(&qbar, &big)));
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < columns[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Integer `X` (`r x m`) and unimodular `D` (`m x m`) with
/// `A2 X + K2 D = K1`, or `None` if there are none.
pub(crate) fn solve_block(
    a2: &IntMatrix,
    k2: &IntMatrix,
    k1: &IntMatrix,
) -> Result<Option<(IntMatrix, IntMatrix)>, MoritaError> {
    let r = a2.rows();
    let nb = a2.cols();
    let m = k2.cols();
    if m == 0 {
        return Ok(Some((IntMatrix::zeros(nb, 0), IntMatrix::zeros(0, 0))));
    }
    // R A2 = [Htop; 0]
    let (h, uh) = hnf(&a2.transpose());
    let rho = crate::arith::intmat::hnf_rank(&h);
    let rmat = uh.transpose();
    let rk2 = rmat.mul(k2);
    let rk1 = rmat.mul(k1);
    let htop = h.transpose().select_rows(0..rho);

    // X exists iff S(RK1_top - RK2_top D) vanishes modulo the invariants
    let sf = smith_form(&htop);
    let moduli: Vec<BigInt> = (0..rho).map(|i| sf.d[(i, i)].clone()).collect();
    let tp = sf.s.mul(&rk2.select_rows(0..rho));
    let gp = sf.s.mul(&rk1.select_rows(0..rho));

    // exact part E D = F0, through E W = [He | 0] and Y = W^-1 D
    let e_mat = rk2.select_rows(rho..r);
    let f0 = rk1.select_rows(rho..r);
    let (he, w) = hnf(&e_mat);
    let e = crate::arith::intmat::hnf_rank(&he);
    let he_e = he.select_cols(0..e);
    let mut ytop_cols = Vec::with_capacity(m);
    for j in 0..m {
        match solve_integer(&he_e, &f0.col(j)) {
            Some(c) => ytop_cols.push(c),
            None => return Ok(None),
        }
    }
    let ytop = IntMatrix::from_cols(e, &ytop_cols);
    let (hy, z) = hnf(&ytop);
    let expected = IntMatrix::identity(e).hstack(&IntMatrix::zeros(e, m - e));
    if hy != expected {
        return Ok(None);
    }

    let tw = tp.mul(&w);
    let ta = tw.select_cols(0..e);
    let tb = tw.select_cols(e..m);
    let gprime = gp.sub(&ta.mul(&ytop)).mul(&z);
    let g_p = gprime.select_cols(0..e);
    let g_q = gprime.select_cols(e..m);

    let mut stacked = tb.clone();
    if rho > 0 {
        let mut diag = IntMatrix::zeros(rho, rho);
        for i in 0..rho {
            diag[(i, i)] = moduli[i].clone();
        }
        stacked = stacked.hstack(&diag);
    }
    let mut p_cols = Vec::with_capacity(e);
    for j in 0..e {
        match solve_integer(&stacked, &g_p.col(j)) {
            Some(s) => p_cols.push(s[..m - e].to_vec()),
            None => return Ok(None),
        }
    }
    let p = IntMatrix::from_cols(m - e, &p_cols);
    let Some(q) = unimodular_with_congruences(&tb, &g_q, &moduli)? else {
        return Ok(None);
    };
    let z_inv = z.unimodular_inverse().expect("unimodular");
    let ybot = p.hstack(&q).mul(&z_inv);
    let d = w.mul(&ytop.vstack(&ybot));

    let rhs = k1.sub(&k2.mul(&d));
    let mut x_cols = Vec::with_capacity(m);
    for j in 0..m {
        let c = solve_integer(a2, &rhs.col(j))
            .ok_or_else(|| MoritaError::Inconsistent("block equation lost its solution".into()))?;
        x_cols.push(c);
    }
    Ok(Some((IntMatrix::from_cols(nb, &x_cols), d)))
}

/// Content of an integer vector (gcd of entries, zero for the zero vector).
pub(crate) fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |a, b| a.gcd(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn lift_matches_residues() {
        let big = BigInt::from(7);
        let qbar = m(&[&[2, 0], &[0, 4]]);
        let q = lift_to_gl(&qbar, &big);
        assert!(q.det().abs().is_one());
        for i in 0..2 {
            for j in 0..2 {
                assert!((&q[(i, j)] - &qbar[(i, j)]).is_multiple_of(&big));
            }
        }
        // det ≡ -1
        let qbar = m(&[&[3, 1], &[1, 2]]);
        let q = lift_to_gl(&qbar, &BigInt::from(6));
        assert!(q.det().abs().is_one());
        for i in 0..2 {
            for j in 0..2 {
                assert!((&q[(i, j)] - &qbar[(i, j)]).is_multiple_of(&BigInt::from(6)));
            }
        }
    }

    #[test]
    fn congruence_search() {
        // first row of Q ≡ (2, 0) mod 5
        let t = m(&[&[1, 0]]);
        let g = m(&[&[2, 0]]);
        let q = unimodular_with_congruences(&t, &g, &[BigInt::from(5)]).unwrap().unwrap();
        assert!(q.det().abs().is_one());
        assert!((&q[(0, 0)] - BigInt::from(2)).is_multiple_of(&BigInt::from(5)));
        assert!(q[(0, 1)].is_multiple_of(&BigInt::from(5)));
        // 1x1: Q ≡ 2 mod 5 is impossible
        let none = unimodular_with_congruences(&m(&[&[1]]), &m(&[&[2]]), &[BigInt::from(5)]).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn block_solution() {
        // rows (1 | 0) and (-2 | -1) against (1 | 0), (-2 | 1)
        let a2 = m(&[&[1], &[-2]]);
        let k2 = m(&[&[0], &[-1]]);
        let k1 = m(&[&[0], &[1]]);
        let (x, d) = solve_block(&a2, &k2, &k1).unwrap().unwrap();
        assert_eq!(d, m(&[&[-1]]));
        assert_eq!(x, m(&[&[0]]));
        let k1 = m(&[&[0], &[3]]);
        assert!(solve_block(&a2, &k2, &k1).unwrap().is_none());
    }

    #[test]
    fn integer_map_from_radical_data() {
        let s2: Scalar = "sqrt(2)".parse().unwrap();
        let x = vec![Scalar::one(), s2.clone()];
        let y = vec![&Scalar::one() + &s2, s2.clone()];
        let a = integer_map(&[x], &[y], 2, 2).unwrap();
        assert_eq!(a, m(&[&[1, 1], &[0, 1]]));
    }
}
