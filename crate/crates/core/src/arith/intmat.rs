//! Dense matrices over the integers with Hermite and Smith normal forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    #[serde(serialize_with = "ser_entries")]
    data: Vec<BigInt>,
}

fn ser_entries<S: serde::Serializer>(d: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(d.iter().map(|x| x.to_string()))
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::from_rows(cols, &rs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut r = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        r[(i, j)] += a * b;
                    }
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * &self[(i, j)]).sum())
            .collect()
    }

    pub fn add(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn hstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = IntMatrix::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..o.cols {
                m[(i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        IntMatrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = idx.into_iter().map(|j| self.col(j)).collect();
        IntMatrix::from_cols(self.rows, &cols)
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = idx.into_iter().map(|i| self.row(i)).collect();
        IntMatrix::from_rows(self.cols, &rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix; `None` when `|det| != 1`.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let (h, u) = hnf(self);
        h.is_identity().then_some(u)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `col[dst] += f * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }

    /// `row[dst] += f * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Column Hermite normal form: returns `(H, U)` with `M * U = H`, `U`
/// unimodular and `H` lower-triangular echelon. Pivots are positive, entries
/// to the left of a pivot in its row lie in `[0, pivot)`, and all zero
/// columns come last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let n = m.cols;
    let mut k = 0;
    for i in 0..m.rows {
        if k == n {
            break;
        }
        loop {
            // smallest nonzero entry of row i among columns k..n moves to k
            let best = (k..n)
                .filter(|&j| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(i, a)].abs().cmp(&h[(i, b)].abs()));
            let Some(best) = best else { break };
            h.swap_cols(k, best);
            u.swap_cols(k, best);
            let mut done = true;
            for j in k + 1..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&h[(i, k)]);
                h.add_col(j, k, &q);
                u.add_col(j, k, &q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        for j in 0..k {
            let q = -h[(i, j)].div_floor(&h[(i, k)]);
            h.add_col(j, k, &q);
            u.add_col(j, k, &q);
        }
        k += 1;
    }
    (h, u)
}

/// Number of nonzero columns of a column Hermite form.
pub fn hnf_rank(h: &IntMatrix) -> usize {
    (0..h.cols)
        .take_while(|&j| (0..h.rows).any(|i| !h[(i, j)].is_zero()))
        .count()
}

/// `S * M * T = D` with `S`, `T` unimodular and `D` diagonal,
/// `d_1 | d_2 | ...`, all diagonal entries non-negative.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub d: IntMatrix,
    pub t: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut s = IntMatrix::identity(rows);
    let mut t = IntMatrix::identity(cols);
    for k in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return SmithForm { s, d, t };
            };
            d.swap_rows(k, bi);
            s.swap_rows(k, bi);
            d.swap_cols(k, bj);
            t.swap_cols(k, bj);
            let mut clean = true;
            for i in k + 1..rows {
                let q = -d[(i, k)].div_floor(&d[(k, k)]);
                d.add_row(i, k, &q);
                s.add_row(i, k, &q);
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                let q = -d[(k, j)].div_floor(&d[(k, k)]);
                d.add_col(j, k, &q);
                t.add_col(j, k, &q);
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row k and retry
            let offender = (k + 1..rows).find(|&i| {
                (k + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(k, k)]))
            });
            match offender {
                Some(i) => {
                    d.add_row(k, i, &BigInt::one());
                    s.add_row(k, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            s.negate_row(k);
        }
    }
    SmithForm { s, d, t }
}

/// Invariant factors `d_1 | d_2 | ...`, zero factors omitted.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    smith_form(m).invariants()
}

/// Basis (as columns) of the lattice `{x in Z^n : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let r = hnf_rank(&h);
    u.select_cols(r..m.cols)
}

/// One integer solution of `A x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len());
    let (h, u) = hnf(a);
    let r = hnf_rank(&h);
    let mut y = vec![BigInt::zero(); a.cols];
    let mut k = 0;
    for i in 0..a.rows {
        let partial: BigInt = (0..k.min(r)).map(|j| &h[(i, j)] * &y[j]).sum();
        let rest = &b[i] - partial;
        if k < r && !h[(i, k)].is_zero() {
            let (q, rem) = rest.div_rem(&h[(i, k)]);
            if !rem.is_zero() {
                return None;
            }
            y[k] = q;
            k += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    Some(u.mul_vec(&y))
}

/// Integer solutions `X` of `A X = B`: a particular solution and a kernel
/// basis of `A`, or `None` when some column has no integer solution.
pub fn solve_integer_matrix(a: &IntMatrix, b: &IntMatrix) -> Option<(IntMatrix, IntMatrix)> {
    let mut cols = Vec::with_capacity(b.cols);
    for j in 0..b.cols {
        cols.push(solve_integer(a, &b.col(j))?);
    }
    Some((IntMatrix::from_cols(a.cols, &cols), integer_kernel(a)))
}
