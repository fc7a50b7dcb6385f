//! Gaussian elimination over `Q` or `Q(sqrt m)`.

use num_bigint::BigInt;

use super::scalar::Scalar;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

/// Pairing of an integer covector with a scalar vector.
pub fn int_dot(u: &[BigInt], x: &[Scalar]) -> Scalar {
    debug_assert_eq!(u.len(), x.len());
    let mut s = Scalar::zero();
    for (a, b) in u.iter().zip(x) {
        if a.sign() != num_bigint::Sign::NoSign && !b.is_zero() {
            s += &(Scalar::from_bigint(a.clone()) * b);
        }
    }
    s
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], f: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * f).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn to_scalars(v: &[BigInt]) -> Vec<Scalar> {
    v.iter().map(Scalar::from).collect()
}

/// Row-reduced echelon form of the rows; returns the nonzero rows and the
/// pivot column of each.
pub fn rref(rows: &[Vec<Scalar>], ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r] = scale(&m[r], &inv);
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                if !m[r][j].is_zero() {
                    let v = &m[r][j] * &f;
                    m[i][j] -= &v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : <row, x> = 0 for every row}`, one vector per free column
/// with that coordinate set to one.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let (r, piv) = rref(rows, ncols);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = Scalar::one();
        for (row, &p) in r.iter().zip(&piv) {
            v[p] = -row[f].clone();
        }
        out.push(v);
    }
    out
}

/// A solution of `A x = b` with free coordinates zero, or `None`.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    let aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug, ncols + 1);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (row, &p) in r.iter().zip(&piv) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn inverse(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    if n == 0 {
        return Some(vec![]);
    }
    let aug: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let (r, piv) = rref(&aug, 2 * n);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn transpose(a: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    (0..ncols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|r| dot(r, x)).collect()
}

/// Indices of a maximal independent subset, chosen greedily in order.
pub fn independent_subset(rows: &[Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis, ncols) == basis.len() {
            chosen.push(i);
            if chosen.len() == ncols {
                break;
            }
        } else {
            basis.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[&str]) -> Vec<Scalar> {
        x.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn rref_and_nullspace() {
        let rows = vec![v(&["1", "2", "3"]), v(&["2", "4", "6"]), v(&["0", "1", "1"])];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_and_inverse_radical() {
        let a = vec![v(&["1", "sqrt(2)"]), v(&["0", "1"])];
        let x = solve(&a, &v(&["1", "1"]), 2).unwrap();
        assert_eq!(mat_vec(&a, &x), v(&["1", "1"]));
        let inv = inverse(&a).unwrap();
        let col0: Vec<Scalar> = inv.iter().map(|r| r[0].clone()).collect();
        assert_eq!(mat_vec(&a, &col0), v(&["1", "0"]));
        assert!(inverse(&[v(&["1", "2"]), v(&["2", "4"])]).is_none());
        assert!(solve(&[v(&["1", "1"]), v(&["1", "1"])], &v(&["0", "1"]), 2).is_none());
    }
}
