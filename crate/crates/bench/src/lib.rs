//! Benchmark fixtures.

use fpt_core::lift::{make_qpq, realize_weighted};
use fpt_core::{FramedPolytope, HPolyhedron, Halfspace, IntMatrix, Scalar, VPolytope};
use num_bigint::BigInt;

fn pt(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from(x)).collect()
}

/// `[0, 1]^n` as inequalities.
pub fn cube_h(n: usize) -> HPolyhedron {
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        rows.push(Halfspace::from_ints(&e, 0));
        e[i] = -1;
        rows.push(Halfspace::from_ints(&e, -1));
    }
    HPolyhedron::from_inequalities(n, rows).unwrap()
}

/// The cube with every vertex cut off.
pub fn truncated_cube() -> HPolyhedron {
    let mut h = cube_h(3);
    for m in 0..8i64 {
        let s: Vec<i64> = (0..3).map(|i| if (m >> i) & 1 == 1 { -1 } else { 1 }).collect();
        let off: i64 = s.iter().filter(|&&x| x < 0).count() as i64;
        // s . x >= 1/4 - off, scaled by 4
        let a: Vec<i64> = s.iter().map(|x| 4 * x).collect();
        h.inequalities.push(Halfspace::from_ints(&a, 1 - 4 * off));
    }
    h
}

pub fn hexagon() -> VPolytope {
    VPolytope::new(
        2,
        [[1, 0], [2, 0], [3, 1], [3, 2], [2, 2], [1, 1]].iter().map(|p| pt(p)).collect(),
    )
}

pub fn weighted_hexagon() -> FramedPolytope {
    let w: Vec<BigInt> = [2, 3, 1, 5, 1, 2].iter().map(|&x| BigInt::from(x)).collect();
    realize_weighted(&hexagon(), &w).unwrap()
}

pub fn qpq(p: i64, q: i64) -> FramedPolytope {
    make_qpq(&Scalar::one(), p, q).unwrap()
}

/// Deterministic dense integer matrix with entries in `[-9, 9]`.
pub fn int_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(((i * i * 3 + j * 5 + i * j * j + 1) % 19) as i64 - 9)).collect())
        .collect();
    IntMatrix::from_rows(n, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpt_core::framing::validate;
    use fpt_core::polytope::enumerate_vertices;

    #[test]
    fn fixtures_have_expected_shapes() {
        assert_eq!(enumerate_vertices(&truncated_cube()).unwrap().vertices.len(), 24);
        assert_eq!(hexagon().vertices.len(), 6);
        assert!(validate(&weighted_hexagon()).all_ok());
        assert!(int_matrix(8).det() != BigInt::from(0));
    }
}
