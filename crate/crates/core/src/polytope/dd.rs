//! Incremental double description for cones `{z : <a_i, z> >= 0}`.

use fixedbitset::FixedBitSet;

use crate::arith::linalg::{dot, independent_subset, inverse, nullspace, rref, scale, sub};
use crate::arith::Scalar;

use super::canonical_direction;

/// Extreme rays of the pointed part and a basis of the lineality space.
#[derive(Clone, Debug)]
pub struct ConeRays {
    pub rays: Vec<Vec<Scalar>>,
    pub lineality: Vec<Vec<Scalar>>,
}

pub fn cone_rays(rows: &[Vec<Scalar>], d: usize) -> ConeRays {
    let lineality = nullspace(rows, d);
    if lineality.is_empty() {
        return ConeRays {
            rays: pointed_rays(rows, d),
            lineality,
        };
    }
    // restrict to the row space, where the cone is pointed
    let (basis, _) = rref(rows, d);
    let r = basis.len();
    let projected: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rays = pointed_rays(&projected, r)
        .into_iter()
        .map(|w| {
            let mut z = vec![Scalar::zero(); d];
            for (b, wk) in basis.iter().zip(&w) {
                if !wk.is_zero() {
                    z = z.iter().zip(b).map(|(x, y)| x + &(y * wk)).collect();
                }
            }
            canonical_direction(&z)
        })
        .collect();
    ConeRays { rays, lineality }
}

struct Ray {
    v: Vec<Scalar>,
    zeros: FixedBitSet,
}

/// Rays of a cone whose rows have full rank `d`.
fn pointed_rays(rows: &[Vec<Scalar>], d: usize) -> Vec<Vec<Scalar>> {
    if d == 0 {
        return vec![];
    }
    let m = rows.len();
    let init = independent_subset(rows, d);
    debug_assert_eq!(init.len(), d);
    let a: Vec<Vec<Scalar>> = init.iter().map(|&i| rows[i].clone()).collect();
    let inv = inverse(&a).expect("independent rows");
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let v: Vec<Scalar> = inv.iter().map(|r| r[j].clone()).collect();
            let mut zeros = FixedBitSet::with_capacity(m);
            for (k, &i) in init.iter().enumerate() {
                if k != j {
                    zeros.insert(i);
                }
            }
            Ray {
                v: canonical_direction(&v),
                zeros,
            }
        })
        .collect();
    let mut in_init = FixedBitSet::with_capacity(m);
    for &i in &init {
        in_init.insert(i);
    }
    for (i, row) in rows.iter().enumerate() {
        if in_init.contains(i) {
            continue;
        }
        let vals: Vec<i8> = rays.iter().map(|r| dot(row, &r.v).signum()).collect();
        let vals_exact: Vec<Scalar> = rays.iter().map(|r| dot(row, &r.v)).collect();
        if vals.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut z = rays[p].zeros.clone();
                z.intersect_with(&rays[n].zeros);
                if z.count_ones(..) + 2 < d {
                    continue;
                }
                let blocked = (0..rays.len())
                    .any(|k| k != p && k != n && z.is_subset(&rays[k].zeros));
                if blocked {
                    continue;
                }
                let v = sub(
                    &scale(&rays[n].v, &vals_exact[p]),
                    &scale(&rays[p].v, &vals_exact[n]),
                );
                z.insert(i);
                fresh.push(Ray {
                    v: canonical_direction(&v),
                    zeros: z,
                });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            match vals[k] {
                1 => next.push(r),
                0 => {
                    r.zeros.insert(i);
                    next.push(r);
                }
                _ => {}
            }
        }
        next.extend(fresh);
        rays = next;
    }
    rays.into_iter().map(|r| r.v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&v| Scalar::from(v)).collect()
    }

    #[test]
    fn quadrant_rays() {
        let c = cone_rays(&[row(&[1, 0]), row(&[0, 1])], 2);
        assert_eq!(c.rays.len(), 2);
        assert!(c.lineality.is_empty());
    }

    #[test]
    fn square_cone_over_four_rows() {
        // homogenised unit square: y0 >= 0 is implied
        let rows = vec![
            row(&[0, 1, 0]),
            row(&[0, 0, 1]),
            row(&[1, -1, 0]),
            row(&[1, 0, -1]),
        ];
        let c = cone_rays(&rows, 3);
        assert_eq!(c.rays.len(), 4);
        for r in &c.rays {
            assert!(rows.iter().all(|a| !dot(a, r).is_negative()));
        }
    }

    #[test]
    fn halfplane_has_lineality() {
        let c = cone_rays(&[row(&[1, 0])], 2);
        assert_eq!(c.lineality.len(), 1);
        assert_eq!(c.rays, vec![row(&[1, 0])]);
    }
}
