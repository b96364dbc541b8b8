//! Dense exact-rational linear algebra helpers.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::rational::Rational;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// In-place reduced row echelon form; returns the pivot columns.
/// Only the first `ncols` columns are eligible as pivots (the rest act as an
/// augmented part).
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|v| !v.is_zero()));
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the kernel of the row system (rows of width `ncols`).
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert(mat: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<Rational>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `rows * x = rhs` (rows paired with rhs entries). Returns a
/// particular solution and a kernel basis, or `None` if inconsistent.
pub fn solve_affine(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    ncols: usize,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug, ncols);
    // inconsistent iff a surviving row is all-zero except the augmented column
    for row in &aug {
        if row[..ncols].iter().all(|v| v.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x0 = vec![Rational::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x0[p] = row[ncols].clone();
    }
    Some((x0, kernel_basis(rows, ncols)))
}

/// Scales to a primitive integer vector, preserving direction.
pub fn normalize_ray(v: &mut [Rational]) {
    let mut lcm = BigInt::one();
    for x in v.iter() {
        lcm = lcm.lcm(x.denom());
    }
    let mut gcd = BigInt::zero();
    for x in v.iter() {
        gcd = gcd.gcd(&(x.numer() * &lcm / x.denom()));
    }
    if gcd.is_zero() {
        return;
    }
    let scale = Rational::new(lcm, gcd);
    for x in v.iter_mut() {
        *x *= &scale;
    }
}

/// Primitive integer vector with canonical sign (first nonzero positive).
pub fn normalize_direction(v: &mut [Rational]) {
    normalize_ray(v);
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// Dimension of the affine hull of a point set. `None` for an empty set.
pub fn affine_dim_of_points(points: &[Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn kernel_of_sum_constraint() {
        let rows = vec![vec![int(1), int(1), int(1)]];
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot(&rows[0], v).is_zero());
        }
    }

    #[test]
    fn invert_2x2() {
        let m = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0], vec![int(-2), int(1)]);
        assert_eq!(inv[1], vec![rat(3, 2), rat(-1, 2)]);
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(invert(&singular).is_none());
    }

    #[test]
    fn solve_affine_consistency() {
        let rows = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let (x0, k) = solve_affine(&rows, &[int(2), int(0)], 2).unwrap();
        assert_eq!(x0, vec![int(1), int(1)]);
        assert!(k.is_empty());
        let bad = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve_affine(&bad, &[int(1), int(3)], 2).is_none());
    }

    #[test]
    fn normalize_primitive() {
        let mut v = vec![rat(1, 2), rat(-3, 4), int(0)];
        normalize_ray(&mut v);
        assert_eq!(v, vec![int(2), int(-3), int(0)]);
        let mut d = vec![rat(-1, 3), rat(2, 3)];
        normalize_direction(&mut d);
        assert_eq!(d, vec![int(1), int(-2)]);
    }

    #[test]
    fn affine_dimension_of_square() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ];
        assert_eq!(affine_dim_of_points(&pts), Some(2));
        assert_eq!(affine_dim_of_points(&pts[..1]), Some(0));
        assert_eq!(affine_dim_of_points(&[]), None);
    }
}
