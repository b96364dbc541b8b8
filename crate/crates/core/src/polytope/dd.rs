//! Double description: extreme rays of a pointed polyhedral cone
//! `{ z : R z >= 0 }` in exact rational arithmetic.

use num::{Signed, Zero};

use super::linalg::{dot, invert, normalize_ray, rank, rref};
use crate::error::Error;

use crate::rational::Rational;

/// Extreme rays of the pointed cone `{ z : rows . z >= 0 }`.
///
/// Rows are canonically sorted before processing, so the result is
/// independent of the caller's constraint order. Errors if the cone is not
/// pointed (the rows do not have full column rank).
pub fn extreme_rays(rows: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, Error> {
    let dim = rows.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<Rational>> = rows.to_vec();
    rows.sort();
    rows.dedup();

    // Initial simplicial cone from a maximal independent subset; its extreme
    // rays are the columns of the inverse.
    let basis_idx = independent_subset(&rows, dim);
    if basis_idx.len() < dim {
        return Err(Error::InvalidState(
            "cone is not pointed: constraint rows are rank-deficient".into(),
        ));
    }
    let basis_rows: Vec<Vec<Rational>> = basis_idx.iter().map(|&i| rows[i].clone()).collect();
    let inv = invert(&basis_rows).expect("independent subset is invertible");
    let mut rays: Vec<Vec<Rational>> = (0..dim)
        .map(|j| {
            let mut col: Vec<Rational> = inv.iter().map(|row| row[j].clone()).collect();
            normalize_ray(&mut col);
            col
        })
        .collect();

    let mut processed: Vec<usize> = basis_idx.clone();
    for next in 0..rows.len() {
        if processed.contains(&next) {
            continue;
        }
        let a = &rows[next];
        let mut pos = Vec::new();
        let mut zero = Vec::new();
        let mut neg = Vec::new();
        for ray in rays.drain(..) {
            let s = dot(a, &ray);
            if s.is_positive() {
                pos.push(ray);
            } else if s.is_zero() {
                zero.push(ray);
            } else {
                neg.push(ray);
            }
        }
        let mut new_rays = Vec::new();
        for p in &pos {
            for nray in &neg {
                if adjacent(&rows, &processed, p, nray, dim) {
                    let sp = dot(a, p);
                    let sn = dot(a, nray);
                    // positive combination with a . combined == 0
                    let mut combined: Vec<Rational> = p
                        .iter()
                        .zip(nray)
                        .map(|(pv, nv)| &sp * nv - &sn * pv)
                        .collect();
                    normalize_ray(&mut combined);
                    new_rays.push(combined);
                }
            }
        }
        rays = pos;
        rays.extend(zero);
        rays.extend(new_rays);
        rays.sort();
        rays.dedup();
        processed.push(next);
    }
    Ok(rays)
}

/// Indices of a maximal linearly independent subset of rows.
fn independent_subset(rows: &[Vec<Rational>], dim: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut mat: Vec<Vec<Rational>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        mat.push(row.clone());
        if rank(&mat) == mat.len() {
            chosen.push(i);
        } else {
            mat.pop();
        }
    }
    chosen
}

/// Two extreme rays are adjacent iff the constraints active at both have
/// rank dim - 2.
fn adjacent(
    rows: &[Vec<Rational>],
    processed: &[usize],
    p: &[Rational],
    n: &[Rational],
    dim: usize,
) -> bool {
    let mut common: Vec<Vec<Rational>> = Vec::new();
    for &i in processed {
        let a = &rows[i];
        if dot(a, p).is_zero() && dot(a, n).is_zero() {
            common.push(a.clone());
        }
    }
    if common.len() < dim - 2 {
        return false;
    }
    let r = rref(&mut common, dim).len();
    r == dim - 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn orthant_rays() {
        let rows = vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ];
        let mut rays = extreme_rays(&rows).unwrap();
        rays.sort();
        assert_eq!(rays.len(), 3);
        for r in &rays {
            assert_eq!(r.iter().filter(|v| !v.is_zero()).count(), 1);
        }
    }

    #[test]
    fn square_cone_has_four_rays() {
        // homogenized unit square: x <= t, y <= t, x >= 0, y >= 0, t >= 0
        let rows = vec![
            vec![int(1), int(-1), int(0)],
            vec![int(1), int(0), int(-1)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
            vec![int(1), int(0), int(0)],
        ];
        let rays = extreme_rays(&rows).unwrap();
        assert_eq!(rays.len(), 4);
    }

    #[test]
    fn non_pointed_cone_rejected() {
        let rows = vec![vec![int(1), int(0)]];
        assert!(extreme_rays(&rows).is_err());
    }
}
