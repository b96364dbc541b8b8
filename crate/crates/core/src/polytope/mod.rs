//! Exact convex polytope engine: H-representation to V-representation
//! conversion by double description, affine dimension, and LP feasibility.
//!
//! "Linearities" are free affine directions along which nothing changes; they
//! are factored out before vertex enumeration and reported separately, so the
//! vertex set describes the pointed quotient.

mod dd;
mod linalg;
mod lp;

use num::{Signed, Zero};

pub use linalg::{affine_dim_of_points, solve_affine};
pub use lp::lp_feasible;

use crate::error::Error;
use crate::rational::Rational;
use linalg::{dot, kernel_basis, normalize_direction, normalize_ray, rref};

/// Exact H-representation: `coeffs . x <= rhs` and `coeffs . x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    pub ambient_dim: usize,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
}

impl HRep {
    pub fn new(ambient_dim: usize) -> Self {
        HRep {
            ambient_dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn push_inequality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.ambient_dim);
        self.inequalities.push((coeffs, rhs));
    }

    pub fn push_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.ambient_dim);
        self.equalities.push((coeffs, rhs));
    }

    /// Exact constraint check.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|(c, r)| dot(c, x) <= *r)
            && self.equalities.iter().all(|(c, r)| dot(c, x) == *r)
    }
}

/// Exact V-representation: vertices of the pointed quotient, recession rays,
/// and linearity (free) directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
    pub linearity_dirs: Vec<Vec<Rational>>,
}

/// Enumerates the vertices of the polyhedron described by `h`.
///
/// Equalities are eliminated first, then the lineality space of the
/// inequality system is extracted and enumeration runs in the pointed
/// quotient (vertices are lifted back through a fixed section, so repeated
/// runs and permuted inputs give identical output).
pub fn enumerate_vertices(h: &HRep) -> Result<VRep, Error> {
    let n = h.ambient_dim;

    // Step 1: solve the equality system, x = x0 + N w.
    let (x0, nullspace) = if h.equalities.is_empty() {
        let eye = (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect();
        (vec![Rational::zero(); n], eye)
    } else {
        let rows: Vec<Vec<Rational>> = h.equalities.iter().map(|(c, _)| c.clone()).collect();
        let rhs: Vec<Rational> = h.equalities.iter().map(|(_, r)| r.clone()).collect();
        solve_affine(&rows, &rhs, n).ok_or(Error::EmptyPolyhedron)?
    };
    let m = nullspace.len(); // reduced dimension

    // Step 2: substitute into the inequalities: A' w <= b'.
    let mut reduced: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (c, r) in &h.inequalities {
        let coeffs: Vec<Rational> = nullspace.iter().map(|col| dot(c, col)).collect();
        let rhs = r - dot(c, &x0);
        if coeffs.iter().all(|v| v.is_zero()) {
            if rhs.is_negative() {
                return Err(Error::EmptyPolyhedron);
            }
            continue; // trivially satisfied
        }
        reduced.push((coeffs, rhs));
    }

    // Step 3: lineality space of the reduced inequality system.
    let ineq_rows: Vec<Vec<Rational>> = reduced.iter().map(|(c, _)| c.clone()).collect();
    let lineality = kernel_basis(&ineq_rows, m);
    let mut linearity_dirs: Vec<Vec<Rational>> = lineality
        .iter()
        .map(|l| {
            let mut amb = apply_section(&nullspace, l);
            normalize_direction(&mut amb);
            amb
        })
        .collect();
    linearity_dirs.sort();

    // Step 4: quotient by the lineality space. Keeping only the pivot
    // columns of the inequality matrix gives an injective section.
    let pivots = {
        let mut mat = ineq_rows.clone();
        rref(&mut mat, m)
    };
    let r = pivots.len();
    debug_assert_eq!(r + lineality.len(), m);

    if r == 0 {
        // no effective inequality constraints left
        if !reduced.is_empty() {
            return Err(Error::InvalidState("pivot extraction failed".into()));
        }
        return Ok(VRep {
            vertices: vec![x0],
            rays: Vec::new(),
            linearity_dirs,
        });
    }

    // Step 5: homogenize to a cone over z = (t, u) and enumerate rays.
    let mut cone_rows: Vec<Vec<Rational>> = Vec::with_capacity(reduced.len() + 1);
    for (c, b) in &reduced {
        let mut row = Vec::with_capacity(r + 1);
        row.push(b.clone());
        for &p in &pivots {
            row.push(-c[p].clone());
        }
        cone_rows.push(row);
    }
    let mut t_row = vec![Rational::zero(); r + 1];
    t_row[0] = Rational::from_integer(1.into());
    cone_rows.push(t_row);

    let cone_rays = dd::extreme_rays(&cone_rows)?;

    // Step 6: dehomogenize and lift back to ambient coordinates.
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for ray in cone_rays {
        let (t, u) = ray.split_first().unwrap();
        let mut w = vec![Rational::zero(); m];
        for (&p, v) in pivots.iter().zip(u) {
            w[p] = v.clone();
        }
        if t.is_zero() {
            let mut amb = apply_section(&nullspace, &w);
            normalize_ray(&mut amb);
            rays.push(amb);
        } else {
            let mut amb = x0.clone();
            for (slot, col) in amb.iter_mut().zip(transpose_apply(&nullspace, &w)) {
                *slot += col / t;
            }
            vertices.push(amb);
        }
    }
    if vertices.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    vertices.sort();
    vertices.dedup();
    rays.sort();
    rays.dedup();
    Ok(VRep {
        vertices,
        rays,
        linearity_dirs,
    })
}

/// x = sum_j w_j * nullspace[j], as an ambient vector.
fn apply_section(nullspace: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
    transpose_apply(nullspace, w)
}

fn transpose_apply(cols: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
    let n = cols.first().map_or(0, |c| c.len());
    let mut out = vec![Rational::zero(); n];
    for (col, wj) in cols.iter().zip(w) {
        for (o, v) in out.iter_mut().zip(col) {
            *o += v * wj;
        }
    }
    out
}

/// Affine dimension of the polyhedron's pointed quotient (the affine hull of
/// its vertex set, free directions factored out).
pub fn affine_dimension(h: &HRep) -> Result<usize, Error> {
    let v = enumerate_vertices(h)?;
    affine_dim_of_points(&v.vertices).ok_or(Error::EmptyPolyhedron)
}

/// For each inequality, whether it is redundant: not tight on enough
/// affinely independent vertices to support a facet of the enumerated
/// polytope.
pub fn redundant_inequalities(h: &HRep, v: &VRep) -> Vec<bool> {
    let dim = affine_dim_of_points(&v.vertices).unwrap_or(0);
    h.inequalities
        .iter()
        .map(|(c, r)| {
            let tight: Vec<Vec<Rational>> = v
                .vertices
                .iter()
                .filter(|x| dot(c, x) == *r)
                .cloned()
                .collect();
            match affine_dim_of_points(&tight) {
                Some(d) => d + 1 < dim,
                None => true,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn unit_square() -> HRep {
        let mut h = HRep::new(2);
        h.push_inequality(vec![int(1), int(0)], int(1));
        h.push_inequality(vec![int(0), int(1)], int(1));
        h.push_inequality(vec![int(-1), int(0)], int(0));
        h.push_inequality(vec![int(0), int(-1)], int(0));
        h
    }

    #[test]
    fn unit_square_vertices() {
        let v = enumerate_vertices(&unit_square()).unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.rays.is_empty());
        assert!(v.linearity_dirs.is_empty());
        assert_eq!(affine_dimension(&unit_square()).unwrap(), 2);
        let expected: Vec<Vec<Rational>> = vec![
            vec![int(0), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
            vec![int(1), int(1)],
        ];
        assert_eq!(v.vertices, expected);
    }

    #[test]
    fn empty_polyhedron_detected() {
        let mut h = HRep::new(1);
        h.push_inequality(vec![int(-1)], int(0));
        h.push_inequality(vec![int(1)], int(-1));
        assert!(matches!(
            enumerate_vertices(&h),
            Err(Error::EmptyPolyhedron)
        ));
    }

    #[test]
    fn equality_slice_of_square() {
        let mut h = unit_square();
        h.push_equality(vec![int(1), int(1)], int(1));
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(
            v.vertices,
            vec![vec![int(0), int(1)], vec![int(1), int(0)]]
        );
        assert_eq!(affine_dimension(&h).unwrap(), 1);
    }

    #[test]
    fn strip_has_linearity() {
        // 0 <= x <= 1, y free
        let mut h = HRep::new(2);
        h.push_inequality(vec![int(1), int(0)], int(1));
        h.push_inequality(vec![int(-1), int(0)], int(0));
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.linearity_dirs, vec![vec![int(0), int(1)]]);
        assert_eq!(v.vertices.len(), 2);
        assert!(v.rays.is_empty());
    }

    #[test]
    fn single_point() {
        let mut h = HRep::new(2);
        h.push_equality(vec![int(1), int(0)], rat(1, 2));
        h.push_equality(vec![int(0), int(1)], rat(1, 3));
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices, vec![vec![rat(1, 2), rat(1, 3)]]);
        assert_eq!(affine_dimension(&h).unwrap(), 0);
    }

    #[test]
    fn recession_ray_reported() {
        // x >= 0, y >= 0, x - y = 0: a half-line
        let mut h = HRep::new(2);
        h.push_inequality(vec![int(-1), int(0)], int(0));
        h.push_inequality(vec![int(0), int(-1)], int(0));
        h.push_equality(vec![int(1), int(-1)], int(0));
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices, vec![vec![int(0), int(0)]]);
        assert_eq!(v.rays, vec![vec![int(1), int(1)]]);
    }

    #[test]
    fn insertion_order_independent() {
        let h = unit_square();
        let base = enumerate_vertices(&h).unwrap();
        // a few permutations of the constraint list
        let perms: Vec<Vec<usize>> = vec![
            vec![3, 2, 1, 0],
            vec![1, 3, 0, 2],
            vec![2, 0, 3, 1],
        ];
        for perm in perms {
            let mut p = HRep::new(2);
            for &i in &perm {
                let (c, r) = h.inequalities[i].clone();
                p.push_inequality(c, r);
            }
            assert_eq!(enumerate_vertices(&p).unwrap(), base);
        }
    }

    #[test]
    fn vertices_satisfy_constraints_and_facets_are_tight() {
        let h = unit_square();
        let v = enumerate_vertices(&h).unwrap();
        for x in &v.vertices {
            assert!(h.contains(x));
        }
        assert_eq!(redundant_inequalities(&h, &v), vec![false; 4]);
        let mut with_redundant = h.clone();
        with_redundant.push_inequality(vec![int(1), int(1)], int(5));
        let v2 = enumerate_vertices(&with_redundant).unwrap();
        assert_eq!(v2.vertices, v.vertices);
        assert_eq!(
            redundant_inequalities(&with_redundant, &v2),
            vec![false, false, false, false, true]
        );
    }
}
