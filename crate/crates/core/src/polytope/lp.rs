//! Exact rational LP feasibility via phase-1 simplex with Bland's rule.

use num::{One, Signed, Zero};

use super::HRep;
use crate::rational::Rational;

/// Decides feasibility of the system exactly, returning a witness point when
/// one exists.
pub fn lp_feasible(h: &HRep) -> Option<Vec<Rational>> {
    let n = h.ambient_dim;

    // Rows of the form -x_i <= 0 just mark x_i as sign-constrained; folding
    // them into the variable bounds keeps the tableau small.
    let mut nonneg = vec![false; n];
    let mut ineqs: Vec<&(Vec<Rational>, Rational)> = Vec::new();
    'rows: for row in &h.inequalities {
        if row.1.is_zero() {
            let mut found = None;
            for (i, c) in row.0.iter().enumerate() {
                if !c.is_zero() {
                    if found.is_some() || *c != -Rational::one() {
                        ineqs.push(row);
                        continue 'rows;
                    }
                    found = Some(i);
                }
            }
            if let Some(i) = found {
                nonneg[i] = true;
                continue;
            }
        }
        ineqs.push(row);
    }

    // Column layout: one column per nonneg variable, a split pair per free
    // variable, then slacks, then one artificial per row.
    let mut pos_col = vec![0usize; n];
    let mut neg_col = vec![None; n];
    let mut ncols = 0usize;
    for i in 0..n {
        pos_col[i] = ncols;
        ncols += 1;
        if !nonneg[i] {
            neg_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let nslack = ineqs.len();
    let m = ineqs.len() + h.equalities.len();
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }
    let total = ncols + nslack + m; // + rhs column appended per row

    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let build_row = |coeffs: &[Rational], rhs: &Rational, slack: Option<usize>, art: usize| {
        let mut row = vec![Rational::zero(); total + 1];
        for (i, c) in coeffs.iter().enumerate() {
            row[pos_col[i]] = c.clone();
            if let Some(nc) = neg_col[i] {
                row[nc] = -c.clone();
            }
        }
        if let Some(s) = slack {
            row[ncols + s] = Rational::one();
        }
        row[total] = rhs.clone();
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[ncols + nslack + art] = Rational::one();
        row
    };
    for (s, (coeffs, rhs)) in ineqs.iter().enumerate() {
        tableau.push(build_row(coeffs, rhs, Some(s), s));
        basis.push(ncols + nslack + s);
    }
    for (e, (coeffs, rhs)) in h.equalities.iter().enumerate() {
        tableau.push(build_row(coeffs, rhs, None, nslack + e));
        basis.push(ncols + nslack + nslack + e);
    }

    // Objective: minimize the sum of artificials. Reduced-cost row, with the
    // negated objective value in the rhs slot.
    let mut obj = vec![Rational::zero(); total + 1];
    for row in &tableau {
        for (o, v) in obj.iter_mut().zip(row) {
            *o -= v;
        }
    }
    for a in 0..m {
        obj[ncols + nslack + a] = Rational::zero();
    }

    loop {
        // Bland: entering = lowest-index column with negative reduced cost.
        let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Leaving: minimum ratio, ties broken by lowest basis variable index.
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tableau.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[total] / &row[enter];
                match &leave {
                    Some((lr, best)) => {
                        if ratio < *best || (ratio == *best && basis[r] < basis[*lr]) {
                            leave = Some((r, ratio));
                        }
                    }
                    None => leave = Some((r, ratio)),
                }
            }
        }
        let (r, _) = leave.expect("phase-1 objective is bounded below");
        // pivot on (r, enter)
        let inv = tableau[r][enter].recip();
        for v in tableau[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = tableau[r].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }

    if !obj[total].is_zero() {
        return None; // infeasible: artificial mass remains
    }
    let mut values = vec![Rational::zero(); total];
    for (r, &b) in basis.iter().enumerate() {
        if b >= ncols + nslack && !tableau[r][total].is_zero() {
            return None; // basic artificial at nonzero value
        }
        values[b] = tableau[r][total].clone();
    }
    let witness: Vec<Rational> = (0..n)
        .map(|i| match neg_col[i] {
            Some(nc) => &values[pos_col[i]] - &values[nc],
            None => values[pos_col[i]].clone(),
        })
        .collect();
    debug_assert!(h.contains(&witness));
    Some(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn contradictory_bounds_infeasible() {
        // x >= 0, x <= -1
        let mut h = HRep::new(1);
        h.push_inequality(vec![int(-1)], int(0));
        h.push_inequality(vec![int(1)], int(-1));
        assert!(lp_feasible(&h).is_none());
    }

    #[test]
    fn box_with_equality() {
        let mut h = HRep::new(2);
        h.push_inequality(vec![int(1), int(0)], int(1));
        h.push_inequality(vec![int(0), int(1)], int(1));
        h.push_inequality(vec![int(-1), int(0)], int(0));
        h.push_inequality(vec![int(0), int(-1)], int(0));
        h.push_equality(vec![int(1), int(1)], rat(3, 2));
        let w = lp_feasible(&h).unwrap();
        assert!(h.contains(&w));
        assert_eq!(&w[0] + &w[1], rat(3, 2));
    }

    #[test]
    fn free_variable_witness() {
        let mut h = HRep::new(1);
        h.push_inequality(vec![int(1)], int(-3)); // x <= -3
        let w = lp_feasible(&h).unwrap();
        assert!(w[0] <= int(-3));
    }

    #[test]
    fn redundant_equalities_ok() {
        let mut h = HRep::new(2);
        h.push_equality(vec![int(1), int(1)], int(1));
        h.push_equality(vec![int(2), int(2)], int(2));
        assert!(lp_feasible(&h).is_some());
        let mut bad = HRep::new(2);
        bad.push_equality(vec![int(1), int(1)], int(1));
        bad.push_equality(vec![int(2), int(2)], int(3));
        assert!(lp_feasible(&bad).is_none());
    }
}
