//! Exact phase-one simplex for `A u = b, u >= 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::linalg::QVec;

/// Returns some `u >= 0` with `A u = b`, or `None` when infeasible.
///
/// Bland's rule guarantees termination; every pivot is exact.
pub fn feasible_point(a: &[QVec], b: &[BigRational]) -> Option<QVec> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // Columns: n originals, m artificials, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<QVec> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r = vec![BigRational::zero(); width];
        for (j, x) in row.iter().enumerate() {
            r[j] = if flip { -x.clone() } else { x.clone() };
        }
        r[n + i] = BigRational::one();
        r[width - 1] = rhs.abs();
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective: minimise the sum of artificials, written as reduced costs.
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry.
        let (p, _) = leave?;
        pivot(&mut t, &mut cost, p, enter);
        basis[p] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut u = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            u[j] = t[i][width - 1].clone();
        }
    }
    Some(u)
}

fn pivot(t: &mut [QVec], cost: &mut QVec, p: usize, col: usize) {
    let inv = t[p][col].recip();
    for x in t[p].iter_mut() {
        *x *= &inv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != p && !row[col].is_zero() {
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (x, y) in cost.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::{dot, from_ints};

    #[test]
    fn finds_point_on_simplex() {
        let a = vec![from_ints(&[1, 1, 1])];
        let b = from_ints(&[3]);
        let u = feasible_point(&a, &b).unwrap();
        assert_eq!(dot(&a[0], &u), b[0]);
        assert!(u.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn detects_infeasibility() {
        // u1 + u2 = -1 has no non-negative solution
        assert!(feasible_point(&[from_ints(&[1, 1])], &from_ints(&[-1])).is_none());
        // u1 - u2 = 1 and u2 - u1 = 1
        let a = vec![from_ints(&[1, -1]), from_ints(&[-1, 1])];
        assert!(feasible_point(&a, &from_ints(&[1, 1])).is_none());
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let a = vec![from_ints(&[1, -1, 0]), from_ints(&[2, -2, 0]), from_ints(&[0, 1, -1])];
        let u = feasible_point(&a, &from_ints(&[0, 0, 0])).unwrap();
        for row in &a {
            assert!(dot(row, &u).is_zero());
        }
    }
}
