//! Exact linear feasibility for strict separation.
//!
//! Decides whether a system `row_i . z >= 1` (z unrestricted) has a solution,
//! using a phase-1 simplex over arbitrary-precision rationals. Bland's rule
//! keeps the pivoting finite, and with rational arithmetic there is no
//! tolerance to tune: the verdict is exact for rational inputs, which every
//! finite f64 coordinate is.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// True iff some free vector z satisfies `rows[i] . z >= 1` for every row.
pub(crate) fn feasible_geq_one(rows: &[Vec<BigRational>]) -> bool {
    let n_rows = rows.len();
    if n_rows == 0 {
        return true;
    }
    let m = rows[0].len();
    debug_assert!(rows.iter().all(|r| r.len() == m));

    // Free variables split as z = u - v; one slack and one artificial per
    // row turn the system into equalities with an obvious starting basis:
    //   row . u - row . v - slack + artificial = 1.
    // Columns: u(m) | v(m) | slack(n) | artificial(n) | rhs.
    let n_cols = 2 * m + 2 * n_rows;
    let art0 = 2 * m + n_rows;
    let mut t = vec![vec![BigRational::zero(); n_cols + 1]; n_rows];
    for (i, row) in rows.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            t[i][j] = a.clone();
            t[i][m + j] = -a.clone();
        }
        t[i][2 * m + i] = -BigRational::one();
        t[i][art0 + i] = BigRational::one();
        t[i][n_cols] = BigRational::one();
    }
    let mut basis: Vec<usize> = (0..n_rows).map(|i| art0 + i).collect();

    // Minimize the artificial sum. Reduced costs start as
    // c_j - sum_i t[i][j] because every basic cost is 1.
    let mut obj = vec![BigRational::zero(); n_cols];
    for (j, o) in obj.iter_mut().enumerate() {
        let mut s = BigRational::zero();
        for row in &t {
            s += &row[j];
        }
        let c_j = if j >= art0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        *o = c_j - s;
    }

    // Bland: enter the lowest-index column with a negative reduced cost.
    while let Some(enter) = (0..n_cols).find(|&j| obj[j].is_negative()) {
        // Ratio test, ties broken on the smallest basic variable index.
        let mut leave: Option<usize> = None;
        for i in 0..n_rows {
            if t[i][enter].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ri = &t[i][n_cols] / &t[i][enter];
                        let rl = &t[l][n_cols] / &t[l][enter];
                        ri < rl || (ri == rl && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        // The artificial sum is bounded below by zero, so a missing pivot
        // row cannot happen; bail out defensively if it ever does.
        let lv = match leave {
            Some(l) => l,
            None => return false,
        };

        let pivot = t[lv][enter].clone();
        for x in t[lv].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = t[lv].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != lv && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= p * &f;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (o, p) in obj.iter_mut().zip(&pivot_row) {
                *o -= p * &f;
            }
        }
        basis[lv] = enter;
    }

    // Feasible iff no artificial carries weight at the optimum.
    (0..n_rows)
        .filter(|&i| basis[i] >= art0)
        .all(|i| t[i][n_cols].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(v: f64) -> BigRational {
        BigRational::from_f64(v).unwrap()
    }

    #[test]
    fn one_variable_systems() {
        // z >= 1 is satisfiable; z >= 1 and -z >= 1 is not.
        assert!(feasible_geq_one(&[vec![rat(1.0)]]));
        assert!(!feasible_geq_one(&[vec![rat(1.0)], vec![rat(-1.0)]]));
    }

    #[test]
    fn scaling_does_not_change_the_verdict() {
        // Strict separation is scale-free: tiny coefficients still work.
        assert!(feasible_geq_one(&[vec![rat(1e-6)]]));
        assert!(!feasible_geq_one(&[vec![rat(1e-6)], vec![rat(-1e-6)]]));
    }

    #[test]
    fn empty_system_is_feasible() {
        assert!(feasible_geq_one(&[]));
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let rows = vec![vec![rat(1.0), rat(0.5)]; 4];
        assert!(feasible_geq_one(&rows));
    }
}
