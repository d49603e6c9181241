//! Dense exact-rational matrices: just enough linear algebra for group
//! validation and rank computations.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::Coeff;

pub type Matrix = Vec<Vec<Coeff>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Coeff::one() } else { Coeff::zero() })
                .collect()
        })
        .collect()
}

pub fn check_square(m: &Matrix, n: usize) -> Result<()> {
    if m.len() != n {
        return Err(Error::DimensionMismatch(n, m.len()));
    }
    for row in m {
        if row.len() != n {
            return Err(Error::DimensionMismatch(n, row.len()));
        }
    }
    Ok(())
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Coeff::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

/// Exact rank by Gaussian elimination; consumes a copy of the rows.
pub fn rank(mut rows: Vec<Vec<Coeff>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot_row) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let pivot = rows[r][col].clone();
        for i in r + 1..nrows {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &pivot;
            for j in col..ncols {
                let delta = &factor * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qi, qr};

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]]), 2);
        assert_eq!(rank(vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]]), 1);
        assert_eq!(rank(vec![vec![qi(0), qi(0)]]), 0);
        assert_eq!(
            rank(vec![
                vec![qr(1, 2), qi(1), qi(0)],
                vec![qi(1), qi(2), qi(0)],
                vec![qi(0), qi(0), qi(3)],
            ]),
            2
        );
    }

    #[test]
    fn multiply_against_identity() {
        let m = vec![vec![qi(1), qi(2)], vec![qi(3), qi(4)]];
        assert_eq!(mat_mul(&m, &identity(2)), m);
        assert_eq!(mat_mul(&identity(2), &m), m);
    }
}
