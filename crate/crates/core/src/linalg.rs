//! Exact linear algebra over the fraction field of the expression ring.
//!
//! Gaussian elimination with exact zero pivoting: a pivot is any entry whose
//! numerator is not the zero expression, so rank and consistency decisions are
//! never threshold-based.

use crate::frac::FracExpr;

#[derive(Debug, Clone)]
pub struct FracMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FracExpr>,
}

impl FracMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FracMatrix {
            rows,
            cols,
            data: vec![FracExpr::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FracExpr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        FracMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &FracExpr {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FracExpr) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank via forward elimination with exact pivoting.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            let Some(r) = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            let pivot = m.at(pivot_row, col).clone();
            for below in (pivot_row + 1)..m.rows {
                if m.at(below, col).is_zero() {
                    continue;
                }
                let factor = m.at(below, col).div(&pivot).expect("pivot nonzero");
                for c in col..m.cols {
                    let v = m.at(below, c).sub(&factor.mul(m.at(pivot_row, c)));
                    m.set(below, c, v);
                }
            }
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        pivot_row
    }
}

/// Outcome of solving `A·x = b` exactly.
#[derive(Debug, Clone)]
pub enum Solution {
    /// A solution exists; free variables (if any) are set to zero. `unique`
    /// is true when there were no free variables.
    Solved {
        x: Vec<FracExpr>,
        unique: bool,
    },
    Inconsistent,
}

/// Gauss–Jordan solve over the fraction field. Consistency is decided
/// exactly: a row `0 … 0 | r` with `r ≠ 0` certifies inconsistency.
pub fn solve(a: &FracMatrix, b: &[FracExpr]) -> Solution {
    assert_eq!(a.rows, b.len(), "right-hand side length mismatch");
    let n = a.cols;
    let mut m = FracMatrix::zeros(a.rows, n + 1);
    for r in 0..a.rows {
        for c in 0..n {
            m.set(r, c, a.at(r, c).clone());
        }
        m.set(r, n, b[r].clone());
    }

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(r) = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(pivot_row, r);
        let pivot = m.at(pivot_row, col).clone();
        for c in col..=n {
            let v = m.at(pivot_row, c).div(&pivot).expect("pivot nonzero");
            m.set(pivot_row, c, v);
        }
        for other in 0..m.rows {
            if other == pivot_row || m.at(other, col).is_zero() {
                continue;
            }
            let factor = m.at(other, col).clone();
            for c in col..=n {
                let v = m.at(other, c).sub(&factor.mul(m.at(pivot_row, c)));
                m.set(other, c, v);
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
        if pivot_row == m.rows {
            break;
        }
    }

    for r in pivot_row..m.rows {
        if !m.at(r, n).is_zero() {
            return Solution::Inconsistent;
        }
    }

    let mut x = vec![FracExpr::zero(); n];
    for &(r, c) in &pivots {
        x[c] = m.at(r, n).clone();
    }
    Solution::Solved {
        x,
        unique: pivots.len() == n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, Expr};

    fn f(n: i64) -> FracExpr {
        FracExpr::from_rational(rat(n, 1))
    }

    fn fx(e: Expr) -> FracExpr {
        FracExpr::from_expr(e)
    }

    #[test]
    fn rank_of_diagonal() {
        let m = FracMatrix::from_rows(vec![
            vec![f(0), f(0), f(0)],
            vec![f(0), f(0), f(0)],
            vec![f(0), f(0), f(2)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_with_symbolic_entries() {
        let a = Expr::func("a", 0);
        // rows [a, a], [1, 1] are proportional over the fraction field
        let m = FracMatrix::from_rows(vec![
            vec![fx(a.clone()), fx(a)],
            vec![f(1), f(1)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_unique() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let m = FracMatrix::from_rows(vec![vec![f(1), f(1)], vec![f(1), f(-1)]]);
        match solve(&m, &[f(3), f(1)]) {
            Solution::Solved { x, unique } => {
                assert!(unique);
                assert!(x[0].equals(&f(2)));
                assert!(x[1].equals(&f(1)));
            }
            Solution::Inconsistent => panic!("should be solvable"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let m = FracMatrix::from_rows(vec![vec![f(1), f(1)], vec![f(2), f(2)]]);
        assert!(matches!(
            solve(&m, &[f(1), f(3)]),
            Solution::Inconsistent
        ));
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let m = FracMatrix::from_rows(vec![vec![f(1), f(1)]]);
        match solve(&m, &[f(5)]) {
            Solution::Solved { x, unique } => {
                assert!(!unique);
                assert!(x[0].equals(&f(5)));
                assert!(x[1].is_zero());
            }
            Solution::Inconsistent => panic!("should be solvable"),
        }
    }

    #[test]
    fn solve_with_function_coefficients() {
        // a·x = a²  =>  x = a
        let a = Expr::func("a", 0);
        let m = FracMatrix::from_rows(vec![vec![fx(a.clone())]]);
        match solve(&m, &[fx(a.mul(&a))]) {
            Solution::Solved { x, .. } => assert!(x[0].equals(&fx(a))),
            Solution::Inconsistent => panic!("should be solvable"),
        }
    }
}
