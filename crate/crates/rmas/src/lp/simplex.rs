//! Two-phase dense tableau simplex with Bland's anti-cycling rule.
//!
//! Solves max c.v subject to A v = b, v >= 0. Phase one drives a full set
//! of artificial variables to zero; redundant rows whose artificial cannot
//! be pivoted out are dropped. Bland's rule (smallest eligible index for
//! both the entering and the leaving variable) guarantees termination under
//! degeneracy.

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-9;

/// Dense equality-form program.
pub struct StandardForm {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    /// Sparse rows: (coefficients, rhs).
    pub rows: Vec<(Vec<(usize, f64)>, f64)>,
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub values: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    // rows x (cols + 1); last column is the rhs
    data: Vec<Vec<f64>>,
    cols: usize,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.data[row][col];
        for x in self.data[row].iter_mut() {
            *x /= piv;
        }
        let pivot_row = self.data[row].clone();
        for (r, data_row) in self.data.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = data_row[col];
            if factor.abs() > 0.0 {
                for (x, p) in data_row.iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes c over the allowed column range with Bland's rule. Returns
    /// the objective value, or an error if the program is unbounded.
    fn optimize(&mut self, cost: &[f64]) -> Result<f64> {
        loop {
            // reduced costs: c_j - c_B . B^{-1} A_j
            let mut entering = None;
            for j in 0..self.cols {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j];
                for (r, &b) in self.basis.iter().enumerate() {
                    reduced -= cost[b] * self.data[r][j];
                }
                if reduced > PIVOT_TOL {
                    entering = Some(j);
                    break; // Bland: smallest improving index
                }
            }
            let Some(col) = entering else {
                let mut obj = 0.0;
                for (r, &b) in self.basis.iter().enumerate() {
                    obj += cost[b] * self.data[r][self.cols];
                }
                return Ok(obj);
            };
            // ratio test; ties broken by smallest basis variable index
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.data.len() {
                let a = self.data[r][col];
                if a > PIVOT_TOL {
                    let ratio = self.data[r][self.cols] / a;
                    let better = match leaving {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - PIVOT_TOL
                                || (ratio < lratio + PIVOT_TOL && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(Error::LpStatus { status: "unbounded" });
            };
            self.pivot(row, col);
        }
    }

    fn solution(&self, num_vars: usize) -> Vec<f64> {
        let mut values = vec![0.0; num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                values[b] = self.data[r][self.cols];
            }
        }
        values
    }
}

/// Solves the program, returning an optimal basic feasible solution.
pub fn solve(prog: &StandardForm) -> Result<SimplexResult> {
    let n = prog.num_vars;
    let m = prog.rows.len();
    let cols = n + m; // artificials occupy columns n..n+m

    let mut data = Vec::with_capacity(m);
    for (r, (coeffs, rhs)) in prog.rows.iter().enumerate() {
        let mut row = vec![0.0; cols + 1];
        let flip = if *rhs < 0.0 { -1.0 } else { 1.0 };
        for &(j, a) in coeffs {
            row[j] += flip * a;
        }
        row[n + r] = 1.0;
        row[cols] = flip * rhs;
        data.push(row);
    }
    let mut tab = Tableau {
        data,
        cols,
        basis: (n..n + m).collect(),
    };

    // phase 1: maximize -(sum of artificials)
    let mut phase1_cost = vec![0.0; cols];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = -1.0;
    }
    let infeas = -tab.optimize(&phase1_cost)?;
    if infeas > 1e-7 {
        return Err(Error::LpStatus { status: "infeasible" });
    }

    // drive remaining artificials out of the basis; a row whose artificial
    // cannot be replaced is redundant and gets dropped
    let mut r = 0;
    while r < tab.data.len() {
        if tab.basis[r] >= n {
            let mut pivot_col = None;
            for j in 0..n {
                if tab.data[r][j].abs() > PIVOT_TOL {
                    pivot_col = Some(j);
                    break;
                }
            }
            match pivot_col {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.data.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // phase 2: the artificial columns stay in the tableau but can never
    // re-enter (cost 0 and out of basis, reduced cost never positive since
    // we zero them explicitly below)
    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&prog.objective);
    for row in tab.data.iter_mut() {
        for x in row.iter_mut().take(cols).skip(n) {
            *x = 0.0;
        }
    }
    let objective = tab.optimize(&cost)?;
    let values = tab.solution(n);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::LpNumerics("non-finite basic value".into()));
    }
    Ok(SimplexResult { values, objective })
}
