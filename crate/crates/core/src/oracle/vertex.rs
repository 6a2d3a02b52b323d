use nalgebra::{DMatrix, DVector};

use crate::error::OracleError;
use crate::linear::Relation;
use crate::solver::{Bounds, BoundsStatus, Diagnostics, LinearProgram};

/// Objective value and point.
type Vertex = (f64, Vec<f64>);

/// Exact bounds by enumerating basic feasible solutions.
///
/// Equality rows are always active; a vertex fixes `n - rank(E)` further
/// inequalities (including `x >= 0`) at equality. The feasible region must be
/// bounded (a probability row guarantees this).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexOracle {
    pub max_variables: usize,
    pub max_bases: u128,
    pub tolerance: f64,
}

impl Default for VertexOracle {
    fn default() -> Self {
        Self { max_variables: 24, max_bases: 20_000_000, tolerance: 1e-9 }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn rank(rows: &[Vec<f64>], n: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    m.rank(1e-9)
}

/// Advances `idx` to the next `k`-combination of `0..p`; false when exhausted.
fn next_combination(idx: &mut [usize], p: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < p - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl VertexOracle {
    pub fn bounds(&self, lp: &LinearProgram) -> Result<Bounds, OracleError> {
        let n = lp.variable_count;
        if n > self.max_variables {
            return Err(OracleError::DimensionCap { cap: self.max_variables, count: n });
        }
        let dense = |i: usize| lp.constraints[i].expression.to_dense(n);
        let rhs = |i: usize| lp.constraints[i].rhs - lp.constraints[i].expression.constant;

        // Independent subset of the equalities.
        let mut eq_rows: Vec<Vec<f64>> = Vec::new();
        let mut eq_rhs = Vec::new();
        for (i, c) in lp.constraints.iter().enumerate() {
            if c.relation != Relation::Eq {
                continue;
            }
            let mut trial = eq_rows.clone();
            trial.push(dense(i));
            if rank(&trial, n) > eq_rows.len() {
                eq_rows = trial;
                eq_rhs.push(rhs(i));
            }
        }
        // Inequalities as `g x <= h`, then `-x_j <= 0`.
        let mut ineq: Vec<(Vec<f64>, f64)> = Vec::new();
        for (i, c) in lp.constraints.iter().enumerate() {
            match c.relation {
                Relation::Le => ineq.push((dense(i), rhs(i))),
                Relation::Ge => ineq.push((dense(i).iter().map(|v| -v).collect(), -rhs(i))),
                Relation::Eq => {}
            }
        }
        for j in 0..n {
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            ineq.push((row, 0.0));
        }

        let r = eq_rows.len();
        let k = n - r;
        let p = ineq.len();
        let combos = binomial(p, k);
        if combos > self.max_bases {
            return Err(OracleError::CombinationCap(combos));
        }

        let feasible = |x: &[f64]| lp.max_residual(x) <= self.tolerance;
        let mut best: Option<(Vertex, Vertex)> = None;
        let mut visited = 0usize;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            visited += 1;
            let a = DMatrix::from_fn(n, n, |i, j| if i < r { eq_rows[i][j] } else { ineq[idx[i - r]].0[j] });
            let b = DVector::from_fn(n, |i, _| if i < r { eq_rhs[i] } else { ineq[idx[i - r]].1 });
            let lu = a.full_piv_lu();
            let u = lu.u();
            let diag_max = (0..n).map(|i| u[(i, i)].abs()).fold(0.0, f64::max);
            let singular = n > 0 && (0..n).any(|i| u[(i, i)].abs() <= 1e-10 * diag_max.max(1.0));
            if !singular {
                if let Some(sol) = lu.solve(&b) {
                    let x: Vec<f64> = sol.iter().map(|&v| if v.abs() < 1e-13 { 0.0 } else { v }).collect();
                    if feasible(&x) {
                        let value = lp.objective.evaluate(&x);
                        match &mut best {
                            None => best = Some(((value, x.clone()), (value, x))),
                            Some((lo, hi)) => {
                                if value < lo.0 {
                                    *lo = (value, x.clone());
                                }
                                if value > hi.0 {
                                    *hi = (value, x);
                                }
                            }
                        }
                    }
                }
            }
            if k == 0 || !next_combination(&mut idx, p) {
                break;
            }
        }

        let diagnostics = |residual| Diagnostics {
            lower_iterations: visited,
            upper_iterations: visited,
            max_residual: residual,
            columns: n,
            merged_columns: n,
            fixed_zero_columns: 0,
            infeasibility: vec![],
        };
        Ok(match best {
            None => Bounds {
                lower: f64::NAN,
                upper: f64::NAN,
                lower_witness: vec![],
                upper_witness: vec![],
                status: BoundsStatus::Infeasible,
                diagnostics: diagnostics(0.0),
            },
            Some(((lower, lw), (upper, uw))) => {
                let residual = lp.max_residual(&lw).max(lp.max_residual(&uw));
                Bounds {
                    lower,
                    upper,
                    lower_witness: lw,
                    upper_witness: uw,
                    status: BoundsStatus::Optimal,
                    diagnostics: diagnostics(residual),
                }
            }
        })
    }
}

/// Vertex-enumeration bounds with the default caps.
pub fn oracle_bounds(lp: &LinearProgram) -> Result<Bounds, OracleError> {
    VertexOracle::default().bounds(lp)
}
