//! Dense two-phase tableau simplex.

use nalgebra::{DMatrix, DVector};

use super::lp::{LinearProgram, LpBackend, LpSolution, LpStatus, Sense};
use crate::error::SolverError;
use crate::linear::Relation;

/// Reference simplex backend.
///
/// Pricing is Dantzig's rule until the objective fails to improve for
/// `5 * (rows + cols)` consecutive pivots, after which Bland's rule is used
/// for the rest of the phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simplex {
    pub feasibility_tolerance: f64,
    pub optimality_tolerance: f64,
    pub pivot_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for Simplex {
    fn default() -> Self {
        Self { feasibility_tolerance: 1e-9, optimality_tolerance: 1e-9, pivot_tolerance: 1e-11, max_iterations: 1_000_000 }
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows x (cols + 1)`; the last column is the right-hand side.
    a: Vec<f64>,
    /// Reduced costs; the last entry is minus the objective value.
    d: Vec<f64>,
    basis: Vec<usize>,
    /// Original constraint index of each row.
    origin: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.a[i * w..(i + 1) * w]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * self.width() + self.cols]
    }

    fn objective(&self) -> f64 {
        -self.d[self.cols]
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width();
        let p = self.a[r * w + q];
        let (before, rest) = self.a.split_at_mut(r * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        for v in pivot_row.iter_mut() {
            *v /= p;
        }
        pivot_row[q] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (v, &pr) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pr;
                }
                row[q] = 0.0;
            }
        };
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            eliminate(row);
        }
        eliminate(&mut self.d);
        self.basis[r] = q;
    }

    /// Resets the reduced costs for column costs `c` (length `cols`).
    fn price(&mut self, c: &[f64]) {
        let w = self.width();
        self.d = c.to_vec();
        self.d.push(0.0);
        for i in 0..self.rows {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                for (dj, &aij) in self.d.iter_mut().zip(&self.a[i * w..(i + 1) * w]) {
                    *dj -= cb * aij;
                }
            }
        }
        for &b in &self.basis {
            self.d[b] = 0.0;
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width();
        self.a.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.origin.remove(r);
        self.rows -= 1;
    }

    /// Keeps only the first `keep` columns plus the right-hand side.
    fn truncate_columns(&mut self, keep: usize) {
        let w = self.width();
        let mut a = Vec::with_capacity(self.rows * (keep + 1));
        for i in 0..self.rows {
            a.extend_from_slice(&self.a[i * w..i * w + keep]);
            a.push(self.a[i * w + self.cols]);
        }
        self.a = a;
        self.cols = keep;
        self.d.truncate(keep);
        self.d.push(0.0);
    }
}

impl Simplex {
    /// Minimizes the current reduced-cost row over columns `< allowed`.
    fn run(&self, t: &mut Tableau, allowed: usize, iterations: &mut usize) -> Result<Phase, SolverError> {
        let stall_limit = 5 * (t.rows + t.cols);
        let mut bland = false;
        let mut stalled = 0;
        let mut best = t.objective();
        loop {
            let entering = if bland {
                (0..allowed).find(|&j| t.d[j] < -self.optimality_tolerance)
            } else {
                let mut pick = None;
                let mut most = -self.optimality_tolerance;
                for j in 0..allowed {
                    if t.d[j] < most {
                        most = t.d[j];
                        pick = Some(j);
                    }
                }
                pick
            };
            let Some(q) = entering else { return Ok(Phase::Optimal) };

            let w = t.width();
            let mut leave: Option<(usize, f64, f64)> = None;
            for i in 0..t.rows {
                let aiq = t.a[i * w + q];
                if aiq <= self.pivot_tolerance {
                    continue;
                }
                let ratio = t.rhs(i).max(0.0) / aiq;
                let better = match leave {
                    None => true,
                    Some((r, best_ratio, best_piv)) => {
                        if ratio < best_ratio - 1e-12 {
                            true
                        } else if ratio <= best_ratio + 1e-12 {
                            if bland {
                                t.basis[i] < t.basis[r]
                            } else {
                                aiq > best_piv
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio, aiq));
                }
            }
            let Some((r, _, _)) = leave else { return Ok(Phase::Unbounded) };

            *iterations += 1;
            if *iterations > self.max_iterations {
                return Err(SolverError::IterationLimit(self.max_iterations));
            }
            t.pivot(r, q);

            let obj = t.objective();
            if obj < best - 1e-12 * (1.0 + best.abs()) {
                best = obj;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled > stall_limit {
                    bland = true;
                }
            }
        }
    }

    fn solve_program(&self, lp: &LinearProgram) -> Result<LpSolution, SolverError> {
        lp.validate()?;
        let n = lp.variable_count;
        let m = lp.constraints.len();

        // Standard form: flip rows so rhs >= 0 and `>= 0` rows become `<= 0`.
        let mut rows = Vec::with_capacity(m);
        for c in &lp.constraints {
            let flip = c.rhs < 0.0 || (c.rhs == 0.0 && c.relation == Relation::Ge);
            let (sign, rel) = if flip { (-1.0, c.relation.flipped()) } else { (1.0, c.relation) };
            rows.push((sign, rel, sign * c.rhs));
        }
        let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let cols = n + slack_count + art_count;
        let w = cols + 1;
        let mut a = vec![0.0; m * w];
        let mut basis = vec![0; m];
        let (mut next_slack, mut next_art) = (n, n + slack_count);
        for (i, (c, &(sign, rel, rhs))) in lp.constraints.iter().zip(&rows).enumerate() {
            let row = &mut a[i * w..(i + 1) * w];
            for &(j, v) in c.expression.terms() {
                row[j] += sign * v;
            }
            row[cols] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
        let original = a.clone();
        let mut t = Tableau { rows: m, cols, a, d: vec![0.0; w], basis, origin: (0..m).collect() };
        let mut iterations = 0;

        // Phase one.
        if art_count > 0 {
            let mut c1 = vec![0.0; cols];
            for v in &mut c1[n + slack_count..] {
                *v = 1.0;
            }
            t.price(&c1);
            self.run(&mut t, cols, &mut iterations)?;
            if t.objective() > self.feasibility_tolerance {
                let mut infeasibility: Vec<(String, f64)> = (0..t.rows)
                    .filter(|&i| t.basis[i] >= n + slack_count && t.rhs(i) > self.feasibility_tolerance)
                    .map(|i| (lp.constraints[t.origin[i]].label.clone(), t.rhs(i)))
                    .collect();
                infeasibility.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
                return Ok(LpSolution { status: LpStatus::Infeasible, objective: f64::NAN, x: vec![0.0; n], iterations, infeasibility });
            }
            // Drive remaining artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < t.rows {
                if t.basis[i] < n + slack_count {
                    i += 1;
                    continue;
                }
                let row = t.row(i);
                let pick = (0..n + slack_count)
                    .filter(|&j| row[j].abs() > 1e-9)
                    .max_by(|&x, &y| row[x].abs().total_cmp(&row[y].abs()).then(y.cmp(&x)));
                match pick {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => t.remove_row(i),
                }
            }
            t.truncate_columns(n + slack_count);
        }

        // Phase two.
        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut c2 = vec![0.0; t.cols];
        for &(j, v) in lp.objective.terms() {
            c2[j] = sign * v;
        }
        t.price(&c2);
        let all = t.cols;
        if let Phase::Unbounded = self.run(&mut t, all, &mut iterations)? {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                objective: sign * f64::NEG_INFINITY,
                x: vec![0.0; n],
                iterations,
                infeasibility: vec![],
            });
        }

        let mut x = vec![0.0; n];
        for i in 0..t.rows {
            if t.basis[i] < n {
                x[t.basis[i]] = t.rhs(i).max(0.0);
            }
        }
        if let Some(refined) = refine(&t, &original, w, n) {
            if lp.max_residual(&refined) <= lp.max_residual(&x) {
                x = refined;
            }
        }
        Ok(LpSolution { status: LpStatus::Optimal, objective: lp.objective.evaluate(&x), x, iterations, infeasibility: vec![] })
    }
}

/// Re-solves `B x_B = b` from the original rows to shed accumulated pivot error.
fn refine(t: &Tableau, original: &[f64], w: usize, n: usize) -> Option<Vec<f64>> {
    let m = t.rows;
    if m == 0 {
        return None;
    }
    let cols = w - 1;
    let b = DMatrix::from_fn(m, m, |i, k| original[t.origin[i] * w + t.basis[k]]);
    let rhs = DVector::from_fn(m, |i, _| original[t.origin[i] * w + cols]);
    let sol = b.lu().solve(&rhs)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut x = vec![0.0; n];
    for (k, &j) in t.basis.iter().enumerate() {
        if j < n {
            x[j] = if sol[k] < 0.0 && sol[k] > -1e-9 { 0.0 } else { sol[k] };
        }
    }
    Some(x)
}

/// Moves expression constants into the right-hand side.
fn normalized(lp: &LinearProgram) -> LinearProgram {
    let mut out = lp.clone();
    for c in &mut out.constraints {
        c.rhs -= c.expression.constant;
        c.expression.constant = 0.0;
    }
    out
}

impl LpBackend for Simplex {
    fn name(&self) -> &str {
        "simplex"
    }

    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution, SolverError> {
        if lp.constraints.iter().any(|c| c.expression.constant != 0.0) {
            return self.solve_program(&normalized(lp));
        }
        self.solve_program(lp)
    }
}
