use serde::{Deserialize, Serialize};

use super::lp::{LinearProgram, LpBackend, LpSolution, LpStatus, Sense};
use super::simplex::Simplex;
use crate::error::SolverError;
use crate::linear::{LinearConstraint, LinearExpression, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub lower_iterations: usize,
    pub upper_iterations: usize,
    /// Largest violation of the original constraints by either witness.
    pub max_residual: f64,
    pub columns: usize,
    /// Columns left after presolve.
    pub merged_columns: usize,
    /// Columns dropped because a row forces them to zero.
    pub fixed_zero_columns: usize,
    /// Phase-one residual per constraint label when infeasible.
    pub infeasibility: Vec<(String, f64)>,
}

/// Sharp bounds with witnesses attaining them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Vec<f64>,
    pub upper_witness: Vec<f64>,
    pub status: BoundsStatus,
    pub diagnostics: Diagnostics,
}

impl Bounds {
    pub fn is_optimal(&self) -> bool {
        self.status == BoundsStatus::Optimal
    }

    pub fn contains(&self, value: f64, tolerance: f64) -> bool {
        self.is_optimal() && value >= self.lower - tolerance && value <= self.upper + tolerance
    }
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Columns forced to zero by a row `sum(c_j x_j) <= 0` (or `= 0`) whose
/// coefficients are all positive.
pub fn forced_zero_columns(constraints: &[LinearConstraint], n: usize) -> Vec<bool> {
    let mut zero = vec![false; n];
    for c in constraints {
        let rhs = c.rhs - c.expression.constant;
        let forcing = matches!(c.relation, Relation::Eq | Relation::Le) && rhs == 0.0;
        if forcing && !c.expression.is_empty() && c.expression.terms().iter().all(|&(_, v)| v > 0.0) {
            for &(j, _) in c.expression.terms() {
                zero[j] = true;
            }
        }
    }
    zero
}

/// Presolve map: columns forced to zero are dropped, and the remaining
/// columns whose entries (objective and every row) coincide are merged.
///
/// Each column is fingerprinted by two independent 64-bit sums of hashed
/// `(row, coefficient)` entries. Classes are ordered by their smallest member.
pub struct ColumnClasses {
    /// Class of each original variable; `None` when forced to zero.
    pub class_of: Vec<Option<usize>>,
    /// Smallest member of each class.
    pub representatives: Vec<usize>,
}

impl ColumnClasses {
    pub fn build(objective: &LinearExpression, constraints: &[LinearConstraint], n: usize) -> Self {
        let zero = forced_zero_columns(constraints, n);
        let mut h1 = vec![0u64; n];
        let mut h2 = vec![0u64; n];
        let rows = std::iter::once(objective).chain(constraints.iter().map(|c| &c.expression));
        for (r, e) in rows.enumerate() {
            let r1 = mix(r as u64 ^ 0x5851_f42d_4c95_7f2d);
            let r2 = mix((r as u64).wrapping_add(0x1405_7b7e_f767_814f));
            for &(j, v) in e.terms() {
                let bits = v.to_bits();
                h1[j] = h1[j].wrapping_add(mix(r1 ^ bits));
                h2[j] = h2[j].wrapping_add(mix(r2.wrapping_add(bits.rotate_left(17))));
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&j| !zero[j]).collect();
        order.sort_unstable_by_key(|&j| (h1[j], h2[j], j));
        let mut class_of = vec![None; n];
        let mut representatives = Vec::new();
        let mut k = 0;
        while k < order.len() {
            let rep = order[k];
            let id = representatives.len();
            representatives.push(rep);
            while k < order.len() && (h1[order[k]], h2[order[k]]) == (h1[rep], h2[rep]) {
                class_of[order[k]] = Some(id);
                k += 1;
            }
        }
        // Renumber by representative so the reduced program is ordered like the original.
        let mut by_rep: Vec<usize> = (0..representatives.len()).collect();
        by_rep.sort_unstable_by_key(|&c| representatives[c]);
        let mut rank = vec![0; by_rep.len()];
        for (new, &old) in by_rep.iter().enumerate() {
            rank[old] = new;
        }
        for c in class_of.iter_mut().flatten() {
            *c = rank[*c];
        }
        representatives.sort_unstable();
        Self { class_of, representatives }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Number of columns dropped as forced to zero.
    pub fn fixed_zero(&self) -> usize {
        self.class_of.iter().filter(|c| c.is_none()).count()
    }

    fn reduce(&self, e: &LinearExpression) -> LinearExpression {
        let terms = e.terms().iter().filter_map(|&(j, v)| match self.class_of[j] {
            Some(c) if self.representatives[c] == j => Some((c, v)),
            _ => None,
        });
        LinearExpression::from_terms(terms).with_constant(e.constant)
    }

    /// Same problem over one column per class. Rows left empty and
    /// satisfied are dropped; violated ones stay so infeasibility is reported.
    pub fn reduce_program(&self, lp: &LinearProgram) -> LinearProgram {
        let constraints = lp
            .constraints
            .iter()
            .map(|c| LinearConstraint::new(self.reduce(&c.expression), c.relation, c.rhs, c.label.clone()))
            .filter(|c| !c.expression.is_empty() || !c.is_satisfied(&[], 0.0))
            .collect();
        LinearProgram::new(self.reduce(&lp.objective), constraints, self.len(), lp.sense)
    }

    /// Places each class's mass on its representative.
    pub fn expand(&self, x: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (c, &rep) in self.representatives.iter().enumerate() {
            out[rep] = x[c];
        }
        out
    }
}

fn solve_side(backend: &dyn LpBackend, lp: &LinearProgram, sense: Sense) -> Result<LpSolution, SolverError> {
    let mut p = lp.clone();
    p.sense = sense;
    backend.solve(&p)
}

/// Minimizes and maximizes `objective` with the reference simplex.
pub fn solve_bounds(objective: &LinearExpression, constraints: &[LinearConstraint], variable_count: usize) -> Result<Bounds, SolverError> {
    solve_bounds_with(&Simplex::default(), objective, constraints, variable_count)
}

/// Minimizes and maximizes `objective` over `x >= 0` subject to `constraints`.
///
/// Columns forced to zero are dropped and identical columns merged before
/// solving, which leaves the optimal values unchanged; witnesses put each
/// merged class's mass on its smallest member.
pub fn solve_bounds_with(
    backend: &dyn LpBackend,
    objective: &LinearExpression,
    constraints: &[LinearConstraint],
    variable_count: usize,
) -> Result<Bounds, SolverError> {
    let full = LinearProgram::new(objective.clone(), constraints.to_vec(), variable_count, Sense::Minimize);
    full.validate()?;
    let classes = ColumnClasses::build(objective, constraints, variable_count);
    let reduced = classes.reduce_program(&full);

    let low = solve_side(backend, &reduced, Sense::Minimize)?;
    let mut diagnostics = Diagnostics {
        lower_iterations: low.iterations,
        columns: variable_count,
        merged_columns: classes.len(),
        fixed_zero_columns: classes.fixed_zero(),
        ..Diagnostics::default()
    };
    let status = match low.status {
        LpStatus::Infeasible => {
            diagnostics.infeasibility = low.infeasibility;
            return Ok(Bounds {
                lower: f64::NAN,
                upper: f64::NAN,
                lower_witness: vec![],
                upper_witness: vec![],
                status: BoundsStatus::Infeasible,
                diagnostics,
            });
        }
        LpStatus::Unbounded => BoundsStatus::Unbounded,
        LpStatus::Optimal => BoundsStatus::Optimal,
    };
    let high = solve_side(backend, &reduced, Sense::Maximize)?;
    diagnostics.upper_iterations = high.iterations;
    let status = match (status, high.status) {
        (BoundsStatus::Optimal, LpStatus::Optimal) => BoundsStatus::Optimal,
        _ => BoundsStatus::Unbounded,
    };

    let expand = |s: &LpSolution| match s.status {
        LpStatus::Optimal => classes.expand(&s.x, variable_count),
        _ => vec![],
    };
    let lower_witness = expand(&low);
    let upper_witness = expand(&high);
    let (lower, upper) = match status {
        BoundsStatus::Optimal => (objective.evaluate(&lower_witness), objective.evaluate(&upper_witness)),
        _ => (
            if low.status == LpStatus::Optimal { objective.evaluate(&lower_witness) } else { f64::NEG_INFINITY },
            if high.status == LpStatus::Optimal { objective.evaluate(&upper_witness) } else { f64::INFINITY },
        ),
    };
    diagnostics.max_residual =
        [&lower_witness, &upper_witness].iter().filter(|w| !w.is_empty()).map(|w| full.max_residual(w)).fold(0.0, f64::max);
    Ok(Bounds { lower, upper, lower_witness, upper_witness, status, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn simplex_row(n: usize) -> LinearConstraint {
        LinearConstraint::new(LinearExpression::indicator(0..n), Relation::Eq, 1.0, "probability")
    }

    #[test]
    fn unconstrained_mean_is_trivial() {
        let objective = LinearExpression::from_dense(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let b = solve_bounds(&objective, &[simplex_row(6)], 6).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 5.0));
        assert_eq!(b.lower_witness, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(b.upper_witness, vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn identical_columns_are_merged() {
        let objective = LinearExpression::from_dense(&[1.0, 1.0, 2.0, 1.0]);
        let rows = [simplex_row(4), LinearConstraint::new(LinearExpression::indicator([2]), Relation::Le, 0.5, "cap")];
        let classes = ColumnClasses::build(&objective, &rows, 4);
        assert_eq!(classes.representatives, vec![0, 2]);
        assert_eq!(classes.class_of, vec![Some(0), Some(0), Some(1), Some(0)]);
        let b = solve_bounds(&objective, &rows, 4).unwrap();
        assert_eq!(b.diagnostics.merged_columns, 2);
        assert!((b.upper - 1.5).abs() < 1e-12);
        assert_eq!(b.upper_witness.len(), 4);
    }

    #[test]
    fn zero_forcing_rows_drop_columns() {
        let objective = LinearExpression::from_dense(&[0.0, 1.0, 2.0, 3.0]);
        let rows = [simplex_row(4), LinearConstraint::new(LinearExpression::from_dense(&[0.0, 0.0, 1.0, 2.0]), Relation::Eq, 0.0, "mono")];
        let classes = ColumnClasses::build(&objective, &rows, 4);
        assert_eq!(classes.class_of, vec![Some(0), Some(1), None, None]);
        let reduced = classes.reduce_program(&LinearProgram::new(objective.clone(), rows.to_vec(), 4, Sense::Minimize));
        assert_eq!(reduced.constraints.len(), 1);
        let b = solve_bounds(&objective, &rows, 4).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 1.0));
        assert_eq!(b.diagnostics.fixed_zero_columns, 2);
        assert_eq!(b.upper_witness, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn infeasible_reports_labels() {
        let rows = [
            simplex_row(2),
            LinearConstraint::new(LinearExpression::indicator([0]), Relation::Ge, 0.7, "a"),
            LinearConstraint::new(LinearExpression::indicator([1]), Relation::Ge, 0.7, "b"),
        ];
        let b = solve_bounds(&LinearExpression::indicator([0]), &rows, 2).unwrap();
        assert_eq!(b.status, BoundsStatus::Infeasible);
        assert!(!b.diagnostics.infeasibility.is_empty());
    }

    proptest! {
        #[test]
        fn witnesses_are_feasible_and_mixtures_interpolate(
            coefs in proptest::collection::vec(-3i32..=3, 8),
            caps in proptest::collection::vec(1u32..=9, 3),
        ) {
            let n = 8;
            let objective = LinearExpression::from_dense(&coefs.iter().map(|&c| c as f64).collect::<Vec<_>>());
            let mut rows = vec![simplex_row(n)];
            for (k, &cap) in caps.iter().enumerate() {
                let idx = (0..n).filter(|j| (j + k) % 3 != 0);
                rows.push(LinearConstraint::new(LinearExpression::indicator(idx), Relation::Le, cap as f64 / 10.0 + 0.1, format!("cap{k}")));
            }
            let b = solve_bounds(&objective, &rows, n).unwrap();
            prop_assume!(b.is_optimal());
            prop_assert!(b.lower <= b.upper + 1e-9);
            let lp = LinearProgram::new(objective.clone(), rows, n, Sense::Minimize);
            for lam in [0.0, 0.25, 0.5, 1.0] {
                let mix: Vec<f64> = b.lower_witness.iter().zip(&b.upper_witness).map(|(l, u)| lam * l + (1.0 - lam) * u).collect();
                prop_assert!(lp.max_residual(&mix) < 1e-7);
                prop_assert!((objective.evaluate(&mix) - (lam * b.lower + (1.0 - lam) * b.upper)).abs() < 1e-7);
            }
        }
    }
}
