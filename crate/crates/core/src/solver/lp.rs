use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::linear::{LinearConstraint, LinearExpression};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `optimize objective subject to constraints, x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: LinearExpression,
    pub constraints: Vec<LinearConstraint>,
    pub variable_count: usize,
    pub sense: Sense,
}

impl LinearProgram {
    pub fn new(objective: LinearExpression, constraints: Vec<LinearConstraint>, variable_count: usize, sense: Sense) -> Self {
        Self { objective, constraints, variable_count, sense }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let check = |label: &str, e: &LinearExpression, rhs: f64| {
            if let Some(index) = e.max_index().filter(|&i| i >= self.variable_count) {
                return Err(SolverError::IndexOutOfRange { label: label.into(), index, count: self.variable_count });
            }
            if !rhs.is_finite() || !e.constant.is_finite() || e.terms().iter().any(|t| !t.1.is_finite()) {
                return Err(SolverError::NonFinite(label.into()));
            }
            Ok(())
        };
        check("objective", &self.objective, 0.0)?;
        for c in &self.constraints {
            check(&c.label, &c.expression, c.rhs)?;
        }
        Ok(())
    }

    /// Largest constraint violation at `x`, counting negative entries.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        let negativity = x.iter().fold(0.0f64, |m, &v| m.max(-v));
        self.constraints.iter().fold(negativity, |m, c| m.max(c.violation(x)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value including the constant; meaningful only when optimal.
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Phase-one residual per constraint label, largest first (infeasible only).
    pub infeasibility: Vec<(String, f64)>,
}

/// A linear-programming backend.
pub trait LpBackend: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution, SolverError>;
}
