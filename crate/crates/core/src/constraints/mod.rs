//! Compilation of data and assumptions into linear constraints over atoms.
//!
//! Labels follow `id[@arm][:detail]`: `id` names the assumption (or
//! `probability` / `observed`), `arm` lists the instrument values of a
//! per-arm constraint, and `detail` identifies the cell or pair. Labels are
//! unique within one compiled problem.

mod assumptions;

use serde::{Deserialize, Serialize};

use crate::error::CompileError;
use crate::response::{Context, ParameterSpace};

pub use crate::linear::{LinearConstraint, LinearExpression, Relation};
pub use assumptions::{
    compile_assumption, compile_causal, compile_measurement, Assumption, CausalAssumption, CausalKind, Level, MeasurementAssumption,
    MeasurementKind,
};

/// Tolerance on the total mass of an input distribution.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Exact observed distributions: `P(A)` and `P(outcomes | A = a)` per arm.
///
/// Arms are indexed as in [`ParameterSpace::arm_index`]; each table is
/// row-major over the joint values of [`ParameterSpace::outcomes`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedData {
    /// `None` when unknown; factual targets and observed-level assumptions then fail.
    pub instrument_marginal: Option<Vec<f64>>,
    pub arm_conditionals: Vec<Option<Vec<f64>>>,
}

pub(crate) fn check_distribution(what: &str, p: &[f64]) -> Result<(), CompileError> {
    if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(CompileError::Data(format!("{what} has invalid entry {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(CompileError::Data(format!("{what}: distribution not normalized (sums to {total})")));
    }
    Ok(())
}

impl ObservedData {
    /// Data for a space without instruments.
    pub fn single(table: Vec<f64>) -> Self {
        Self { instrument_marginal: Some(vec![1.0]), arm_conditionals: vec![Some(table)] }
    }

    pub fn validate(&self, space: &ParameterSpace) -> Result<(), CompileError> {
        let arms = space.arm_count();
        let cells = space.outcome_count();
        if let Some(m) = &self.instrument_marginal {
            if m.len() != arms {
                return Err(CompileError::Data(format!("instrument marginal has {} entries, expected {arms}", m.len())));
            }
            check_distribution("instrument marginal", m)?;
        }
        if self.arm_conditionals.len() != arms {
            return Err(CompileError::Data(format!("{} arm tables given, expected {arms}", self.arm_conditionals.len())));
        }
        for (arm, table) in self.arm_conditionals.iter().enumerate() {
            match table {
                Some(t) => {
                    if t.len() != cells {
                        return Err(CompileError::Data(format!("arm {arm} table has {} cells, expected {cells}", t.len())));
                    }
                    check_distribution(&format!("arm {arm} table"), t)?;
                }
                None => {
                    let needed = self.instrument_marginal.as_ref().map_or(true, |m| m[arm] > 0.0);
                    if needed {
                        return Err(CompileError::MissingArm(arm));
                    }
                }
            }
        }
        Ok(())
    }

    /// Joint distribution of (instruments, outcomes), arm-major; `None` without a marginal.
    pub fn joint(&self) -> Option<Vec<f64>> {
        let marginal = self.instrument_marginal.as_ref()?;
        let mut out = Vec::new();
        for (w, table) in marginal.iter().zip(&self.arm_conditionals) {
            if let Some(t) = table {
                out.extend(t.iter().map(|p| w * p));
            }
        }
        Some(out)
    }
}

/// `instrument=value,...` for `arm`, or empty without instruments.
pub fn arm_label(space: &ParameterSpace, arm: usize) -> String {
    space.instruments().iter().zip(space.arm_values(arm)).map(|(&i, v)| format!("{}={v}", space.name(i))).collect::<Vec<_>>().join(",")
}

pub(crate) fn label(id: &str, arm: Option<&str>, detail: Option<&str>) -> String {
    let mut s = id.to_string();
    if let Some(a) = arm.filter(|a| !a.is_empty()) {
        s.push('@');
        s.push_str(a);
    }
    if let Some(d) = detail {
        s.push(':');
        s.push_str(d);
    }
    s
}

/// The assumption or data group a label belongs to.
pub fn label_group(label: &str) -> &str {
    label.split(['@', ':']).next().unwrap_or(label)
}

/// Weighted contexts for averaging over the instruments not in `clamped`.
///
/// Each entry is `(weight, context)`; clamped instruments take the
/// intervention value and their marginal is summed out. Zero-weight arms are
/// dropped. Needs the marginal only when an unclamped instrument exists.
pub fn averaging_contexts(
    space: &ParameterSpace,
    marginal: Option<&[f64]>,
    intervention: &[(usize, usize)],
) -> Result<Vec<(f64, Context)>, CompileError> {
    let instruments = space.instruments();
    let free: Vec<usize> = (0..instruments.len()).filter(|&k| !intervention.iter().any(|c| c.0 == instruments[k])).collect();
    if free.is_empty() {
        let mut values = vec![0; instruments.len()];
        for (k, &inst) in instruments.iter().enumerate() {
            if let Some(c) = intervention.iter().find(|c| c.0 == inst) {
                values[k] = c.1;
            }
        }
        return Ok(vec![(1.0, space.arm_context(space.arm_index(&values), intervention)?)]);
    }
    let marginal = marginal.ok_or(CompileError::UnknownMarginal)?;
    let mut weights: Vec<(Vec<usize>, f64)> = Vec::new();
    for arm in 0..space.arm_count() {
        let weight = marginal[arm];
        let mut values = space.arm_values(arm);
        for (k, &inst) in instruments.iter().enumerate() {
            if let Some(c) = intervention.iter().find(|c| c.0 == inst) {
                values[k] = c.1;
            }
        }
        match weights.iter_mut().find(|w| w.0 == values) {
            Some(w) => w.1 += weight,
            None => weights.push((values, weight)),
        }
    }
    weights
        .into_iter()
        .filter(|w| w.1 > 0.0)
        .map(|(values, w)| Ok((w, space.arm_context(space.arm_index(&values), intervention)?)))
        .collect()
}

/// `sum(psi) = 1`. Non-negativity is carried by the solver's standard form.
pub fn compile_probability(space: &ParameterSpace) -> Vec<LinearConstraint> {
    let all = LinearExpression::indicator(0..space.atom_count());
    vec![LinearConstraint::new(all, Relation::Eq, 1.0, "probability")]
}

fn cell_label(space: &ParameterSpace, cell: usize) -> String {
    let mut rest = cell;
    let mut parts = Vec::new();
    for &v in space.outcomes().iter().rev() {
        let card = space.cardinality(v);
        parts.push(format!("{}={}", space.name(v), rest % card));
        rest /= card;
    }
    parts.reverse();
    parts.join(",")
}

/// One equality per arm and joint outcome cell: `P(cell | arm)` under `psi`
/// equals the observed value. With `slack > 0` each becomes a pair of
/// inequalities `|lhs - rhs| <= slack`.
pub fn compile_observed(space: &ParameterSpace, data: &ObservedData, slack: f64) -> Result<Vec<LinearConstraint>, CompileError> {
    if !(slack >= 0.0 && slack.is_finite()) {
        return Err(CompileError::Parameter(format!("observed slack must be >= 0, got {slack}")));
    }
    data.validate(space)?;
    let mut out = Vec::new();
    for (arm, table) in data.arm_conditionals.iter().enumerate() {
        let Some(table) = table else { continue };
        let ctx = space.arm_context(arm, &[])?;
        let groups = space.partition(&ctx, space.outcomes());
        let arm_name = arm_label(space, arm);
        for (cell, atoms) in groups.into_iter().enumerate() {
            let expr = LinearExpression::indicator(atoms);
            let detail = cell_label(space, cell);
            let p = table[cell];
            if slack == 0.0 {
                out.push(LinearConstraint::new(expr, Relation::Eq, p, label("observed", Some(&arm_name), Some(&detail))));
            } else {
                let upper = label("observed", Some(&arm_name), Some(&format!("{detail}:upper")));
                let lower = label("observed", Some(&arm_name), Some(&format!("{detail}:lower")));
                out.push(LinearConstraint::new(expr.clone(), Relation::Le, p + slack, upper));
                out.push(LinearConstraint::new(expr, Relation::Ge, p - slack, lower));
            }
        }
    }
    Ok(out)
}
