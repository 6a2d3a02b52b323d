//! Closed-form bounds on `P(X = 1)` for the binary chain `A -> X -> Y` with
//! latent `X`, observed instrument `A` and proxy `Y`.
//!
//! Write `q_x = P(Y = 1 | X = x)` and `p_a = P(Y = 1 | A = a)`. Each
//! conditional is a mixture `p_a = q_0 + pi_a (q_1 - q_0)`, so the observed
//! data pin `P(X = 1)` only up to the unknown `(q_0, q_1)`. The identified
//! set is a union of two intervals, one for `q_1 > q_0` and one for
//! `q_1 < q_0`. The second is the image of the first under `x -> 1 - x`.

mod interval;

use serde::{Deserialize, Serialize};

use crate::error::AnalyticError;

pub use interval::IntervalUnion;

/// Observables of the binary chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainObservables {
    /// `P(A = a)`.
    pub p_a: Vec<f64>,
    /// `P(Y = 1 | A = a)`.
    pub p1_given_a: Vec<f64>,
}

impl ChainObservables {
    pub fn new(p_a: Vec<f64>, p1_given_a: Vec<f64>) -> Result<Self, AnalyticError> {
        let obs = Self { p_a, p1_given_a };
        obs.validate()?;
        Ok(obs)
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        if self.p_a.is_empty() {
            return Err(AnalyticError::NoArms);
        }
        if self.p_a.len() != self.p1_given_a.len() {
            return Err(AnalyticError::Distribution("P(A) and P(Y=1|A) differ in length".into()));
        }
        if self.p_a.iter().chain(&self.p1_given_a).any(|v| !(0.0..=1.0).contains(v)) {
            return Err(AnalyticError::Distribution("probabilities must lie in [0, 1]".into()));
        }
        let total: f64 = self.p_a.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(AnalyticError::Distribution(format!("P(A) not normalized (sums to {total})")));
        }
        if self.p_a.iter().any(|&w| w <= 0.0) {
            return Err(AnalyticError::Distribution("every arm needs P(A = a) > 0".into()));
        }
        Ok(())
    }

    /// `P(Y = 1)`.
    pub fn p1(&self) -> f64 {
        self.p_a.iter().zip(&self.p1_given_a).map(|(w, p)| w * p).sum::<f64>().clamp(0.0, 1.0)
    }

    /// `(min_a, max_a)` of `P(Y = 1 | A = a)`.
    pub fn extremes(&self) -> (f64, f64) {
        let m = self.p1_given_a.iter().copied().fold(f64::INFINITY, f64::min);
        let big = self.p1_given_a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (m, big)
    }
}

/// Restricted models with their own closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corollary {
    /// One-sided errors: `q_0 = 0`.
    A1,
    /// Errors below one half: `q_0 < 1/2 < q_1`.
    A3,
    /// Label-independent noise: `q_1 = 1 - q_0`.
    LabelIndependent,
}

/// Unmerged output: one interval (or none) per branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branches {
    /// Branch with `q_1 > q_0` (the `y = 1` formula).
    pub increasing: Option<(f64, f64)>,
    /// Branch with `q_1 < q_0` (the `y = 0` formula).
    pub decreasing: Option<(f64, f64)>,
    pub notes: Vec<String>,
}

impl Branches {
    pub fn union(&self) -> IntervalUnion {
        IntervalUnion::new(self.increasing.into_iter().chain(self.decreasing))
    }
}

/// `[(p - m) / (1 - m), p / big]` for one outcome value, with limits at the
/// degenerate denominators.
fn branch(p: f64, m: f64, big: f64, notes: &mut Vec<String>, y: u8) -> (f64, f64) {
    let lower = if m >= 1.0 {
        notes.push(format!("min_a P(Y={y}|A=a) = 1: branch collapses to P(Y={y})"));
        p
    } else {
        ((p - m) / (1.0 - m)).max(0.0)
    };
    let upper = if big <= 0.0 {
        notes.push(format!("max_a P(Y={y}|A=a) = 0: branch collapses to P(Y={y})"));
        p
    } else {
        (p / big).min(1.0)
    };
    (lower, upper.max(lower))
}

const X_DEPENDENCE_NOTE: &str = "bounds assume X and Y are dependent, which the observables cannot confirm";

/// Per-branch bounds on `P(X = 1)` without restrictions.
pub fn prop3_branches(obs: &ChainObservables) -> Result<Branches, AnalyticError> {
    obs.validate()?;
    let p1 = obs.p1();
    let (m, big) = obs.extremes();
    let mut notes = vec![X_DEPENDENCE_NOTE.to_string()];
    let increasing = branch(p1, m, big, &mut notes, 1);
    // The same formula for Y = 0, with min_a P(Y=0|a) = 1 - big and
    // max_a P(Y=0|a) = 1 - m, bounds P(X = 1) on the decreasing branch.
    let decreasing = branch(1.0 - p1, 1.0 - big, 1.0 - m, &mut notes, 0);
    Ok(Branches { increasing: Some(increasing), decreasing: Some(decreasing), notes })
}

/// Identified set for `P(X = 1)`, merged.
pub fn prop3_bounds(obs: &ChainObservables) -> Result<IntervalUnion, AnalyticError> {
    Ok(prop3_branches(obs)?.union())
}

/// Per-branch bounds under a restriction.
pub fn corollary_branches(variant: Corollary, obs: &ChainObservables) -> Result<Branches, AnalyticError> {
    obs.validate()?;
    let p1 = obs.p1();
    let (m, big) = obs.extremes();
    let mut notes = vec![X_DEPENDENCE_NOTE.to_string()];
    let out = match variant {
        Corollary::A1 => {
            let upper = if big <= 0.0 {
                notes.push("max_a P(Y=1|A=a) = 0: set collapses to {0}".into());
                0.0
            } else {
                (p1 / big).min(1.0)
            };
            Branches { increasing: Some((p1, upper)), decreasing: None, notes }
        }
        Corollary::A3 => {
            let m = m.min(0.5);
            let big = big.max(0.5);
            Branches { increasing: Some(((p1 - m) / (1.0 - m), p1 / big)), decreasing: None, notes }
        }
        Corollary::LabelIndependent => {
            let p_star = m.min(1.0 - big);
            if (1.0 - 2.0 * p_star).abs() <= 1e-12 {
                notes.push("p* = 1/2: set collapses to {P(Y=1)}".into());
                Branches { increasing: Some((p1, p1)), decreasing: Some((p1, p1)), notes }
            } else {
                let f = (p1 - p_star) / (1.0 - 2.0 * p_star);
                let sorted = |a: f64, b: f64| (a.min(b), a.max(b));
                Branches { increasing: Some(sorted(p1, f)), decreasing: Some(sorted(1.0 - f, 1.0 - p1)), notes }
            }
        }
    };
    Ok(out)
}

pub fn prop3_corollary_bounds(variant: Corollary, obs: &ChainObservables) -> Result<IntervalUnion, AnalyticError> {
    Ok(corollary_branches(variant, obs)?.union())
}
