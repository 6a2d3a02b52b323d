//! Sparse affine forms over atom indices and the constraints built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

/// `constant + sum(coef * x[index])`, stored as index-sorted terms with no zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearExpression {
    terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinearExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from arbitrary `(index, coef)` pairs; duplicates are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (i, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        Self { terms: merged, constant: 0.0 }
    }

    pub fn from_dense(coefs: &[f64]) -> Self {
        let terms = coefs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| (i, *c)).collect();
        Self { terms, constant: 0.0 }
    }

    /// Coefficient 1 on each of `indices` (assumed sorted and unique).
    pub fn indicator(indices: impl IntoIterator<Item = usize>) -> Self {
        Self { terms: indices.into_iter().map(|i| (i, 1.0)).collect(), constant: 0.0 }
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: usize) -> f64 {
        self.terms.binary_search_by_key(&index, |t| t.0).map_or(0.0, |k| self.terms[k].1)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.last().map(|t| t.0)
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for &(i, c) in &self.terms {
            out[i] = c;
        }
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(i, c)| c * x[i]).sum::<f64>()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|&(i, c)| (i, c * factor)).collect(), constant: self.constant * factor }
    }

    /// `self + factor * other`, merging sorted term lists.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            let (idx, c) = if take_a {
                i += 1;
                a[i - 1]
            } else if take_b {
                j += 1;
                (b[j - 1].0, factor * b[j - 1].1)
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1 + factor * b[j - 1].1)
            };
            if c != 0.0 {
                out.push((idx, c));
            }
        }
        Self { terms: out, constant: self.constant + factor * other.constant }
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.add_scaled(other, 1.0)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.add_scaled(other, -1.0)
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "=" | "==" => Some(Relation::Eq),
            "<=" => Some(Relation::Le),
            ">=" => Some(Relation::Ge),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Relation::Eq => Relation::Eq,
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `expression relation rhs`, tagged with the assumption that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub expression: LinearExpression,
    pub relation: Relation,
    pub rhs: f64,
    pub label: String,
}

impl LinearConstraint {
    pub fn new(expression: LinearExpression, relation: Relation, rhs: f64, label: impl Into<String>) -> Self {
        let label = label.into();
        debug_assert!(!label.is_empty(), "constraint label must be non-empty");
        debug_assert!(rhs.is_finite(), "constraint rhs must be finite");
        Self { expression, relation, rhs, label }
    }

    /// Amount by which `x` violates the constraint (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.expression.evaluate(x);
        match self.relation {
            Relation::Eq => (lhs - self.rhs).abs(),
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
        }
    }

    pub fn is_satisfied(&self, x: &[f64], tol: f64) -> bool {
        self.violation(x) <= tol
    }
}
