//! Sensitivity sweeps: assumption subsets crossed with parameter grids.

use anyhow::{bail, Result};
use pidbounds_core::constraints::Assumption;
use serde::{Deserialize, Serialize};

/// `path` is `<assumption id>.<parameter>` or `observed.slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterAxis {
    pub path: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    /// Assumption-id subsets; `None` means one point with every assumption.
    pub subsets: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub parameters: Vec<ParameterAxis>,
}

/// One configuration to solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub assumptions: Vec<String>,
    pub parameters: Vec<(String, f64)>,
}

impl SweepPoint {
    /// `A0+A2`, or `none` for the empty subset.
    pub fn subset_label(&self) -> String {
        if self.assumptions.is_empty() {
            "none".into()
        } else {
            self.assumptions.join("+")
        }
    }

    /// `path=value` pairs joined by `;`.
    pub fn parameter_label(&self) -> String {
        self.parameters.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(";")
    }
}

fn split_path(path: &str) -> Option<(&str, &str)> {
    path.rsplit_once('.')
}

impl SweepPlan {
    pub fn validate(&self, assumptions: &[Assumption]) -> Result<()> {
        let known = |id: &str| assumptions.iter().any(|a| a.id() == id);
        for (k, subset) in self.subsets.iter().flatten().enumerate() {
            for id in subset {
                if !known(id) {
                    bail!("sweep.subsets[{k}]: unknown assumption id '{id}'");
                }
            }
        }
        for (k, axis) in self.parameters.iter().enumerate() {
            if axis.values.is_empty() {
                bail!("sweep.parameters[{k}]: empty value list");
            }
            if axis.path == "observed.slack" {
                continue;
            }
            let Some((id, name)) = split_path(&axis.path) else {
                bail!("sweep.parameters[{k}].path: expected '<assumption id>.<parameter>', got '{}'", axis.path);
            };
            let Some(a) = assumptions.iter().find(|a| a.id() == id) else {
                bail!("sweep.parameters[{k}].path: unknown assumption id '{id}'");
            };
            a.clone().set_parameter(name, 0.0).map_err(|e| anyhow::anyhow!("sweep.parameters[{k}].path: {e}"))?;
        }
        Ok(())
    }

    /// Subsets in order, each crossed with the parameter grid (last axis fastest).
    pub fn points(&self, assumptions: &[Assumption]) -> Vec<SweepPoint> {
        let all: Vec<String> = assumptions.iter().map(|a| a.id().to_string()).collect();
        let subsets = self.subsets.clone().unwrap_or_else(|| vec![all.clone()]);
        let mut grid: Vec<Vec<(String, f64)>> = vec![vec![]];
        for axis in &self.parameters {
            grid = grid
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut next = prefix.clone();
                        next.push((axis.path.clone(), v));
                        next
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for subset in subsets {
            // Declaration order, regardless of how the subset lists them.
            let ordered: Vec<String> = all.iter().filter(|id| subset.contains(id)).cloned().collect();
            for params in &grid {
                out.push(SweepPoint { index: out.len(), assumptions: ordered.clone(), parameters: params.clone() });
            }
        }
        out
    }
}

/// Assumptions of `point` with its parameters applied, and the observed slack.
pub fn configure(point: &SweepPoint, assumptions: &[Assumption], observed_slack: f64) -> Result<(Vec<Assumption>, f64)> {
    let mut selected: Vec<Assumption> = assumptions.iter().filter(|a| point.assumptions.iter().any(|id| id == a.id())).cloned().collect();
    let mut slack = observed_slack;
    for (path, value) in &point.parameters {
        if path == "observed.slack" {
            slack = *value;
            continue;
        }
        let (id, name) = split_path(path).expect("validated path");
        // Parameters of assumptions outside the subset have no effect.
        if let Some(a) = selected.iter_mut().find(|a| a.id() == id) {
            a.set_parameter(name, *value)?;
        }
    }
    Ok((selected, slack))
}
