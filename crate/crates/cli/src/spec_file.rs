//! TOML analysis files.
//!
//! ```toml
//! edges = [["A", "X"], ["X", "Y"], ["Lambda", "X"], ["Lambda", "Y"]]
//!
//! [model]                  # optional
//! parameterization = "auto" # auto | response | joint
//! relax = false
//!
//! [[variables]]
//! name = "A"
//! cardinality = 2
//! role = "observed"        # observed | latent | exogenous
//!
//! [observed]
//! instrument_marginal = [0.5, 0.5]
//! conditionals = [[0.7, 0.3], [0.4, 0.6]]
//! slack = 0.0
//!
//! [[assumptions]]
//! kind = "A4"
//! treatment = "A"
//! outcome = "X"
//!
//! [target]
//! kind = "ate"
//! variable = "X"
//! treatment = "A"
//! treated = 1
//! control = 0
//!
//! [sweep]                  # optional
//! subsets = [[], ["A4"]]
//! parameters = [{ path = "A4.slack", values = [0.0, 0.05] }]
//! ```
//!
//! `edges` must precede the first table. `conditionals` has one table per
//! instrument arm; arms enumerate the instrument values with the first
//! instrument most significant, and each table is row-major over the joint
//! values of the observed outcomes (`pidbounds check-graph` prints both
//! orders). An empty table marks an arm with no data.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use pidbounds_core::constraints::{
    Assumption, CausalAssumption, CausalKind, Level, MeasurementAssumption, MeasurementKind, ObservedData, DISTRIBUTION_TOLERANCE,
};
use pidbounds_core::model::{NetworkSpec, Role, VariableSpec};
use pidbounds_core::targets::TargetSpec;
use pidbounds_core::{Model, Parameterization};
use serde::Deserialize;

use crate::sweep::SweepPlan;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    parameterization: Parameterization,
    #[serde(default)]
    relax: bool,
    atom_cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    name: String,
    cardinality: Option<usize>,
    role: Role,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObserved {
    instrument_marginal: Option<Vec<f64>>,
    conditionals: Vec<Vec<f64>>,
    #[serde(default)]
    slack: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    edges: Vec<(String, String)>,
    #[serde(default)]
    model: RawModel,
    variables: Vec<RawVariable>,
    observed: RawObserved,
    #[serde(default)]
    assumptions: Vec<toml::Table>,
    target: TargetSpec,
    #[serde(default)]
    sweep: SweepPlan,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurement {
    id: Option<String>,
    truth: String,
    proxy: String,
    #[serde(default)]
    level: Level,
    #[serde(default)]
    epsilon: f64,
    #[serde(default)]
    lambda: f64,
    #[serde(default)]
    threshold: f64,
    #[serde(default)]
    slack: f64,
    distance: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCausal {
    id: Option<String>,
    treatment: String,
    outcome: String,
    #[serde(default)]
    slack: f64,
}

/// A parsed analysis: the model with every declared assumption, plus the sweep.
#[derive(Debug, Clone)]
pub struct AnalysisSpec {
    pub model: Model,
    pub sweep: SweepPlan,
}

fn check_table(field: &str, p: &[f64]) -> Result<()> {
    if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        bail!("{field}: invalid probability {bad}");
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        bail!("{field}: distribution not normalized (sums to {total})");
    }
    Ok(())
}

fn parse_assumption(k: usize, mut table: toml::Table) -> Result<Assumption> {
    let field = format!("assumptions[{k}]");
    let kind = match table.remove("kind") {
        Some(toml::Value::String(s)) => s,
        _ => bail!("{field}: missing string field 'kind'"),
    };
    let kind = kind.as_str();
    let measurement = match kind {
        "A0" => Some(MeasurementKind::A0),
        "A1" => Some(MeasurementKind::A1),
        "A2" => Some(MeasurementKind::A2),
        "A3" => Some(MeasurementKind::A3),
        _ => None,
    };
    let causal = match kind {
        "A4" => Some(CausalKind::A4),
        "A5" => Some(CausalKind::A5),
        _ => None,
    };
    if let Some(kind) = measurement {
        let raw: RawMeasurement = table.try_into().with_context(|| format!("{field} ({kind:?})"))?;
        let mut m = MeasurementAssumption::new(kind, &raw.truth, &raw.proxy)
            .with_level(raw.level)
            .with_epsilon(raw.epsilon)
            .with_lambda(raw.lambda)
            .with_threshold(raw.threshold)
            .with_slack(raw.slack);
        m.distance = raw.distance;
        if let Some(id) = raw.id {
            m = m.with_id(&id);
        }
        Ok(m.into())
    } else if let Some(kind) = causal {
        let raw: RawCausal = table.try_into().with_context(|| format!("{field} ({kind:?})"))?;
        let mut c = CausalAssumption::new(kind, &raw.treatment, &raw.outcome).with_slack(raw.slack);
        if let Some(id) = raw.id {
            c = c.with_id(&id);
        }
        Ok(c.into())
    } else {
        bail!("{field}.kind: unknown assumption kind '{kind}' (expected A0, A1, A2, A3, A4 or A5)")
    }
}

pub fn parse_spec_str(text: &str) -> Result<AnalysisSpec> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| anyhow!("schema error: {e}"))?;
    let variables = raw.variables.into_iter().map(|v| VariableSpec { name: v.name, cardinality: v.cardinality, role: v.role }).collect();
    let network = NetworkSpec { variables, edges: raw.edges };
    network.validate().context("variables/edges")?;

    let obs = raw.observed;
    if let Some(m) = &obs.instrument_marginal {
        check_table("observed.instrument_marginal", m)?;
    }
    let mut conditionals = Vec::with_capacity(obs.conditionals.len());
    for (arm, table) in obs.conditionals.into_iter().enumerate() {
        if table.is_empty() {
            conditionals.push(None);
        } else {
            check_table(&format!("observed.conditionals[{arm}]"), &table)?;
            conditionals.push(Some(table));
        }
    }
    if !(obs.slack >= 0.0 && obs.slack.is_finite()) {
        bail!("observed.slack: must be a finite value >= 0");
    }
    let observed = ObservedData { instrument_marginal: obs.instrument_marginal, arm_conditionals: conditionals };

    let assumptions = raw.assumptions.into_iter().enumerate().map(|(k, t)| parse_assumption(k, t)).collect::<Result<Vec<_>>>()?;
    let mut ids = BTreeSet::new();
    for a in &assumptions {
        if !ids.insert(a.id().to_string()) {
            bail!("assumptions: duplicate id '{}' (set 'id' to disambiguate)", a.id());
        }
    }
    raw.sweep.validate(&assumptions)?;

    let mut model = Model::new(network, observed, raw.target)
        .with_parameterization(raw.model.parameterization)
        .with_relax(raw.model.relax)
        .with_assumptions(assumptions);
    model.observed_slack = obs.slack;
    if let Some(cap) = raw.model.atom_cap {
        model.atom_cap = cap;
    }
    Ok(AnalysisSpec { model, sweep: raw.sweep })
}

pub fn parse_spec(path: &Path) -> Result<AnalysisSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_spec_str(&text).with_context(|| format!("in {}", path.display()))
}
