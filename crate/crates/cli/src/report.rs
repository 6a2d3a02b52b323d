//! `check-graph` and `prop3` reports.

use anyhow::{bail, Result};
use pidbounds_core::analytic::{corollary_branches, prop3_branches, Branches, ChainObservables, Corollary};
use pidbounds_core::model::{
    apply_prop2_reductions, check_fine_conditions, relax_to_linear, FineCheck, Prop2Rewrite, RelaxationReport, Role,
};
use pidbounds_core::Structure;
use serde::Serialize;

use crate::spec_file::AnalysisSpec;

#[derive(Debug, Serialize)]
pub struct SpaceSummary {
    pub parameterization: &'static str,
    pub atoms: usize,
    /// Arm order of `observed.conditionals`: first instrument most significant.
    pub instruments: Vec<String>,
    /// Cell order within each conditional table: row-major, first outcome most significant.
    pub outcomes: Vec<String>,
    pub arms: usize,
    pub cells_per_arm: usize,
    /// Bounds may be wider than sharp because the graph was relaxed.
    pub outer: bool,
}

#[derive(Debug, Serialize)]
pub struct GraphReport {
    pub input: FineCheck,
    pub protected: Vec<String>,
    pub rewrites: Vec<Prop2Rewrite>,
    pub reduced: FineCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relaxation: Option<RelaxationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relaxation_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSummary>,
    /// Why no parameter space was built (for example, relaxation is disabled).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn check_graph(spec: &AnalysisSpec) -> Result<GraphReport> {
    let m = &spec.model;
    let net = m.network.validate()?;
    let protected = m.protected();
    let input = check_fine_conditions(&net);
    let (reduced_net, rewrites) = apply_prop2_reductions(&net, &protected);
    let reduced = check_fine_conditions(&reduced_net);
    let (relaxation, relaxation_error) = match &reduced {
        FineCheck::InClass { .. } => (None, None),
        FineCheck::NotInClass { .. } => match relax_to_linear(&reduced_net, &protected) {
            Ok((_, report)) => (Some(report), None),
            Err(e) => (None, Some(e.to_string())),
        },
    };
    let (space, error) = match Structure::build(&m.network, m.parameterization, m.relax, &protected, m.atom_cap) {
        Ok(s) => {
            let sp = &s.space;
            let names = |vars: &[usize]| vars.iter().map(|&v| sp.name(v).to_string()).collect();
            let summary = SpaceSummary {
                parameterization: if sp.is_joint() { "joint" } else { "response" },
                atoms: sp.atom_count(),
                instruments: names(sp.instruments()),
                outcomes: names(sp.outcomes()),
                arms: sp.arm_count(),
                cells_per_arm: sp.outcome_count(),
                outer: s.is_outer(),
            };
            (Some(summary), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(GraphReport { input, protected: protected.into_iter().collect(), rewrites, reduced, relaxation, relaxation_error, space, error })
}

#[derive(Debug, Serialize)]
pub struct Prop3Report {
    pub p_a: Vec<f64>,
    pub p1_given_a: Vec<f64>,
    /// `P(Y = 1)`.
    pub p1: f64,
    pub min_p1_given_a: f64,
    pub max_p1_given_a: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<Corollary>,
    pub branches: Branches,
    /// Merged identified set for `P(X = 1)`.
    pub set: Vec<(f64, f64)>,
}

/// Closed-form bounds for a spec declaring exactly `A -> X -> Y` with
/// binary latent `X` and binary observed `Y`.
pub fn prop3_report(spec: &AnalysisSpec, corollary: Option<Corollary>) -> Result<Prop3Report> {
    let net = spec.model.network.validate()?;
    let shape_error =
        || anyhow::anyhow!("prop3 needs exactly the chain A -> X -> Y with observed A, binary latent X and binary observed Y");
    if net.len() != 3 || net.edges().len() != 2 {
        return Err(shape_error());
    }
    let order = net.topological_order();
    let (a, x, y) = (order[0], order[1], order[2]);
    let ok = net.role(a) == Role::Observed
        && net.role(x) == Role::LatentTarget
        && net.role(y) == Role::Observed
        && net.cardinality(x) == Some(2)
        && net.cardinality(y) == Some(2)
        && net.has_edge(a, x)
        && net.has_edge(x, y);
    if !ok {
        return Err(shape_error());
    }
    let observed = &spec.model.observed;
    let Some(p_a) = observed.instrument_marginal.clone() else { bail!("prop3 needs observed.instrument_marginal") };
    let mut p1_given_a = Vec::new();
    for (arm, table) in observed.arm_conditionals.iter().enumerate() {
        match table.as_deref() {
            Some([_, p1]) => p1_given_a.push(*p1),
            _ => bail!("observed.conditionals[{arm}]: prop3 needs [P(Y=0|A), P(Y=1|A)] for every arm"),
        }
    }
    let obs = ChainObservables::new(p_a, p1_given_a)?;
    let branches = match corollary {
        None => prop3_branches(&obs)?,
        Some(c) => corollary_branches(c, &obs)?,
    };
    let (m, big) = obs.extremes();
    Ok(Prop3Report {
        p1: obs.p1(),
        min_p1_given_a: m,
        max_p1_given_a: big,
        set: branches.union().intervals().to_vec(),
        corollary,
        branches,
        p_a: obs.p_a,
        p1_given_a: obs.p1_given_a,
    })
}
