//! Solving every sweep point, optionally in parallel.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use anyhow::{Context, Result};
use pidbounds_core::oracle::oracle_bounds;
use pidbounds_core::solver::{write_lp, Sense};
use pidbounds_core::{Bounds, BoundsStatus, Model, Structure};
use rayon::prelude::*;
use serde::Serialize;

use crate::spec_file::AnalysisSpec;
use crate::sweep::{configure, SweepPoint};

/// Endpoint agreement required between the simplex and the vertex oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub verify_oracle: bool,
    /// Thread count; 0 lets the pool decide.
    pub jobs: usize,
    pub witnesses: bool,
    pub dump_lp: bool,
    /// Leave `runtime_ms` out so records are byte-for-byte reproducible.
    pub omit_runtime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub label: String,
    pub residual: f64,
}

/// One output line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub index: usize,
    pub subset: String,
    pub assumptions: Vec<String>,
    pub parameters: BTreeMap<String, f64>,
    pub status: BoundsStatus,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// The graph was relaxed, so the interval may be wider than sharp.
    pub outer: bool,
    pub atoms: usize,
    pub merged_columns: usize,
    pub fixed_zero_columns: usize,
    pub lower_iterations: usize,
    pub upper_iterations: usize,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub infeasibility: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_note: Option<String>,
}

/// Sparse witness distributions for one record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub index: usize,
    pub lower: Vec<(usize, f64)>,
    pub upper: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct PointOutput {
    pub record: Record,
    pub witnesses: Option<WitnessRecord>,
    pub lp: Option<String>,
}

fn sparse(x: &[f64]) -> Vec<(usize, f64)> {
    x.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, &v)| (i, v)).collect()
}

fn oracle_check(bounds: &Bounds, oracle: &Bounds) -> bool {
    if bounds.status != oracle.status {
        return false;
    }
    bounds.status != BoundsStatus::Optimal
        || ((bounds.lower - oracle.lower).abs() <= ORACLE_TOLERANCE && (bounds.upper - oracle.upper).abs() <= ORACLE_TOLERANCE)
}

fn solve_point(spec: &AnalysisSpec, structure: &Structure, point: &SweepPoint, options: &RunOptions) -> Result<PointOutput> {
    let model = &spec.model;
    let (assumptions, slack) = configure(point, &model.assumptions, model.observed_slack)?;
    let start = Instant::now();
    let compiled = structure
        .clone()
        .compile(&model.observed, slack, &assumptions, &model.target)
        .with_context(|| format!("sweep point {} ({})", point.index, point.subset_label()))?;
    let bounds = compiled.solve().with_context(|| format!("solving sweep point {}", point.index))?;
    let runtime = start.elapsed().as_secs_f64() * 1e3;
    let optimal = bounds.is_optimal();
    let d = &bounds.diagnostics;
    let mut record = Record {
        index: point.index,
        subset: point.subset_label(),
        assumptions: point.assumptions.clone(),
        parameters: point.parameters.iter().cloned().collect(),
        status: bounds.status,
        lower: optimal.then_some(bounds.lower),
        upper: optimal.then_some(bounds.upper),
        outer: structure.is_outer(),
        atoms: compiled.atom_count(),
        merged_columns: d.merged_columns,
        fixed_zero_columns: d.fixed_zero_columns,
        lower_iterations: d.lower_iterations,
        upper_iterations: d.upper_iterations,
        max_residual: d.max_residual,
        runtime_ms: (!options.omit_runtime).then_some(runtime),
        infeasibility: d.infeasibility.iter().map(|(label, residual)| Residual { label: label.clone(), residual: *residual }).collect(),
        oracle_agrees: None,
        oracle_note: None,
    };
    let program = compiled.program(Sense::Minimize);
    if options.verify_oracle {
        match oracle_bounds(&program) {
            Ok(oracle) => record.oracle_agrees = Some(oracle_check(&bounds, &oracle)),
            Err(e) => record.oracle_note = Some(format!("oracle skipped: {e}")),
        }
    }
    let witnesses = (options.witnesses && optimal).then(|| WitnessRecord {
        index: point.index,
        lower: sparse(&bounds.lower_witness),
        upper: sparse(&bounds.upper_witness),
    });
    let lp = if options.dump_lp { Some(write_lp(&program)?) } else { None };
    Ok(PointOutput { record, witnesses, lp })
}

fn structures(spec: &AnalysisSpec, points: &[SweepPoint]) -> Result<BTreeMap<BTreeSet<String>, Structure>> {
    let mut out = BTreeMap::new();
    for point in points {
        let (assumptions, _) = configure(point, &spec.model.assumptions, spec.model.observed_slack)?;
        let protected = Model { assumptions, ..spec.model.clone() }.protected();
        if let Entry::Vacant(slot) = out.entry(protected) {
            let m = &spec.model;
            let s = Structure::build(&m.network, m.parameterization, m.relax, slot.key(), m.atom_cap)?;
            slot.insert(s);
        }
    }
    Ok(out)
}

/// Solves every sweep point; results come back in sweep order.
pub fn run(spec: &AnalysisSpec, options: &RunOptions) -> Result<Vec<PointOutput>> {
    let points = spec.sweep.points(&spec.model.assumptions);
    let cache = structures(spec, &points)?;
    let solve = |point: &SweepPoint| {
        let (assumptions, _) = configure(point, &spec.model.assumptions, spec.model.observed_slack)?;
        let protected = Model { assumptions, ..spec.model.clone() }.protected();
        solve_point(spec, &cache[&protected], point, options)
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(options.jobs).build()?;
    pool.install(|| points.par_iter().map(solve).collect())
}
