use std::collections::BTreeSet;

use serde::Serialize;

use super::fine::{check_fine_conditions, FineCheck, FineFailure};
use super::{Network, NetworkSpec, Role, VariableSpec};
use crate::error::ModelError;

/// One application of the confounded-instrument rewrite: exogenous `removed`
/// confounded `instrument` and `child`; the edge `instrument -> child` now
/// carries the dependence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop2Rewrite {
    pub removed: String,
    pub instrument: String,
    pub child: String,
    pub edge_added: bool,
}

/// Everything `relax_to_linear` changed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RelaxationReport {
    /// Exact rewrites; these never loosen bounds.
    pub step1: Vec<Prop2Rewrite>,
    pub removed_exogenous: Vec<String>,
    pub removed_edges: Vec<(String, String)>,
    pub added_confounder: Option<String>,
    pub added_edges: Vec<(String, String)>,
}

impl RelaxationReport {
    /// True when the graph was loosened, so bounds are outer rather than sharp.
    pub fn is_outer(&self) -> bool {
        self.added_confounder.is_some()
            || !self.removed_exogenous.is_empty()
            || !self.added_edges.is_empty()
            || !self.removed_edges.is_empty()
    }
}

fn find_rewrite(net: &Network, protected: &BTreeSet<String>) -> Option<(usize, usize, usize)> {
    for u in net.exogenous() {
        let &[c0, c1] = net.children(u) else { continue };
        for (a, b) in [(c0, c1), (c1, c0)] {
            if protected.contains(net.name(a)) {
                continue;
            }
            let only_u = net.parents(a) == [u];
            let feeds_b = net.children(a).iter().all(|&c| c == b);
            if only_u && feeds_b {
                return Some((u, a, b));
            }
        }
    }
    None
}

/// Repeatedly replaces an exogenous `U` with exactly two children `A`, `B`
/// (where `U` is `A`'s only parent and `A` feeds at most `B`) by the edge
/// `A -> B`. Rewrites whose `A` is in `protected` are skipped.
pub fn apply_prop2_reductions(net: &Network, protected: &BTreeSet<String>) -> (Network, Vec<Prop2Rewrite>) {
    let mut current = net.clone();
    let mut rewrites = Vec::new();
    while let Some((u, a, b)) = find_rewrite(&current, protected) {
        let mut spec = current.to_spec();
        let (u_name, a_name, b_name) = (current.name(u).to_string(), current.name(a).to_string(), current.name(b).to_string());
        spec.variables.retain(|v| v.name != u_name);
        spec.edges.retain(|(p, _)| *p != u_name);
        let edge_added = !current.has_edge(a, b);
        if edge_added {
            spec.edges.push((a_name.clone(), b_name.clone()));
        }
        // `a` has no parents left, so the new edge cannot close a cycle.
        current = spec.validate().expect("rewrite preserves validity");
        rewrites.push(Prop2Rewrite { removed: u_name, instrument: a_name, child: b_name, edge_added });
    }
    (current, rewrites)
}

fn fresh_name(net: &Network) -> String {
    if net.index_of("Lambda").is_none() {
        return "Lambda".into();
    }
    (1..).map(|i| format!("Lambda{i}")).find(|n| net.index_of(n).is_none()).unwrap()
}

/// Rewrites any valid network into the linear class.
///
/// Step 1 applies the exact confounded-instrument rewrites. If the result is
/// not yet linear, step 2 drops every remaining exogenous variable and adds a
/// single fresh confounder pointing at each endogenous vertex that has a
/// parent. Parentless vertices that cannot act as instruments because they
/// are latent or isolated also receive the confounder. Observed roots with
/// two or more children cannot be fixed and are reported as an error.
pub fn relax_to_linear(net: &Network, protected: &BTreeSet<String>) -> Result<(Network, RelaxationReport), ModelError> {
    let (reduced, step1) = apply_prop2_reductions(net, protected);
    let mut report = RelaxationReport { step1, ..Default::default() };
    if matches!(check_fine_conditions(&reduced), FineCheck::InClass { .. }) {
        return Ok((reduced, report));
    }

    let lambda = fresh_name(&reduced);
    let mut spec = NetworkSpec { variables: Vec::new(), edges: Vec::new() };
    let mut targets = Vec::new();
    for (i, v) in reduced.variables().iter().enumerate() {
        if v.role == Role::Exogenous {
            report.removed_exogenous.push(v.name.clone());
            continue;
        }
        spec.variables.push(v.clone());
        let has_parent = !reduced.parents(i).is_empty();
        let unusable_root = v.role == Role::LatentTarget || reduced.children(i).is_empty();
        if has_parent || unusable_root {
            targets.push(v.name.clone());
        }
    }
    for (p, c) in reduced.named_edges() {
        let parent_exogenous = reduced.index_of(&p).map(|i| reduced.role(i)) == Some(Role::Exogenous);
        if parent_exogenous {
            report.removed_edges.push((p, c));
        } else {
            spec.edges.push((p, c));
        }
    }
    spec.variables.push(VariableSpec::exogenous(lambda.clone()));
    for t in targets {
        spec.edges.push((lambda.clone(), t.clone()));
        report.added_edges.push((lambda.clone(), t));
    }
    report.added_confounder = Some(lambda.clone());

    let relaxed = spec.validate()?;
    match check_fine_conditions(&relaxed) {
        FineCheck::InClass { .. } => Ok((relaxed, report)),
        FineCheck::NotInClass { candidates, reason } => {
            let failure = candidates.iter().find(|c| c.candidate == lambda).and_then(|c| c.failures.first().cloned());
            let (vertex, reason) = match failure {
                Some(FineFailure::InstrumentChildCount { vertex, children }) => (vertex, format!("observed root has {children} children")),
                Some(FineFailure::InstrumentChildOutside { vertex, child }) => (vertex, format!("child '{child}' is not confounded")),
                Some(FineFailure::NonDescendantNotObserved { vertex }) => (vertex, "non-descendant is not observed".into()),
                Some(FineFailure::DescendantNotChild { vertex }) => (vertex, "descendant is not a child".into()),
                None => (lambda, reason),
            };
            Err(ModelError::RelaxationFailed { vertex, reason })
        }
    }
}
