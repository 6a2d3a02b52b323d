//! Latent-variable Bayesian networks.
//!
//! A [`NetworkSpec`] is the raw declaration (variables with roles and
//! cardinalities, directed edges). [`NetworkSpec::validate`] turns it into a
//! [`Network`], which caches parent/child lists and a deterministic
//! topological order. Everything downstream works on `Network`.
//!
//! The linear class is the set of graphs with an exogenous confounder whose
//! descendants are all its children and whose non-descendants are observed
//! single-child instruments ([`check_fine_conditions`]). Graphs outside it can
//! be rewritten with [`apply_prop2_reductions`] (exact) or
//! [`relax_to_linear`] (outer).

mod fine;
mod reduce;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub use fine::{check_fine_conditions, CandidateFailure, FineCheck, FineFailure, FineWitness};
pub use reduce::{apply_prop2_reductions, relax_to_linear, Prop2Rewrite, RelaxationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Observed,
    #[serde(alias = "latent")]
    LatentTarget,
    Exogenous,
}

impl Role {
    pub fn is_endogenous(self) -> bool {
        !matches!(self, Role::Exogenous)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    /// Absent for exogenous variables.
    pub cardinality: Option<usize>,
    pub role: Role,
}

impl VariableSpec {
    pub fn observed(name: impl Into<String>, cardinality: usize) -> Self {
        Self { name: name.into(), cardinality: Some(cardinality), role: Role::Observed }
    }

    pub fn latent(name: impl Into<String>, cardinality: usize) -> Self {
        Self { name: name.into(), cardinality: Some(cardinality), role: Role::LatentTarget }
    }

    pub fn exogenous(name: impl Into<String>) -> Self {
        Self { name: name.into(), cardinality: None, role: Role::Exogenous }
    }
}

/// Unvalidated network declaration.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub variables: Vec<VariableSpec>,
    pub edges: Vec<(String, String)>,
}

impl NetworkSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observed(mut self, name: &str, cardinality: usize) -> Self {
        self.variables.push(VariableSpec::observed(name, cardinality));
        self
    }

    pub fn latent(mut self, name: &str, cardinality: usize) -> Self {
        self.variables.push(VariableSpec::latent(name, cardinality));
        self
    }

    pub fn exogenous(mut self, name: &str) -> Self {
        self.variables.push(VariableSpec::exogenous(name));
        self
    }

    pub fn edge(mut self, parent: &str, child: &str) -> Self {
        self.edges.push((parent.to_string(), child.to_string()));
        self
    }

    /// Checks roles, cardinalities and acyclicity and caches a topological order.
    pub fn validate(&self) -> Result<Network, ModelError> {
        let mut index = HashMap::with_capacity(self.variables.len());
        for (i, v) in self.variables.iter().enumerate() {
            if index.insert(v.name.as_str(), i).is_some() {
                return Err(ModelError::DuplicateName(v.name.clone()));
            }
            match (v.role, v.cardinality) {
                (Role::Exogenous, Some(_)) => return Err(ModelError::ExogenousCardinality(v.name.clone())),
                (Role::Exogenous, None) => {}
                (_, Some(c)) if c >= 2 => {}
                (_, got) => return Err(ModelError::Cardinality { name: v.name.clone(), got }),
            }
        }

        let n = self.variables.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (p, c) in &self.edges {
            let pi = *index.get(p.as_str()).ok_or_else(|| ModelError::UnknownVariable(p.clone()))?;
            let ci = *index.get(c.as_str()).ok_or_else(|| ModelError::UnknownVariable(c.clone()))?;
            if pi == ci {
                return Err(ModelError::Cycle(p.clone()));
            }
            if self.variables[ci].role == Role::Exogenous {
                return Err(ModelError::ExogenousParent { parent: p.clone(), child: c.clone() });
            }
            if !seen.insert((pi, ci)) {
                return Err(ModelError::DuplicateEdge(p.clone(), c.clone()));
            }
            edges.push((pi, ci));
            parents[ci].push(pi);
            children[pi].push(ci);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }

        // Kahn's algorithm, smallest declaration index first.
        let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(ModelError::Cycle(self.variables[stuck].name.clone()));
        }

        Ok(Network { variables: self.variables.clone(), edges, parents, children, topo })
    }
}

/// A validated network. Variable indices follow declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    variables: Vec<VariableSpec>,
    edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl Network {
    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &VariableSpec {
        &self.variables[i]
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.variables[i].name
    }

    pub fn role(&self, i: usize) -> Role {
        self.variables[i].role
    }

    pub fn cardinality(&self, i: usize) -> Option<usize> {
        self.variables[i].cardinality
    }

    /// Parents sorted by declaration index.
    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.children[parent].binary_search(&child).is_ok()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn exogenous(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.role(i) == Role::Exogenous)
    }

    /// Strict descendants of `i`.
    pub fn descendants(&self, i: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = self.children[i].clone();
        while let Some(v) = stack.pop() {
            if out.insert(v) {
                stack.extend_from_slice(&self.children[v]);
            }
        }
        out
    }

    /// Edge list by name, in stored order.
    pub fn named_edges(&self) -> Vec<(String, String)> {
        self.edges.iter().map(|&(p, c)| (self.name(p).to_string(), self.name(c).to_string())).collect()
    }

    pub fn to_spec(&self) -> NetworkSpec {
        NetworkSpec { variables: self.variables.clone(), edges: self.named_edges() }
    }

    /// Same variables and edge set, irrespective of edge order.
    pub fn same_structure(&self, other: &Network) -> bool {
        let mine: BTreeSet<_> = self.named_edges().into_iter().collect();
        let theirs: BTreeSet<_> = other.named_edges().into_iter().collect();
        let vars = |n: &Network| -> BTreeSet<(String, Option<usize>, Role)> {
            n.variables.iter().map(|v| (v.name.clone(), v.cardinality, v.role)).collect()
        };
        mine == theirs && vars(self) == vars(other)
    }
}
