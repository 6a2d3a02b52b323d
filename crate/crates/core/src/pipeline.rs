//! End-to-end assembly: network, data, assumptions and target to bounds.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::constraints::{
    compile_assumption, compile_observed, compile_probability, Assumption, LinearConstraint, LinearExpression, ObservedData,
};
use crate::error::{CompileError, Result, SpaceError};
use crate::model::{
    apply_prop2_reductions, check_fine_conditions, relax_to_linear, FineCheck, FineWitness, Network, NetworkSpec, Prop2Rewrite,
    RelaxationReport,
};
use crate::response::{enumerate_response_space, JointSpace, ParameterSpace, DEFAULT_ATOM_CAP};
use crate::solver::{solve_bounds_with, Bounds, LinearProgram, LpBackend, Sense, Simplex};
use crate::targets::{build_target, TargetSpec};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameterization {
    /// Response functions, or the joint space for a graph without edges.
    #[default]
    Auto,
    Response,
    /// Joint distribution of all endogenous variables; the graph is ignored.
    Joint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub network: NetworkSpec,
    pub parameterization: Parameterization,
    /// Relax graphs outside the linear class instead of failing.
    pub relax: bool,
    pub observed: ObservedData,
    pub observed_slack: f64,
    pub assumptions: Vec<Assumption>,
    pub target: TargetSpec,
    pub atom_cap: usize,
}

impl Model {
    pub fn new(network: NetworkSpec, observed: ObservedData, target: TargetSpec) -> Self {
        Self {
            network,
            parameterization: Parameterization::Auto,
            relax: false,
            observed,
            observed_slack: 0.0,
            assumptions: Vec::new(),
            target,
            atom_cap: DEFAULT_ATOM_CAP,
        }
    }

    pub fn with_assumptions(mut self, assumptions: impl IntoIterator<Item = Assumption>) -> Self {
        self.assumptions = assumptions.into_iter().collect();
        self
    }

    pub fn with_parameterization(mut self, p: Parameterization) -> Self {
        self.parameterization = p;
        self
    }

    pub fn with_relax(mut self, relax: bool) -> Self {
        self.relax = relax;
        self
    }

    /// Variables whose interventions must survive the instrument rewrite.
    pub fn protected(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.target.treatment().map(String::from).into_iter().collect();
        for a in &self.assumptions {
            if let Assumption::Causal(c) = a {
                out.insert(c.treatment.clone());
            }
        }
        out
    }

    pub fn structure(&self) -> Result<Structure> {
        Structure::build(&self.network, self.parameterization, self.relax, &self.protected(), self.atom_cap)
    }

    pub fn compile(&self) -> Result<CompiledProblem> {
        self.structure()?.compile(&self.observed, self.observed_slack, &self.assumptions, &self.target)
    }

    pub fn solve(&self) -> Result<Bounds> {
        self.compile()?.solve()
    }
}

/// The network after rewrites, with its parameter space.
#[derive(Debug, Clone)]
pub struct Structure {
    pub network: Network,
    pub witness: Option<FineWitness>,
    pub rewrites: Vec<Prop2Rewrite>,
    pub relaxation: Option<RelaxationReport>,
    pub space: ParameterSpace,
}

fn not_linear(check: &FineCheck) -> SpaceError {
    match check {
        FineCheck::InClass { .. } => SpaceError::NotLinear(String::new()),
        FineCheck::NotInClass { candidates, reason } => {
            let detail: Vec<String> = candidates.iter().map(|c| format!("{}: {} failure(s)", c.candidate, c.failures.len())).collect();
            SpaceError::NotLinear(if detail.is_empty() { reason.clone() } else { format!("{reason} ({})", detail.join("; ")) })
        }
    }
}

impl Structure {
    pub fn build(
        spec: &NetworkSpec,
        parameterization: Parameterization,
        relax: bool,
        protected: &BTreeSet<String>,
        cap: usize,
    ) -> Result<Self> {
        let net = spec.validate()?;
        if parameterization == Parameterization::Joint {
            let space = ParameterSpace::Joint(JointSpace::new(&net, cap)?);
            return Ok(Self { network: net, witness: None, rewrites: vec![], relaxation: None, space });
        }
        let (reduced, rewrites) = apply_prop2_reductions(&net, protected);
        let check = check_fine_conditions(&reduced);
        let (network, witness, relaxation) = match check {
            FineCheck::InClass { witness, .. } => (reduced, witness, None),
            FineCheck::NotInClass { .. } if relax => {
                let (relaxed, report) = relax_to_linear(&reduced, protected)?;
                let witness = check_fine_conditions(&relaxed).into_witness().ok_or_else(|| not_linear(&check))?;
                (relaxed, witness, Some(report))
            }
            FineCheck::NotInClass { .. } => return Err(not_linear(&check).into()),
        };
        let space = if witness.is_degenerate() {
            ParameterSpace::Joint(JointSpace::new(&network, cap)?)
        } else {
            ParameterSpace::Response(enumerate_response_space(&network, &witness, cap)?)
        };
        Ok(Self { network, witness: Some(witness), rewrites, relaxation, space })
    }

    /// True when the graph was loosened, so bounds may be outer.
    pub fn is_outer(&self) -> bool {
        self.relaxation.as_ref().is_some_and(RelaxationReport::is_outer)
    }

    pub fn compile(
        self,
        observed: &ObservedData,
        observed_slack: f64,
        assumptions: &[Assumption],
        target: &TargetSpec,
    ) -> Result<CompiledProblem> {
        let mut seen = BTreeSet::new();
        for a in assumptions {
            let id = a.id();
            if id.is_empty() || id.contains(['@', ':', '\t']) || matches!(id, "probability" | "observed") {
                return Err(CompileError::Parameter(format!("invalid assumption id '{id}'")).into());
            }
            if !seen.insert(id) {
                return Err(CompileError::Parameter(format!("duplicate assumption id '{id}'")).into());
            }
        }
        let marginal = observed.instrument_marginal.as_deref();
        let mut constraints = compile_probability(&self.space);
        constraints.extend(compile_observed(&self.space, observed, observed_slack)?);
        for a in assumptions {
            constraints.extend(compile_assumption(&self.space, a, marginal)?);
        }
        let objective = build_target(&self.space, marginal, target)?;
        Ok(CompiledProblem { structure: self, constraints, objective })
    }
}

#[derive(Debug, Clone)]
pub struct CompiledProblem {
    pub structure: Structure,
    pub constraints: Vec<LinearConstraint>,
    pub objective: LinearExpression,
}

impl CompiledProblem {
    pub fn atom_count(&self) -> usize {
        self.structure.space.atom_count()
    }

    pub fn program(&self, sense: Sense) -> LinearProgram {
        LinearProgram::new(self.objective.clone(), self.constraints.clone(), self.atom_count(), sense)
    }

    pub fn solve(&self) -> Result<Bounds> {
        self.solve_with(&Simplex::default())
    }

    pub fn solve_with(&self, backend: &dyn LpBackend) -> Result<Bounds> {
        Ok(solve_bounds_with(backend, &self.objective, &self.constraints, self.atom_count())?)
    }
}
