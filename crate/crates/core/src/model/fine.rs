use serde::Serialize;

use super::{Network, Role};

/// The confounder, its children and the instruments of a linear-class graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FineWitness {
    /// `None` only for the degenerate graph with no exogenous variables and no edges.
    pub lambda: Option<String>,
    /// Children of the confounder, in topological order.
    pub children: Vec<String>,
    /// Non-descendants of the confounder, in declaration order.
    pub instruments: Vec<String>,
}

impl FineWitness {
    pub fn is_degenerate(&self) -> bool {
        self.lambda.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FineFailure {
    /// Condition 1: a descendant of the candidate that is not one of its children.
    DescendantNotChild { vertex: String },
    /// Condition 2: a non-descendant that is not observed.
    NonDescendantNotObserved { vertex: String },
    /// Condition 2: a non-descendant without exactly one child.
    InstrumentChildCount { vertex: String, children: usize },
    /// Condition 2: a non-descendant whose child is outside the candidate's children.
    InstrumentChildOutside { vertex: String, child: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateFailure {
    pub candidate: String,
    pub failures: Vec<FineFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FineCheck {
    InClass { witness: FineWitness, notes: Vec<String> },
    NotInClass { candidates: Vec<CandidateFailure>, reason: String },
}

impl FineCheck {
    pub fn witness(&self) -> Option<&FineWitness> {
        match self {
            FineCheck::InClass { witness, .. } => Some(witness),
            FineCheck::NotInClass { .. } => None,
        }
    }

    pub fn into_witness(self) -> Option<FineWitness> {
        match self {
            FineCheck::InClass { witness, .. } => Some(witness),
            FineCheck::NotInClass { .. } => None,
        }
    }
}

/// Looks for an exogenous variable whose descendants are all its children and
/// whose non-descendants are observed instruments with a single child inside
/// that child set. The first qualifying candidate in declaration order wins.
pub fn check_fine_conditions(net: &Network) -> FineCheck {
    let exogenous: Vec<usize> = net.exogenous().collect();
    if exogenous.is_empty() {
        if net.edges().is_empty() {
            return FineCheck::InClass {
                witness: FineWitness { lambda: None, children: vec![], instruments: vec![] },
                notes: vec!["no exogenous variables and no edges: graph-free joint model".into()],
            };
        }
        return FineCheck::NotInClass { candidates: vec![], reason: "no exogenous variable exists".into() };
    }

    let mut candidates = Vec::new();
    for &lambda in &exogenous {
        let children = net.children(lambda);
        let descendants = net.descendants(lambda);
        let mut failures = Vec::new();

        for &d in &descendants {
            if !children.contains(&d) {
                failures.push(FineFailure::DescendantNotChild { vertex: net.name(d).into() });
            }
        }
        let mut instruments = Vec::new();
        for v in 0..net.len() {
            if v == lambda || descendants.contains(&v) {
                continue;
            }
            let name = net.name(v).to_string();
            if net.role(v) != Role::Observed {
                failures.push(FineFailure::NonDescendantNotObserved { vertex: name });
                continue;
            }
            match net.children(v) {
                [only] if children.contains(only) => instruments.push(name),
                [only] => failures.push(FineFailure::InstrumentChildOutside { vertex: name, child: net.name(*only).into() }),
                many => failures.push(FineFailure::InstrumentChildCount { vertex: name, children: many.len() }),
            }
        }

        if failures.is_empty() {
            let ordered_children =
                net.topological_order().iter().filter(|v| children.contains(v)).map(|&v| net.name(v).to_string()).collect::<Vec<_>>();
            let mut notes = Vec::new();
            if ordered_children.is_empty() {
                notes.push(format!("confounder '{}' has no children", net.name(lambda)));
            }
            return FineCheck::InClass {
                witness: FineWitness { lambda: Some(net.name(lambda).into()), children: ordered_children, instruments },
                notes,
            };
        }
        candidates.push(CandidateFailure { candidate: net.name(lambda).into(), failures });
    }

    FineCheck::NotInClass { candidates, reason: "no exogenous candidate satisfies both conditions".into() }
}
