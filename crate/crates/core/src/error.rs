use thiserror::Error;

/// Structural problems with a network declaration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate variable name '{0}'")]
    DuplicateName(String),
    #[error("edge references unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("cycle detected through '{0}'")]
    Cycle(String),
    #[error("exogenous variable has parent: {parent} -> {child}")]
    ExogenousParent { parent: String, child: String },
    #[error("endogenous variable '{name}' needs cardinality >= 2 (got {got:?})")]
    Cardinality { name: String, got: Option<usize> },
    #[error("exogenous variable '{0}' must not declare a cardinality")]
    ExogenousCardinality(String),
    #[error("relaxed graph still fails the linear-class conditions at '{vertex}': {reason}")]
    RelaxationFailed { vertex: String, reason: String },
}

/// Errors raised while building or querying a parameter space.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("problem too large: {atoms} atoms exceeds cap {cap}")]
    TooLarge { atoms: u128, cap: usize },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("cannot intervene on exogenous variable '{0}'")]
    ExogenousIntervention(String),
    #[error("interventions are not available in the joint (graph-free) parameterization")]
    InterventionUnsupported,
    #[error("value {value} out of range for '{name}' (cardinality {card})")]
    ValueOutOfRange { name: String, value: usize, card: usize },
    #[error("missing value for instrument '{0}'")]
    MissingInstrument(String),
    #[error("network is not in the linear class: {0}")]
    NotLinear(String),
}

/// Errors raised while compiling assumptions, data or targets into linear forms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("observed data: {0}")]
    Data(String),
    #[error("missing conditional table for arm {0} with positive probability")]
    MissingArm(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("factual target needs the instrument marginal P(A)")]
    UnknownMarginal,
}

/// Errors from the LP machinery (statuses like infeasible are not errors).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("constraint '{label}' references variable {index} but the program has {count}")]
    IndexOutOfRange { label: String, index: usize, count: usize },
    #[error("constraint '{0}' has a non-finite coefficient or right-hand side")]
    NonFinite(String),
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("lp format, line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Errors from closed-form bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("at least one instrument arm is required")]
    NoArms,
}

/// Errors from the brute-force oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("vertex enumeration limited to {cap} variables, program has {count}")]
    DimensionCap { cap: usize, count: usize },
    #[error("vertex enumeration would visit {0} candidate bases")]
    CombinationCap(u128),
}

/// Crate-level error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
