use serde::{Deserialize, Serialize};

use super::{arm_label, averaging_contexts, label, LinearConstraint, LinearExpression, Relation};
use crate::error::CompileError;
use crate::response::{Context, ParameterSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementKind {
    /// Bounded error proportion.
    A0,
    /// Unidirectional errors: the proxy never falls below the truth.
    A1,
    /// Symmetric error probabilities at equal distance.
    A2,
    /// Error probabilities decrease with distance.
    A3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalKind {
    /// Monotone effect of treatment on truth.
    A4,
    /// Monotone effect of truth on proxy.
    A5,
}

/// Where measurement constraints bind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    /// On the factual joint `P(truth, proxy)`, averaged over instrument arms.
    #[default]
    Observed,
    /// Once per instrument arm on the counterfactual joint.
    PerArm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAssumption {
    pub id: String,
    pub kind: MeasurementKind,
    pub truth: String,
    pub proxy: String,
    pub level: Level,
    /// A0 error budget.
    pub epsilon: f64,
    /// A2 asymmetry budget.
    pub lambda: f64,
    /// A0 counts errors with distance strictly above this.
    pub threshold: f64,
    /// Softening for A1 and A3.
    pub slack: f64,
    /// `distance[x][y]`; defaults to `|x - y|`.
    pub distance: Option<Vec<Vec<f64>>>,
}

impl MeasurementAssumption {
    pub fn new(kind: MeasurementKind, truth: &str, proxy: &str) -> Self {
        Self {
            id: format!("{kind:?}"),
            kind,
            truth: truth.into(),
            proxy: proxy.into(),
            level: Level::Observed,
            epsilon: 0.0,
            lambda: 0.0,
            threshold: 0.0,
            slack: 0.0,
            distance: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_level(mut self, level: Level) -> Self {
        self.level = level;
        self
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = id.into();
        self
    }
}

/// `P(outcome(do treatment=t') < outcome(do treatment=t)) <= slack` for every `t < t'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalAssumption {
    pub id: String,
    pub kind: CausalKind,
    pub treatment: String,
    pub outcome: String,
    pub slack: f64,
}

impl CausalAssumption {
    pub fn new(kind: CausalKind, treatment: &str, outcome: &str) -> Self {
        Self { id: format!("{kind:?}"), kind, treatment: treatment.into(), outcome: outcome.into(), slack: 0.0 }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = id.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Assumption {
    Measurement(MeasurementAssumption),
    Causal(CausalAssumption),
}

impl Assumption {
    pub fn id(&self) -> &str {
        match self {
            Assumption::Measurement(m) => &m.id,
            Assumption::Causal(c) => &c.id,
        }
    }

    /// Sets a numeric parameter by name (`epsilon`, `lambda`, `threshold`, `slack`).
    pub fn set_parameter(&mut self, name: &str, value: f64) -> Result<(), CompileError> {
        let slot = match (self, name) {
            (Assumption::Measurement(m), "epsilon") => &mut m.epsilon,
            (Assumption::Measurement(m), "lambda") => &mut m.lambda,
            (Assumption::Measurement(m), "threshold") => &mut m.threshold,
            (Assumption::Measurement(m), "slack") => &mut m.slack,
            (Assumption::Causal(c), "slack") => &mut c.slack,
            (a, _) => return Err(CompileError::Parameter(format!("assumption '{}' has no parameter '{name}'", a.id()))),
        };
        *slot = value;
        Ok(())
    }
}

impl From<MeasurementAssumption> for Assumption {
    fn from(m: MeasurementAssumption) -> Self {
        Assumption::Measurement(m)
    }
}

impl From<CausalAssumption> for Assumption {
    fn from(c: CausalAssumption) -> Self {
        Assumption::Causal(c)
    }
}

fn non_negative(id: &str, name: &str, v: f64) -> Result<(), CompileError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CompileError::Parameter(format!("{id}: {name} must be a finite value >= 0, got {v}")))
    }
}

/// `(truth, proxy)` cell masses for one level and arm.
struct MassTable {
    cards: (usize, usize),
    cells: Vec<LinearExpression>,
}

impl MassTable {
    fn build(space: &ParameterSpace, weighted: &[(f64, Context)], truth: usize, proxy: usize) -> Self {
        let cards = (space.cardinality(truth), space.cardinality(proxy));
        let mut cells = vec![LinearExpression::zero(); cards.0 * cards.1];
        for (w, ctx) in weighted {
            for (cell, atoms) in space.partition(ctx, &[truth, proxy]).into_iter().enumerate() {
                cells[cell] = cells[cell].add_scaled(&LinearExpression::indicator(atoms), *w);
            }
        }
        Self { cards, cells }
    }

    fn mass(&self, x: usize, y: usize) -> &LinearExpression {
        &self.cells[x * self.cards.1 + y]
    }
}

fn distance_fn(m: &MeasurementAssumption, cards: (usize, usize)) -> Result<impl Fn(usize, usize) -> f64 + '_, CompileError> {
    if let Some(d) = &m.distance {
        let ok = d.len() == cards.0 && d.iter().all(|row| row.len() == cards.1 && row.iter().all(|v| v.is_finite()));
        if !ok {
            return Err(CompileError::Parameter(format!("{}: distance matrix must be {}x{} and finite", m.id, cards.0, cards.1)));
        }
    }
    Ok(move |x: usize, y: usize| match &m.distance {
        Some(d) => d[x][y],
        None => (x as f64 - y as f64).abs(),
    })
}

fn emit_measurement(
    m: &MeasurementAssumption,
    table: &MassTable,
    arm: Option<&str>,
    out: &mut Vec<LinearConstraint>,
) -> Result<(), CompileError> {
    let (nx, ny) = table.cards;
    let d = distance_fn(m, table.cards)?;
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    match m.kind {
        MeasurementKind::A0 => {
            let mut e = LinearExpression::zero();
            for x in 0..nx {
                for y in 0..ny {
                    if d(x, y) > m.threshold && !same(d(x, y), m.threshold) {
                        e = e.plus(table.mass(x, y));
                    }
                }
            }
            out.push(LinearConstraint::new(e, Relation::Le, m.epsilon, label(&m.id, arm, None)));
        }
        MeasurementKind::A1 => {
            let mut e = LinearExpression::zero();
            for x in 0..nx {
                for y in 0..ny.min(x) {
                    e = e.plus(table.mass(x, y));
                }
            }
            let rel = if m.slack == 0.0 { Relation::Eq } else { Relation::Le };
            out.push(LinearConstraint::new(e, rel, m.slack, label(&m.id, arm, None)));
        }
        MeasurementKind::A2 => {
            for x in 0..nx {
                for y in 0..ny {
                    for y2 in y + 1..ny {
                        if !same(d(x, y), d(x, y2)) {
                            continue;
                        }
                        let e = table.mass(x, y).minus(table.mass(x, y2));
                        let detail = format!("x={x},y={y},y'={y2}");
                        out.push(LinearConstraint::new(
                            e.clone(),
                            Relation::Le,
                            m.lambda,
                            label(&m.id, arm, Some(&format!("{detail}:upper"))),
                        ));
                        out.push(LinearConstraint::new(e, Relation::Ge, -m.lambda, label(&m.id, arm, Some(&format!("{detail}:lower")))));
                    }
                }
            }
        }
        MeasurementKind::A3 => {
            for x in 0..nx {
                for y in 0..ny {
                    for y2 in 0..ny {
                        if d(x, y) < d(x, y2) && !same(d(x, y), d(x, y2)) {
                            let e = table.mass(x, y).minus(table.mass(x, y2));
                            let detail = format!("x={x},y={y},y'={y2}");
                            out.push(LinearConstraint::new(e, Relation::Ge, -m.slack, label(&m.id, arm, Some(&detail))));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Measurement-error assumption on the pair (truth, proxy).
///
/// At [`Level::Observed`] cell masses are `sum_a P(a) P(truth=x, proxy=y | a)`
/// and need the instrument marginal when instruments exist. At
/// [`Level::PerArm`] the constraints are emitted once per arm.
pub fn compile_measurement(
    space: &ParameterSpace,
    m: &MeasurementAssumption,
    marginal: Option<&[f64]>,
) -> Result<Vec<LinearConstraint>, CompileError> {
    non_negative(&m.id, "epsilon", m.epsilon)?;
    non_negative(&m.id, "lambda", m.lambda)?;
    non_negative(&m.id, "slack", m.slack)?;
    if !m.threshold.is_finite() {
        return Err(CompileError::Parameter(format!("{}: threshold must be finite", m.id)));
    }
    let truth = space.var_index(&m.truth)?;
    let proxy = space.var_index(&m.proxy)?;
    if truth == proxy {
        return Err(CompileError::Parameter(format!("{}: truth and proxy must differ", m.id)));
    }
    let mut out = Vec::new();
    match m.level {
        Level::Observed => {
            let weighted = averaging_contexts(space, marginal, &[])?;
            let table = MassTable::build(space, &weighted, truth, proxy);
            emit_measurement(m, &table, None, &mut out)?;
        }
        Level::PerArm => {
            for arm in 0..space.arm_count() {
                let ctx = space.arm_context(arm, &[])?;
                let table = MassTable::build(space, &[(1.0, ctx)], truth, proxy);
                emit_measurement(m, &table, Some(&arm_label(space, arm)), &mut out)?;
            }
        }
    }
    Ok(out)
}

/// Monotonicity of `outcome` in `treatment`, averaged over unclamped instruments.
pub fn compile_causal(
    space: &ParameterSpace,
    c: &CausalAssumption,
    marginal: Option<&[f64]>,
) -> Result<Vec<LinearConstraint>, CompileError> {
    non_negative(&c.id, "slack", c.slack)?;
    let treatment = space.var_index(&c.treatment)?;
    let outcome = space.var_index(&c.outcome)?;
    if treatment == outcome {
        return Err(CompileError::Parameter(format!("{}: treatment and outcome must differ", c.id)));
    }
    let card = space.cardinality(treatment);
    let n = space.variables().len();
    let (mut lo_buf, mut hi_buf) = (vec![0; n], vec![0; n]);
    let mut out = Vec::new();
    for t in 0..card {
        for t2 in t + 1..card {
            let low = averaging_contexts(space, marginal, &[(treatment, t)])?;
            let high = averaging_contexts(space, marginal, &[(treatment, t2)])?;
            let mut terms = Vec::new();
            for ((w, ctx_lo), (_, ctx_hi)) in low.iter().zip(&high) {
                for atom in 0..space.atom_count() {
                    space.evaluate(atom, ctx_lo, &mut lo_buf);
                    space.evaluate(atom, ctx_hi, &mut hi_buf);
                    if hi_buf[outcome] < lo_buf[outcome] {
                        terms.push((atom, *w));
                    }
                }
            }
            let rel = if c.slack == 0.0 { Relation::Eq } else { Relation::Le };
            let detail = format!("{}:{t}<{t2}", c.treatment);
            out.push(LinearConstraint::new(LinearExpression::from_terms(terms), rel, c.slack, label(&c.id, None, Some(&detail))));
        }
    }
    Ok(out)
}

pub fn compile_assumption(
    space: &ParameterSpace,
    assumption: &Assumption,
    marginal: Option<&[f64]>,
) -> Result<Vec<LinearConstraint>, CompileError> {
    match assumption {
        Assumption::Measurement(m) => compile_measurement(space, m, marginal),
        Assumption::Causal(c) => compile_causal(space, c, marginal),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::tests::iv_space;
    use crate::model::NetworkSpec;
    use crate::response::{JointSpace, DEFAULT_ATOM_CAP};

    fn joint(nx: usize, ny: usize) -> ParameterSpace {
        let net = NetworkSpec::new().latent("X", nx).observed("Y", ny).validate().unwrap();
        ParameterSpace::Joint(JointSpace::new(&net, DEFAULT_ATOM_CAP).unwrap())
    }

    fn cells(e: &LinearExpression, ny: usize) -> Vec<(usize, usize)> {
        e.terms().iter().map(|&(i, _)| (i / ny, i % ny)).collect()
    }

    #[test]
    fn a0_sums_far_cells() {
        let s = joint(6, 6);
        let m = MeasurementAssumption::new(MeasurementKind::A0, "X", "Y").with_threshold(2.0).with_epsilon(0.01);
        let c = compile_measurement(&s, &m, None).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].rhs, 0.01);
        assert_eq!(c[0].relation, Relation::Le);
        let sel = cells(&c[0].expression, 6);
        assert_eq!(sel.len(), 12);
        assert!(sel.iter().all(|&(x, y)| x.abs_diff(y) > 2));
    }

    #[test]
    fn a1_binary_pins_one_cell() {
        let s = joint(2, 2);
        let c = compile_measurement(&s, &MeasurementAssumption::new(MeasurementKind::A1, "X", "Y"), None).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].relation, Relation::Eq);
        assert_eq!(cells(&c[0].expression, 2), [(1, 0)]);
    }

    #[test]
    fn a2_pairs_equal_distances() {
        let s = joint(4, 4);
        let c = compile_measurement(&s, &MeasurementAssumption::new(MeasurementKind::A2, "X", "Y"), None).unwrap();
        // x=1: (0,2); x=2: (1,3).
        assert_eq!(c.len(), 4);
        assert_eq!(c[2].label, "A2:x=2,y=1,y'=3:upper");
        assert_eq!(c[2].expression.terms(), &[(9, 1.0), (11, -1.0)]);
        assert_eq!((c[2].relation, c[3].relation), (Relation::Le, Relation::Ge));
    }

    #[test]
    fn a3_prefers_closer_values() {
        let s = joint(2, 2);
        let c = compile_measurement(&s, &MeasurementAssumption::new(MeasurementKind::A3, "X", "Y"), None).unwrap();
        assert_eq!(c.len(), 2);
        // mass(0,0) - mass(0,1) >= 0 and mass(1,1) - mass(1,0) >= 0.
        assert_eq!(c[0].expression.terms(), &[(0, 1.0), (1, -1.0)]);
        assert_eq!(c[1].expression.terms(), &[(2, -1.0), (3, 1.0)]);
        assert!(c.iter().all(|k| k.relation == Relation::Ge && k.rhs == 0.0));
    }

    #[test]
    fn parameter_validation() {
        let s = joint(2, 2);
        let m = MeasurementAssumption::new(MeasurementKind::A0, "X", "Y").with_epsilon(-0.1);
        assert!(matches!(compile_measurement(&s, &m, None), Err(CompileError::Parameter(_))));
        let m =
            MeasurementAssumption { distance: Some(vec![vec![0.0; 3]; 2]), ..MeasurementAssumption::new(MeasurementKind::A0, "X", "Y") };
        assert!(matches!(compile_measurement(&s, &m, None), Err(CompileError::Parameter(_))));
    }

    #[test]
    fn per_arm_level_repeats_per_arm() {
        let s = iv_space(2, 3, 3);
        let m = MeasurementAssumption::new(MeasurementKind::A0, "X", "Y").with_level(Level::PerArm);
        let c = compile_measurement(&s, &m, None).unwrap();
        assert_eq!(c.iter().map(|k| k.label.as_str()).collect::<Vec<_>>(), ["A0@A=0", "A0@A=1"]);
        let observed = compile_measurement(&s, &m.clone().with_level(Level::Observed), None);
        assert_eq!(observed.unwrap_err(), CompileError::UnknownMarginal);
        let avg = compile_measurement(&s, &m.with_level(Level::Observed), Some(&[0.25, 0.75])).unwrap();
        let x = vec![1.0 / s.atom_count() as f64; s.atom_count()];
        let expect = 0.25 * c[0].expression.evaluate(&x) + 0.75 * c[1].expression.evaluate(&x);
        assert!((avg[0].expression.evaluate(&x) - expect).abs() < 1e-12);
    }

    #[test]
    fn a4_binary_iv_selects_defiers() {
        let s = iv_space(2, 2, 2);
        let c = compile_causal(&s, &CausalAssumption::new(CausalKind::A4, "A", "X"), None).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].relation, Relation::Eq);
        let r = s.as_response().unwrap();
        let selected: Vec<usize> = c[0].expression.terms().iter().map(|t| t.0).collect();
        let expected: Vec<usize> = (0..16).filter(|&a| r.profile_value(a, 0, 1) < r.profile_value(a, 0, 0)).collect();
        assert_eq!(selected, expected);
        assert_eq!(selected.len(), 4);
    }

    #[test]
    fn a5_binary_iv_selects_decreasing_proxy() {
        let s = iv_space(2, 2, 2);
        let c = compile_causal(&s, &CausalAssumption::new(CausalKind::A5, "X", "Y").with_slack(0.1), Some(&[0.5, 0.5])).unwrap();
        assert_eq!(c[0].relation, Relation::Le);
        let r = s.as_response().unwrap();
        let selected: Vec<usize> = c[0].expression.terms().iter().map(|t| t.0).collect();
        let expected: Vec<usize> = (0..16).filter(|&a| r.profile_value(a, 1, 1) < r.profile_value(a, 1, 0)).collect();
        assert_eq!(selected, expected);
    }

    #[test]
    fn causal_needs_interventions() {
        let s = joint(2, 2);
        let err = compile_causal(&s, &CausalAssumption::new(CausalKind::A5, "X", "Y"), None).unwrap_err();
        assert!(matches!(err, CompileError::Space(_)));
    }

    #[test]
    fn set_parameter_by_name() {
        let mut a: Assumption = MeasurementAssumption::new(MeasurementKind::A0, "X", "Y").into();
        a.set_parameter("epsilon", 0.2).unwrap();
        assert!(matches!(&a, Assumption::Measurement(m) if m.epsilon == 0.2));
        assert!(a.set_parameter("gamma", 0.1).is_err());
    }
}
