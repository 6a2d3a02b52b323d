//! Objectives: linear functionals of the atom distribution.
//!
//! Factual targets average over the instrument marginal. Interventional
//! targets clamp the treatment and average over the remaining instruments.

use serde::{Deserialize, Serialize};

use crate::constraints::averaging_contexts;
use crate::error::CompileError;
use crate::linear::LinearExpression;
use crate::response::ParameterSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    /// `P(variable = value)`.
    Pmf { variable: String, value: usize },
    /// `E[variable^order]` on the integer scale `0..card`.
    Moment { variable: String, order: u32 },
    /// `P(variable(do treatment = level) = value)`.
    InterventionalPmf { variable: String, treatment: String, level: usize, value: usize },
    /// `E[variable(treated) - variable(control)]`.
    Ate { variable: String, treatment: String, treated: usize, control: usize },
    /// `P(variable(treated) != variable(control))`.
    ProbNonzeroEffect { variable: String, treatment: String, treated: usize, control: usize },
}

impl TargetSpec {
    pub fn variable(&self) -> &str {
        match self {
            TargetSpec::Pmf { variable, .. }
            | TargetSpec::Moment { variable, .. }
            | TargetSpec::InterventionalPmf { variable, .. }
            | TargetSpec::Ate { variable, .. }
            | TargetSpec::ProbNonzeroEffect { variable, .. } => variable,
        }
    }

    /// The intervened variable, if any.
    pub fn treatment(&self) -> Option<&str> {
        match self {
            TargetSpec::Pmf { .. } | TargetSpec::Moment { .. } => None,
            TargetSpec::InterventionalPmf { treatment, .. }
            | TargetSpec::Ate { treatment, .. }
            | TargetSpec::ProbNonzeroEffect { treatment, .. } => Some(treatment),
        }
    }
}

fn check(space: &ParameterSpace, var: usize, value: usize) -> Result<(), CompileError> {
    let card = space.cardinality(var);
    if value >= card {
        return Err(CompileError::Parameter(format!("value {value} out of range for '{}' (cardinality {card})", space.name(var))));
    }
    Ok(())
}

/// Sums `w * f(values)` over averaging contexts and atoms.
fn accumulate(
    space: &ParameterSpace,
    marginal: Option<&[f64]>,
    intervention: &[(usize, usize)],
    f: impl Fn(&[usize]) -> f64,
) -> Result<LinearExpression, CompileError> {
    let mut terms = Vec::new();
    for (w, ctx) in averaging_contexts(space, marginal, intervention)? {
        space.for_each_atom(&ctx, |atom, values| {
            let v = f(values);
            if v != 0.0 {
                terms.push((atom, w * v));
            }
        });
    }
    Ok(LinearExpression::from_terms(terms))
}

/// Contrast `f(values under do t1, values under do t0)` averaged over the free instruments.
fn contrast(
    space: &ParameterSpace,
    marginal: Option<&[f64]>,
    treatment: usize,
    (t1, t0): (usize, usize),
    f: impl Fn(&[usize], &[usize]) -> f64,
) -> Result<LinearExpression, CompileError> {
    let high = averaging_contexts(space, marginal, &[(treatment, t1)])?;
    let low = averaging_contexts(space, marginal, &[(treatment, t0)])?;
    let n = space.variables().len();
    let (mut a, mut b) = (vec![0; n], vec![0; n]);
    let mut terms = Vec::new();
    for ((w, ctx_hi), (_, ctx_lo)) in high.iter().zip(&low) {
        for atom in 0..space.atom_count() {
            space.evaluate(atom, ctx_hi, &mut a);
            space.evaluate(atom, ctx_lo, &mut b);
            let v = f(&a, &b);
            if v != 0.0 {
                terms.push((atom, w * v));
            }
        }
    }
    Ok(LinearExpression::from_terms(terms))
}

/// Linear objective for `target`. `marginal` is `P(A)` over arms.
pub fn build_target(space: &ParameterSpace, marginal: Option<&[f64]>, target: &TargetSpec) -> Result<LinearExpression, CompileError> {
    let var = space.var_index(target.variable())?;
    match target {
        TargetSpec::Pmf { value, .. } => {
            check(space, var, *value)?;
            accumulate(space, marginal, &[], |v| f64::from(u8::from(v[var] == *value)))
        }
        TargetSpec::Moment { order, .. } => {
            let order = i32::try_from(*order).map_err(|_| CompileError::Parameter("moment order too large".into()))?;
            accumulate(space, marginal, &[], |v| (v[var] as f64).powi(order))
        }
        TargetSpec::InterventionalPmf { treatment, level, value, .. } => {
            let t = space.var_index(treatment)?;
            check(space, t, *level)?;
            check(space, var, *value)?;
            accumulate(space, marginal, &[(t, *level)], |v| f64::from(u8::from(v[var] == *value)))
        }
        TargetSpec::Ate { treatment, treated, control, .. } => {
            let t = space.var_index(treatment)?;
            check(space, t, *treated)?;
            check(space, t, *control)?;
            contrast(space, marginal, t, (*treated, *control), |a, b| a[var] as f64 - b[var] as f64)
        }
        TargetSpec::ProbNonzeroEffect { treatment, treated, control, .. } => {
            let t = space.var_index(treatment)?;
            check(space, t, *treated)?;
            check(space, t, *control)?;
            contrast(space, marginal, t, (*treated, *control), |a, b| f64::from(u8::from(a[var] != b[var])))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_fine_conditions;
    use crate::model::fixtures::iv;
    use crate::response::{enumerate_response_space, DEFAULT_ATOM_CAP};
    use proptest::prelude::*;

    fn iv_space(a: usize, x: usize, y: usize) -> ParameterSpace {
        let net = iv(a, x, y).validate().unwrap();
        let w = check_fine_conditions(&net).into_witness().unwrap();
        ParameterSpace::Response(enumerate_response_space(&net, &w, DEFAULT_ATOM_CAP).unwrap())
    }

    fn ate(treated: usize, control: usize) -> TargetSpec {
        TargetSpec::Ate { variable: "X".into(), treatment: "A".into(), treated, control }
    }

    #[test]
    fn binary_ate_coefficients() {
        let s = iv_space(2, 2, 2);
        let e = build_target(&s, None, &ate(1, 0)).unwrap();
        let r = s.as_response().unwrap();
        for atom in 0..16 {
            let (x0, x1) = (r.profile_value(atom, 0, 0), r.profile_value(atom, 0, 1));
            assert_eq!(e.coefficient(atom), x1 as f64 - x0 as f64);
        }
        assert_eq!(e.len(), 8);
    }

    #[test]
    fn point_mass_mean() {
        let s = iv_space(2, 6, 2);
        let r = s.as_response().unwrap();
        let atom = r.encode_profiles(&[vec![3, 3], vec![0; 6]]);
        let mut psi = vec![0.0; s.atom_count()];
        psi[atom] = 1.0;
        for m in [[0.5, 0.5], [0.1, 0.9]] {
            let e = build_target(&s, Some(&m), &TargetSpec::Moment { variable: "X".into(), order: 1 }).unwrap();
            assert!((e.evaluate(&psi) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_prob_nonzero_effect_selects_half() {
        let s = iv_space(2, 2, 2);
        let target = TargetSpec::ProbNonzeroEffect { variable: "X".into(), treatment: "A".into(), treated: 1, control: 0 };
        let e = build_target(&s, None, &target).unwrap();
        // Frozen by enumeration: atoms with x(0) != x(1).
        assert_eq!(e.len(), 8);
        assert!(e.terms().iter().all(|t| t.1 == 1.0));
    }

    #[test]
    fn zeroth_moment_is_all_ones() {
        let s = iv_space(2, 3, 2);
        let e = build_target(&s, Some(&[0.3, 0.7]), &TargetSpec::Moment { variable: "X".into(), order: 0 }).unwrap();
        assert_eq!(e.len(), s.atom_count());
        assert!(e.terms().iter().all(|t| (t.1 - 1.0).abs() < 1e-15));
    }

    #[test]
    fn interventional_pmf_is_profile_marginal() {
        let s = iv_space(2, 3, 2);
        let r = s.as_response().unwrap();
        for a in 0..2 {
            for x in 0..3 {
                let t = TargetSpec::InterventionalPmf { variable: "X".into(), treatment: "A".into(), level: a, value: x };
                let e = build_target(&s, None, &t).unwrap();
                let direct: Vec<usize> = (0..s.atom_count()).filter(|&i| r.profile_value(i, 0, a) == x).collect();
                assert_eq!(e, LinearExpression::indicator(direct));
            }
        }
    }

    #[test]
    fn target_errors() {
        let s = iv_space(2, 2, 2);
        let factual = TargetSpec::Pmf { variable: "X".into(), value: 1 };
        assert_eq!(build_target(&s, None, &factual).unwrap_err(), CompileError::UnknownMarginal);
        let exo = TargetSpec::Ate { variable: "X".into(), treatment: "Lambda".into(), treated: 1, control: 0 };
        assert!(matches!(build_target(&s, None, &exo), Err(CompileError::Space(_))));
        assert!(matches!(build_target(&s, None, &ate(2, 0)), Err(CompileError::Parameter(_))));
    }

    proptest! {
        #[test]
        fn ate_is_antisymmetric_and_matches_pmf_difference(t in 0usize..3, t2 in 0usize..3) {
            let s = iv_space(3, 3, 2);
            let forward = build_target(&s, None, &ate(t, t2)).unwrap();
            let backward = build_target(&s, None, &ate(t2, t)).unwrap();
            prop_assert_eq!(&forward, &backward.negated());
            let mut diff = LinearExpression::zero();
            for x in 0..3 {
                let at = |level| TargetSpec::InterventionalPmf { variable: "X".into(), treatment: "A".into(), level, value: x };
                diff = diff
                    .add_scaled(&build_target(&s, None, &at(t)).unwrap(), x as f64)
                    .add_scaled(&build_target(&s, None, &at(t2)).unwrap(), -(x as f64));
            }
            prop_assert_eq!(forward, diff);
        }
    }
}
