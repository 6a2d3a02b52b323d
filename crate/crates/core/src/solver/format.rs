//! Plain-text LP dump.
//!
//! ```text
//! # pidbounds-lp v1
//! variables 4
//! sense minimize
//! objective<TAB>0:1 3:-2<TAB>0
//! probability<TAB>0:1 1:1 2:1 3:1<TAB>=<TAB>1
//! ```
//!
//! After the three header lines come the objective (terms, constant) and one
//! line per constraint: label, `index:value` terms separated by spaces (`-`
//! when empty), relation (`=`, `<=`, `>=`) and right-hand side, separated by
//! tabs. Numbers use Rust's shortest round-trip formatting, so a dump parses
//! back to the identical program.

use std::fmt::Write as _;

use super::lp::{LinearProgram, Sense};
use crate::error::SolverError;
use crate::linear::{LinearConstraint, LinearExpression, Relation};

pub const HEADER: &str = "# pidbounds-lp v1";

fn terms(e: &LinearExpression) -> String {
    if e.is_empty() {
        return "-".into();
    }
    e.terms().iter().map(|(i, v)| format!("{i}:{v}")).collect::<Vec<_>>().join(" ")
}

pub fn write_lp(lp: &LinearProgram) -> Result<String, SolverError> {
    let mut out = String::new();
    let sense = match lp.sense {
        Sense::Minimize => "minimize",
        Sense::Maximize => "maximize",
    };
    let _ = writeln!(out, "{HEADER}\nvariables {}\nsense {sense}", lp.variable_count);
    let _ = writeln!(out, "objective\t{}\t{}", terms(&lp.objective), lp.objective.constant);
    for (k, c) in lp.constraints.iter().enumerate() {
        if c.label.contains(['\t', '\n']) {
            return Err(SolverError::Format { line: k + 5, message: format!("label {:?} contains a tab or newline", c.label) });
        }
        let mut e = c.expression.clone();
        let rhs = c.rhs - e.constant;
        e.constant = 0.0;
        let _ = writeln!(out, "{}\t{}\t{}\t{}", c.label, terms(&e), c.relation, rhs);
    }
    Ok(out)
}

fn parse_terms(s: &str, line: usize) -> Result<LinearExpression, SolverError> {
    if s == "-" {
        return Ok(LinearExpression::zero());
    }
    let err = |m: String| SolverError::Format { line, message: m };
    let mut pairs = Vec::new();
    for tok in s.split_whitespace() {
        let (i, v) = tok.split_once(':').ok_or_else(|| err(format!("bad term '{tok}'")))?;
        let i = i.parse::<usize>().map_err(|e| err(format!("bad index '{i}': {e}")))?;
        let v = v.parse::<f64>().map_err(|e| err(format!("bad value '{v}': {e}")))?;
        pairs.push((i, v));
    }
    Ok(LinearExpression::from_terms(pairs))
}

fn parse_f64(s: &str, line: usize) -> Result<f64, SolverError> {
    s.trim().parse().map_err(|e| SolverError::Format { line, message: format!("bad number '{s}': {e}") })
}

pub fn parse_lp(text: &str) -> Result<LinearProgram, SolverError> {
    let lines: Vec<&str> = text.lines().collect();
    let err = |line: usize, m: &str| SolverError::Format { line, message: m.into() };
    if lines.first().map(|l| l.trim()) != Some(HEADER) {
        return Err(err(1, "missing header"));
    }
    let variable_count = lines
        .get(1)
        .and_then(|l| l.strip_prefix("variables "))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(2, "expected 'variables N'"))?;
    let sense = match lines.get(2).map(|l| l.trim()) {
        Some("sense minimize") => Sense::Minimize,
        Some("sense maximize") => Sense::Maximize,
        _ => return Err(err(3, "expected 'sense minimize|maximize'")),
    };
    let obj: Vec<&str> = lines.get(3).ok_or_else(|| err(4, "missing objective"))?.split('\t').collect();
    let [tag, t, constant] = obj[..] else { return Err(err(4, "objective needs 3 fields")) };
    if tag != "objective" {
        return Err(err(4, "expected objective line"));
    }
    let objective = parse_terms(t, 4)?.with_constant(parse_f64(constant, 4)?);
    let mut constraints = Vec::new();
    for (k, l) in lines.iter().enumerate().skip(4) {
        let line = k + 1;
        if l.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split('\t').collect();
        let [label, t, rel, rhs] = f[..] else { return Err(err(line, "constraint needs 4 fields")) };
        let relation = Relation::parse(rel).ok_or_else(|| err(line, "bad relation"))?;
        if label.is_empty() {
            return Err(err(line, "empty label"));
        }
        constraints.push(LinearConstraint::new(parse_terms(t, line)?, relation, parse_f64(rhs, line)?, label));
    }
    let lp = LinearProgram::new(objective, constraints, variable_count, sense);
    lp.validate()?;
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_example_parses() {
        let text = "# pidbounds-lp v1\nvariables 4\nsense minimize\nobjective\t0:1 3:-2\t0\nprobability\t0:1 1:1 2:1 3:1\t=\t1\n";
        let lp = parse_lp(text).unwrap();
        assert_eq!(lp.constraints.len(), 1);
        assert_eq!(lp.objective.coefficient(3), -2.0);
        assert_eq!(write_lp(&lp).unwrap(), text);
    }

    #[test]
    fn malformed_lines_are_located() {
        let text = "# pidbounds-lp v1\nvariables 2\nsense minimize\nobjective\t-\t0\nrow\t0:x\t=\t1\n";
        assert!(matches!(parse_lp(text), Err(SolverError::Format { line: 5, .. })));
        let text = "# pidbounds-lp v1\nvariables 1\nsense minimize\nobjective\t-\t0\nrow\t3:1\t=\t1\n";
        assert!(matches!(parse_lp(text), Err(SolverError::IndexOutOfRange { .. })));
    }

    proptest! {
        #[test]
        fn round_trip(
            rows in proptest::collection::vec((proptest::collection::vec(-1e3f64..1e3, 5), 0u8..3, -10.0f64..10.0), 0..6),
            obj in proptest::collection::vec(-1e3f64..1e3, 5),
        ) {
            let constraints = rows
                .iter()
                .enumerate()
                .map(|(k, (c, r, b))| {
                    let rel = [Relation::Eq, Relation::Le, Relation::Ge][*r as usize];
                    LinearConstraint::new(LinearExpression::from_dense(c), rel, *b, format!("row {k}"))
                })
                .collect();
            let lp = LinearProgram::new(LinearExpression::from_dense(&obj).with_constant(0.5), constraints, 5, Sense::Maximize);
            let back = parse_lp(&write_lp(&lp).unwrap()).unwrap();
            prop_assert_eq!(back, lp);
        }
    }
}
