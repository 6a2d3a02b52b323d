//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p pidbounds-cli --test acceptance -- --nocapture`.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use pidbounds_cli::parse_spec;
use pidbounds_core::analytic::{prop3_bounds, prop3_corollary_bounds, ChainObservables, Corollary, IntervalUnion};
use pidbounds_core::constraints::{Assumption, CausalAssumption, CausalKind, MeasurementAssumption, MeasurementKind, ObservedData};
use pidbounds_core::linear::{LinearConstraint, LinearExpression, Relation};
use pidbounds_core::model::NetworkSpec;
use pidbounds_core::oracle::{oracle_bounds, parametric_chain_search, ChainModel};
use pidbounds_core::solver::{solve_bounds, BoundsStatus, Sense};
use pidbounds_core::targets::TargetSpec;
use pidbounds_core::{Bounds, CompiledProblem, Model, Parameterization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 1e-6;
const WITNESS_TOL: f64 = 1e-7;

fn specs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

/// Flat Dirichlet draw.
fn simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}

/// Witness feasibility and midpoint mixture for every optimal solve.
#[derive(Default)]
struct WitnessLog {
    checked: usize,
    failures: Vec<String>,
}

impl WitnessLog {
    fn check(&mut self, label: &str, compiled: &CompiledProblem, b: &Bounds) {
        if b.status != BoundsStatus::Optimal {
            return;
        }
        self.checked += 1;
        let lp = compiled.program(Sense::Minimize);
        let (rl, ru) = (lp.max_residual(&b.lower_witness), lp.max_residual(&b.upper_witness));
        let mid: Vec<f64> = b.lower_witness.iter().zip(&b.upper_witness).map(|(l, u)| 0.5 * (l + u)).collect();
        let gap = (compiled.objective.evaluate(&mid) - 0.5 * (b.lower + b.upper)).abs();
        let endpoints = (compiled.objective.evaluate(&b.lower_witness) - b.lower).abs()
            + (compiled.objective.evaluate(&b.upper_witness) - b.upper).abs();
        if rl >= WITNESS_TOL
            || ru >= WITNESS_TOL
            || lp.max_residual(&mid) >= WITNESS_TOL
            || gap >= WITNESS_TOL
            || endpoints >= 2.0 * WITNESS_TOL
        {
            self.failures.push(format!("{label}: residuals {rl:.1e}/{ru:.1e}, midpoint gap {gap:.1e}"));
        }
    }

    fn solve(&mut self, label: &str, model: &Model) -> Bounds {
        let compiled = model.compile().unwrap_or_else(|e| panic!("{label}: {e}"));
        let b = compiled.solve().unwrap_or_else(|e| panic!("{label}: {e}"));
        self.check(label, &compiled, &b);
        b
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let detail = match failures.first() {
            None => summary,
            Some(f) => format!("{summary}; {} failure(s), first: {f}", failures.len()),
        };
        Self { pass: failures.is_empty(), detail }
    }
}

fn iv(card: usize) -> NetworkSpec {
    NetworkSpec::new()
        .observed("A", card)
        .latent("X", card)
        .observed("Y", card)
        .exogenous("Lambda")
        .edge("A", "X")
        .edge("X", "Y")
        .edge("Lambda", "X")
        .edge("Lambda", "Y")
}

/// Response function number `f` of a `card`-valued variable with one
/// `card`-valued parent, evaluated at `parent`.
fn respond(f: usize, parent: usize, card: usize) -> usize {
    f / card.pow(parent as u32) % card
}

/// Observables of a random structural IV model: `P(A)` and a joint law of
/// the response functions of X (on A) and Y (on X).
fn iv_data<R: Rng>(rng: &mut R, card: usize) -> ObservedData {
    let functions = card.pow(card as u32);
    let q = simplex(rng, functions * functions);
    let tables = (0..card)
        .map(|a| {
            let mut t = vec![0.0; card];
            for fx in 0..functions {
                for fy in 0..functions {
                    t[respond(fy, respond(fx, a, card), card)] += q[fx * functions + fy];
                }
            }
            Some(t)
        })
        .collect();
    ObservedData { instrument_marginal: Some(simplex(rng, card)), arm_conditionals: tables }
}

fn pmf_x1() -> TargetSpec {
    TargetSpec::Pmf { variable: "X".into(), value: 1 }
}

fn ate_x() -> TargetSpec {
    TargetSpec::Ate { variable: "X".into(), treatment: "A".into(), treated: 1, control: 0 }
}

fn criterion_1(log: &mut WitnessLog) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut instances = 0;
    let mut infeasible = 0;
    for k in 0..60 {
        let model = match k % 3 {
            0 | 1 => {
                let card = 2 + k % 3;
                let net = NetworkSpec::new().latent("X", card).observed("Y", card);
                let mut assumptions: Vec<Assumption> = Vec::new();
                let m = |kind| MeasurementAssumption::new(kind, "X", "Y");
                if rng.random_bool(0.7) {
                    let threshold = rng.random_range(0..card) as f64;
                    assumptions.push(m(MeasurementKind::A0).with_epsilon(rng.random_range(0.0..0.4)).with_threshold(threshold).into());
                }
                if rng.random_bool(0.3) {
                    assumptions.push(m(MeasurementKind::A1).into());
                }
                if rng.random_bool(0.5) {
                    assumptions.push(m(MeasurementKind::A2).with_lambda(rng.random_range(0.0..0.1)).into());
                }
                if rng.random_bool(0.4) {
                    assumptions.push(m(MeasurementKind::A3).into());
                }
                let target = if rng.random_bool(0.5) {
                    TargetSpec::Moment { variable: "X".into(), order: 1 }
                } else {
                    TargetSpec::Pmf { variable: "X".into(), value: rng.random_range(0..card) }
                };
                Model::new(net, ObservedData::single(simplex(&mut rng, card)), target)
                    .with_parameterization(Parameterization::Joint)
                    .with_assumptions(assumptions)
            }
            _ => {
                let mut assumptions: Vec<Assumption> = Vec::new();
                if rng.random_bool(0.5) {
                    assumptions.push(CausalAssumption::new(CausalKind::A4, "A", "X").into());
                }
                if rng.random_bool(0.5) {
                    assumptions.push(CausalAssumption::new(CausalKind::A5, "X", "Y").into());
                }
                let target = if rng.random_bool(0.5) { ate_x() } else { pmf_x1() };
                Model::new(iv(2), iv_data(&mut rng, 2), target).with_assumptions(assumptions)
            }
        };
        let label = format!("instance {k}");
        let compiled = model.compile().unwrap();
        if compiled.atom_count() > 24 {
            failures.push(format!("{label}: {} atoms exceed the oracle cap", compiled.atom_count()));
            continue;
        }
        instances += 1;
        let simplex_bounds = compiled.solve().unwrap();
        log.check(&label, &compiled, &simplex_bounds);
        let oracle = oracle_bounds(&compiled.program(Sense::Minimize)).unwrap();
        if simplex_bounds.status != oracle.status {
            failures.push(format!("{label}: status {:?} vs oracle {:?}", simplex_bounds.status, oracle.status));
        } else if simplex_bounds.status == BoundsStatus::Optimal {
            let dl = (simplex_bounds.lower - oracle.lower).abs();
            let du = (simplex_bounds.upper - oracle.upper).abs();
            if dl > ORACLE_TOL || du > ORACLE_TOL {
                failures.push(format!("{label}: endpoint gaps {dl:.1e}, {du:.1e}"));
            }
        } else {
            infeasible += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(120) {
        failures.push(format!("runtime {elapsed:?} over 2 minutes"));
    }
    Outcome::new(&failures, format!("{instances} instances ({infeasible} infeasible for both), {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2(log: &mut WitnessLog) -> Outcome {
    let mut failures = Vec::new();
    let net = NetworkSpec::new().latent("X", 6).observed("Y", 6);
    let data = ObservedData::single(vec![0.05, 0.15, 0.3, 0.25, 0.15, 0.1]);
    let model = Model::new(net, data, TargetSpec::Moment { variable: "X".into(), order: 1 }).with_parameterization(Parameterization::Joint);
    let single = log.solve("six-level single proxy", &model);
    if (single.lower, single.upper) != (0.0, 5.0) {
        failures.push(format!("single proxy gave [{}, {}]", single.lower, single.upper));
    }
    let spec = parse_spec(&specs_dir().join("rct_ate.toml")).unwrap();
    let rct = log.solve("randomized trial, graph only", &Model { assumptions: vec![], ..spec.model });
    if (rct.lower, rct.upper) != (-5.0, 5.0) {
        failures.push(format!("randomized trial gave [{}, {}]", rct.lower, rct.upper));
    }
    Outcome::new(&failures, format!("E[X] in [{}, {}], ATE in [{}, {}]", single.lower, single.upper, rct.lower, rct.upper))
}

/// Every analytic endpoint lies within `reach` of an endpoint the grid
/// search attains, and the grid search stays inside the analytic set.
fn sharp(analytic: &IntervalUnion, grid: &IntervalUnion, reach: f64) -> Result<(), String> {
    if !grid.is_subset_of(analytic, 1e-9) {
        return Err(format!("grid set {:?} escapes {:?}", grid.intervals(), analytic.intervals()));
    }
    let ends: Vec<f64> = grid.intervals().iter().flat_map(|&(l, u)| [l, u]).collect();
    for &(l, u) in analytic.intervals() {
        for e in [l, u] {
            let d = ends.iter().map(|g| (g - e).abs()).fold(f64::INFINITY, f64::min);
            if d > reach {
                return Err(format!("endpoint {e} reached only within {d:.1e} ({:?} vs {:?})", analytic.intervals(), grid.intervals()));
            }
        }
    }
    Ok(())
}

/// The closed-form endpoints move by at most `1 / d` per unit change of the
/// error rates, with `d` the smallest of `1 - m` and `M` (or `1 - 2 p*` under
/// label independence). Inputs with `d >= 0.2` keep a grid step of 1e-3
/// within 5e-3 of every endpoint; smaller `d` needs a finer grid.
fn resolvable(obs: &ChainObservables, variant: Option<Corollary>) -> bool {
    let (m, big) = obs.extremes();
    let d = match variant {
        Some(Corollary::LabelIndependent) => 1.0 - 2.0 * m.min(1.0 - big),
        _ => (1.0 - m).min(big),
    };
    d >= 0.2
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rejected = 0;
    let variants = [None, Some(Corollary::A1), Some(Corollary::A3), Some(Corollary::LabelIndependent)];
    let bounds = |v: Option<Corollary>, obs: &ChainObservables| match v {
        None => prop3_bounds(obs).unwrap(),
        Some(c) => prop3_corollary_bounds(c, obs).unwrap(),
    };
    for (k, variant) in variants.into_iter().enumerate() {
        let name = variant.map_or("unrestricted".to_string(), |c| format!("{c:?}"));
        let mut rng = ChaCha8Rng::seed_from_u64(300 + k as u64);
        let mut misses = 0;
        for trial in 0..1000 {
            let m = ChainModel::sample(&mut rng, 2 + trial % 2, variant);
            if !bounds(variant, &m.observables()).contains(m.p_x1(), 1e-9) {
                misses += 1;
            }
        }
        if misses > 0 {
            failures.push(format!("{name}: {misses}/1000 trials outside the analytic set"));
        }
        for i in 0..20 {
            let obs = loop {
                let obs = ChainModel::sample(&mut rng, 2 + i % 2, variant).observables();
                if resolvable(&obs, variant) {
                    break obs;
                }
                rejected += 1;
            };
            let analytic = bounds(variant, &obs);
            let grid = parametric_chain_search(&obs, variant, 1e-3);
            if let Err(e) = sharp(&analytic, &grid, 5e-3) {
                failures.push(format!("{name} input {i}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("runtime {elapsed:?} over 1 minute"));
    }
    Outcome::new(
        &failures,
        format!(
            "4 x (1000 containment trials + 20 grid searches, {rejected} ill-conditioned draws skipped), {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// Binary IV as an LP over `psi[a, fx, fy]` with `P(a)` independent of the
/// response functions, built without the library's parameter space.
fn explicit_joint_iv(data: &ObservedData, ate: bool) -> Bounds {
    let p_a = data.instrument_marginal.as_ref().unwrap();
    let var = |a: usize, fx: usize, fy: usize| a * 16 + fx * 4 + fy;
    let mut rows = vec![LinearConstraint::new(LinearExpression::indicator(0..32), Relation::Eq, 1.0, "total")];
    for a in 0..2 {
        let arm = data.arm_conditionals[a].as_ref().unwrap();
        for y in 0..2 {
            let cells = (0..4).flat_map(|fx| (0..4).map(move |fy| (fx, fy))).filter(|&(fx, fy)| respond(fy, respond(fx, a, 2), 2) == y);
            let e = LinearExpression::indicator(cells.map(|(fx, fy)| var(a, fx, fy)));
            rows.push(LinearConstraint::new(e, Relation::Eq, p_a[a] * arm[y], format!("P(A={a},Y={y})")));
        }
        for fx in 0..4 {
            for fy in 0..4 {
                let terms = (0..2).map(|b| (var(b, fx, fy), if b == a { 1.0 - p_a[a] } else { -p_a[a] }));
                rows.push(LinearConstraint::new(LinearExpression::from_terms(terms), Relation::Eq, 0.0, format!("indep {a},{fx},{fy}")));
            }
        }
    }
    let mut objective = vec![0.0; 32];
    for a in 0..2 {
        for fx in 0..4 {
            for fy in 0..4 {
                objective[var(a, fx, fy)] =
                    if ate { respond(fx, 1, 2) as f64 - respond(fx, 0, 2) as f64 } else { respond(fx, a, 2) as f64 };
            }
        }
    }
    solve_bounds(&LinearExpression::from_dense(&objective), &rows, 32).unwrap()
}

fn criterion_4(log: &mut WitnessLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let data = iv_data(&mut rng, 2);
        for ate in [true, false] {
            let target = if ate { ate_x() } else { pmf_x1() };
            let label = format!("instance {k}, {}", if ate { "ATE" } else { "P(X=1)" });
            let reduced = log.solve(&label, &Model::new(iv(2), data.clone(), target));
            let joint = explicit_joint_iv(&data, ate);
            if reduced.status != BoundsStatus::Optimal || joint.status != BoundsStatus::Optimal {
                failures.push(format!("{label}: statuses {:?} / {:?}", reduced.status, joint.status));
                continue;
            }
            let gap = (reduced.lower - joint.lower).abs().max((reduced.upper - joint.upper).abs());
            worst = worst.max(gap);
            if gap > ORACLE_TOL {
                failures.push(format!("{label}: [{}, {}] vs joint [{}, {}]", reduced.lower, reduced.upper, joint.lower, joint.upper));
            }
        }
    }
    Outcome::new(&failures, format!("20 solves, largest endpoint gap {worst:.1e}"))
}

fn confounded_instrument(with_edge: bool, card: usize) -> NetworkSpec {
    let spec = NetworkSpec::new()
        .exogenous("U")
        .observed("A", card)
        .latent("X", card)
        .observed("Y", card)
        .exogenous("Lambda")
        .edge("U", "A")
        .edge("U", "X")
        .edge("Lambda", "X")
        .edge("Lambda", "Y")
        .edge("X", "Y");
    if with_edge {
        spec.edge("A", "X")
    } else {
        spec
    }
}

fn criterion_5(log: &mut WitnessLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut compared = 0;
    for card in [2, 3] {
        for k in 0..3 {
            let data = iv_data(&mut rng, card);
            for target in [pmf_x1(), TargetSpec::Moment { variable: "X".into(), order: 1 }] {
                let reference = log.solve("IV", &Model::new(iv(card), data.clone(), target.clone()));
                for with_edge in [true, false] {
                    let name = if with_edge { "confounded instrument with A -> X" } else { "confounded instrument without A -> X" };
                    let b = log.solve(name, &Model::new(confounded_instrument(with_edge, card), data.clone(), target.clone()));
                    compared += 1;
                    if b.status != reference.status
                        || (b.lower - reference.lower).abs() > ORACLE_TOL
                        || (b.upper - reference.upper).abs() > ORACLE_TOL
                    {
                        failures.push(format!(
                            "{name} card {card} draw {k}: [{}, {}] vs IV [{}, {}]",
                            b.lower, b.upper, reference.lower, reference.upper
                        ));
                    }
                }
            }
        }
    }
    Outcome::new(&failures, format!("{compared} comparisons against the IV graph"))
}

fn criterion_6(log: &mut WitnessLog) -> Outcome {
    let chain = NetworkSpec::new().observed("A", 2).latent("X", 2).observed("Y", 2).edge("A", "X").edge("X", "Y");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    for k in 0..20 {
        let m = ChainModel::sample(&mut rng, 2, None);
        let p1 = m.p1_given_a();
        let data = ObservedData {
            instrument_marginal: Some(m.p_a.clone()),
            arm_conditionals: p1.iter().map(|p| Some(vec![1.0 - p, *p])).collect(),
        };
        let b = log.solve(&format!("chain trial {k}"), &Model::new(chain.clone(), data, pmf_x1()).with_relax(true));
        let analytic = prop3_bounds(&m.observables()).unwrap();
        let (lo, hi) = analytic.hull().unwrap();
        if !b.contains(m.p_x1(), 1e-7) {
            failures.push(format!("trial {k}: truth {} outside [{}, {}]", m.p_x1(), b.lower, b.upper));
        }
        if b.lower > lo + 1e-7 || hi > b.upper + 1e-7 {
            failures.push(format!("trial {k}: analytic [{lo}, {hi}] not inside [{}, {}]", b.lower, b.upper));
        }
    }
    Outcome::new(&failures, "20 relaxed-chain trials".into())
}

fn criterion_7(log: &mut WitnessLog) -> Outcome {
    let net = NetworkSpec::new().latent("X", 6).observed("Y", 6);
    let data = ObservedData::single(vec![0.05, 0.15, 0.3, 0.25, 0.15, 0.1]);
    let mut solve = |label: &str, assumptions: Vec<Assumption>| {
        let model = Model::new(net.clone(), data.clone(), TargetSpec::Moment { variable: "X".into(), order: 1 })
            .with_parameterization(Parameterization::Joint)
            .with_assumptions(assumptions);
        log.solve(label, &model)
    };
    let m = |kind| MeasurementAssumption::new(kind, "X", "Y");
    let a0 = |epsilon: f64| -> Assumption { m(MeasurementKind::A0).with_epsilon(epsilon).with_threshold(1.0).into() };
    let a2: Assumption = m(MeasurementKind::A2).with_lambda(0.02).into();
    let a3: Assumption = m(MeasurementKind::A3).into();
    let chain = [
        solve("{}", vec![]),
        solve("{A0}", vec![a0(0.1)]),
        solve("{A0,A2}", vec![a0(0.1), a2.clone()]),
        solve("{A0,A2,A3}", vec![a0(0.1), a2, a3]),
    ];
    let inside = |inner: &Bounds, outer: &Bounds| {
        inner.status == BoundsStatus::Optimal && outer.lower <= inner.lower + 1e-9 && inner.upper <= outer.upper + 1e-9
    };
    let mut failures = Vec::new();
    for (k, pair) in chain.windows(2).enumerate() {
        if !inside(&pair[1], &pair[0]) {
            failures.push(format!("set {} not nested in set {k}", k + 1));
        }
    }
    let grid = [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5];
    let sweep: Vec<Bounds> = grid.iter().map(|&e| solve(&format!("epsilon {e}"), vec![a0(e)])).collect();
    for (k, pair) in sweep.windows(2).enumerate() {
        if !inside(&pair[0], &pair[1]) {
            failures.push(format!("epsilon {} not nested in epsilon {}", grid[k], grid[k + 1]));
        }
    }
    let widths: Vec<String> = chain.iter().map(|b| format!("{:.3}", b.upper - b.lower)).collect();
    Outcome::new(&failures, format!("widths {}; {} epsilon values", widths.join(" > "), grid.len()))
}

fn rct(card: usize) -> NetworkSpec {
    NetworkSpec::new()
        .observed("A", 2)
        .latent("X", card)
        .observed("Y", card)
        .exogenous("U")
        .edge("A", "X")
        .edge("X", "Y")
        .edge("U", "X")
        .edge("U", "Y")
}

fn criterion_8(log: &mut WitnessLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let (mut feasible, mut total) = (0, 0);
    let a4: Assumption = CausalAssumption::new(CausalKind::A4, "A", "X").into();
    let a5: Assumption = CausalAssumption::new(CausalKind::A5, "X", "Y").into();
    for k in 0..24 {
        let card = if k < 4 { 6 } else { 2 + k % 3 };
        let mut assumptions = vec![a4.clone()];
        if k % 2 == 1 {
            assumptions.push(a5.clone());
        }
        let data = ObservedData {
            instrument_marginal: Some(vec![0.5, 0.5]),
            arm_conditionals: (0..2).map(|_| Some(simplex(&mut rng, card))).collect(),
        };
        let label = format!("trial instance {k} (card {card})");
        let b = log.solve(&label, &Model::new(rct(card), data, ate_x()).with_assumptions(assumptions));
        total += 1;
        if b.status == BoundsStatus::Optimal {
            feasible += 1;
            if b.lower < -1e-9 {
                failures.push(format!("{label}: lower {}", b.lower));
            }
        }
    }
    let spec = parse_spec(&specs_dir().join("partial_compliance.toml")).unwrap();
    let compliance = log.solve("partial compliance, A4+A5", &spec.model);
    if !(compliance.status == BoundsStatus::Optimal && compliance.lower > 1e-6) {
        failures.push(format!("partial compliance: {:?} [{}, {}]", compliance.status, compliance.lower, compliance.upper));
    }
    Outcome::new(
        &failures,
        format!(
            "{feasible}/{total} random instances feasible; partial compliance ATE in [{:.4}, {:.4}]",
            compliance.lower, compliance.upper
        ),
    )
}

fn criterion_9() -> Outcome {
    let spec = parse_spec(&specs_dir().join("iv_six_level.toml")).unwrap();
    let b = Model { assumptions: vec![], ..spec.model }.solve().unwrap();
    let strict = b.status == BoundsStatus::Optimal && b.lower > 1e-6 && b.upper < 5.0 - 1e-6;
    let failures = if strict { vec![] } else { vec![format!("{:?} [{}, {}]", b.status, b.lower, b.upper)] };
    Outcome::new(&failures, format!("graph-only E[X] in [{:.4}, {:.4}]", b.lower, b.upper))
}

#[test]
fn acceptance() {
    let mut log = WitnessLog::default();
    let outcomes = vec![
        (1, "oracle equivalence", criterion_1(&mut log)),
        (2, "trivial bounds", criterion_2(&mut log)),
        (3, "closed-form chain bounds", criterion_3()),
        (4, "parameterization equivalence", criterion_4(&mut log)),
        (5, "reduction invariance", criterion_5(&mut log)),
        (6, "relaxation validity", criterion_6(&mut log)),
        (7, "monotonicity", criterion_7(&mut log)),
        (8, "causal sign", criterion_8(&mut log)),
        (9, "non-trivial graph-only bounds", criterion_9()),
    ];
    let witness = Outcome::new(&log.failures, format!("{} optimal solves checked", log.checked));
    let mut all = true;
    for (n, name, o) in outcomes.iter().map(|(n, name, o)| (*n, *name, o)).chain([(10, "witness mixtures", &witness)]) {
        println!("criterion {n:>2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    assert!(all, "acceptance criteria failed");
}
