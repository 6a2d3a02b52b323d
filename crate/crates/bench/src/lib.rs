//! Benchmark fixtures.

use pidbounds_core::constraints::{Assumption, CausalAssumption, CausalKind, MeasurementAssumption, MeasurementKind, ObservedData};
use pidbounds_core::model::NetworkSpec;
use pidbounds_core::targets::TargetSpec;
use pidbounds_core::{Model, Parameterization};

/// Six-level single proxy with A0, A2 and A3 on the joint of (X, Y).
pub fn single_proxy() -> Model {
    let net = NetworkSpec::new().latent("X", 6).observed("Y", 6);
    let m = |kind| MeasurementAssumption::new(kind, "X", "Y");
    let assumptions: [Assumption; 3] = [
        m(MeasurementKind::A0).with_epsilon(0.1).with_threshold(1.0).into(),
        m(MeasurementKind::A2).with_lambda(0.02).into(),
        m(MeasurementKind::A3).into(),
    ];
    Model::new(net, ObservedData::single(vec![0.05, 0.15, 0.3, 0.25, 0.15, 0.1]), TargetSpec::Moment { variable: "X".into(), order: 1 })
        .with_parameterization(Parameterization::Joint)
        .with_assumptions(assumptions)
}

pub fn iv_network(card: usize) -> NetworkSpec {
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

/// Binary IV with both monotonicity assumptions; 16 atoms.
pub fn binary_iv() -> Model {
    let data =
        ObservedData { instrument_marginal: Some(vec![0.5, 0.5]), arm_conditionals: vec![Some(vec![0.7, 0.3]), Some(vec![0.4, 0.6])] };
    let target = TargetSpec::Ate { variable: "X".into(), treatment: "A".into(), treated: 1, control: 0 };
    Model::new(iv_network(2), data, target)
        .with_assumptions([CausalAssumption::new(CausalKind::A4, "A", "X").into(), CausalAssumption::new(CausalKind::A5, "X", "Y").into()])
}

/// Six-level IV with a binary instrument and no assumptions; 1,679,616 atoms.
pub fn six_level_iv() -> Model {
    let net = NetworkSpec::new()
        .observed("A", 2)
        .latent("X", 6)
        .observed("Y", 6)
        .exogenous("Lambda")
        .edge("A", "X")
        .edge("X", "Y")
        .edge("Lambda", "X")
        .edge("Lambda", "Y");
    let data = ObservedData {
        instrument_marginal: Some(vec![0.5, 0.5]),
        arm_conditionals: vec![Some(vec![0.3, 0.3, 0.2, 0.1, 0.06, 0.04]), Some(vec![0.04, 0.06, 0.1, 0.2, 0.3, 0.3])],
    };
    Model::new(net, data, TargetSpec::Moment { variable: "X".into(), order: 1 })
}
