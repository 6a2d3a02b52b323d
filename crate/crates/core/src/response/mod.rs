//! Parameter spaces: the atoms an LP distributes probability mass over.
//!
//! [`ResponseSpace`] enumerates joint response profiles of every child of the
//! confounder. An atom fixes, for each child, the value it takes under every
//! joint setting of its endogenous parents. Instruments are not part of the
//! atom: they are independent of the profiles, so one shared distribution over
//! atoms serves every instrument arm.
//!
//! Atoms are indexed densely in mixed radix, ordered lexicographically by
//! (child in witness order, parent setting, value). Parent settings enumerate
//! the child's parents in declaration order, first parent most significant.
//!
//! [`JointSpace`] is the graph-free parameterization: an atom is a joint value
//! of all endogenous variables, i.e. a cell of their joint distribution.

mod codec;

use std::collections::BTreeMap;

use serde::Serialize;

pub use codec::MixedRadix;

use crate::error::SpaceError;
use crate::linear::LinearExpression;
use crate::model::{FineWitness, Network, Role};

/// Default upper limit on the number of atoms.
pub const DEFAULT_ATOM_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    /// Root with a single child; its value comes from the arm.
    Instrument,
    /// Child of the confounder; its value comes from the atom's profile.
    Child,
    /// Coordinate of a joint-space atom.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceVariable {
    pub name: String,
    pub cardinality: usize,
    pub role: Role,
    pub kind: VarKind,
}

#[derive(Debug, Clone)]
struct ChildSlot {
    var: usize,
    parents: Vec<usize>,
    settings: MixedRadix,
    offset: usize,
}

/// Response-function parameterization of a linear-class network.
#[derive(Debug, Clone)]
pub struct ResponseSpace {
    witness: FineWitness,
    variables: Vec<SpaceVariable>,
    exogenous: Vec<String>,
    instruments: Vec<usize>,
    children: Vec<ChildSlot>,
    outcomes: Vec<usize>,
    arms: MixedRadix,
    codec: MixedRadix,
}

/// Joint-distribution parameterization over all endogenous variables.
#[derive(Debug, Clone)]
pub struct JointSpace {
    variables: Vec<SpaceVariable>,
    exogenous: Vec<String>,
    outcomes: Vec<usize>,
    codec: MixedRadix,
}

#[derive(Debug, Clone)]
pub enum ParameterSpace {
    Response(ResponseSpace),
    Joint(JointSpace),
}

/// Fixed values (arm instruments and interventions) under which atoms are evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    fixed: Vec<Option<usize>>,
    clamped: Vec<bool>,
}

impl Context {
    pub fn is_clamped(&self, var: usize) -> bool {
        self.clamped[var]
    }
}

fn endogenous_variables(net: &Network, kind_of: impl Fn(usize) -> VarKind) -> (Vec<SpaceVariable>, Vec<usize>, Vec<String>) {
    let mut vars = Vec::new();
    let mut net_to_space = vec![usize::MAX; net.len()];
    let mut exogenous = Vec::new();
    for (i, v) in net.variables().iter().enumerate() {
        match v.cardinality {
            Some(card) if v.role.is_endogenous() => {
                net_to_space[i] = vars.len();
                vars.push(SpaceVariable { name: v.name.clone(), cardinality: card, role: v.role, kind: kind_of(i) });
            }
            _ => exogenous.push(v.name.clone()),
        }
    }
    (vars, net_to_space, exogenous)
}

fn too_large(radices: &[usize], cap: usize) -> SpaceError {
    let atoms = radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    SpaceError::TooLarge { atoms, cap }
}

/// Enumerates the response profiles of the witness's children.
pub fn enumerate_response_space(net: &Network, witness: &FineWitness, cap: usize) -> Result<ResponseSpace, SpaceError> {
    if witness.is_degenerate() {
        return Err(SpaceError::NotLinear("degenerate witness; use the joint parameterization".into()));
    }
    let lookup = |name: &str| net.index_of(name).ok_or_else(|| SpaceError::UnknownVariable(name.into()));
    let child_ids = witness.children.iter().map(|n| lookup(n)).collect::<Result<Vec<_>, _>>()?;
    let instrument_ids = witness.instruments.iter().map(|n| lookup(n)).collect::<Result<Vec<_>, _>>()?;

    let (variables, to_space, exogenous) =
        endogenous_variables(net, |i| if instrument_ids.contains(&i) { VarKind::Instrument } else { VarKind::Child });

    let mut children = Vec::with_capacity(child_ids.len());
    let mut digit_radices = Vec::new();
    for &c in &child_ids {
        let parents: Vec<usize> = net.parents(c).iter().filter(|&&p| net.role(p).is_endogenous()).map(|&p| to_space[p]).collect();
        let parent_cards: Vec<usize> = parents.iter().map(|&p| variables[p].cardinality).collect();
        let settings = MixedRadix::new(parent_cards.clone(), cap).ok_or_else(|| too_large(&parent_cards, cap))?;
        let card = variables[to_space[c]].cardinality;
        let offset = digit_radices.len();
        digit_radices.extend(std::iter::repeat(card).take(settings.size()));
        if digit_radices.len() > 64 * 1024 {
            return Err(too_large(&digit_radices, cap));
        }
        children.push(ChildSlot { var: to_space[c], parents, settings, offset });
    }
    let codec = MixedRadix::new(digit_radices.clone(), cap).ok_or_else(|| too_large(&digit_radices, cap))?;

    let instruments: Vec<usize> = instrument_ids.iter().map(|&i| to_space[i]).collect();
    let arm_radices: Vec<usize> = instruments.iter().map(|&i| variables[i].cardinality).collect();
    let arms = MixedRadix::new(arm_radices.clone(), usize::MAX).ok_or_else(|| too_large(&arm_radices, cap))?;
    let outcomes = children.iter().map(|c| c.var).filter(|&v| variables[v].role == Role::Observed).collect();

    Ok(ResponseSpace { witness: witness.clone(), variables, exogenous, instruments, children, outcomes, arms, codec })
}

impl ResponseSpace {
    pub fn witness(&self) -> &FineWitness {
        &self.witness
    }

    pub fn atom_count(&self) -> usize {
        self.codec.size()
    }

    /// Number of response profiles per child, in witness order.
    pub fn profile_counts(&self) -> Vec<usize> {
        self.children.iter().map(|c| self.variables[c.var].cardinality.pow(c.settings.size() as u32)).collect()
    }

    /// Per-child profiles of `atom`: entry `s` of child `k` is the value under parent setting `s`.
    pub fn decode_profiles(&self, atom: usize) -> Vec<Vec<usize>> {
        self.children.iter().map(|c| (0..c.settings.size()).map(|s| self.codec.digit(atom, c.offset + s)).collect()).collect()
    }

    pub fn encode_profiles(&self, profiles: &[Vec<usize>]) -> usize {
        let digits: Vec<usize> = profiles.iter().flatten().copied().collect();
        self.codec.encode(&digits)
    }

    /// Value of child slot `k` at parent setting index `setting`.
    #[inline]
    pub fn profile_value(&self, atom: usize, k: usize, setting: usize) -> usize {
        self.codec.digit(atom, self.children[k].offset + setting)
    }

    fn evaluate(&self, atom: usize, ctx: &Context, out: &mut [usize]) {
        for (slot, v) in out.iter_mut().zip(&ctx.fixed) {
            *slot = v.unwrap_or(0);
        }
        for c in &self.children {
            if ctx.clamped[c.var] {
                continue;
            }
            let mut setting = 0;
            for (k, &p) in c.parents.iter().enumerate() {
                setting += out[p] * c.settings.stride(k);
            }
            out[c.var] = self.codec.digit(atom, c.offset + setting);
        }
    }
}

impl JointSpace {
    pub fn new(net: &Network, cap: usize) -> Result<Self, SpaceError> {
        let (variables, _, exogenous) = endogenous_variables(net, |_| VarKind::Free);
        let radices: Vec<usize> = variables.iter().map(|v| v.cardinality).collect();
        let codec = MixedRadix::new(radices.clone(), cap).ok_or_else(|| too_large(&radices, cap))?;
        let outcomes = (0..variables.len()).filter(|&i| variables[i].role == Role::Observed).collect();
        Ok(Self { variables, exogenous, outcomes, codec })
    }

    pub fn atom_count(&self) -> usize {
        self.codec.size()
    }

    pub fn decode(&self, atom: usize) -> Vec<usize> {
        self.codec.decode(atom)
    }
}

impl ParameterSpace {
    pub fn atom_count(&self) -> usize {
        match self {
            ParameterSpace::Response(s) => s.atom_count(),
            ParameterSpace::Joint(s) => s.atom_count(),
        }
    }

    /// Endogenous variables in network declaration order.
    pub fn variables(&self) -> &[SpaceVariable] {
        match self {
            ParameterSpace::Response(s) => &s.variables,
            ParameterSpace::Joint(s) => &s.variables,
        }
    }

    fn exogenous(&self) -> &[String] {
        match self {
            ParameterSpace::Response(s) => &s.exogenous,
            ParameterSpace::Joint(s) => &s.exogenous,
        }
    }

    pub fn as_response(&self) -> Option<&ResponseSpace> {
        match self {
            ParameterSpace::Response(s) => Some(s),
            ParameterSpace::Joint(_) => None,
        }
    }

    pub fn is_joint(&self) -> bool {
        matches!(self, ParameterSpace::Joint(_))
    }

    pub fn var_index(&self, name: &str) -> Result<usize, SpaceError> {
        if let Some(i) = self.variables().iter().position(|v| v.name == name) {
            return Ok(i);
        }
        if self.exogenous().iter().any(|n| n == name) {
            Err(SpaceError::ExogenousIntervention(name.into()))
        } else {
            Err(SpaceError::UnknownVariable(name.into()))
        }
    }

    pub fn cardinality(&self, var: usize) -> usize {
        self.variables()[var].cardinality
    }

    pub fn name(&self, var: usize) -> &str {
        &self.variables()[var].name
    }

    /// Instrument variable indices, in the order arm indices enumerate them.
    pub fn instruments(&self) -> &[usize] {
        match self {
            ParameterSpace::Response(s) => &s.instruments,
            ParameterSpace::Joint(_) => &[],
        }
    }

    /// Observed non-instrument variables, in the order observed tables enumerate them.
    pub fn outcomes(&self) -> &[usize] {
        match self {
            ParameterSpace::Response(s) => &s.outcomes,
            ParameterSpace::Joint(s) => &s.outcomes,
        }
    }

    /// Number of cells in each arm's observed table.
    pub fn outcome_count(&self) -> usize {
        self.outcomes().iter().map(|&v| self.cardinality(v)).product()
    }

    pub fn arm_count(&self) -> usize {
        match self {
            ParameterSpace::Response(s) => s.arms.size(),
            ParameterSpace::Joint(_) => 1,
        }
    }

    /// Instrument values of `arm`, aligned with [`Self::instruments`].
    pub fn arm_values(&self, arm: usize) -> Vec<usize> {
        match self {
            ParameterSpace::Response(s) => s.arms.decode(arm),
            ParameterSpace::Joint(_) => vec![],
        }
    }

    pub fn arm_index(&self, values: &[usize]) -> usize {
        match self {
            ParameterSpace::Response(s) => s.arms.encode(values),
            ParameterSpace::Joint(_) => 0,
        }
    }

    fn check_value(&self, var: usize, value: usize) -> Result<(), SpaceError> {
        let card = self.cardinality(var);
        if value >= card {
            return Err(SpaceError::ValueOutOfRange { name: self.name(var).into(), value, card });
        }
        Ok(())
    }

    /// Context for instrument arm `arm` with `intervention` given as `(variable, value)` pairs.
    pub fn arm_context(&self, arm: usize, intervention: &[(usize, usize)]) -> Result<Context, SpaceError> {
        let n = self.variables().len();
        let mut fixed = vec![None; n];
        let mut clamped = vec![false; n];
        for (&var, value) in self.instruments().iter().zip(self.arm_values(arm)) {
            fixed[var] = Some(value);
        }
        if !intervention.is_empty() && self.is_joint() {
            return Err(SpaceError::InterventionUnsupported);
        }
        for &(var, value) in intervention {
            self.check_value(var, value)?;
            fixed[var] = Some(value);
            clamped[var] = true;
        }
        Ok(Context { fixed, clamped })
    }

    /// Name-based context. Every instrument not overridden by `intervention` needs a value.
    pub fn context(
        &self,
        instrument_values: &BTreeMap<String, usize>,
        intervention: &BTreeMap<String, usize>,
    ) -> Result<Context, SpaceError> {
        let mut clamps = Vec::with_capacity(intervention.len());
        for (name, &value) in intervention {
            clamps.push((self.var_index(name)?, value));
        }
        let mut values = Vec::with_capacity(self.instruments().len());
        for &inst in self.instruments() {
            let name = self.name(inst);
            let value = match (instrument_values.get(name), clamps.iter().find(|c| c.0 == inst)) {
                (Some(&v), _) => v,
                (None, Some(&(_, v))) => v,
                (None, None) => return Err(SpaceError::MissingInstrument(name.into())),
            };
            self.check_value(inst, value)?;
            values.push(value);
        }
        self.arm_context(self.arm_index(&values), &clamps)
    }

    /// Values of all endogenous variables for `atom` under `ctx`, written into `out`.
    #[inline]
    pub fn evaluate(&self, atom: usize, ctx: &Context, out: &mut [usize]) {
        match self {
            ParameterSpace::Response(s) => s.evaluate(atom, ctx, out),
            ParameterSpace::Joint(s) => s.codec.decode_into(atom, out),
        }
    }

    /// Calls `f(atom, assignment)` for every atom.
    pub fn for_each_atom(&self, ctx: &Context, mut f: impl FnMut(usize, &[usize])) {
        let mut buf = vec![0; self.variables().len()];
        for atom in 0..self.atom_count() {
            self.evaluate(atom, ctx, &mut buf);
            f(atom, &buf);
        }
    }

    /// Structural propagation of one atom, keyed by variable name.
    pub fn propagate(
        &self,
        atom: usize,
        instrument_values: &BTreeMap<String, usize>,
        intervention: &BTreeMap<String, usize>,
    ) -> Result<BTreeMap<String, usize>, SpaceError> {
        let ctx = self.context(instrument_values, intervention)?;
        let mut buf = vec![0; self.variables().len()];
        self.evaluate(atom, &ctx, &mut buf);
        Ok(self.variables().iter().zip(buf).map(|(v, x)| (v.name.clone(), x)).collect())
    }

    /// 0/1 expression selecting the atoms whose assignment under `ctx` satisfies `event`.
    pub fn event_expression(&self, ctx: &Context, event: impl Fn(&[usize]) -> bool) -> LinearExpression {
        let mut hits = Vec::new();
        self.for_each_atom(ctx, |atom, values| {
            if event(values) {
                hits.push(atom);
            }
        });
        LinearExpression::indicator(hits)
    }

    /// Atoms grouped by the joint value of `vars` under `ctx`; group `g` is
    /// the mixed-radix index of the values (first variable most significant).
    pub fn partition(&self, ctx: &Context, vars: &[usize]) -> Vec<Vec<usize>> {
        let radices: Vec<usize> = vars.iter().map(|&v| self.cardinality(v)).collect();
        let codec = MixedRadix::new(radices, usize::MAX).expect("joint outcome count fits usize");
        let mut groups = vec![Vec::new(); codec.size()];
        let mut digits = vec![0; vars.len()];
        self.for_each_atom(ctx, |atom, values| {
            for (d, &v) in digits.iter_mut().zip(vars) {
                *d = values[v];
            }
            groups[codec.encode(&digits)].push(atom);
        });
        groups
    }
}
