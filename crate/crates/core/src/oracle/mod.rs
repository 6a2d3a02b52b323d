//! Independent references for testing: exact vertex enumeration, a
//! parametric model of the binary chain and generative containment trials.

mod chain;
mod trial;
mod vertex;

pub use chain::{parametric_chain_search, ChainModel};
pub use trial::{generative_containment_trial, TrialConfig, TrialOutcome, TrialRecord};
pub use vertex::{oracle_bounds, VertexOracle};
