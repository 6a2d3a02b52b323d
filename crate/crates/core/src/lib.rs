//! Partial-identification bounds for discrete causal models with latent
//! variables, noisy proxies and instruments.
//!
//! A [`pipeline::Model`] bundles a network, observed data, assumptions and a
//! target. Compiling it enumerates a parameter space (response functions, or
//! the joint distribution of endogenous variables), turns every ingredient
//! into linear constraints over that space, and [`solver::solve_bounds`]
//! minimizes and maximizes the target.

pub mod analytic;
pub mod constraints;
pub mod error;
pub mod linear;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod response;
pub mod solver;
pub mod targets;

pub use error::{Error, Result};
pub use pipeline::{CompiledProblem, Model, Parameterization, Structure};
pub use solver::{Bounds, BoundsStatus};
