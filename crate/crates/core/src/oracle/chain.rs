use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::analytic::{ChainObservables, Corollary, IntervalUnion};

/// Generating parameters of the binary chain `A -> X -> Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    /// `P(A = a)`.
    pub p_a: Vec<f64>,
    /// `P(X = 1 | A = a)`.
    pub pi: Vec<f64>,
    /// `P(Y = 1 | X = 0)`.
    pub q10: f64,
    /// `P(Y = 1 | X = 1)`.
    pub q11: f64,
}

impl ChainModel {
    /// True `P(X = 1)`.
    pub fn p_x1(&self) -> f64 {
        self.p_a.iter().zip(&self.pi).map(|(w, p)| w * p).sum()
    }

    pub fn p1_given_a(&self) -> Vec<f64> {
        self.pi.iter().map(|p| self.q10 + p * (self.q11 - self.q10)).collect()
    }

    pub fn observables(&self) -> ChainObservables {
        ChainObservables { p_a: self.p_a.clone(), p1_given_a: self.p1_given_a() }
    }

    /// Draws a model with `arms` instrument values. `P(A)` is flat Dirichlet;
    /// `pi` and the error rates are uniform on the set the restriction allows.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, arms: usize, restriction: Option<Corollary>) -> Self {
        let p_a = dirichlet(rng, arms, 1.0);
        let pi = (0..arms).map(|_| rng.random::<f64>()).collect();
        let (q10, q11) = match restriction {
            None => (rng.random(), rng.random()),
            Some(Corollary::A1) => (0.0, rng.random()),
            Some(Corollary::A3) => (rng.random_range(0.0..0.5), rng.random_range(0.5..1.0)),
            Some(Corollary::LabelIndependent) => {
                let e: f64 = rng.random();
                (e, 1.0 - e)
            }
        };
        Self { p_a, pi, q10, q11 }
    }
}

/// Symmetric Dirichlet draw with strictly positive entries.
pub(crate) fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize, alpha: f64) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("positive shape");
    loop {
        let draws: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && draws.iter().all(|&d| d > 0.0) {
            return draws.into_iter().map(|d| d / total).collect();
        }
    }
}

/// Grid search over the error rates `(q10, q11)` with step `resolution`.
///
/// For each grid point the per-arm `P(X = 1 | A = a)` solving the observed
/// equations is computed exactly and kept when it lies in `[0, 1]`, so every
/// reported value is attained by some model: the result is an inner
/// approximation of the identified set, one hull per branch.
pub fn parametric_chain_search(obs: &ChainObservables, restriction: Option<Corollary>, resolution: f64) -> IntervalUnion {
    assert!(resolution > 0.0 && resolution <= 1.0, "resolution must lie in (0, 1]");
    let steps = (1.0 / resolution).round().max(1.0) as usize;
    let grid = |i: usize| i as f64 / steps as f64;
    let p1 = obs.p1();
    let mut hulls: [Option<(f64, f64)>; 2] = [None, None];
    let mut visit = |q0: f64, q1: f64| {
        let span = q1 - q0;
        if span == 0.0 {
            return;
        }
        let ok = obs.p1_given_a.iter().all(|&p| {
            let pi = (p - q0) / span;
            (-1e-12..=1.0 + 1e-12).contains(&pi)
        });
        if !ok {
            return;
        }
        let value = ((p1 - q0) / span).clamp(0.0, 1.0);
        let h = &mut hulls[usize::from(span < 0.0)];
        *h = Some(h.map_or((value, value), |(lo, hi)| (lo.min(value), hi.max(value))));
    };
    match restriction {
        None => {
            for i in 0..=steps {
                for j in 0..=steps {
                    visit(grid(i), grid(j));
                }
            }
        }
        Some(Corollary::A1) => (0..=steps).for_each(|j| visit(0.0, grid(j))),
        Some(Corollary::A3) => {
            for i in (0..=steps).filter(|&i| grid(i) < 0.5) {
                for j in (0..=steps).filter(|&j| grid(j) > 0.5) {
                    visit(grid(i), grid(j));
                }
            }
        }
        Some(Corollary::LabelIndependent) => (0..=steps).for_each(|i| visit(grid(i), 1.0 - grid(i))),
    }
    IntervalUnion::new(hulls.into_iter().flatten())
}
