//! Polynomial mutation and simulated binary crossover (SBX).

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::types::{Bounds, DecisionVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationConfig {
    /// Distribution index `eta_m`.
    pub eta_m: f64,
    /// Per-variable mutation probability; `None` means `1 / n`.
    pub p_m: Option<f64>,
}

impl Default for MutationConfig {
    fn default() -> Self {
        Self {
            eta_m: 20.0,
            p_m: None,
        }
    }
}

impl MutationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta_m > 0.0 && self.eta_m.is_finite()) {
            return Err(Error::config(alloc::format!(
                "eta_m must be positive, got {}",
                self.eta_m
            )));
        }
        if let Some(p) = self.p_m {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(alloc::format!(
                    "p_m must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn probability(&self, n: usize) -> f64 {
        self.p_m.unwrap_or(1.0 / n as f64)
    }
}

/// Bounded polynomial perturbation of one variable for the draw `u` in `[0, 1]`.
/// `u = 0.5` leaves the value unchanged.
pub fn polynomial_perturbation(y: f64, lower: f64, upper: f64, u: f64, eta: f64) -> f64 {
    let span = upper - lower;
    let power = 1.0 / (eta + 1.0);
    let delta = if u <= 0.5 {
        let xy = 1.0 - (y - lower) / span;
        let val = 2.0 * u + (1.0 - 2.0 * u) * libm::pow(xy, eta + 1.0);
        libm::pow(val, power) - 1.0
    } else {
        let xy = 1.0 - (upper - y) / span;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * libm::pow(xy, eta + 1.0);
        1.0 - libm::pow(val, power)
    };
    (y + delta * span).clamp(lower, upper)
}

pub fn polynomial_mutation(
    x: &DecisionVector,
    bounds: &Bounds,
    cfg: &MutationConfig,
    rng: &mut RandomSource,
) -> DecisionVector {
    let p = cfg.probability(x.len());
    let values = x
        .iter()
        .zip(bounds.lower().iter().zip(bounds.upper()))
        .map(|(&y, (&l, &u))| {
            if p > 0.0 && rng.uniform() < p {
                polynomial_perturbation(y, l, u, rng.uniform(), cfg.eta_m)
            } else {
                y
            }
        })
        .collect();
    DecisionVector(values)
}

/// Unclamped SBX children of one variable pair for the draw `u` in `[0, 1)`.
/// The children always average to the parents.
pub fn sbx_pair(a: f64, b: f64, u: f64, eta: f64) -> (f64, f64) {
    let beta = if u <= 0.5 {
        libm::pow(2.0 * u, 1.0 / (eta + 1.0))
    } else {
        libm::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0))
    };
    let c1 = 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b);
    let c2 = 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b);
    (c1, c2)
}

/// SBX crossover. Each variable is recombined with probability one half; the pair of
/// children is produced with probability `pc` and is a copy of the parents otherwise.
pub fn sbx_crossover(
    a: &DecisionVector,
    b: &DecisionVector,
    bounds: &Bounds,
    eta_c: f64,
    pc: f64,
    rng: &mut RandomSource,
) -> (DecisionVector, DecisionVector) {
    let mut c1 = a.0.clone();
    let mut c2 = b.0.clone();
    if pc <= 0.0 || rng.uniform() >= pc {
        return (DecisionVector(c1), DecisionVector(c2));
    }
    for i in 0..c1.len() {
        if rng.uniform() < 0.5 && (a[i] - b[i]).abs() > 1e-14 {
            let (x, y) = sbx_pair(a[i], b[i], rng.uniform(), eta_c);
            c1[i] = x;
            c2[i] = y;
        }
    }
    bounds.clamp(&mut c1);
    bounds.clamp(&mut c2);
    (DecisionVector(c1), DecisionVector(c2))
}
