//! Decision and objective vectors, individuals, populations and box bounds.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::problems::ProblemDef;
use crate::rng::RandomSource;

/// Point in the decision space, in problem units.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector(pub Vec<f64>);

/// Objective values of one evaluated point.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(pub Vec<f64>);

impl Deref for DecisionVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DecisionVector {
    fn from(v: Vec<f64>) -> Self {
        DecisionVector(v)
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        ObjectiveVector(v)
    }
}

/// Per-dimension box `[lower_i, upper_i]` with `lower_i < upper_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::config(format!(
                "bounds have {} lower and {} upper entries",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::config("bounds must cover at least one variable"));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::config(format!(
                    "malformed bounds [{l}, {u}] for variable {i}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval repeated `n` times.
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(alloc::vec![lower; n], alloc::vec![upper; n])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.len()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub x: DecisionVector,
    /// Absent until the individual has been evaluated.
    pub f: Option<ObjectiveVector>,
}

impl Individual {
    pub fn new(x: Vec<f64>) -> Self {
        Self {
            x: DecisionVector(x),
            f: None,
        }
    }

    pub fn objectives(&self) -> Option<&[f64]> {
        self.f.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
}

impl Population {
    pub fn new(members: Vec<Individual>, generation: usize) -> Self {
        Self {
            members,
            generation,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_evaluated(&self) -> bool {
        self.members.iter().all(|m| m.f.is_some())
    }

    /// Objective vectors of every member, failing on the first unevaluated one.
    pub fn objectives(&self) -> Result<Vec<ObjectiveVector>> {
        self.members
            .iter()
            .enumerate()
            .map(|(index, m)| m.f.clone().ok_or(Error::Unevaluated { index }))
            .collect()
    }

    /// Appends `other`'s members after this population's.
    pub fn extend(&mut self, other: Population) {
        self.members.extend(other.members);
    }
}

/// `size` individuals drawn uniformly from the problem's box, unevaluated.
pub fn init_population(
    problem: &ProblemDef,
    size: usize,
    rng: &mut RandomSource,
) -> Result<Population> {
    if size == 0 {
        return Err(Error::config("population size must be at least 1"));
    }
    let bounds = problem.bounds();
    let members = (0..size)
        .map(|_| {
            let x = bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(l, u)| (l + rng.uniform() * (u - l)).min(*u))
                .collect();
            Individual::new(x)
        })
        .collect();
    Ok(Population::new(members, 0))
}

/// Evaluates every member in index order and returns the number of evaluations spent.
pub fn evaluate(pop: &mut Population, problem: &ProblemDef) -> Result<usize> {
    for (index, member) in pop.members.iter_mut().enumerate() {
        let f = problem.evaluate(&member.x)?;
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective { index });
        }
        member.f = Some(f);
    }
    Ok(pop.len())
}
