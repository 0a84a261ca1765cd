//! Inverted generational distance and summary statistics over repeated runs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::ObjectiveVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgdResult {
    pub value: f64,
    pub reference_count: usize,
    pub solution_count: usize,
}

/// Mean over reference points of the Euclidean distance to the nearest solution.
pub fn igd(reference: &[ObjectiveVector], solutions: &[ObjectiveVector]) -> Result<IgdResult> {
    if reference.is_empty() {
        return Err(Error::Empty("IGD reference set"));
    }
    if solutions.is_empty() {
        return Err(Error::Empty("IGD solution set"));
    }
    let m = reference[0].len();
    if reference.iter().chain(solutions).any(|v| v.len() != m) {
        return Err(Error::shape("IGD inputs differ in objective count"));
    }
    let mut total = 0.0;
    for r in reference {
        let mut best = f64::INFINITY;
        for s in solutions {
            let d2: f64 = r.iter().zip(s.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2);
        }
        total += libm::sqrt(best);
    }
    Ok(IgdResult {
        value: total / reference.len() as f64,
        reference_count: reference.len(),
        solution_count: solutions.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); zero for a single value.
    pub std: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

pub fn aggregate_runs(values: &[f64]) -> Result<RunStats> {
    if values.is_empty() {
        return Err(Error::Empty("run values"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        libm::sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
    } else {
        0.0
    };
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    };
    Ok(RunStats {
        mean,
        std,
        median,
        min: sorted[0],
        max: sorted[sorted.len() - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector(v.to_vec())
    }

    #[test]
    fn igd_examples() {
        let r = vec![ov(&[0.0, 0.0]), ov(&[2.0, 0.0])];
        assert_eq!(igd(&r, &r).unwrap().value, 0.0);
        let res = igd(&r, &[ov(&[0.0, 0.0])]).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!((res.reference_count, res.solution_count), (2, 1));
        let more = igd(&r, &[ov(&[0.0, 0.0]), ov(&[50.0, 50.0])]).unwrap();
        assert!(more.value <= res.value);
        assert!(igd(&[], &r).is_err());
        assert!(igd(&r, &[]).is_err());
        assert!(igd(&r, &[ov(&[1.0])]).is_err());
    }

    #[test]
    fn stats_examples() {
        let s = aggregate_runs(&[1.0]).unwrap();
        assert_eq!((s.mean, s.std, s.median), (1.0, 0.0, 1.0));
        let s = aggregate_runs(&[1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.median, s.min, s.max), (2.0, 2.0, 1.0, 3.0));
        assert!(aggregate_runs(&[]).is_err());
    }
}
