//! Reference-vector-guided environmental selection.
//!
//! Objectives are translated by their column minima, each individual joins the reference
//! vector with the largest cosine, and every non-empty partition keeps the member with the
//! smallest angle-penalised distance (APD).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::refvec::{dot, ReferenceVectorSet};
use crate::types::{ObjectiveVector, Population};

/// Objective vectors shifted so that every column minimum is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslatedObjectives {
    pub rows: Vec<Vec<f64>>,
    pub z_min: Vec<f64>,
    pub z_max: Vec<f64>,
}

/// Reference-vector index and cosine for each individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub cosines: Vec<f64>,
}

pub fn translate(objectives: &[ObjectiveVector]) -> Result<TranslatedObjectives> {
    let first = objectives
        .first()
        .ok_or(Error::Empty("objective vectors"))?;
    let m = first.len();
    let mut z_min = first.0.clone();
    let mut z_max = first.0.clone();
    for (i, f) in objectives.iter().enumerate() {
        if f.len() != m {
            return Err(Error::shape(alloc::format!(
                "objective vector {i} has length {}, expected {m}",
                f.len()
            )));
        }
        for (k, v) in f.iter().enumerate() {
            z_min[k] = z_min[k].min(*v);
            z_max[k] = z_max[k].max(*v);
        }
    }
    let rows = objectives
        .iter()
        .map(|f| f.iter().zip(&z_min).map(|(v, lo)| v - lo).collect())
        .collect();
    Ok(TranslatedObjectives { rows, z_min, z_max })
}

/// Assigns each row to the reference vector of maximal cosine. Ties go to the lowest index;
/// a zero row (the ideal point) goes to vector 0 with cosine 1.
pub fn partition(
    translated: &TranslatedObjectives,
    refs: &ReferenceVectorSet,
) -> Result<Partition> {
    if refs.is_empty() {
        return Err(Error::Empty("reference vectors"));
    }
    let norms: Vec<f64> = refs
        .current()
        .iter()
        .map(|v| libm::sqrt(dot(v, v)))
        .collect();
    let mut assignment = Vec::with_capacity(translated.rows.len());
    let mut cosines = Vec::with_capacity(translated.rows.len());
    for row in &translated.rows {
        let row_norm = libm::sqrt(dot(row, row));
        if row_norm == 0.0 {
            assignment.push(0);
            cosines.push(1.0);
            continue;
        }
        let mut best = 0;
        let mut best_cos = f64::NEG_INFINITY;
        for (j, v) in refs.current().iter().enumerate() {
            let c = dot(row, v) / (row_norm * norms[j]);
            if c > best_cos {
                best = j;
                best_cos = c;
            }
        }
        assignment.push(best);
        cosines.push(best_cos);
    }
    Ok(Partition {
        assignment,
        cosines,
    })
}

/// Angle-penalised distance `(1 + M (t / t_max)^alpha * angle / gamma) * |row|`.
pub fn apd(
    row: &[f64],
    angle: f64,
    gamma: f64,
    t: usize,
    t_max: usize,
    alpha: f64,
    m: usize,
) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidGamma(gamma));
    }
    if t_max == 0 || t > t_max {
        return Err(Error::config(alloc::format!(
            "generation {t} outside 0..={t_max}"
        )));
    }
    let progress = libm::pow(t as f64 / t_max as f64, alpha);
    let penalty = m as f64 * progress * angle / gamma;
    Ok((1.0 + penalty) * libm::sqrt(dot(row, row)))
}

/// Outcome of one selection step.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// One individual per non-empty partition, in reference-vector order.
    pub survivors: Population,
    /// Every individual that was not kept, in input order.
    pub eliminated: Population,
    /// Indices of the survivors in the input population.
    pub selected: Vec<usize>,
    /// Column extrema of the whole input population.
    pub z_min: Vec<f64>,
    pub z_max: Vec<f64>,
}

/// Keeps the minimum-APD member of each partition; APD ties go to the lowest index.
pub fn elitism_select(
    pop: &Population,
    refs: &ReferenceVectorSet,
    t: usize,
    t_max: usize,
    alpha: f64,
) -> Result<Selection> {
    let objectives = pop.objectives()?;
    let translated = translate(&objectives)?;
    if translated.z_min.len() != refs.dim() {
        return Err(Error::shape(alloc::format!(
            "population has {} objectives, reference vectors have {}",
            translated.z_min.len(),
            refs.dim()
        )));
    }
    let part = partition(&translated, refs)?;
    let m = refs.dim();
    let mut best: Vec<Option<(usize, f64)>> = vec![None; refs.len()];
    for (i, row) in translated.rows.iter().enumerate() {
        let j = part.assignment[i];
        let angle = libm::acos(part.cosines[i].clamp(-1.0, 1.0));
        let d = apd(row, angle, refs.gamma()[j], t, t_max, alpha, m)?;
        match best[j] {
            Some((_, bd)) if bd <= d => {}
            _ => best[j] = Some((i, d)),
        }
    }
    let selected: Vec<usize> = best.iter().flatten().map(|(i, _)| *i).collect();
    let mut keep = vec![false; pop.len()];
    for &i in &selected {
        keep[i] = true;
    }
    let survivors = selected.iter().map(|&i| pop.members[i].clone()).collect();
    let eliminated = pop
        .members
        .iter()
        .zip(&keep)
        .filter(|(_, k)| !**k)
        .map(|(m, _)| m.clone())
        .collect();
    Ok(Selection {
        survivors: Population::new(survivors, pop.generation),
        eliminated: Population::new(eliminated, pop.generation),
        selected,
        z_min: translated.z_min,
        z_max: translated.z_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refvec::{simplex_lattice, to_unit_vectors};
    use crate::types::Individual;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector(v.to_vec())
    }

    fn evaluated(fs: &[&[f64]]) -> Population {
        let members = fs
            .iter()
            .map(|f| Individual {
                x: vec![0.0].into(),
                f: Some(ov(f)),
            })
            .collect();
        Population::new(members, 0)
    }

    fn axes() -> ReferenceVectorSet {
        to_unit_vectors(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn translation_examples() {
        let t = translate(&[ov(&[1.0, 2.0]), ov(&[3.0, 1.0])]).unwrap();
        assert_eq!(t.z_min, vec![1.0, 1.0]);
        assert_eq!(t.z_max, vec![3.0, 2.0]);
        assert_eq!(t.rows, vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        let single = translate(&[ov(&[4.0, -2.0])]).unwrap();
        assert_eq!(single.rows, vec![vec![0.0, 0.0]]);
        let same = translate(&[ov(&[0.0, 3.0]), ov(&[2.0, 0.0])]).unwrap();
        assert_eq!(same.rows, vec![vec![0.0, 3.0], vec![2.0, 0.0]]);
        assert!(matches!(translate(&[]), Err(Error::Empty(_))));
        assert!(translate(&[ov(&[1.0]), ov(&[1.0, 2.0])]).is_err());
    }

    #[test]
    fn partition_examples() {
        let refs = axes();
        let t = TranslatedObjectives {
            rows: vec![vec![2.0, 0.1]],
            z_min: vec![0.0; 2],
            z_max: vec![2.0, 0.1],
        };
        let p = partition(&t, &refs).unwrap();
        assert_eq!(p.assignment, vec![0]);
        assert!((p.cosines[0] - 0.998_752_3).abs() < 1e-6);

        let t = TranslatedObjectives {
            rows: vec![vec![0.0, 3.0]],
            z_min: vec![0.0; 2],
            z_max: vec![0.0, 3.0],
        };
        let p = partition(&t, &refs).unwrap();
        assert_eq!((p.assignment[0], p.cosines[0]), (1, 1.0));

        let t = TranslatedObjectives {
            rows: vec![vec![1.0, 1.0]],
            z_min: vec![0.0; 2],
            z_max: vec![1.0; 2],
        };
        assert_eq!(partition(&t, &refs).unwrap().assignment, vec![0]);

        let t = TranslatedObjectives {
            rows: vec![vec![0.0, 0.0]],
            z_min: vec![0.0; 2],
            z_max: vec![0.0; 2],
        };
        let p = partition(&t, &refs).unwrap();
        assert_eq!((p.assignment[0], p.cosines[0]), (0, 1.0));
    }

    #[test]
    fn apd_examples() {
        let row = [3.0, 4.0];
        assert_eq!(apd(&row, 0.7, 0.3, 0, 10, 2.0, 2).unwrap(), 5.0);
        let d = apd(&row, 0.3, 0.3, 10, 10, 2.0, 2).unwrap();
        assert!((d - 15.0).abs() < 1e-12);
        assert_eq!(apd(&[0.0, 0.0], 1.0, 0.5, 5, 10, 2.0, 2).unwrap(), 0.0);
        assert!(matches!(
            apd(&row, 0.1, 0.0, 1, 10, 2.0, 2),
            Err(Error::InvalidGamma(_))
        ));
        assert!(apd(&row, 0.1, 0.2, 11, 10, 2.0, 2).is_err());
    }

    #[test]
    fn one_per_reference_vector_keeps_everyone() {
        let refs = to_unit_vectors(&simplex_lattice(2, 2).unwrap()).unwrap();
        let pop = evaluated(&[&[0.0, 2.0], &[1.0, 1.0], &[2.0, 0.0]]);
        let s = elitism_select(&pop, &refs, 3, 10, 2.0).unwrap();
        assert_eq!(s.survivors.len(), 3);
        assert!(s.eliminated.is_empty());
        assert_eq!(s.selected, vec![2, 1, 0]);
    }

    #[test]
    fn smaller_norm_wins_at_generation_zero() {
        let refs = axes();
        let pop = evaluated(&[&[0.0, 5.0], &[4.0, 1.0], &[2.0, 0.5]]);
        let s = elitism_select(&pop, &refs, 0, 10, 2.0).unwrap();
        assert_eq!(s.selected, vec![2, 0]);
        assert_eq!(s.eliminated.len(), 1);
        assert_eq!(s.z_min, vec![0.0, 0.5]);
        assert_eq!(s.z_max, vec![4.0, 5.0]);
    }

    #[test]
    fn ideal_point_is_always_kept() {
        let refs = axes();
        let pop = evaluated(&[&[3.0, 1.0], &[1.0, 1.0], &[2.0, 4.0]]);
        let s = elitism_select(&pop, &refs, 7, 10, 2.0).unwrap();
        assert!(s.selected.contains(&1));
    }

    #[test]
    fn unevaluated_population_is_rejected() {
        let mut pop = evaluated(&[&[1.0, 2.0]]);
        pop.members.push(Individual::new(vec![0.0]));
        assert!(matches!(
            elitism_select(&pop, &axes(), 0, 1, 2.0),
            Err(Error::Unevaluated { index: 1 })
        ));
    }
}
