//! Simplex-lattice weight generation and unit reference vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Smallest range component accepted during adaptation.
pub const RANGE_FLOOR: f64 = 1e-12;

/// `C(n, k)` as `u128`; exact for every lattice this crate builds.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Number of points in the `(M, H)` simplex lattice.
pub fn lattice_size(m: usize, h: usize) -> u128 {
    binomial((h + m - 1) as u64, (m - 1) as u64)
}

/// Every weight vector with components in `{0, 1/H, ..., 1}` summing to one.
///
/// Ordered lexicographically by decreasing integer numerators, so `(1, 0)` comes before
/// `(0.5, 0.5)` before `(0, 1)`.
pub fn simplex_lattice(m: usize, h: usize) -> Result<Vec<Vec<f64>>> {
    if m < 2 {
        return Err(Error::Config(alloc::format!(
            "simplex lattice needs M >= 2, got {m}"
        )));
    }
    if h < 1 {
        return Err(Error::Config(alloc::format!(
            "simplex lattice needs H >= 1, got {h}"
        )));
    }
    let mut out = Vec::with_capacity(lattice_size(m, h) as usize);
    let mut counts = vec![0usize; m];
    fill(&mut counts, 0, h, h, &mut out);
    Ok(out)
}

fn fill(counts: &mut [usize], pos: usize, left: usize, h: usize, out: &mut Vec<Vec<f64>>) {
    if pos == counts.len() - 1 {
        counts[pos] = left;
        out.push(counts.iter().map(|&c| c as f64 / h as f64).collect());
        return;
    }
    for c in (0..=left).rev() {
        counts[pos] = c;
        fill(counts, pos + 1, left - c, h, out);
    }
}

/// Outer `(M, H_outer)` lattice plus an inner `(M, H_inner)` lattice pulled halfway to the
/// centroid by `w / 2 + 1 / (2M)`. `H_inner = 0` means no inner layer.
pub fn two_layer_lattice(m: usize, h_outer: usize, h_inner: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = simplex_lattice(m, h_outer)?;
    if h_inner == 0 {
        return Ok(out);
    }
    let shift = 1.0 / (2.0 * m as f64);
    for w in simplex_lattice(m, h_inner)? {
        let shrunk: Vec<f64> = w.iter().map(|v| v / 2.0 + shift).collect();
        let duplicate = out
            .iter()
            .any(|o| o.iter().zip(&shrunk).all(|(a, b)| (a - b).abs() <= 1e-12));
        if !duplicate {
            out.push(shrunk);
        }
    }
    Ok(out)
}

/// Lattice layers used for a given objective count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    pub outer: usize,
    pub inner: usize,
}

impl LatticeSpec {
    /// Settings reproducing population sizes 105, 132, 156 and 275 for M = 3, 6, 8, 10.
    /// Other objective counts get the smallest single layer with at least 100 points.
    pub fn for_objectives(m: usize) -> Self {
        match m {
            3 => Self {
                outer: 13,
                inner: 0,
            },
            6 => Self { outer: 4, inner: 1 },
            8 => Self { outer: 3, inner: 2 },
            10 => Self { outer: 3, inner: 2 },
            _ => {
                let mut h = 1;
                while m >= 2 && lattice_size(m, h) < 100 {
                    h += 1;
                }
                Self { outer: h, inner: 0 }
            }
        }
    }

    pub fn weights(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        two_layer_lattice(m, self.outer, self.inner)
    }

    pub fn size(&self, m: usize) -> usize {
        let inner = if self.inner == 0 {
            0
        } else {
            lattice_size(m, self.inner)
        };
        (lattice_size(m, self.outer) + inner) as usize
    }
}

/// Unit reference vectors, the uniform set they were derived from, and each vector's
/// smallest angle to any other vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceVectorSet {
    current: Vec<Vec<f64>>,
    initial: Vec<Vec<f64>>,
    gamma: Vec<f64>,
}

impl ReferenceVectorSet {
    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.current.first().map_or(0, Vec::len)
    }

    pub fn current(&self) -> &[Vec<f64>] {
        &self.current
    }

    pub fn initial(&self) -> &[Vec<f64>] {
        &self.initial
    }

    /// Minimum neighbour angle per vector, in radians.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Rescales the initial vectors by the objective ranges and renormalises.
    /// Zero range components are floored at [`RANGE_FLOOR`].
    pub fn adapt(&self, z_max: &[f64], z_min: &[f64]) -> Result<Self> {
        let m = self.dim();
        if z_max.len() != m || z_min.len() != m {
            return Err(Error::shape(alloc::format!(
                "adaptation ranges have lengths {}/{}, expected {m}",
                z_max.len(),
                z_min.len()
            )));
        }
        let range: Vec<f64> = z_max
            .iter()
            .zip(z_min)
            .map(|(hi, lo)| (hi - lo).max(RANGE_FLOOR))
            .collect();
        let current = self
            .initial
            .iter()
            .enumerate()
            .map(|(index, v)| {
                let scaled: Vec<f64> = v.iter().zip(&range).map(|(a, r)| a * r).collect();
                normalized(&scaled).ok_or(Error::ZeroNorm { index })
            })
            .collect::<Result<Vec<_>>>()?;
        let gamma = min_neighbour_angles(&current);
        Ok(Self {
            current,
            initial: self.initial.clone(),
            gamma,
        })
    }
}

/// Normalises every weight to unit Euclidean norm.
pub fn to_unit_vectors(weights: &[Vec<f64>]) -> Result<ReferenceVectorSet> {
    if weights.is_empty() {
        return Err(Error::Empty("reference weights"));
    }
    let m = weights[0].len();
    let current = weights
        .iter()
        .enumerate()
        .map(|(index, w)| {
            if w.len() != m {
                return Err(Error::shape(alloc::format!(
                    "weight {index} has length {}, expected {m}",
                    w.len()
                )));
            }
            normalized(w).ok_or(Error::ZeroNorm { index })
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = min_neighbour_angles(&current);
    Ok(ReferenceVectorSet {
        initial: current.clone(),
        current,
        gamma,
    })
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let norm = libm::sqrt(v.iter().map(|a| a * a).sum::<f64>());
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some(v.iter().map(|a| a / norm).collect())
}

/// Angle to the closest other vector: arccos of the largest cosine. A lone vector gets
/// pi/2, the widest angle inside the orthant.
fn min_neighbour_angles(vs: &[Vec<f64>]) -> Vec<f64> {
    (0..vs.len())
        .map(|j| {
            let best = (0..vs.len())
                .filter(|&i| i != j)
                .map(|i| dot(&vs[i], &vs[j]))
                .fold(f64::NEG_INFINITY, f64::max);
            if best == f64::NEG_INFINITY {
                FRAC_PI_2
            } else {
                libm::acos(best.clamp(-1.0, 1.0))
            }
        })
        .collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn two_objective_lattice() {
        let w = simplex_lattice(2, 2).unwrap();
        assert_eq!(w, vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]]);
    }

    #[test]
    fn identity_lattice() {
        let w = simplex_lattice(3, 1).unwrap();
        assert_eq!(
            w,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(matches!(simplex_lattice(1, 3), Err(Error::Config(_))));
        assert!(matches!(simplex_lattice(3, 0), Err(Error::Config(_))));
        assert!(two_layer_lattice(1, 2, 1).is_err());
    }

    #[test]
    fn lattice_counts_match_binomials() {
        for m in 2..=10 {
            for h in 1..=13 {
                if lattice_size(m, h) > 400_000 {
                    continue;
                }
                let w = simplex_lattice(m, h).unwrap();
                assert_eq!(w.len() as u128, lattice_size(m, h), "M={m} H={h}");
                for v in &w {
                    assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                }
            }
        }
        assert_eq!(simplex_lattice(3, 13).unwrap().len(), 105);
    }

    #[test]
    fn lattice_has_no_duplicates() {
        let w = simplex_lattice(4, 6).unwrap();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                assert_ne!(w[i], w[j]);
            }
        }
    }

    #[test]
    fn configured_population_sizes() {
        assert_eq!(two_layer_lattice(6, 4, 1).unwrap().len(), 132);
        assert_eq!(two_layer_lattice(8, 3, 2).unwrap().len(), 156);
        assert_eq!(two_layer_lattice(10, 3, 2).unwrap().len(), 275);
        for (m, n) in [(3, 105), (6, 132), (8, 156), (10, 275)] {
            let spec = LatticeSpec::for_objectives(m);
            assert_eq!(spec.size(m), n);
            assert_eq!(spec.weights(m).unwrap().len(), n);
        }
    }

    #[test]
    fn normalisation_and_gamma() {
        let set = to_unit_vectors(&simplex_lattice(2, 2).unwrap()).unwrap();
        assert_eq!(set.current()[0], vec![1.0, 0.0]);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((set.current()[1][0] - h).abs() < 1e-15 && (set.current()[1][1] - h).abs() < 1e-15);
        assert!((set.gamma()[0] - FRAC_PI_4).abs() < 1e-12);
        assert!((set.gamma()[1] - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn zero_weight_is_rejected() {
        assert!(matches!(
            to_unit_vectors(&[vec![0.0, 0.0]]),
            Err(Error::ZeroNorm { index: 0 })
        ));
        assert!(to_unit_vectors(&[]).is_err());
    }

    #[test]
    fn unit_range_adaptation_is_identity() {
        let set = to_unit_vectors(&simplex_lattice(3, 4).unwrap()).unwrap();
        let a = set.adapt(&[1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]).unwrap();
        for (x, y) in a.current().iter().zip(set.current()) {
            for (p, q) in x.iter().zip(y) {
                assert!((p - q).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn adaptation_scales_by_range() {
        let set = to_unit_vectors(&[vec![0.5, 0.5]]).unwrap();
        let a = set.adapt(&[3.0, 1.5], &[1.0, 0.5]).unwrap();
        let s5 = libm::sqrt(5.0);
        assert!((a.current()[0][0] - 2.0 / s5).abs() < 1e-12);
        assert!((a.current()[0][1] - 1.0 / s5).abs() < 1e-12);
        assert_eq!(a.initial(), set.initial());
    }

    #[test]
    fn degenerate_range_is_floored() {
        let set = to_unit_vectors(&simplex_lattice(3, 3).unwrap()).unwrap();
        let a = set.adapt(&[2.0, 1.0, 4.0], &[2.0, 0.0, 0.0]).unwrap();
        for v in a.current() {
            assert!(v.iter().all(|c| c.is_finite() && *c >= 0.0));
            assert!((libm::sqrt(dot(v, v)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adapting_twice_is_stable() {
        let set = to_unit_vectors(&simplex_lattice(3, 5).unwrap()).unwrap();
        let once = set.adapt(&[4.0, 2.0, 9.0], &[1.0, 0.0, 2.0]).unwrap();
        let twice = once.adapt(&[4.0, 2.0, 9.0], &[1.0, 0.0, 2.0]).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn gamma_is_positive_for_distinct_vectors() {
        let set = to_unit_vectors(&LatticeSpec::for_objectives(8).weights(8).unwrap()).unwrap();
        assert!(set.gamma().iter().all(|g| *g > 0.0));
    }
}
