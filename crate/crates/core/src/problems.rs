//! DTLZ1-4 and LSMOP1-3 benchmark problems.
//!
//! DTLZ uses the standard definitions with `k = 5` distance variables for DTLZ1 and
//! `k = 10` for DTLZ2-4, giving `n = M + k - 1`.
//!
//! LSMOP uses `n = 100 M` variables. The first `M - 1` are position variables in `[0, 1]`,
//! the remaining `n_s = n - M + 1` are distance variables in `[0, 10]`.
//!
//! Definitions:
//!
//! * linkage (LSMOP1-3): `x'_i = (1 + i / n) x_i - 10 x_1` for 1-based `i = M..n`;
//! * group sizes: chaos sequence `c_1 = 3.8 * 0.1 * 0.9`, `c_{k+1} = 3.8 c_k (1 - c_k)`,
//!   objective `k` owns `n_k = 5` subcomponents of `floor(c_k / sum(c) * n_s / 5)` variables
//!   each, laid out consecutively. Variables left over by the floors are appended to the
//!   final subcomponent of the last group so that every variable matters;
//! * `g_k` = sum of the landscape over the subcomponents of group `k`, divided by the group
//!   size. LSMOP1: sphere everywhere. LSMOP2: Griewank on odd objectives, Schwefel
//!   (max-abs) on even ones. LSMOP3: Rastrigin on odd, Rosenbrock on even (1-based);
//! * shape: `f_1 = (1 + g_1) x_1 ... x_{M-1}`, `f_k = (1 + g_k) x_1 ... x_{M-k} (1 - x_{M-k+1})`,
//!   `f_M = (1 + g_M)(1 - x_1)`, a linear front with `sum f = 1`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::refvec::{lattice_size, simplex_lattice};
use crate::types::{Bounds, ObjectiveVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontShape {
    /// `sum f = constant`; the constant is carried by [`ProblemDef::front_constant`].
    Linear,
    /// `sum f^2 = 1`.
    Spherical,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Dtlz { variant: u8, k: usize },
    Lsmop { variant: u8, layout: LsmopLayout },
}

#[derive(Debug, Clone, PartialEq)]
struct LsmopLayout {
    /// Subcomponent length for each objective's group.
    sublen: Vec<usize>,
    /// Offset of each group inside the distance segment; `offsets[M]` is its length.
    offsets: Vec<usize>,
}

const LSMOP_SUBCOMPONENTS: usize = 5;

impl LsmopLayout {
    fn new(m: usize, n: usize) -> Self {
        let ns = n - m + 1;
        let mut chaos = Vec::with_capacity(m);
        chaos.push(3.8 * 0.1 * (1.0 - 0.1));
        for i in 1..m {
            let c = chaos[i - 1];
            chaos.push(3.8 * c * (1.0 - c));
        }
        let total: f64 = chaos.iter().sum();
        let sublen: Vec<usize> = chaos
            .iter()
            .map(|c| libm::floor(c / total * ns as f64 / LSMOP_SUBCOMPONENTS as f64) as usize)
            .collect();
        let mut offsets = Vec::with_capacity(m + 1);
        offsets.push(0);
        for s in &sublen {
            offsets.push(offsets.last().unwrap() + s * LSMOP_SUBCOMPONENTS);
        }
        // leftover variables join the last group
        *offsets.last_mut().unwrap() = ns;
        Self { sublen, offsets }
    }
}

/// A box-constrained benchmark problem. Evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDef {
    name: String,
    m: usize,
    bounds: Bounds,
    kind: Kind,
}

/// DTLZ`variant` (1..=4) with `m` objectives.
pub fn dtlz(variant: u8, m: usize) -> Result<ProblemDef> {
    if !(1..=4).contains(&variant) {
        return Err(Error::Config(alloc::format!(
            "unknown DTLZ variant {variant}"
        )));
    }
    if m < 2 {
        return Err(Error::Config(alloc::format!(
            "DTLZ needs at least 2 objectives, got {m}"
        )));
    }
    let k = if variant == 1 { 5 } else { 10 };
    let n = m + k - 1;
    Ok(ProblemDef {
        name: alloc::format!("dtlz{variant}"),
        m,
        bounds: Bounds::uniform(n, 0.0, 1.0)?,
        kind: Kind::Dtlz { variant, k },
    })
}

/// LSMOP`variant` (1..=3) with `m` objectives and `100 m` variables.
pub fn lsmop(variant: u8, m: usize) -> Result<ProblemDef> {
    if !(1..=3).contains(&variant) {
        return Err(Error::Config(alloc::format!(
            "unknown LSMOP variant {variant}"
        )));
    }
    if m < 3 {
        return Err(Error::Config(alloc::format!(
            "LSMOP needs at least 3 objectives, got {m}"
        )));
    }
    let n = 100 * m;
    let mut lower = vec![0.0; n];
    let mut upper = vec![10.0; n];
    for (l, u) in lower.iter_mut().zip(upper.iter_mut()).take(m - 1) {
        *l = 0.0;
        *u = 1.0;
    }
    Ok(ProblemDef {
        name: alloc::format!("lsmop{variant}"),
        m,
        bounds: Bounds::new(lower, upper)?,
        kind: Kind::Lsmop {
            variant,
            layout: LsmopLayout::new(m, n),
        },
    })
}

/// Looks a problem up by its registry name (`dtlz1`..`dtlz4`, `lsmop1`..`lsmop3`).
pub fn by_name(name: &str, m: usize) -> Result<ProblemDef> {
    let lower = name.to_ascii_lowercase();
    let parse = |rest: &str| {
        rest.parse::<u8>()
            .map_err(|_| Error::Config(alloc::format!("unknown problem `{name}`")))
    };
    if let Some(rest) = lower.strip_prefix("dtlz") {
        dtlz(parse(rest)?, m)
    } else if let Some(rest) = lower.strip_prefix("lsmop") {
        lsmop(parse(rest)?, m)
    } else {
        Err(Error::Config(alloc::format!("unknown problem `{name}`")))
    }
}

impl ProblemDef {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_objectives(&self) -> usize {
        self.m
    }

    pub fn num_variables(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn front_shape(&self) -> FrontShape {
        match self.kind {
            Kind::Dtlz { variant: 1, .. } | Kind::Lsmop { .. } => FrontShape::Linear,
            Kind::Dtlz { .. } => FrontShape::Spherical,
        }
    }

    /// Value of `sum f` on a linear front, or of `sum f^2` on a spherical one.
    pub fn front_constant(&self) -> f64 {
        match self.kind {
            Kind::Dtlz { variant: 1, .. } => 0.5,
            _ => 1.0,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        if x.len() != self.num_variables() {
            return Err(Error::shape(alloc::format!(
                "{} expects {} variables, got {}",
                self.name,
                self.num_variables(),
                x.len()
            )));
        }
        let m = self.m;
        let f = match &self.kind {
            Kind::Dtlz { variant, .. } => {
                let (pos, dist) = x.split_at(m - 1);
                match variant {
                    1 => linear_shape(pos, &vec![0.5 * (1.0 + g_rastrigin_like(dist)); m]),
                    2 => spherical_shape(pos, 1.0 + g_sphere(dist), 1.0),
                    3 => spherical_shape(pos, 1.0 + g_rastrigin_like(dist), 1.0),
                    _ => spherical_shape(pos, 1.0 + g_sphere(dist), 100.0),
                }
            }
            Kind::Lsmop { variant, layout } => lsmop_eval(*variant, layout, m, x),
        };
        Ok(ObjectiveVector(f))
    }

    /// At least `count` points on the true Pareto front, from the smallest simplex lattice
    /// that is large enough.
    pub fn sample_front(&self, count: usize) -> Vec<ObjectiveVector> {
        let m = self.m;
        let mut h = 1;
        while lattice_size(m, h) < count.max(1) as u128 {
            h += 1;
        }
        let weights = simplex_lattice(m, h).expect("M >= 2 and H >= 1 hold by construction");
        let c = self.front_constant();
        weights
            .into_iter()
            .map(|w| match self.front_shape() {
                FrontShape::Linear => ObjectiveVector(w.iter().map(|v| v * c).collect()),
                FrontShape::Spherical => {
                    let norm = libm::sqrt(w.iter().map(|v| v * v).sum::<f64>());
                    ObjectiveVector(w.iter().map(|v| v / norm).collect())
                }
            })
            .collect()
    }

    /// Reference front used for IGD: at least 500 points for M <= 3, 1000 otherwise.
    pub fn reference_front(&self) -> Vec<ObjectiveVector> {
        self.sample_front(if self.m <= 3 { 500 } else { 1000 })
    }
}

fn g_sphere(dist: &[f64]) -> f64 {
    dist.iter().map(|x| (x - 0.5) * (x - 0.5)).sum()
}

fn g_rastrigin_like(dist: &[f64]) -> f64 {
    let s: f64 = dist
        .iter()
        .map(|x| (x - 0.5) * (x - 0.5) - libm::cos(20.0 * PI * (x - 0.5)))
        .sum();
    100.0 * (dist.len() as f64 + s)
}

/// `f_1 = s_1 x_1..x_{M-1}`, `f_i = s_i x_1..x_{M-i}(1 - x_{M-i+1})`, `f_M = s_M (1 - x_1)`.
fn linear_shape(pos: &[f64], scale: &[f64]) -> Vec<f64> {
    let m = pos.len() + 1;
    (0..m)
        .map(|i| {
            let mut v = scale[i];
            for p in &pos[..m - 1 - i] {
                v *= p;
            }
            if i > 0 {
                v *= 1.0 - pos[m - 1 - i];
            }
            v
        })
        .collect()
}

fn spherical_shape(pos: &[f64], scale: f64, alpha: f64) -> Vec<f64> {
    let m = pos.len() + 1;
    let theta: Vec<f64> = pos
        .iter()
        .map(|p| if alpha == 1.0 { *p } else { libm::pow(*p, alpha) } * FRAC_PI_2)
        .collect();
    (0..m)
        .map(|i| {
            let mut v = scale;
            for t in &theta[..m - 1 - i] {
                v *= libm::cos(*t);
            }
            if i > 0 {
                v *= libm::sin(theta[m - 1 - i]);
            }
            v
        })
        .collect()
}

fn lsmop_eval(variant: u8, layout: &LsmopLayout, m: usize, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let x1 = x[0];
    let linked: Vec<f64> = x[m - 1..]
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let i = (m + j) as f64;
            (1.0 + i / n as f64) * v - 10.0 * x1
        })
        .collect();
    let g: Vec<f64> = (0..m)
        .map(|k| {
            let start = layout.offsets[k];
            let end = layout.offsets[k + 1];
            let len = layout.sublen[k];
            if end == start {
                return 0.0;
            }
            let odd = k % 2 == 0;
            let landscape: fn(&[f64]) -> f64 = match (variant, odd) {
                (1, _) => sphere,
                (2, true) => griewank,
                (2, false) => schwefel,
                (_, true) => rastrigin,
                (_, false) => rosenbrock,
            };
            let mut sum = 0.0;
            for j in 0..LSMOP_SUBCOMPONENTS {
                let a = start + j * len;
                let b = if j + 1 == LSMOP_SUBCOMPONENTS {
                    end
                } else {
                    a + len
                };
                if b > a {
                    sum += landscape(&linked[a..b]);
                }
            }
            sum / (end - start) as f64
        })
        .collect();
    let scale: Vec<f64> = g.iter().map(|v| 1.0 + v).collect();
    linear_shape(&x[..m - 1], &scale)
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn griewank(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| libm::cos(v / libm::sqrt((i + 1) as f64)))
        .product();
    s - p + 1.0
}

fn schwefel(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * libm::cos(2.0 * PI * v) + 10.0)
        .sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let a = w[0] * w[0] - w[1];
            let b = w[0] - 1.0;
            100.0 * a * a + b * b
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    fn optimum_dtlz(p: &ProblemDef, pos: &[f64]) -> Vec<f64> {
        let mut x = vec![0.5; p.num_variables()];
        x[..pos.len()].copy_from_slice(pos);
        x
    }

    #[test]
    fn dtlz_dimensions() {
        assert_eq!(dtlz(1, 3).unwrap().num_variables(), 7);
        assert_eq!(dtlz(2, 3).unwrap().num_variables(), 12);
        assert_eq!(dtlz(4, 10).unwrap().num_variables(), 19);
        assert!(matches!(dtlz(5, 3), Err(Error::Config(_))));
        assert!(matches!(dtlz(0, 3), Err(Error::Config(_))));
        assert!(dtlz(2, 1).is_err());
    }

    #[test]
    fn dtlz2_corner() {
        let p = dtlz(2, 3).unwrap();
        let f = p.evaluate(&optimum_dtlz(&p, &[0.0, 0.0])).unwrap();
        assert_eq!(f.0, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn dtlz1_optimum_sums_to_half() {
        let p = dtlz(1, 3).unwrap();
        let f = p.evaluate(&optimum_dtlz(&p, &[0.3, 0.9])).unwrap();
        assert!((f.iter().sum::<f64>() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dtlz4_matches_dtlz2_at_zero_position() {
        let p2 = dtlz(2, 4).unwrap();
        let p4 = dtlz(4, 4).unwrap();
        let mut x = vec![0.37; p2.num_variables()];
        x[0] = 0.0;
        x[1] = 0.0;
        x[2] = 0.0;
        assert_eq!(p2.evaluate(&x).unwrap(), p4.evaluate(&x).unwrap());
    }

    #[test]
    fn lsmop_dimensions_and_bounds() {
        let p = lsmop(1, 3).unwrap();
        assert_eq!(p.num_variables(), 300);
        assert_eq!(p.bounds().upper()[0], 1.0);
        assert_eq!(p.bounds().upper()[1], 1.0);
        assert_eq!(p.bounds().upper()[2], 10.0);
        assert!(matches!(lsmop(4, 3), Err(Error::Config(_))));
        assert!(lsmop(1, 2).is_err());
        for m in [3, 6, 8, 10] {
            let p = lsmop(2, m).unwrap();
            let Kind::Lsmop { layout, .. } = &p.kind else {
                unreachable!()
            };
            assert_eq!(*layout.offsets.last().unwrap(), p.num_variables() - m + 1);
            assert!(layout.sublen.iter().all(|s| *s >= 2));
        }
    }

    #[test]
    fn lsmop_optimum_lies_on_linear_front() {
        for variant in 1..=3 {
            let p = lsmop(variant, 3).unwrap();
            let n = p.num_variables();
            let mut x = vec![0.0; n];
            x[0] = 0.4;
            x[1] = 0.7;
            // choose each distance variable so that its linked value is the landscape optimum
            let target = if variant == 3 { 1.0 } else { 0.0 };
            for i in 2..n {
                let coeff = 1.0 + (i + 1) as f64 / n as f64;
                x[i] = (target + 10.0 * x[0]) / coeff;
            }
            let f = p.evaluate(&x).unwrap();
            if variant == 3 {
                // Rastrigin's optimum is at 0, Rosenbrock's at 1: the sum is only bounded below
                assert!(f.iter().sum::<f64>() >= 1.0 - 1e-12);
            } else {
                assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{f:?}");
            }
        }
    }

    #[test]
    fn fronts_satisfy_their_identities() {
        let p = dtlz(2, 3).unwrap();
        for f in p.sample_front(100) {
            assert!((f.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let p = dtlz(1, 3).unwrap();
        for f in p.sample_front(100) {
            assert!((f.iter().sum::<f64>() - 0.5).abs() < 1e-12);
        }
        let p = lsmop(3, 6).unwrap();
        for f in p.sample_front(50) {
            assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn smallest_front_sample() {
        let p = dtlz(1, 2).unwrap();
        let f = p.sample_front(1);
        assert_eq!(
            f,
            vec![
                ObjectiveVector(vec![0.5, 0.0]),
                ObjectiveVector(vec![0.0, 0.5])
            ]
        );
    }

    #[test]
    fn reference_front_sizes() {
        assert_eq!(dtlz(2, 3).unwrap().reference_front().len(), 528);
        assert!(dtlz(2, 10).unwrap().reference_front().len() >= 1000);
    }

    #[test]
    fn registry_names() {
        assert_eq!(by_name("DTLZ3", 3).unwrap().name(), "dtlz3");
        assert_eq!(by_name("lsmop2", 6).unwrap().name(), "lsmop2");
        assert!(by_name("zdt1", 2).is_err());
        assert!(by_name("dtlzx", 3).is_err());
    }

    #[test]
    fn evaluation_rejects_wrong_length() {
        assert!(matches!(
            dtlz(2, 3).unwrap().evaluate(&[0.5; 3]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn random_points_give_finite_objectives() {
        let mut rng = RandomSource::new(11);
        let problems = [
            dtlz(1, 3),
            dtlz(2, 3),
            dtlz(3, 3),
            dtlz(4, 3),
            lsmop(1, 3),
            lsmop(2, 3),
            lsmop(3, 3),
        ];
        for p in problems {
            let p = p.unwrap();
            let b = p.bounds().clone();
            for _ in 0..10_000 {
                let x: Vec<f64> = b
                    .lower()
                    .iter()
                    .zip(b.upper())
                    .map(|(l, u)| l + rng.uniform() * (u - l))
                    .collect();
                let f = p.evaluate(&x).unwrap();
                assert!(f.iter().all(|v| v.is_finite() && *v >= 0.0), "{}", p.name());
            }
        }
    }
}
