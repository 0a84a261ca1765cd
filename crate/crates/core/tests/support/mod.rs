//! Naive reference implementations used as test oracles, plus random instance builders.
//! Written independently of the library and kept deliberately loop-based.

#![allow(dead_code)]

use rveawg_core::types::{Individual, ObjectiveVector, Population};
use rveawg_core::RandomSource;

/// Mean over `reference` of the distance to the closest member of `solutions`.
pub fn naive_igd(reference: &[Vec<f64>], solutions: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for r in reference {
        let mut best = f64::INFINITY;
        for s in solutions {
            let mut d2 = 0.0;
            for k in 0..r.len() {
                d2 += (r[k] - s[k]) * (r[k] - s[k]);
            }
            let d = d2.sqrt();
            if d < best {
                best = d;
            }
        }
        total += best;
    }
    total / reference.len() as f64
}

fn naive_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut better = false;
    for k in 0..a.len() {
        if a[k] > b[k] {
            return false;
        }
        if a[k] < b[k] {
            better = true;
        }
    }
    better
}

/// Peels off fronts one at a time by counting dominators among the remaining points.
pub fn brute_force_fronts(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let mut front = Vec::new();
        for &i in &remaining {
            let dominators = remaining
                .iter()
                .filter(|&&j| naive_dominates(&points[j], &points[i]))
                .count();
            if dominators == 0 {
                front.push(i);
            }
        }
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut d = 0.0;
    for k in 0..a.len() {
        d += a[k] * b[k];
    }
    d / (norm(a) * norm(b))
}

/// Reference-vector-guided selection spelled out step by step: translate by the column
/// minimum, assign by largest cosine, penalise by angle, keep the smallest APD per vector.
/// Returns the kept population indices in vector order.
pub fn naive_select(
    objectives: &[Vec<f64>],
    vectors: &[Vec<f64>],
    t: usize,
    t_max: usize,
    alpha: f64,
) -> Vec<usize> {
    let m = objectives[0].len();
    let mut z_min = vec![f64::INFINITY; m];
    for f in objectives {
        for k in 0..m {
            if f[k] < z_min[k] {
                z_min[k] = f[k];
            }
        }
    }
    let translated: Vec<Vec<f64>> = objectives
        .iter()
        .map(|f| (0..m).map(|k| f[k] - z_min[k]).collect())
        .collect();

    let mut gamma = vec![std::f64::consts::FRAC_PI_2; vectors.len()];
    for j in 0..vectors.len() {
        let mut smallest = f64::INFINITY;
        for k in 0..vectors.len() {
            if k != j {
                let a = cosine(&vectors[j], &vectors[k]).clamp(-1.0, 1.0).acos();
                if a < smallest {
                    smallest = a;
                }
            }
        }
        if smallest.is_finite() {
            gamma[j] = smallest;
        }
    }

    let mut best: Vec<Option<(usize, f64)>> = vec![None; vectors.len()];
    for (i, row) in translated.iter().enumerate() {
        let length = norm(row);
        let (j, angle) = if length == 0.0 {
            (0, 0.0)
        } else {
            let mut j = 0;
            let mut c = f64::NEG_INFINITY;
            for (k, v) in vectors.iter().enumerate() {
                let ck = cosine(row, v);
                if ck > c {
                    c = ck;
                    j = k;
                }
            }
            (j, c.clamp(-1.0, 1.0).acos())
        };
        let penalty = m as f64 * (t as f64 / t_max as f64).powf(alpha) * angle / gamma[j];
        let apd = (1.0 + penalty) * length;
        let better = match best[j] {
            None => true,
            Some((_, b)) => apd < b,
        };
        if better {
            best[j] = Some((i, apd));
        }
    }
    best.into_iter().flatten().map(|(i, _)| i).collect()
}

/// Mean via a first pass for a rough centre and a second pass for the correction.
pub fn two_pass_mean(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let rough = values.iter().sum::<f64>() / n;
    let correction = values.iter().map(|v| v - rough).sum::<f64>() / n;
    rough + correction
}

pub fn random_points(count: usize, m: usize, rng: &mut RandomSource) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..m).map(|_| rng.uniform()).collect())
        .collect()
}

/// Evaluated population with the given objective rows and dummy decision vectors.
pub fn population_of(objectives: &[Vec<f64>]) -> Population {
    let members = objectives
        .iter()
        .enumerate()
        .map(|(i, f)| Individual {
            x: vec![i as f64].into(),
            f: Some(ObjectiveVector(f.clone())),
        })
        .collect();
    Population::new(members, 0)
}

pub fn to_objective_vectors(rows: &[Vec<f64>]) -> Vec<ObjectiveVector> {
    rows.iter().cloned().map(ObjectiveVector).collect()
}

pub mod gradients {
    //! Central finite differences against the analytic gradients of `Mlp`.

    use rveawg_core::nn::{Activation, Matrix, Mlp};
    use rveawg_core::RandomSource;

    pub const H: f64 = 1e-5;

    pub fn rel_err(analytic: f64, numeric: f64) -> f64 {
        (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6)
    }

    fn random_batch(rows: usize, cols: usize, rng: &mut RandomSource) -> Matrix {
        Matrix::from_vec(
            rows,
            cols,
            (0..rows * cols)
                .map(|_| 2.0 * rng.uniform() - 1.0)
                .collect(),
        )
        .unwrap()
    }

    /// `sum_b sum_o w_bo * out_bo` for fixed weights `w`.
    fn weighted_output(net: &Mlp, x: &Matrix, w: &Matrix) -> f64 {
        let out = net.predict(x).unwrap();
        out.as_slice()
            .iter()
            .zip(w.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Random three-layer net with non-zero biases.
    pub fn random_net(seed: u64, output: Activation, out: usize) -> (Mlp, RandomSource) {
        let mut rng = RandomSource::new(seed);
        let inputs = 2 + rng.index(5);
        let h1 = 2 + rng.index(6);
        let h2 = 2 + rng.index(6);
        let mut net = Mlp::new(&[inputs, h1, h2, out], output, &mut rng).unwrap();
        let mut p = net.flat_params();
        for v in &mut p {
            *v += 0.1 * rng.standard_normal();
        }
        net.set_flat_params(&p).unwrap();
        (net, rng)
    }

    fn perturbed(net: &Mlp, i: usize, delta: f64) -> Mlp {
        let mut p = net.flat_params();
        p[i] += delta;
        let mut copy = net.clone();
        copy.set_flat_params(&p).unwrap();
        copy
    }

    /// Worst relative error of `backward`, over parameters and inputs.
    pub fn backward_error(seed: u64) -> f64 {
        let output = if seed.is_multiple_of(2) {
            Activation::Tanh
        } else {
            Activation::Linear
        };
        let (net, mut rng) = random_net(seed, output, 3);
        let x = random_batch(4, net.inputs(), &mut rng);
        let w = random_batch(4, 3, &mut rng);
        let analytic = net.backward(&net.forward(&x).unwrap(), &w).unwrap();
        let mut worst: f64 = 0.0;
        for (i, g) in analytic.params.flatten().iter().enumerate() {
            let numeric = (weighted_output(&perturbed(&net, i, H), &x, &w)
                - weighted_output(&perturbed(&net, i, -H), &x, &w))
                / (2.0 * H);
            worst = worst.max(rel_err(*g, numeric));
        }
        for b in 0..x.rows() {
            for j in 0..x.cols() {
                let mut xp = x.clone();
                xp.row_mut(b)[j] += H;
                let mut xm = x.clone();
                xm.row_mut(b)[j] -= H;
                let numeric =
                    (weighted_output(&net, &xp, &w) - weighted_output(&net, &xm, &w)) / (2.0 * H);
                worst = worst.max(rel_err(analytic.input.row(b)[j], numeric));
            }
        }
        worst
    }

    /// Worst relative error of the critic's input gradient.
    pub fn input_gradient_error(seed: u64) -> f64 {
        let (net, mut rng) = random_net(seed, Activation::Linear, 1);
        let x = random_batch(3, net.inputs(), &mut rng);
        let g = net.input_gradient(&x).unwrap();
        let mut worst: f64 = 0.0;
        for b in 0..x.rows() {
            for j in 0..x.cols() {
                let mut xp = Matrix::from_rows(&[x.row(b).to_vec()]).unwrap();
                let mut xm = xp.clone();
                xp.row_mut(0)[j] += H;
                xm.row_mut(0)[j] -= H;
                let numeric = (net.predict(&xp).unwrap().row(0)[0]
                    - net.predict(&xm).unwrap().row(0)[0])
                    / (2.0 * H);
                worst = worst.max(rel_err(g.row(b)[j], numeric));
            }
        }
        worst
    }

    /// Worst relative error of the gradient-penalty parameter gradient.
    pub fn penalty_error(seed: u64) -> f64 {
        let (net, mut rng) = random_net(seed, Activation::Linear, 1);
        let x = random_batch(4, net.inputs(), &mut rng);
        let (_, grads) = net.gradient_penalty_backward(&x).unwrap();
        let mut worst: f64 = 0.0;
        for (i, g) in grads.flatten().iter().enumerate() {
            let plus = perturbed(&net, i, H)
                .gradient_penalty_backward(&x)
                .unwrap()
                .0;
            let minus = perturbed(&net, i, -H)
                .gradient_penalty_backward(&x)
                .unwrap()
                .0;
            worst = worst.max(rel_err(*g, (plus - minus) / (2.0 * H)));
        }
        worst
    }
}
