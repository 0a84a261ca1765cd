//! NSGA-II, used as the comparison algorithm.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::metrics::igd;
use crate::problems::ProblemDef;
use crate::rng::RandomSource;
use crate::types::{evaluate, init_population, Individual, ObjectiveVector, Population};
use crate::variation::{polynomial_mutation, sbx_crossover, MutationConfig};
use crate::RunOutcome;

/// `true` iff `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::shape(alloc::format!(
            "cannot compare {} and {} objectives",
            a.len(),
            b.len()
        )));
    }
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return Ok(false);
        }
        if x < y {
            strictly = true;
        }
    }
    Ok(strictly)
}

/// Non-domination fronts as index lists, best front first, indices ascending in each.
pub fn nondominated_fronts(objectives: &[ObjectiveVector]) -> Result<Vec<Vec<usize>>> {
    let n = objectives.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&objectives[i], &objectives[j])? {
                dominated_by_me[i].push(j);
                count[j] += 1;
            } else if dominates(&objectives[j], &objectives[i])? {
                dominated_by_me[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(core::mem::replace(&mut current, next));
    }
    Ok(fronts)
}

/// Crowding distance of each member of one front; boundary points get `+inf`.
pub fn crowding_distance(objectives: &[ObjectiveVector], front: &[usize]) -> Vec<f64> {
    let len = front.len();
    let mut dist = vec![0.0; len];
    if len == 0 {
        return dist;
    }
    let m = objectives[front[0]].len();
    let mut order: Vec<usize> = (0..len).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| {
            objectives[front[a]][k]
                .total_cmp(&objectives[front[b]][k])
                .then(a.cmp(&b))
        });
        let lo = objectives[front[order[0]]][k];
        let hi = objectives[front[order[len - 1]]][k];
        dist[order[0]] = f64::INFINITY;
        dist[order[len - 1]] = f64::INFINITY;
        if hi - lo <= 0.0 {
            continue;
        }
        for w in 1..len.saturating_sub(1) {
            let gap = objectives[front[order[w + 1]]][k] - objectives[front[order[w - 1]]][k];
            dist[order[w]] += gap / (hi - lo);
        }
    }
    dist
}

/// Members with their front index and crowding distance.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPopulation {
    pub members: Vec<Individual>,
    pub rank: Vec<usize>,
    pub crowding: Vec<f64>,
}

pub fn fast_nondominated_sort(pop: &Population) -> Result<RankedPopulation> {
    let objectives = pop.objectives()?;
    let fronts = nondominated_fronts(&objectives)?;
    let mut rank = vec![0; pop.len()];
    let mut crowding = vec![0.0; pop.len()];
    for (r, front) in fronts.iter().enumerate() {
        let d = crowding_distance(&objectives, front);
        for (&i, di) in front.iter().zip(d) {
            rank[i] = r;
            crowding[i] = di;
        }
    }
    Ok(RankedPopulation {
        members: pop.members.clone(),
        rank,
        crowding,
    })
}

impl RankedPopulation {
    /// Crowded comparison: lower rank first, then larger crowding distance.
    fn better(&self, a: usize, b: usize) -> Ordering {
        self.rank[a]
            .cmp(&self.rank[b])
            .then_with(|| self.crowding[b].total_cmp(&self.crowding[a]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nsga2Config {
    pub crossover_probability: f64,
    pub eta_c: f64,
    pub mutation: MutationConfig,
}

impl Default for Nsga2Config {
    fn default() -> Self {
        Self {
            crossover_probability: 1.0,
            eta_c: 20.0,
            mutation: MutationConfig::default(),
        }
    }
}

/// Keeps the best `size` members by rank, breaking the last front by crowding distance.
pub fn environmental_selection(pop: &Population, size: usize) -> Result<Population> {
    let ranked = fast_nondominated_sort(pop)?;
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| ranked.better(a, b).then(a.cmp(&b)));
    order.truncate(size);
    let members = order.into_iter().map(|i| pop.members[i].clone()).collect();
    Ok(Population::new(members, pop.generation))
}

fn tournament(ranked: &RankedPopulation, rng: &mut RandomSource) -> usize {
    let n = ranked.members.len();
    let a = rng.index(n);
    let b = rng.index(n);
    if ranked.better(b, a) == Ordering::Less {
        b
    } else {
        a
    }
}

/// One generation: tournament mating, SBX, polynomial mutation and elitist truncation
/// back to the parent population size. Returns the new population and evaluations spent.
pub fn nsga2_generation(
    pop: &Population,
    problem: &ProblemDef,
    cfg: &Nsga2Config,
    rng: &mut RandomSource,
) -> Result<(Population, usize)> {
    let n = pop.len();
    if n == 0 {
        return Err(Error::Empty("NSGA-II parent population"));
    }
    let ranked = fast_nondominated_sort(pop)?;
    let bounds = problem.bounds();
    let mut offspring = Vec::with_capacity(n + 1);
    while offspring.len() < n {
        let p1 = &ranked.members[tournament(&ranked, rng)].x;
        let p2 = &ranked.members[tournament(&ranked, rng)].x;
        let (c1, c2) = sbx_crossover(p1, p2, bounds, cfg.eta_c, cfg.crossover_probability, rng);
        for c in [c1, c2] {
            let x = polynomial_mutation(&c, bounds, &cfg.mutation, rng);
            offspring.push(Individual { x, f: None });
        }
    }
    offspring.truncate(n);
    let mut children = Population::new(offspring, pop.generation);
    let evals = evaluate(&mut children, problem)?;
    let mut union = pop.clone();
    union.extend(children);
    let mut next = environmental_selection(&union, n)?;
    next.generation = pop.generation + 1;
    Ok((next, evals))
}

/// Full NSGA-II run for `generations` generations with IGD recorded after each one.
pub fn run_nsga2(
    problem: &ProblemDef,
    size: usize,
    generations: usize,
    cfg: &Nsga2Config,
    reference: &[ObjectiveVector],
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    cfg.mutation.validate()?;
    if generations == 0 {
        return Err(Error::config("generation budget must be at least 1"));
    }
    let mut pop = init_population(problem, size, rng)?;
    let mut evaluations = evaluate(&mut pop, problem)?;
    let mut igd_trace = Vec::with_capacity(generations);
    for _ in 0..generations {
        let (next, evals) = nsga2_generation(&pop, problem, cfg, rng)?;
        evaluations += evals;
        pop = next;
        igd_trace.push(igd(reference, &pop.objectives()?)?.value);
    }
    Ok(RunOutcome {
        igd_trace,
        final_population: pop,
        evaluations,
        gan_losses: Vec::new(),
        networks: None,
    })
}
