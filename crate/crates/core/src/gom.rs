//! Core variation engine: UPGMA linkage trees, per-group Gaussian sampling
//! with gene-pool optimal mixing, constraint-domination acceptance and the
//! 5% deterioration-acceptance rule.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::cholesky;
use crate::real::{cmp_real, Real};

/// One node of a linkage tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkageNode {
    pub indices: Vec<usize>,
    pub children: Option<(usize, usize)>,
}

/// Linkage model: a merge hierarchy over base variable groups plus the list
/// of nodes that gene-pool optimal mixing actually iterates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkageModel {
    pub nodes: Vec<LinkageNode>,
    pub mix_nodes: Vec<usize>,
    pub base_count: usize,
}

impl LinkageModel {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Absolute sample correlation between two variables over the population.
fn abs_correlation<S: Real>(samples: &[Vec<S>], a: usize, b: usize) -> S {
    let n = S::of_usize(samples.len());
    let mean = |v: usize| -> S { samples.iter().map(|g| g[v]).sum::<S>() / n };
    let (ma, mb) = (mean(a), mean(b));
    let mut cov = S::zero();
    let mut va = S::zero();
    let mut vb = S::zero();
    for g in samples {
        let da = g[a] - ma;
        let db = g[b] - mb;
        cov = cov + da * db;
        va = va + da * da;
        vb = vb + db * db;
    }
    if va <= S::zero() || vb <= S::zero() {
        return S::zero();
    }
    (cov / (va.sqrt() * vb.sqrt())).abs()
}

/// Agglomerative UPGMA tree over the given base groups, using the mean
/// absolute correlation between group variables as similarity. Ties merge
/// the lexicographically lowest active pair. Mixing iterates every node of
/// the tree, root included.
pub fn build_upgma_tree<S: Real>(samples: &[Vec<S>], base_groups: Vec<Vec<usize>>) -> LinkageModel {
    let g = base_groups.len();
    assert!(g >= 1);
    let mut nodes: Vec<LinkageNode> = base_groups
        .into_iter()
        .map(|indices| LinkageNode { indices, children: None })
        .collect();
    // group-level similarities
    let mut sim = vec![S::zero(); (2 * g - 1) * (2 * g - 1)];
    let idx = |a: usize, b: usize| a * (2 * g - 1) + b;
    for a in 0..g {
        for b in a + 1..g {
            let mut total = S::zero();
            let mut count = 0usize;
            for &va in &nodes[a].indices {
                for &vb in &nodes[b].indices {
                    total = total + abs_correlation(samples, va, vb);
                    count += 1;
                }
            }
            let value = if count == 0 { S::zero() } else { total / S::of_usize(count) };
            sim[idx(a, b)] = value;
            sim[idx(b, a)] = value;
        }
    }
    let mut active: Vec<usize> = (0..g).collect();
    let mut leaf_count: Vec<usize> = vec![1; 2 * g - 1];
    while active.len() > 1 {
        let (mut best_a, mut best_b) = (0usize, 1usize);
        let mut best_sim = S::neg_infinity();
        for i in 0..active.len() {
            for j in i + 1..active.len() {
                let (a, b) = (active[i], active[j]);
                let s = sim[idx(a, b)];
                if s > best_sim {
                    best_sim = s;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        let mut indices = nodes[best_a].indices.clone();
        indices.extend_from_slice(&nodes[best_b].indices);
        let new_id = nodes.len();
        nodes.push(LinkageNode { indices, children: Some((best_a, best_b)) });
        leaf_count[new_id] = leaf_count[best_a] + leaf_count[best_b];
        active.retain(|&x| x != best_a && x != best_b);
        for &k in &active {
            let (wa, wb) = (S::of_usize(leaf_count[best_a]), S::of_usize(leaf_count[best_b]));
            let merged = (wa * sim[idx(best_a, k)] + wb * sim[idx(best_b, k)]) / (wa + wb);
            sim[idx(new_id, k)] = merged;
            sim[idx(k, new_id)] = merged;
        }
        active.push(new_id);
    }
    let mix_nodes: Vec<usize> = (0..nodes.len()).collect();
    LinkageModel { nodes, mix_nodes, base_count: g }
}

/// Fitness under constraint domination. Objectives are maximized, the
/// constraint is minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fitness<S> {
    Scalar { value: S, constraint: S },
    Bi { objectives: [S; 2], constraint: S },
}

impl<S: Real> Fitness<S> {
    pub fn constraint(&self) -> S {
        match *self {
            Fitness::Scalar { constraint, .. } => constraint,
            Fitness::Bi { constraint, .. } => constraint,
        }
    }
}

fn dominates_max<S: Real>(a: [S; 2], b: [S; 2]) -> bool {
    a[0] >= b[0] && a[1] >= b[1] && (a[0] > b[0] || a[1] > b[1])
}

/// Constraint-domination acceptance: a lower constraint always wins; at equal
/// constraint a scalar candidate needs at least the old value, a bi-objective
/// candidate is accepted unless the old solution strictly dominates it.
pub fn accept_constraint_domination<S: Real>(old: &Fitness<S>, new: &Fitness<S>) -> bool {
    let (co, cn) = (old.constraint(), new.constraint());
    if cn < co {
        return true;
    }
    if cn > co {
        return false;
    }
    match (old, new) {
        (Fitness::Scalar { value: vo, .. }, Fitness::Scalar { value: vn, .. }) => vn >= vo,
        (Fitness::Bi { objectives: fo, .. }, Fitness::Bi { objectives: fn_, .. }) => {
            !dominates_max(*fo, *fn_)
        }
        _ => panic!("mixed fitness kinds"),
    }
}

/// Whether `new` is a strict improvement over `old` (used for the step-size
/// adaptation statistics).
pub fn strictly_better<S: Real>(old: &Fitness<S>, new: &Fitness<S>) -> bool {
    let (co, cn) = (old.constraint(), new.constraint());
    if cn < co {
        return true;
    }
    if cn > co {
        return false;
    }
    match (old, new) {
        (Fitness::Scalar { value: vo, .. }, Fitness::Scalar { value: vn, .. }) => vn > vo,
        (Fitness::Bi { objectives: fo, .. }, Fitness::Bi { objectives: fn_, .. }) => {
            dominates_max(*fn_, *fo)
        }
        _ => panic!("mixed fitness kinds"),
    }
}

/// Maximum-likelihood Gaussian for one linkage group.
#[derive(Debug, Clone)]
pub struct GroupDistribution<S: Real> {
    pub indices: Vec<usize>,
    pub mean: Vec<S>,
    chol: Vec<S>,
}

impl<S: Real> GroupDistribution<S> {
    pub fn estimate(indices: &[usize], selected: &[Vec<S>]) -> Self {
        let g = indices.len();
        let n = selected.len().max(1);
        let nf = S::of_usize(n);
        let mut mean = vec![S::zero(); g];
        for genotype in selected {
            for (m, &v) in mean.iter_mut().zip(indices) {
                *m = *m + genotype[v];
            }
        }
        for m in &mut mean {
            *m = *m / nf;
        }
        let mut cov = vec![S::zero(); g * g];
        for genotype in selected {
            for (a, &va) in indices.iter().enumerate() {
                let da = genotype[va] - mean[a];
                for (b, &vb) in indices.iter().enumerate() {
                    cov[a * g + b] = cov[a * g + b] + da * (genotype[vb] - mean[b]);
                }
            }
        }
        for c in &mut cov {
            *c = *c / nf;
        }
        let chol = cholesky(&cov, g);
        Self { indices: indices.to_vec(), mean, chol }
    }

    /// Sample group values: `mean + multiplier * L z`.
    pub fn sample<R: Rng + ?Sized>(&self, multiplier: S, rng: &mut R) -> Vec<S> {
        let g = self.mean.len();
        let z: Vec<S> = (0..g).map(|_| S::sample_standard_normal(rng)).collect();
        let mut out = self.mean.clone();
        for i in 0..g {
            let mut shift = S::zero();
            for (k, &zk) in z.iter().enumerate().take(i + 1) {
                shift = shift + self.chol[i * g + k] * zk;
            }
            out[i] = out[i] + multiplier * shift;
        }
        out
    }
}

/// Per-population adaptation state carried between generations (and across
/// cluster registration).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptState<S> {
    pub multiplier: S,
}

impl<S: Real> Default for AdaptState<S> {
    fn default() -> Self {
        Self { multiplier: S::one() }
    }
}

impl<S: Real> AdaptState<S> {
    /// Step-size update from the measured improvement rate of one generation.
    pub fn update(&mut self, improvements: usize, events: usize) {
        if events == 0 {
            return;
        }
        let rate = S::of_usize(improvements) / S::of_usize(events);
        if rate > S::of(0.2) {
            self.multiplier = (self.multiplier * S::of(1.25)).min(S::of(10.0));
        } else if rate < S::of(0.05) {
            self.multiplier = (self.multiplier * S::of(0.9)).max(S::of(1e-6));
        }
    }
}

pub enum StepOutcome {
    Accepted { improved: bool },
    ForcedAccept,
    Rejected,
    Stop,
}

/// One gene-pool optimal mixing event: resample the group values from the
/// distribution, keep them when the acceptance rule passes, or, on failure,
/// with `deterioration_prob`; otherwise restore the parent bit-exactly.
/// A budget-exhausted evaluation restores the parent and signals stop.
#[allow(clippy::too_many_arguments)]
pub fn gom_step<S: Real, Sol: Clone, R: Rng + ?Sized>(
    solution: &mut Sol,
    fitness_of: &dyn Fn(&Sol) -> Fitness<S>,
    distribution: &GroupDistribution<S>,
    multiplier: S,
    resample: &mut dyn FnMut(&mut Sol, &[usize], &[S]) -> Result<()>,
    deterioration_prob: S,
    rng: &mut R,
) -> StepOutcome {
    let parent = solution.clone();
    let old_fitness = fitness_of(&parent);
    let values = distribution.sample(multiplier, rng);
    match resample(solution, &distribution.indices, &values) {
        Ok(()) => {}
        Err(Error::BudgetExhausted) => {
            *solution = parent;
            return StepOutcome::Stop;
        }
        Err(_) => {
            *solution = parent;
            return StepOutcome::Rejected;
        }
    }
    let new_fitness = fitness_of(solution);
    if accept_constraint_domination(&old_fitness, &new_fitness) {
        let improved = strictly_better(&old_fitness, &new_fitness);
        return StepOutcome::Accepted { improved };
    }
    if S::sample_unit(rng) < deterioration_prob {
        return StepOutcome::ForcedAccept;
    }
    *solution = parent;
    StepOutcome::Rejected
}

/// Result of one population generation.
#[derive(Debug, Clone, Copy, Default)]
pub struct GenerationStats {
    pub events: usize,
    pub improvements: usize,
    pub stopped: bool,
}

/// One gene-pool optimal mixing generation over a population: estimate the
/// per-group Gaussians from the better half, then mix every member through
/// the model's groups in shuffled order.
#[allow(clippy::too_many_arguments)]
pub fn gom_generation<S: Real, Sol: Clone, R: Rng + ?Sized>(
    population: &mut [Sol],
    model: &LinkageModel,
    genotype_of: &dyn Fn(&Sol) -> Vec<S>,
    fitness_of: &dyn Fn(&Sol) -> Fitness<S>,
    resample: &mut dyn FnMut(&mut Sol, &[usize], &[S]) -> Result<()>,
    state: &mut AdaptState<S>,
    deterioration_prob: S,
    rng: &mut R,
) -> GenerationStats {
    let n = population.len();
    let mut stats = GenerationStats::default();
    if n == 0 {
        return stats;
    }
    let selected = select_top_half(population, fitness_of, genotype_of);
    let distributions: Vec<GroupDistribution<S>> = model
        .mix_nodes
        .iter()
        .map(|&id| GroupDistribution::estimate(&model.nodes[id].indices, &selected))
        .collect();
    let mut order: Vec<usize> = (0..distributions.len()).collect();
    for member in population.iter_mut() {
        if stats.stopped {
            break;
        }
        order.shuffle(rng);
        for &d in &order {
            match gom_step(
                member,
                fitness_of,
                &distributions[d],
                state.multiplier,
                resample,
                deterioration_prob,
                rng,
            ) {
                StepOutcome::Accepted { improved } => {
                    stats.events += 1;
                    stats.improvements += usize::from(improved);
                }
                StepOutcome::ForcedAccept => stats.events += 1,
                StepOutcome::Rejected => stats.events += 1,
                StepOutcome::Stop => {
                    stats.stopped = true;
                    break;
                }
            }
        }
    }
    state.update(stats.improvements, stats.events);
    stats
}

/// Genotypes of the better half of the population (at least two members when
/// available) under constraint domination.
fn select_top_half<S: Real, Sol>(
    population: &[Sol],
    fitness_of: &dyn Fn(&Sol) -> Fitness<S>,
    genotype_of: &dyn Fn(&Sol) -> Vec<S>,
) -> Vec<Vec<S>> {
    let n = population.len();
    let fits: Vec<Fitness<S>> = population.iter().map(fitness_of).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // domination count for bi-objective ranking
    let dom_count: Vec<usize> = fits
        .iter()
        .map(|f| match f {
            Fitness::Bi { objectives, .. } => fits
                .iter()
                .filter(|g| match g {
                    Fitness::Bi { objectives: other, .. } => dominates_max(*other, *objectives),
                    _ => false,
                })
                .count(),
            _ => 0,
        })
        .collect();
    order.sort_by(|&a, &b| {
        cmp_real(&fits[a].constraint(), &fits[b].constraint())
            .then(dom_count[a].cmp(&dom_count[b]))
            .then_with(|| match (&fits[a], &fits[b]) {
                (Fitness::Scalar { value: va, .. }, Fitness::Scalar { value: vb, .. }) => {
                    cmp_real(vb, va)
                }
                (Fitness::Bi { objectives: fa, .. }, Fitness::Bi { objectives: fb, .. }) => {
                    cmp_real(&fb[0], &fa[0])
                }
                _ => std::cmp::Ordering::Equal,
            })
            .then(a.cmp(&b))
    });
    let take = (n / 2).max(2.min(n)).max(1);
    order[..take].iter().map(|&i| genotype_of(&population[i])).collect()
}
