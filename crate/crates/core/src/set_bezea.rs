//! Set-BezEA: a fixed number of Bézier curves per genotype, a bi-objective
//! fitness with niche-count hypervolume sharing and a cosine diversity
//! objective, adaptive steering, a two-layer linkage structure and partial
//! evaluations per curve.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::bezier::{BezierSolution, ControlPolygon};
use crate::error::{Error, Result};
use crate::gom::{gom_generation, AdaptState, Fitness, LinkageModel, LinkageNode};
use crate::linalg::{dist, dot, norm};
use crate::mm_bezea::evaluate_curve;
use crate::niching::BezierHvtMemo;
use crate::problems::{EvaluationBudget, Problem};
use crate::real::{cmp_real, Real};
use crate::record::{ReportedSet, SetRunRecord, SetTraceRow};

/// Convention for the diversity objective over flattened control-point
/// vectors (always maximized).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiversityKind {
    /// Sum of `1 - cos` over curve pairs: rewards curves pointing apart.
    OneMinusCosine,
    /// Raw cosine-similarity sum, for fidelity experiments.
    CosineSimilarity,
}

impl DiversityKind {
    pub fn label(&self) -> &'static str {
        match self {
            DiversityKind::OneMinusCosine => "one-minus-cos",
            DiversityKind::CosineSimilarity => "cosine-sim",
        }
    }
}

/// Linearly ramped steering schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringSchedule<S> {
    pub start: S,
    pub end: S,
    pub ramp_generations: u64,
}

impl<S: Real> Default for SteeringSchedule<S> {
    fn default() -> Self {
        Self { start: S::of(0.50), end: S::of(0.99), ramp_generations: 50 }
    }
}

impl<S: Real> SteeringSchedule<S> {
    /// Threshold fraction at generation `g`: start at `start`, ramp linearly
    /// to `end` over `ramp_generations` generations, then stay there.
    pub fn threshold(&self, generation: u64) -> S {
        let g = generation.min(self.ramp_generations);
        let ratio = if self.ramp_generations == 0 {
            S::one()
        } else {
            S::of_usize(g as usize) / S::of_usize(self.ramp_generations as usize)
        };
        self.start + (self.end - self.start) * ratio
    }
}

/// Steering penalty added to the constraint for domination comparisons.
pub fn steering_penalty<S: Real>(f0: S, best_f0: S, threshold: S) -> S {
    (threshold * best_f0 - f0).max(S::zero())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetBezEaConfig<S> {
    pub curves: usize,
    pub population: usize,
    pub test_points: usize,
    pub control_points: usize,
    pub budget: u64,
    pub deterioration_prob: S,
    pub diversity: DiversityKind,
    pub steering: SteeringSchedule<S>,
}

impl<S: Real> Default for SetBezEaConfig<S> {
    fn default() -> Self {
        Self {
            curves: 2,
            population: 76,
            test_points: 7,
            control_points: 2,
            budget: 200_000,
            deterioration_prob: S::of(0.05),
            diversity: DiversityKind::OneMinusCosine,
            steering: SteeringSchedule::default(),
        }
    }
}

/// A set of `b` Bézier curves with cached per-curve evaluations, niche
/// counts, and the aggregated fitness values.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierSetSolution<S: Real> {
    pub curves: Vec<BezierSolution<S>>,
    pub niche_counts: Vec<usize>,
    pub f0: S,
    pub f1: S,
    pub constraint: S,
}

impl<S: Real> BezierSetSolution<S> {
    pub fn genotype(&self) -> Vec<S> {
        self.curves.iter().flat_map(|c| c.polygon.flatten()).collect()
    }
}

/// Evaluation context: problem handle, niching radius, per-generation
/// hill-valley memoization and the diversity convention.
pub struct SetEvaluator<'a, S: Real> {
    problem: &'a Problem<S>,
    pub p: usize,
    pub q: usize,
    pub b: usize,
    population_size: usize,
    diversity: DiversityKind,
    radius: S,
    center: Vec<S>,
    pub memo: BezierHvtMemo,
}

impl<'a, S: Real> SetEvaluator<'a, S> {
    pub fn new(problem: &'a Problem<S>, config: &SetBezEaConfig<S>) -> Self {
        let dim = problem.dim();
        let radius = (problem.box_volume() / S::of_usize(config.population.max(1)))
            .powf(S::one() / S::of_usize(dim));
        let mid: Vec<S> = problem
            .lower()
            .iter()
            .zip(problem.upper())
            .map(|(&lo, &hi)| (lo + hi) / S::of(2.0))
            .collect();
        let mut center = Vec::with_capacity(config.control_points * dim);
        for _ in 0..config.control_points {
            center.extend_from_slice(&mid);
        }
        Self {
            problem,
            p: config.test_points,
            q: config.control_points,
            b: config.curves,
            population_size: config.population,
            diversity: config.diversity,
            radius,
            center,
            memo: BezierHvtMemo::new(),
        }
    }

    /// Mean distance between aligned control points of two curves.
    fn curve_distance(a: &BezierSolution<S>, b: &BezierSolution<S>) -> S {
        let q = a.polygon.num_points();
        let total: S = (0..q)
            .map(|l| dist(&a.polygon.points[l], &b.polygon.points[l]))
            .sum();
        total / S::of_usize(q)
    }

    /// Same-niche check for two curves of one set solution: curves within
    /// the niching radius share a niche outright, farther pairs take the
    /// Bézier hill-valley test.
    pub fn same_niche(
        &mut self,
        a: &BezierSolution<S>,
        b: &BezierSolution<S>,
        budget: &mut EvaluationBudget,
    ) -> Result<bool> {
        if Self::curve_distance(a, b) <= self.radius {
            return Ok(true);
        }
        self.memo
            .same_niche(a, b, self.problem, self.population_size, budget)
    }

    fn diversity_value(&self, curves: &[BezierSolution<S>]) -> S {
        let centered: Vec<Vec<S>> = curves
            .iter()
            .map(|c| {
                c.polygon
                    .flatten()
                    .iter()
                    .zip(&self.center)
                    .map(|(&v, &m)| v - m)
                    .collect()
            })
            .collect();
        let mut total = S::zero();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let (ni, nj) = (norm(&centered[i]), norm(&centered[j]));
                let cos = if ni == S::zero() && nj == S::zero() {
                    S::one()
                } else if ni == S::zero() || nj == S::zero() {
                    S::zero()
                } else {
                    dot(&centered[i], &centered[j]) / (ni * nj)
                };
                total = total + match self.diversity {
                    DiversityKind::OneMinusCosine => S::one() - cos,
                    DiversityKind::CosineSimilarity => cos,
                };
            }
        }
        total
    }

    /// Recompute niche counts and the aggregate objectives from the cached
    /// per-curve values. Only niche tests may consume budget here.
    fn refresh_aggregates(
        &mut self,
        sol: &mut BezierSetSolution<S>,
        budget: &mut EvaluationBudget,
    ) -> Result<()> {
        let b = sol.curves.len();
        let mut counts = vec![1usize; b];
        for i in 0..b {
            for j in i + 1..b {
                if self.same_niche(&sol.curves[i], &sol.curves[j], budget)? {
                    counts[i] += 1;
                    counts[j] += 1;
                }
            }
        }
        sol.niche_counts = counts;
        sol.f0 = sol
            .curves
            .iter()
            .zip(&sol.niche_counts)
            .map(|(c, &n)| c.hv / S::of_usize(n))
            .sum();
        sol.f1 = self.diversity_value(&sol.curves);
        sol.constraint = sol.curves.iter().map(|c| c.constraint).sum();
        Ok(())
    }

    /// Full evaluation of a set of control polygons.
    pub fn evaluate_full(
        &mut self,
        polygons: Vec<ControlPolygon<S>>,
        budget: &mut EvaluationBudget,
    ) -> Result<BezierSetSolution<S>> {
        let mut curves = Vec::with_capacity(polygons.len());
        for polygon in polygons {
            curves.push(evaluate_curve(self.problem, polygon, self.p, (None, None), budget)?);
        }
        let mut sol = BezierSetSolution {
            curves,
            niche_counts: Vec::new(),
            f0: S::zero(),
            f1: S::zero(),
            constraint: S::zero(),
        };
        self.refresh_aggregates(&mut sol, budget)?;
        Ok(sol)
    }

    /// Partial evaluation after a single-curve change: re-evaluates only the
    /// changed curve's test points, then refreshes the aggregates from the
    /// cached per-curve contributions without further fitness evaluations.
    pub fn partial_update(
        &mut self,
        sol: &mut BezierSetSolution<S>,
        indices: &[usize],
        values: &[S],
        budget: &mut EvaluationBudget,
    ) -> Result<()> {
        let dim = self.problem.dim();
        let stride = self.q * dim;
        let curve_idx = indices[0] / stride;
        debug_assert!(indices.iter().all(|&i| i / stride == curve_idx));
        let mut flat = sol.curves[curve_idx].polygon.flatten();
        for (&i, &v) in indices.iter().zip(values) {
            flat[i - curve_idx * stride] = v;
        }
        let polygon = ControlPolygon::from_flat(&flat, self.q, dim)?;
        sol.curves[curve_idx] = evaluate_curve(self.problem, polygon, self.p, (None, None), budget)?;
        self.refresh_aggregates(sol, budget)
    }
}

/// Two-layer linkage structure: per curve, the j-th decision variable of all
/// `q` control points forms a base group; each curve's groups are merged by
/// UPGMA; the per-curve trees are concatenated under a structural root.
/// Mixing iterates every per-curve node (including the whole-curve groups)
/// but never the concatenation nodes, so partial evaluations stay per curve.
pub fn build_set_linkage<S: Real>(
    dim: usize,
    q: usize,
    b: usize,
    samples: &[Vec<S>],
) -> LinkageModel {
    let stride = q * dim;
    let mut nodes: Vec<LinkageNode> = Vec::new();
    let mut mix_nodes: Vec<usize> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    let mut base_count = 0usize;
    for curve in 0..b {
        let groups: Vec<Vec<usize>> = (0..dim)
            .map(|j| (0..q).map(|k| curve * stride + k * dim + j).collect())
            .collect();
        base_count += groups.len();
        let sub = crate::gom::build_upgma_tree(samples, groups);
        let offset = nodes.len();
        for node in sub.nodes {
            nodes.push(LinkageNode {
                indices: node.indices,
                children: node.children.map(|(a, b)| (a + offset, b + offset)),
            });
        }
        for id in offset..nodes.len() {
            mix_nodes.push(id);
        }
        roots.push(nodes.len() - 1);
    }
    let mut acc = roots[0];
    for &r in &roots[1..] {
        let mut indices = nodes[acc].indices.clone();
        indices.extend_from_slice(&nodes[r].indices);
        nodes.push(LinkageNode { indices, children: Some((acc, r)) });
        acc = nodes.len() - 1;
    }
    LinkageModel { nodes, mix_nodes, base_count }
}

pub struct SetBezEaOutcome<S: Real> {
    pub record: SetRunRecord<S>,
    pub reported: Option<BezierSetSolution<S>>,
    pub final_population: Vec<BezierSetSolution<S>>,
}

/// Run Set-BezEA on a problem with the given seed.
pub fn run<S: Real>(
    problem: &Problem<S>,
    config: &SetBezEaConfig<S>,
    seed: u64,
) -> SetBezEaOutcome<S> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut budget = EvaluationBudget::new(config.budget);
    let mut evaluator = SetEvaluator::new(problem, config);
    let dim = problem.dim();
    let (q, b) = (config.control_points, config.curves);

    let mut population: Vec<BezierSetSolution<S>> = Vec::with_capacity(config.population);
    'init: for _ in 0..config.population {
        let mut polygons = Vec::with_capacity(b);
        for _ in 0..b {
            let points: Vec<Vec<S>> = (0..q)
                .map(|_| {
                    problem
                        .lower()
                        .iter()
                        .zip(problem.upper())
                        .map(|(&lo, &hi)| lo + S::sample_unit(&mut rng) * (hi - lo))
                        .collect()
                })
                .collect();
            polygons.push(ControlPolygon::new(points).expect("q >= 2"));
        }
        match evaluator.evaluate_full(polygons, &mut budget) {
            Ok(sol) => population.push(sol),
            Err(Error::BudgetExhausted) => break 'init,
            Err(e) => panic!("initialization failed: {e}"),
        }
    }
    let init_evaluations = budget.used();

    let mut record = SetRunRecord {
        problem: problem.name().to_string(),
        dim,
        seed,
        curves: b,
        population: config.population,
        test_points: config.test_points,
        control_points: q,
        budget_limit: config.budget,
        diversity: config.diversity.label().to_string(),
        init_evaluations,
        evaluations_used: init_evaluations,
        generations: 0,
        trace: Vec::new(),
        final_front: Vec::new(),
        final_sets: Vec::new(),
    };

    let mut best_f0 = population
        .iter()
        .map(|s| s.f0)
        .fold(S::neg_infinity(), |a, v| a.max(v));
    let mut state = AdaptState::default();
    push_trace(&mut record, &population, best_f0, config.steering.threshold(0), &budget);

    while budget.has_remaining() && population.len() >= 2 {
        evaluator.memo.clear();
        let threshold = config.steering.threshold(record.generations);
        let genotypes: Vec<Vec<S>> = population.iter().map(|s| s.genotype()).collect();
        let model = build_set_linkage(dim, q, b, &genotypes);
        let frozen_best = best_f0;
        let fitness = move |s: &BezierSetSolution<S>| Fitness::Bi {
            objectives: [s.f0, s.f1],
            constraint: s.constraint + steering_penalty(s.f0, frozen_best, threshold),
        };
        let genotype_of = |s: &BezierSetSolution<S>| s.genotype();
        let mut resample =
            |sol: &mut BezierSetSolution<S>, indices: &[usize], values: &[S]| -> Result<()> {
                evaluator.partial_update(sol, indices, values, &mut budget)
            };
        gom_generation(
            &mut population,
            &model,
            &genotype_of,
            &fitness,
            &mut resample,
            &mut state,
            config.deterioration_prob,
            &mut rng,
        );
        best_f0 = population
            .iter()
            .map(|s| s.f0)
            .fold(best_f0, |a, v| a.max(v));
        record.generations += 1;
        let next_threshold = config.steering.threshold(record.generations);
        push_trace(&mut record, &population, best_f0, next_threshold, &budget);
    }

    record.evaluations_used = budget.used();
    let final_threshold = config.steering.threshold(record.generations);
    let reported_idx = select_reported(&population, best_f0, final_threshold);
    record.final_front = final_front(&population);
    let reported = reported_idx.map(|idx| population[idx].clone());
    if let Some(sol) = &reported {
        record.final_sets = reported_sets(sol, &mut evaluator);
    }
    SetBezEaOutcome { record, reported, final_population: population }
}

fn push_trace<S: Real>(
    record: &mut SetRunRecord<S>,
    population: &[BezierSetSolution<S>],
    best_f0: S,
    threshold: S,
    budget: &EvaluationBudget,
) {
    let best_member = population
        .iter()
        .max_by(|a, b| cmp_real(&a.f0, &b.f0));
    record.trace.push(SetTraceRow {
        generation: record.generations,
        evaluations: budget.used(),
        best_f0,
        best_f0_diversity: best_member.map(|s| s.f1).unwrap_or_else(S::zero),
        steering_threshold: threshold,
    });
}

/// The reported artifact: the steered-feasible solution with maximal shared
/// hypervolume (falling back to the overall best when nothing is feasible).
fn select_reported<S: Real>(
    population: &[BezierSetSolution<S>],
    best_f0: S,
    threshold: S,
) -> Option<usize> {
    if population.is_empty() {
        return None;
    }
    let feasible: Vec<usize> = (0..population.len())
        .filter(|&i| steering_penalty(population[i].f0, best_f0, threshold) == S::zero())
        .collect();
    let pool: Vec<usize> = if feasible.is_empty() {
        (0..population.len()).collect()
    } else {
        feasible
    };
    pool.into_iter()
        .max_by(|&a, &b| cmp_real(&population[a].f0, &population[b].f0).then(b.cmp(&a)))
}

fn final_front<S: Real>(population: &[BezierSetSolution<S>]) -> Vec<[S; 3]> {
    let mut rows: Vec<[S; 3]> = Vec::new();
    for (i, sol) in population.iter().enumerate() {
        let dominated = population.iter().enumerate().any(|(j, other)| {
            j != i
                && other.f0 >= sol.f0
                && other.f1 >= sol.f1
                && (other.f0 > sol.f0 || other.f1 > sol.f1)
        });
        if !dominated {
            rows.push([sol.f0, sol.f1, sol.constraint]);
        }
    }
    rows.sort_by(|a, b| cmp_real(&b[0], &a[0]).then(cmp_real(&b[1], &a[1])));
    rows.dedup();
    rows
}

/// Reported curves with analysis-time pairwise niche flags.
fn reported_sets<S: Real>(
    sol: &BezierSetSolution<S>,
    evaluator: &mut SetEvaluator<S>,
) -> Vec<ReportedSet<S>> {
    let mut sets: Vec<ReportedSet<S>> =
        sol.curves.iter().map(ReportedSet::from_solution).collect();
    let mut scratch = EvaluationBudget::new(u64::MAX);
    for i in 0..sol.curves.len() {
        for j in i + 1..sol.curves.len() {
            let same = evaluator
                .same_niche(&sol.curves[i], &sol.curves[j], &mut scratch)
                .unwrap_or(false);
            if same {
                sets[i].same_niche_as.push(j);
                sets[j].same_niche_as.push(i);
            }
        }
    }
    sets
}
