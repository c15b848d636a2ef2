//! Hill-valley machinery: the pairwise test, nearest-better-tree clustering,
//! its multi-objective and Bézier-solution variants, and the elitist archive
//! with taboo-region removal.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bezier::BezierSolution;
use crate::error::{Error, Result};
use crate::linalg::{dist, mean_vector};
use crate::problems::{EvaluationBudget, Problem};
use crate::real::{cmp_real, Real};

/// A niched subpopulation.
#[derive(Debug, Clone)]
pub struct Cluster<T, S: Real> {
    pub members: Vec<T>,
    pub best: usize,
    pub mean: Vec<S>,
}

pub type PointCluster<S> = Cluster<(Vec<S>, [S; 2]), S>;
pub type ScalarCluster<S> = Cluster<(Vec<S>, S), S>;
pub type BezierCluster<S> = Cluster<BezierSolution<S>, S>;

/// Number of interior test points for an edge: one plus the distance divided
/// by the expected edge length `(V_x / n)^(1/l)`. A small epsilon keeps
/// exact-ratio boundaries from rounding down.
pub fn test_point_count<S: Real>(
    xi: &[S],
    xj: &[S],
    box_volume: S,
    population_size: usize,
    dim: usize,
) -> usize {
    let edge = (box_volume / S::of_usize(population_size.max(1)))
        .powf(S::one() / S::of_usize(dim.max(1)));
    let ratio = dist(xi, xj) / edge;
    1 + (ratio + S::of(1e-9))
        .floor()
        .to_usize()
        .unwrap_or(usize::MAX)
}

/// Hill-valley test: `xi` and `xj` share a valley when no interior test point
/// is strictly worse (higher) than both endpoint values. The evaluator is
/// charged once per interior point; a budget error aborts the test.
pub fn hill_valley_test<S: Real>(
    xi: &[S],
    fi: S,
    xj: &[S],
    fj: S,
    n_t: usize,
    eval: &mut dyn FnMut(&[S]) -> Result<S>,
) -> Result<bool> {
    if xi == xj {
        return Ok(true);
    }
    let worst = fi.max(fj);
    let denom = S::of_usize(n_t + 1);
    let mut x_test = vec![S::zero(); xi.len()];
    for k in 1..=n_t {
        let t = S::of_usize(k) / denom;
        for (slot, (&a, &b)) in x_test.iter_mut().zip(xi.iter().zip(xj)) {
            *slot = a + t * (b - a);
        }
        if worst < eval(&x_test)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nearest-better-tree assignment: items are processed best-first, each one
/// joining the cluster of the first (up to `retries`) nearest better
/// neighbour that passes `same`, skipping clusters that already failed.
/// On budget exhaustion the remaining items found singleton clusters.
fn nearest_better_assign<S: Real>(
    embeddings: &[Vec<S>],
    order: &[usize],
    retries: usize,
    same: &mut dyn FnMut(usize, usize) -> Result<bool>,
) -> Vec<usize> {
    let n = embeddings.len();
    let mut assign = vec![usize::MAX; n];
    let mut num_clusters = 0usize;
    let mut exhausted = false;
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 || exhausted {
            assign[i] = num_clusters;
            num_clusters += 1;
            continue;
        }
        let mut candidates: Vec<(S, usize)> = order[..pos]
            .iter()
            .map(|&j| (dist(&embeddings[i], &embeddings[j]), j))
            .collect();
        candidates.sort_by(|a, b| cmp_real(&a.0, &b.0).then(a.1.cmp(&b.1)));
        let mut rejected: Vec<usize> = Vec::new();
        let mut tests = 0usize;
        let mut joined = None;
        for (_, j) in candidates {
            let cluster_j = assign[j];
            if rejected.contains(&cluster_j) {
                continue;
            }
            if tests >= retries {
                break;
            }
            tests += 1;
            match same(i, j) {
                Ok(true) => {
                    joined = Some(cluster_j);
                    break;
                }
                Ok(false) => rejected.push(cluster_j),
                Err(Error::BudgetExhausted) => {
                    exhausted = true;
                    break;
                }
                Err(_) => unreachable!("same-niche test only fails on budget"),
            }
        }
        match joined {
            Some(c) => assign[i] = c,
            None => {
                assign[i] = num_clusters;
                num_clusters += 1;
            }
        }
    }
    assign
}

fn group_by_assignment(assign: &[usize]) -> Vec<Vec<usize>> {
    let mut ids: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &a) in assign.iter().enumerate() {
        match ids.iter().position(|&x| x == a) {
            Some(g) => groups[g].push(i),
            None => {
                ids.push(a);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Single-objective hill-valley clustering over `(x, fitness)` pairs with
/// minimized fitness.
pub fn hill_valley_clustering<S: Real>(
    population: &[(Vec<S>, S)],
    box_volume: S,
    dim: usize,
    eval: &mut dyn FnMut(&[S]) -> Result<S>,
) -> Vec<ScalarCluster<S>> {
    assert!(!population.is_empty());
    let embeddings: Vec<Vec<S>> = population.iter().map(|(x, _)| x.clone()).collect();
    let values: Vec<S> = population.iter().map(|&(_, f)| f).collect();
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| cmp_real(&values[a], &values[b]).then(a.cmp(&b)));
    let n = population.len();
    let mut same = |i: usize, j: usize| -> Result<bool> {
        let n_t = test_point_count(&embeddings[i], &embeddings[j], box_volume, n, dim);
        hill_valley_test(&embeddings[i], values[i], &embeddings[j], values[j], n_t, eval)
    };
    let assign = nearest_better_assign(&embeddings, &order, dim + 1, &mut same);
    group_by_assignment(&assign)
        .into_iter()
        .map(|idx| {
            let members: Vec<(Vec<S>, S)> = idx.iter().map(|&i| population[i].clone()).collect();
            let best = members
                .iter()
                .enumerate()
                .min_by(|a, b| cmp_real(&a.1 .1, &b.1 .1).then(a.0.cmp(&b.0)))
                .map(|(k, _)| k)
                .unwrap();
            let xs: Vec<&[S]> = members.iter().map(|(x, _)| x.as_slice()).collect();
            let mean = mean_vector(&xs);
            Cluster { members, best, mean }
        })
        .collect()
}

/// Lazily evaluated interior test points for one population pair, shared by
/// the per-objective passes of the multi-objective clustering so that no
/// edge is charged twice.
struct PairEdge<S: Real> {
    n_t: usize,
    evaluated: Vec<(Vec<S>, [S; 2])>,
    verdict: [Option<bool>; 2],
}

/// Multi-objective hill-valley clustering: clusters the population for each
/// objective separately and intersects the two assignments. Interior test
/// points evaluated along accepted edges are retained and attached to the
/// cluster of their nearest edge endpoint.
pub fn mo_hill_valley_clustering<S: Real>(
    population: &[(Vec<S>, [S; 2])],
    problem: &Problem<S>,
    budget: &mut EvaluationBudget,
) -> Vec<PointCluster<S>> {
    assert!(!population.is_empty());
    let n = population.len();
    let dim = problem.dim();
    let volume = problem.box_volume();
    let embeddings: Vec<Vec<S>> = population.iter().map(|(x, _)| x.clone()).collect();
    let mut edges: BTreeMap<(usize, usize), PairEdge<S>> = BTreeMap::new();

    let mut assignments: Vec<Vec<usize>> = Vec::with_capacity(2);
    for objective in 0..2 {
        let values: Vec<S> = population.iter().map(|&(_, f)| f[objective]).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| cmp_real(&values[a], &values[b]).then(a.cmp(&b)));
        let mut same = |i: usize, j: usize| -> Result<bool> {
            let key = (i.min(j), i.max(j));
            let edge = edges.entry(key).or_insert_with(|| PairEdge {
                n_t: test_point_count(&embeddings[key.0], &embeddings[key.1], volume, n, dim),
                evaluated: Vec::new(),
                verdict: [None, None],
            });
            if let Some(v) = edge.verdict[objective] {
                return Ok(v);
            }
            if embeddings[key.0] == embeddings[key.1] {
                edge.verdict[objective] = Some(true);
                return Ok(true);
            }
            let worst = values[key.0].max(values[key.1]);
            let denom = S::of_usize(edge.n_t + 1);
            let mut verdict = true;
            for k in 1..=edge.n_t {
                if edge.evaluated.len() < k {
                    let t = S::of_usize(k) / denom;
                    let x: Vec<S> = embeddings[key.0]
                        .iter()
                        .zip(&embeddings[key.1])
                        .map(|(&a, &b)| a + t * (b - a))
                        .collect();
                    let f = problem.evaluate(&x, budget)?;
                    edge.evaluated.push((x, f));
                }
                if worst < edge.evaluated[k - 1].1[objective] {
                    verdict = false;
                    break;
                }
            }
            edge.verdict[objective] = Some(verdict);
            Ok(verdict)
        };
        assignments.push(nearest_better_assign(&embeddings, &order, dim + 1, &mut same));
    }

    // intersect the per-objective assignments
    let combined: Vec<(usize, usize)> = (0..n)
        .map(|i| (assignments[0][i], assignments[1][i]))
        .collect();
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut member_idx: Vec<Vec<usize>> = Vec::new();
    for (i, &key) in combined.iter().enumerate() {
        match keys.iter().position(|&k| k == key) {
            Some(g) => member_idx[g].push(i),
            None => {
                keys.push(key);
                member_idx.push(vec![i]);
            }
        }
    }
    let mut clusters: Vec<Vec<(Vec<S>, [S; 2])>> = member_idx
        .iter()
        .map(|idx| idx.iter().map(|&i| population[i].clone()).collect())
        .collect();

    // attach evaluated interior test points to the nearest endpoint's cluster
    let cluster_of: Vec<usize> = {
        let mut map = vec![0usize; n];
        for (g, idx) in member_idx.iter().enumerate() {
            for &i in idx {
                map[i] = g;
            }
        }
        map
    };
    for (&(i, j), edge) in &edges {
        for (x, f) in &edge.evaluated {
            let di = dist(x, &embeddings[i]);
            let dj = dist(x, &embeddings[j]);
            let owner = if di <= dj { i } else { j };
            clusters[cluster_of[owner]].push((x.clone(), *f));
        }
    }

    clusters
        .into_iter()
        .map(|members| {
            let best = best_by_domination(&members);
            let xs: Vec<&[S]> = members.iter().map(|(x, _)| x.as_slice()).collect();
            let mean = mean_vector(&xs);
            Cluster { members, best, mean }
        })
        .collect()
}

fn best_by_domination<S: Real>(members: &[(Vec<S>, [S; 2])]) -> usize {
    let mut best = 0usize;
    let mut best_count = usize::MAX;
    for i in 0..members.len() {
        let count = members
            .iter()
            .filter(|m| crate::indicators::dominates_min(m.1, members[i].1))
            .count();
        if count < best_count {
            best_count = count;
            best = i;
        }
    }
    best
}

/// Memoized Bézier hill-valley test. Two Bézier solutions share a niche when
/// every aligned control-point pair passes the hill-valley test for every
/// objective. Results are cached per genotype pair; budget exhaustion makes
/// the test conservatively fail.
pub struct BezierHvtMemo {
    cache: BTreeMap<(Vec<u64>, Vec<u64>), bool>,
    self_cache: BTreeMap<Vec<u64>, bool>,
}

impl BezierHvtMemo {
    pub fn new() -> Self {
        Self { cache: BTreeMap::new(), self_cache: BTreeMap::new() }
    }

    pub fn clear(&mut self) {
        self.cache.clear();
        self.self_cache.clear();
    }

    fn key<S: Real>(a: &BezierSolution<S>, b: &BezierSolution<S>) -> (Vec<u64>, Vec<u64>) {
        let bits = |sol: &BezierSolution<S>| -> Vec<u64> {
            sol.polygon
                .flatten()
                .iter()
                .map(|v| v.to_f64().unwrap_or(f64::NAN).to_bits())
                .collect()
        };
        let (ka, kb) = (bits(a), bits(b));
        if ka <= kb {
            (ka, kb)
        } else {
            (kb, ka)
        }
    }

    /// `population_size` scales the expected edge length for the test-point
    /// count. Budget exhaustion propagates as an error so run loops can stop;
    /// callers that need the conservative answer map it to `false`.
    pub fn same_niche<S: Real>(
        &mut self,
        a: &BezierSolution<S>,
        b: &BezierSolution<S>,
        problem: &Problem<S>,
        population_size: usize,
        budget: &mut EvaluationBudget,
    ) -> Result<bool> {
        let key = Self::key(a, b);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let verdict = bezier_hill_valley_test(a, b, problem, population_size, budget)?;
        self.cache.insert(key, verdict);
        Ok(verdict)
    }

    /// Whether the solution's own control points all share one niche (the
    /// within-a-single-niche property that curve solutions are designed to
    /// keep).
    pub fn single_niche<S: Real>(
        &mut self,
        sol: &BezierSolution<S>,
        problem: &Problem<S>,
        population_size: usize,
        budget: &mut EvaluationBudget,
    ) -> Result<bool> {
        let key: Vec<u64> = sol
            .polygon
            .flatten()
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN).to_bits())
            .collect();
        if let Some(&v) = self.self_cache.get(&key) {
            return Ok(v);
        }
        let verdict = curve_within_single_niche(sol, problem, population_size, budget)?;
        self.self_cache.insert(key, verdict);
        Ok(verdict)
    }
}

/// Pairwise hill-valley tests between a solution's own control points, for
/// every objective.
pub fn curve_within_single_niche<S: Real>(
    sol: &BezierSolution<S>,
    problem: &Problem<S>,
    population_size: usize,
    budget: &mut EvaluationBudget,
) -> Result<bool> {
    let q = sol.polygon.num_points();
    let volume = problem.box_volume();
    for l1 in 0..q {
        for l2 in l1 + 1..q {
            let (ca, cb) = (&sol.polygon.points[l1], &sol.polygon.points[l2]);
            let n_t = test_point_count(ca, cb, volume, population_size, problem.dim());
            for objective in 0..2 {
                let mut eval =
                    |x: &[S]| -> Result<S> { Ok(problem.evaluate(x, budget)?[objective]) };
                let passed = hill_valley_test(
                    ca,
                    sol.control_objectives[l1][objective],
                    cb,
                    sol.control_objectives[l2][objective],
                    n_t,
                    &mut eval,
                )?;
                if !passed {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

impl Default for BezierHvtMemo {
    fn default() -> Self {
        Self::new()
    }
}

/// Uncached Bézier hill-valley test (both solutions canonically oriented).
pub fn bezier_hill_valley_test<S: Real>(
    a: &BezierSolution<S>,
    b: &BezierSolution<S>,
    problem: &Problem<S>,
    population_size: usize,
    budget: &mut EvaluationBudget,
) -> Result<bool> {
    let q = a.polygon.num_points();
    debug_assert_eq!(q, b.polygon.num_points());
    let volume = problem.box_volume();
    for l in 0..q {
        let ca = &a.polygon.points[l];
        let cb = &b.polygon.points[l];
        let n_t = test_point_count(ca, cb, volume, population_size, problem.dim());
        for objective in 0..2 {
            let mut eval = |x: &[S]| -> Result<S> {
                Ok(problem.evaluate(x, budget)?[objective])
            };
            let passed = hill_valley_test(
                ca,
                a.control_objectives[l][objective],
                cb,
                b.control_objectives[l][objective],
                n_t,
                &mut eval,
            )?;
            if !passed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Constraint-domination order used for Bézier solutions: lower constraint
/// first, then higher hypervolume.
pub fn bezier_better<S: Real>(a: &BezierSolution<S>, b: &BezierSolution<S>) -> std::cmp::Ordering {
    cmp_real(&a.constraint, &b.constraint).then(cmp_real(&b.hv, &a.hv))
}

/// Cluster Bézier solutions with the nearest-better tree over flattened
/// genotypes and the memoized Bézier hill-valley test.
pub fn bezier_hill_valley_clustering<S: Real>(
    population: &[BezierSolution<S>],
    problem: &Problem<S>,
    memo: &mut BezierHvtMemo,
    budget: &mut EvaluationBudget,
) -> Vec<BezierCluster<S>> {
    assert!(!population.is_empty());
    let embeddings: Vec<Vec<S>> = population.iter().map(|s| s.polygon.flatten()).collect();
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| {
        bezier_better(&population[a], &population[b]).then(a.cmp(&b))
    });
    let pop_size = population.len();
    let mut same = |i: usize, j: usize| -> Result<bool> {
        memo.same_niche(&population[i], &population[j], problem, pop_size, budget)
    };
    let assign = nearest_better_assign(&embeddings, &order, problem.dim() + 1, &mut same);
    group_by_assignment(&assign)
        .into_iter()
        .map(|idx| {
            let members: Vec<BezierSolution<S>> =
                idx.iter().map(|&i| population[i].clone()).collect();
            let best = members
                .iter()
                .enumerate()
                .min_by(|a, b| bezier_better(a.1, b.1).then(a.0.cmp(&b.0)))
                .map(|(k, _)| k)
                .unwrap();
            let xs: Vec<Vec<S>> = members.iter().map(|m| m.polygon.flatten()).collect();
            let refs: Vec<&[S]> = xs.iter().map(|x| x.as_slice()).collect();
            let mean = mean_vector(&refs);
            Cluster { members, best, mean }
        })
        .collect()
}

/// One elite Bézier solution per detected niche.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct ElitistArchive<S: Real> {
    pub elites: Vec<BezierSolution<S>>,
}

impl<S: Real> ElitistArchive<S> {
    pub fn new() -> Self {
        Self { elites: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elites.is_empty()
    }
}

/// Fold each cluster's best solution into the archive. A challenger matching
/// one or more elites' niches replaces them when it is better under
/// constraint domination (then hypervolume; exact ties keep the incumbent);
/// otherwise it is appended as a new elite. Elites whose niches coalesce are
/// merged afterwards, so the archive never holds two same-niche elites under
/// this generation's test results. When the budget runs out mid-test the
/// update stops: unverifiable challengers are never admitted.
pub fn archive_update<S: Real>(
    archive: &mut ElitistArchive<S>,
    clusters: &[BezierCluster<S>],
    same_niche: &mut dyn FnMut(&BezierSolution<S>, &BezierSolution<S>) -> Result<bool>,
) {
    let mut changed: Vec<bool> = vec![false; archive.elites.len()];
    for cluster in clusters {
        let challenger = cluster.members[cluster.best].clone();
        let mut matched: Vec<usize> = Vec::new();
        for (i, elite) in archive.elites.iter().enumerate() {
            match same_niche(&challenger, elite) {
                Ok(true) => matched.push(i),
                Ok(false) => {}
                Err(_) => return,
            }
        }
        if matched.is_empty() {
            archive.elites.push(challenger);
            changed.push(true);
            continue;
        }
        // winner among incumbents and the challenger; incumbents win ties
        let mut winner = archive.elites[matched[0]].clone();
        for &m in &matched[1..] {
            if bezier_better(&archive.elites[m], &winner).is_lt() {
                winner = archive.elites[m].clone();
            }
        }
        let replaced = bezier_better(&challenger, &winner).is_lt();
        if replaced {
            winner = challenger;
        }
        let first = matched[0];
        for &m in matched.iter().rev() {
            archive.elites.remove(m);
            changed.remove(m);
        }
        archive.elites.insert(first, winner);
        changed.insert(first, replaced || matched.len() > 1);
    }
    // merge elites whose niches coalesced; unchanged pairs were already
    // verified distinct when inserted
    loop {
        let mut merged = false;
        'scan: for i in 0..archive.elites.len() {
            for j in i + 1..archive.elites.len() {
                if !(changed[i] || changed[j]) {
                    continue;
                }
                match same_niche(&archive.elites[i], &archive.elites[j]) {
                    Ok(true) => {
                        let keep_j =
                            bezier_better(&archive.elites[j], &archive.elites[i]).is_lt();
                        let removed = if keep_j { i } else { j };
                        archive.elites.remove(removed);
                        changed.remove(removed);
                        let kept = if keep_j { j - 1 } else { i };
                        changed[kept] = true;
                        merged = true;
                        break 'scan;
                    }
                    Ok(false) => {}
                    Err(_) => return,
                }
            }
        }
        if !merged {
            break;
        }
    }
}

/// Discard clusters whose best member is an archived elite (bit-exact
/// genotype match; elites are injected unchanged into the population).
pub fn remove_taboo<S: Real>(
    clusters: Vec<BezierCluster<S>>,
    archive: &ElitistArchive<S>,
) -> Vec<BezierCluster<S>> {
    clusters
        .into_iter()
        .filter(|c| {
            let best = &c.members[c.best];
            !archive
                .elites
                .iter()
                .any(|e| e.polygon.points == best.polygon.points)
        })
        .collect()
}
