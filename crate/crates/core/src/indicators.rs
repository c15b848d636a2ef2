//! Performance and selection indicators: 2-D hypervolume, uncrowded distance,
//! greedy hypervolume subset selection, IGDX, cover rate, PSP and smoothness.
//! All objectives are minimized unless stated otherwise.

use crate::error::{Error, Result};
use crate::linalg::dist;
use crate::real::{cmp_real, Real};

/// `a` strictly Pareto-dominates `b` (minimization).
pub fn dominates_min<S: Real>(a: [S; 2], b: [S; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// `true` per index when the point is not strictly dominated by any other
/// point and is not an exact duplicate of an earlier point.
pub fn strictly_nondominated_mask<S: Real>(points: &[[S; 2]]) -> Vec<bool> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        cmp_real(&points[a][0], &points[b][0])
            .then(cmp_real(&points[a][1], &points[b][1]))
            .then(a.cmp(&b))
    });
    let mut mask = vec![false; n];
    let mut best_f1 = S::infinity();
    for &i in &order {
        if points[i][1] < best_f1 {
            mask[i] = true;
            best_f1 = points[i][1];
        }
    }
    mask
}

/// Indices of the mutually non-dominated subset, ascending in `f0`.
pub fn pareto_indices<S: Real>(points: &[[S; 2]]) -> Vec<usize> {
    let mask = strictly_nondominated_mask(points);
    let mut idx: Vec<usize> = (0..points.len()).filter(|&i| mask[i]).collect();
    idx.sort_by(|&a, &b| cmp_real(&points[a][0], &points[b][0]));
    idx
}

/// 2-D hypervolume of `front` w.r.t. reference point `r` by sort-and-sweep.
/// Points that do not strictly dominate `r` contribute zero.
pub fn hypervolume_2d<S: Real>(front: &[[S; 2]], r: [S; 2]) -> S {
    let mut pts: Vec<[S; 2]> = front
        .iter()
        .copied()
        .filter(|p| p[0] < r[0] && p[1] < r[1])
        .collect();
    if pts.is_empty() {
        return S::zero();
    }
    pts.sort_by(|a, b| cmp_real(&a[0], &b[0]).then(cmp_real(&a[1], &b[1])));
    let mut hv = S::zero();
    let mut prev_f1 = r[1];
    for p in pts {
        if p[1] < prev_f1 {
            hv = hv + (r[0] - p[0]) * (prev_f1 - p[1]);
            prev_f1 = p[1];
        }
    }
    hv
}

/// Euclidean distance from `point` to the staircase boundary of the region
/// dominated by `front`; zero when `point` is not strictly dominated.
/// `front` must be mutually non-dominated.
pub fn uncrowded_distance<S: Real>(point: [S; 2], front: &[[S; 2]]) -> S {
    if !front.iter().any(|&a| dominates_min(a, point)) {
        return S::zero();
    }
    let mut sorted: Vec<[S; 2]> = front.to_vec();
    sorted.sort_by(|a, b| cmp_real(&a[0], &b[0]));

    let seg_dist = |p: [S; 2], fixed: S, lo: S, hi: S, vertical: bool| -> S {
        // distance to an axis-aligned segment; `fixed` is the constant coord
        let (along, across) = if vertical { (p[1], p[0]) } else { (p[0], p[1]) };
        let clamped = along.max(lo).min(hi);
        let d_along = along - clamped;
        let d_across = across - fixed;
        (d_along * d_along + d_across * d_across).sqrt()
    };

    let inf = S::infinity();
    let first = sorted[0];
    let last = sorted[sorted.len() - 1];
    // Upward ray from the best-f0 point and rightward ray from the best-f1 point.
    let mut best = seg_dist(point, first[0], first[1], inf, true)
        .min(seg_dist(point, last[1], last[0], inf, false));
    for w in sorted.windows(2) {
        let (a, b) = (w[0], w[1]);
        best = best
            .min(seg_dist(point, a[1], a[0], b[0], false))
            .min(seg_dist(point, b[0], b[1], a[1], true));
    }
    best
}

/// Greedy hypervolume subset selection: iteratively add the point with the
/// largest marginal hypervolume contribution, ties broken by lowest index.
/// Returns the selected indices in selection order.
pub fn greedy_hss<S: Real>(front: &[[S; 2]], k: usize, r: [S; 2]) -> Vec<usize> {
    let n = front.len();
    let target = k.min(n);
    let mut selected: Vec<usize> = Vec::with_capacity(target);
    let mut selected_pts: Vec<[S; 2]> = Vec::with_capacity(target);
    let mut chosen = vec![false; n];
    let mut current_hv = S::zero();
    while selected.len() < target {
        let mut best_idx = usize::MAX;
        let mut best_gain = S::neg_infinity();
        for i in 0..n {
            if chosen[i] {
                continue;
            }
            selected_pts.push(front[i]);
            let gain = hypervolume_2d(&selected_pts, r) - current_hv;
            selected_pts.pop();
            if gain > best_gain {
                best_gain = gain;
                best_idx = i;
            }
        }
        chosen[best_idx] = true;
        selected.push(best_idx);
        selected_pts.push(front[best_idx]);
        current_hv = current_hv + best_gain;
    }
    selected
}

/// Inverted generational distance in decision space: mean over reference
/// points of the Euclidean distance to the nearest approximation point.
pub fn igdx<S: Real>(approx: &[Vec<S>], refset: &[Vec<S>]) -> Result<S> {
    if approx.is_empty() {
        return Err(Error::EmptyInput("igdx approximation set"));
    }
    if refset.is_empty() {
        return Err(Error::EmptyInput("igdx reference set"));
    }
    let total: S = refset
        .iter()
        .map(|r| {
            approx
                .iter()
                .map(|a| dist(a, r))
                .fold(S::infinity(), |acc, d| acc.min(d))
        })
        .sum();
    Ok(total / S::of_usize(refset.len()))
}

/// Cover rate: per-dimension squared overlap ratio between the approximation
/// bounding box and the reference bounding box, combined as
/// `(prod delta_j^2)^(1 / (2 * D))`. Dimensions with zero reference extent
/// are skipped.
pub fn cover_rate<S: Real>(approx: &[Vec<S>], refset: &[Vec<S>]) -> S {
    if approx.is_empty() || refset.is_empty() {
        return S::zero();
    }
    let dim = refset[0].len();
    let mut log_product = S::zero();
    let mut used = 0usize;
    for j in 0..dim {
        let (mut r_min, mut r_max) = (S::infinity(), S::neg_infinity());
        for r in refset {
            r_min = r_min.min(r[j]);
            r_max = r_max.max(r[j]);
        }
        if r_max == r_min {
            continue;
        }
        let (mut a_min, mut a_max) = (S::infinity(), S::neg_infinity());
        for a in approx {
            a_min = a_min.min(a[j]);
            a_max = a_max.max(a[j]);
        }
        let delta = ((a_max.min(r_max) - a_min.max(r_min)) / (r_max - r_min))
            .max(S::zero())
            .min(S::one());
        if delta == S::zero() {
            return S::zero();
        }
        log_product = log_product + (delta * delta).ln();
        used += 1;
    }
    if used == 0 {
        return S::one();
    }
    (log_product / S::of_usize(2 * used)).exp()
}

/// Pareto set proximity: cover rate divided by IGDX, with an infinity
/// sentinel when the approximation matches the reference set exactly.
pub fn psp<S: Real>(approx: &[Vec<S>], refset: &[Vec<S>]) -> Result<S> {
    let igdx_value = igdx(approx, refset)?;
    let cr = cover_rate(approx, refset);
    if igdx_value == S::zero() {
        return Ok(S::infinity());
    }
    Ok(cr / igdx_value)
}

/// Detour-ratio smoothness of ordered point sequences, averaged over sets.
/// A sequence with at most two points scores 1; interior points contribute
/// `|x_prev - x_next| / (|x_prev - x| + |x - x_next|)`. Detours below the
/// floating-point noise floor count as colinear so that sequences sampled
/// from a straight segment score exactly 1.
pub fn smoothness<S: Real>(sets: &[Vec<Vec<S>>]) -> S {
    if sets.is_empty() {
        return S::one();
    }
    let per_set: S = sets.iter().map(|set| smoothness_of_set(set)).sum();
    per_set / S::of_usize(sets.len())
}

fn smoothness_of_set<S: Real>(set: &[Vec<S>]) -> S {
    if set.len() <= 2 {
        return S::one();
    }
    let snap = S::one() - S::of(1e-12);
    let mut total = S::zero();
    for i in 1..set.len() - 1 {
        let num = dist(&set[i - 1], &set[i + 1]);
        let den = dist(&set[i - 1], &set[i]) + dist(&set[i], &set[i + 1]);
        let term = if den == S::zero() || num >= den * snap {
            S::one()
        } else {
            num / den
        };
        total = total + term;
    }
    total / S::of_usize(set.len() - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hypervolume_unit_box() {
        assert_eq!(hypervolume_2d(&[[0.0, 0.0]], [1.0, 1.0]), 1.0);
    }

    #[test]
    fn hypervolume_inclusion_exclusion() {
        let front: [[f64; 2]; 2] = [[0.0, 0.5], [0.5, 0.0]];
        assert!((hypervolume_2d(&front, [1.0, 1.0]) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hypervolume_ignores_points_beyond_reference() {
        let front: [[f64; 2]; 2] = [[0.0, 0.5], [2.0, -1.0]];
        assert!((hypervolume_2d(&front, [1.0, 1.0]) - 0.5).abs() < 1e-15);
    }

    fn monte_carlo_hv(front: &[[f64; 2]], r: [f64; 2], lo: [f64; 2], samples: u64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0u64;
        for _ in 0..samples {
            let x = lo[0] + rng.random::<f64>() * (r[0] - lo[0]);
            let y = lo[1] + rng.random::<f64>() * (r[1] - lo[1]);
            if front.iter().any(|p| p[0] <= x && p[1] <= y) {
                hits += 1;
            }
        }
        (hits as f64) / (samples as f64) * (r[0] - lo[0]) * (r[1] - lo[1])
    }

    #[test]
    fn hypervolume_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let front: Vec<[f64; 2]> = (0..100)
            .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let r = [1.2, 1.2];
        let exact = hypervolume_2d(&front, r);
        let mc = monte_carlo_hv(&front, r, [0.0, 0.0], 1_000_000, 11);
        assert!((exact - mc).abs() / exact < 1e-2, "exact={exact} mc={mc}");
    }

    #[test]
    fn hypervolume_monotone_under_nondominated_insertion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut front: Vec<[f64; 2]> = (0..12)
                .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let r = [1.5, 1.5];
            let before = hypervolume_2d(&front, r);
            front.push([rng.random::<f64>(), rng.random::<f64>()]);
            assert!(hypervolume_2d(&front, r) >= before - 1e-15);
        }
    }

    #[test]
    fn uncrowded_distance_simple_box() {
        assert_eq!(uncrowded_distance([1.0, 1.0], &[[0.0, 0.0]]), 1.0);
    }

    #[test]
    fn uncrowded_distance_on_staircase_is_zero() {
        let front = [[0.0, 1.0], [1.0, 0.0]];
        assert_eq!(uncrowded_distance([0.0, 2.0], &front), 0.0);
        assert_eq!(uncrowded_distance([0.5, 1.0], &front), 0.0);
    }

    #[test]
    fn uncrowded_distance_zero_for_nondominated_point() {
        // (2,2) is not dominated by either front member, so it extends the
        // front and its uncrowded distance is zero.
        assert_eq!(uncrowded_distance([2.0, 2.0], &[[0.0, 3.0], [3.0, 0.0]]), 0.0);
    }

    fn dense_boundary_oracle(point: [f64; 2], front: &[[f64; 2]]) -> f64 {
        // walk the whole staircase with a fine step and take the closest hit
        let mut sorted = front.to_vec();
        sorted.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        let far = 50.0;
        let mut segments: Vec<([f64; 2], [f64; 2])> = Vec::new();
        let first = sorted[0];
        let last = sorted[sorted.len() - 1];
        segments.push(([first[0], first[1]], [first[0], far]));
        segments.push(([last[0], last[1]], [far, last[1]]));
        for w in sorted.windows(2) {
            segments.push(([w[0][0], w[0][1]], [w[1][0], w[0][1]]));
            segments.push(([w[1][0], w[1][1]], [w[1][0], w[0][1]]));
        }
        let mut best = f64::INFINITY;
        for (a, b) in segments {
            for i in 0..=20_000 {
                let t = i as f64 / 20_000.0;
                let x = a[0] + t * (b[0] - a[0]);
                let y = a[1] + t * (b[1] - a[1]);
                let d = ((point[0] - x).powi(2) + (point[1] - y).powi(2)).sqrt();
                best = best.min(d);
            }
        }
        best
    }

    #[test]
    fn uncrowded_distance_matches_dense_boundary_oracle() {
        let front = [[0.0, 3.0], [1.0, 1.5], [3.0, 0.0]];
        for point in [[4.0, 4.0], [3.5, 3.5], [1.2, 2.0], [2.0, 1.0], [5.0, 0.5]] {
            if !front.iter().any(|&a| dominates_min(a, point)) {
                continue;
            }
            let fast = uncrowded_distance(point, &front);
            let slow = dense_boundary_oracle(point, &front);
            assert!((fast - slow).abs() < 1e-3, "point {point:?}: {fast} vs {slow}");
        }
    }

    #[test]
    fn greedy_hss_picks_largest_contribution_first() {
        let front = [[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]];
        assert_eq!(greedy_hss(&front, 1, [3.0, 3.0]), vec![1]);
    }

    #[test]
    fn greedy_hss_breaks_ties_by_lowest_index() {
        let front = [[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]];
        // after (1,1) both remaining points add hypervolume 1
        assert_eq!(greedy_hss(&front, 2, [3.0, 3.0]), vec![1, 0]);
    }

    #[test]
    fn greedy_hss_returns_everything_when_k_exceeds_front() {
        let front = [[0.0, 2.0], [1.0, 1.0]];
        let sel = greedy_hss(&front, 10, [3.0, 3.0]);
        assert_eq!(sel.len(), 2);
    }

    /// Independent hypervolume via inclusion-exclusion over box intersections.
    fn hv_inclusion_exclusion(front: &[[f64; 2]], r: [f64; 2]) -> f64 {
        let n = front.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            let mut f0: f64 = f64::NEG_INFINITY;
            let mut f1: f64 = f64::NEG_INFINITY;
            for (i, p) in front.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    f0 = f0.max(p[0]);
                    f1 = f1.max(p[1]);
                }
            }
            let area = (r[0] - f0).max(0.0) * (r[1] - f1).max(0.0);
            let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * area;
        }
        total
    }

    #[test]
    fn greedy_hss_matches_exhaustive_greedy_with_independent_hv() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.random_range(1..=8);
            let front: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0])
                .collect();
            let r = [2.5, 2.5];
            for k in 1..=3usize {
                let fast = greedy_hss(&front, k, r);
                // oracle greedy with inclusion-exclusion hypervolume
                let mut chosen: Vec<usize> = Vec::new();
                while chosen.len() < k.min(n) {
                    let base: Vec<[f64; 2]> = chosen.iter().map(|&i| front[i]).collect();
                    let hv0 = hv_inclusion_exclusion(&base, r);
                    let mut best = (usize::MAX, f64::NEG_INFINITY);
                    for i in 0..n {
                        if chosen.contains(&i) {
                            continue;
                        }
                        let mut with = base.clone();
                        with.push(front[i]);
                        let gain = hv_inclusion_exclusion(&with, r) - hv0;
                        if gain > best.1 + 1e-12 {
                            best = (i, gain);
                        }
                    }
                    chosen.push(best.0);
                }
                assert_eq!(fast, chosen, "front {front:?} k={k}");
            }
        }
    }

    #[test]
    fn greedy_hss_within_submodular_guarantee_of_best_subset() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.random_range(2..=10usize);
            let front: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let r = [1.3, 1.3];
            for k in 1..=4usize.min(n) {
                let sel = greedy_hss(&front, k, r);
                let pts: Vec<[f64; 2]> = sel.iter().map(|&i| front[i]).collect();
                let greedy_hv = hypervolume_2d(&pts, r);
                // exhaustive best subset of size k
                let mut best = 0.0f64;
                let idx: Vec<usize> = (0..n).collect();
                let mut combo = vec![0usize; k];
                fn rec(
                    idx: &[usize],
                    front: &[[f64; 2]],
                    r: [f64; 2],
                    k: usize,
                    start: usize,
                    combo: &mut Vec<usize>,
                    depth: usize,
                    best: &mut f64,
                ) {
                    if depth == k {
                        let pts: Vec<[f64; 2]> = combo.iter().map(|&i| front[i]).collect();
                        *best = best.max(hypervolume_2d(&pts, r));
                        return;
                    }
                    for pos in start..idx.len() {
                        combo[depth] = idx[pos];
                        rec(idx, front, r, k, pos + 1, combo, depth + 1, best);
                    }
                }
                rec(&idx, &front, r, k, 0, &mut combo, 0, &mut best);
                let guarantee = 1.0 - (1.0 - 1.0 / k as f64).powi(k as i32);
                assert!(greedy_hv + 1e-12 >= guarantee * best);
            }
        }
    }

    #[test]
    fn igdx_mean_nearest_distance() {
        let refset = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let approx = vec![vec![0.0, 0.0]];
        assert!((igdx(&approx, &refset).unwrap() - (2.0f64).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn igdx_zero_when_reference_covered() {
        let refset = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let approx = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(igdx(&approx, &refset).unwrap(), 0.0);
    }

    #[test]
    fn igdx_empty_input_is_error() {
        let refset = vec![vec![0.0]];
        assert!(igdx::<f64>(&[], &refset).is_err());
    }

    #[test]
    fn igdx_matches_brute_force_and_is_translation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let approx: Vec<Vec<f64>> = (0..6)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let refset: Vec<Vec<f64>> = (0..9)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let mut brute = 0.0;
            for r in &refset {
                let mut best = f64::INFINITY;
                for a in &approx {
                    let d = ((a[0] - r[0]).powi(2) + (a[1] - r[1]).powi(2)).sqrt();
                    best = best.min(d);
                }
                brute += best;
            }
            brute /= refset.len() as f64;
            let fast = igdx(&approx, &refset).unwrap();
            assert!((fast - brute).abs() < 1e-14);

            let shift = [3.7, -1.2];
            let shifted_a: Vec<Vec<f64>> =
                approx.iter().map(|a| vec![a[0] + shift[0], a[1] + shift[1]]).collect();
            let shifted_r: Vec<Vec<f64>> =
                refset.iter().map(|r| vec![r[0] + shift[0], r[1] + shift[1]]).collect();
            assert!((igdx(&shifted_a, &shifted_r).unwrap() - fast).abs() < 1e-12);

            let scaled_a: Vec<Vec<f64>> = approx.iter().map(|a| vec![2.0 * a[0], 2.0 * a[1]]).collect();
            let scaled_r: Vec<Vec<f64>> = refset.iter().map(|r| vec![2.0 * r[0], 2.0 * r[1]]).collect();
            assert!((igdx(&scaled_a, &scaled_r).unwrap() - 2.0 * fast).abs() < 1e-12);
        }
    }

    #[test]
    fn cover_rate_full_overlap() {
        let refset: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        assert!((cover_rate(&refset, &refset) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cover_rate_disjoint_dimension_is_zero() {
        let refset = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let approx = vec![vec![2.0, 0.0], vec![3.0, 1.0]];
        assert_eq!(cover_rate(&approx, &refset), 0.0);
    }

    #[test]
    fn cover_rate_half_overlap_each_dimension() {
        let refset: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let approx = vec![vec![0.0, 0.0], vec![0.5, 0.5]];
        assert!((cover_rate(&approx, &refset) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn psp_is_cover_rate_over_igdx() {
        let refset: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        // full cover, igdx 0.5: put approximation points at distance 0.5
        let approx = vec![vec![0.0, 0.5], vec![1.0, 0.5]];
        let igdx_value = igdx(&approx, &refset).unwrap();
        let cr = cover_rate(&approx, &refset);
        let p = psp(&approx, &refset).unwrap();
        assert!((p - cr / igdx_value).abs() < 1e-12);
    }

    #[test]
    fn psp_zero_when_cover_rate_zero() {
        let refset = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let approx = vec![vec![5.0, 5.0]];
        assert_eq!(psp(&approx, &refset).unwrap(), 0.0);
    }

    #[test]
    fn psp_infinite_on_exact_match() {
        let refset: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        assert!(psp(&refset, &refset).unwrap().is_infinite());
    }

    #[test]
    fn smoothness_colinear_is_exactly_one() {
        let set = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(smoothness(&[set]), 1.0);
    }

    #[test]
    fn smoothness_right_angle() {
        let set = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        assert!((smoothness(&[set]) - (2.0f64).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn smoothness_two_point_set_is_one() {
        let set = vec![vec![0.0, 0.0], vec![5.0, -3.0]];
        assert_eq!(smoothness(&[set]), 1.0);
    }

    #[test]
    fn smoothness_never_exceeds_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let set: Vec<Vec<f64>> = (0..6)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            assert!(smoothness(&[set]) <= 1.0);
        }
    }

    #[test]
    fn smoothness_exact_one_for_bezier_segment_samples() {
        // points sampled from a straight two-control-point curve must score
        // exactly 1 despite floating-point rounding
        let polygon = crate::bezier::ControlPolygon::new(vec![
            vec![0.13, -0.77, 2.9],
            vec![1.91, 3.33, -4.1],
        ])
        .unwrap();
        let pts = crate::bezier::sample_solution_set(&polygon, 7).unwrap();
        assert_eq!(smoothness(&[pts]), 1.0);
    }
}
