//! Problems from the multi-modal multi-objective test-function suite:
//! MMF1, MMF2, MMF12, MMF14 and MMF15.

use std::collections::BTreeMap;

use super::{allocate, sample_segment};
use crate::real::Real;

type RefData<S> = (Vec<Vec<S>>, Vec<usize>, BTreeMap<String, String>);

const PI: f64 = std::f64::consts::PI;

// ------------------------------------------------------------------- MMF1

/// Two mirrored sinusoidal Pareto sets; x1 in [1, 3], x2 in [-1, 1].
pub fn mmf1<S: Real>(x: &[S]) -> [S; 2] {
    let f1 = (x[0] - S::of(2.0)).abs();
    let wave = (S::of(6.0 * PI) * f1 + S::of(PI)).sin();
    let d = x[1] - wave;
    [f1, S::one() - f1.sqrt() + S::of(2.0) * d * d]
}

pub fn mmf1_reference<S: Real>(n: usize) -> RefData<S> {
    let quotas = allocate(n, 2);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    for (niche, quota) in quotas.into_iter().enumerate() {
        for i in 0..quota {
            let t = if quota == 1 { 0.0 } else { i as f64 / (quota - 1) as f64 };
            let x1 = if niche == 0 { 1.0 + t } else { 3.0 - t };
            let f1 = (x1 - 2.0).abs();
            let x2 = (6.0 * PI * f1 + PI).sin();
            points.push(vec![S::of(x1), S::of(x2)]);
            ids.push(niche);
        }
    }
    (points, ids, BTreeMap::new())
}

// ------------------------------------------------------------------- MMF2

/// Two square-root shaped Pareto sets stacked in x2; x1 in [0, 1], x2 in [0, 2].
pub fn mmf2<S: Real>(x: &[S]) -> [S; 2] {
    let root = x[0].max(S::zero()).sqrt();
    let y = if x[1] <= S::one() { x[1] - root } else { x[1] - S::one() - root };
    let osc = S::of(2.0) * (S::of(20.0 / std::f64::consts::SQRT_2) * y * S::of(PI)).cos();
    let penalty = S::of(2.0) * (S::of(4.0) * y * y - osc + S::of(2.0));
    [x[0], S::one() - root + penalty]
}

pub fn mmf2_reference<S: Real>(n: usize) -> RefData<S> {
    let quotas = allocate(n, 2);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    for (niche, quota) in quotas.into_iter().enumerate() {
        for i in 0..quota {
            let t = if quota == 1 { 0.5 } else { i as f64 / (quota - 1) as f64 };
            // keep x1 strictly positive on the upper branch so that
            // x2 = 1 + sqrt(x1) stays in the (1, 2] branch of the evaluator
            let x1 = if niche == 0 { t } else { (1e-9f64).max(t) };
            let x2 = if niche == 0 { t.sqrt() } else { 1.0 + x1.sqrt() };
            points.push(vec![S::of(x1), S::of(x2)]);
            ids.push(niche);
        }
    }
    (points, ids, BTreeMap::new())
}

// ------------------------------------------------------------------ MMF12

/// Deceptive distance function with a disconnected front. The per-variable
/// distance term mixes a `peaks`-modal sine with an exponential envelope, so
/// only the peak nearest 0.1 is globally optimal; averaging over the distance
/// variables keeps the front shape stable when the dimension grows.
pub fn mmf12<S: Real>(x: &[S], peaks: usize, pieces: usize) -> [S; 2] {
    let g = deceptive_g_mean(&x[1..], peaks);
    let f1 = x[0];
    let ratio = f1 / g;
    let f2 = g * (S::one() - ratio * ratio - ratio * (S::of(2.0 * pieces as f64) * S::of(PI) * f1).sin());
    [f1, f2]
}

fn deceptive_g_mean<S: Real>(rest: &[S], peaks: usize) -> S {
    let sum: S = rest.iter().map(|&v| S::of(2.0) - deceptive_factor(v, peaks)).sum();
    sum / S::of_usize(rest.len().max(1))
}

/// `exp(-2 ln 2 ((x - 0.1) / 0.8)^2) * sin^6(peaks * pi * x)`
fn deceptive_factor<S: Real>(x: S, peaks: usize) -> S {
    let envelope = (-S::of(2.0 * std::f64::consts::LN_2) * ((x - S::of(0.1)) / S::of(0.8)).powi(2)).exp();
    let s = (S::of(peaks as f64) * S::of(PI) * x).sin();
    envelope * s.powi(6)
}

/// Position of the global maximum of [`deceptive_factor`]: the sine peak
/// closest to 0.1, refined by golden-section search (the envelope shifts it
/// slightly off the exact peak).
fn deceptive_peak(peaks: usize) -> f64 {
    let center = 1.0 / (2.0 * peaks as f64);
    let half = 1.0 / (4.0 * peaks as f64);
    let (mut lo, mut hi) = (center - half, center + half);
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    let value = |x: f64| deceptive_factor::<f64>(x, peaks);
    let (mut x1, mut x2) = (hi - golden * (hi - lo), lo + golden * (hi - lo));
    let (mut f1, mut f2) = (value(x1), value(x2));
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = value(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Non-dominated x1 intervals of the disconnected front on the global branch,
/// found by a dense sweep.
fn mmf12_front_positions(peaks: usize, pieces: usize, count: usize) -> Vec<f64> {
    let x2 = deceptive_peak(peaks);
    let resolution = 200_001usize;
    let g = deceptive_g_mean::<f64>(&[x2], peaks);
    let mut kept = Vec::new();
    let mut best = f64::INFINITY;
    for i in 0..resolution {
        let f1 = i as f64 / (resolution - 1) as f64;
        let ratio = f1 / g;
        let f2 = g * (1.0 - ratio * ratio - ratio * (2.0 * pieces as f64 * PI * f1).sin());
        if f2 < best {
            best = f2;
            kept.push(f1);
        }
    }
    if kept.len() <= count {
        return kept;
    }
    (0..count)
        .map(|i| kept[i * (kept.len() - 1) / (count - 1).max(1)])
        .collect()
}

pub fn mmf12_reference<S: Real>(dim: usize, peaks: usize, pieces: usize, n: usize) -> RefData<S> {
    let x_rest = deceptive_peak(peaks);
    let positions = mmf12_front_positions(peaks, pieces, n.max(1));
    let points: Vec<Vec<S>> = positions
        .iter()
        .map(|&x1| {
            let mut p = vec![S::of(x_rest); dim];
            p[0] = S::of(x1);
            p
        })
        .collect();
    let ids = vec![0usize; points.len()];
    let mut meta = BTreeMap::new();
    meta.insert("front_sweep_resolution".to_string(), "200001".to_string());
    meta.insert("global_branch_position".to_string(), format!("{x_rest:.12}"));
    (points, ids, meta)
}

// ------------------------------------------------------------------ MMF14

/// Concave-front problem scalable in the decision dimension: the first
/// variable sweeps the front, every further variable has `peaks` equally
/// good sine peaks, giving `peaks^(l-1)` global Pareto sets.
pub fn mmf14<S: Real>(x: &[S], peaks: usize) -> [S; 2] {
    let g: S = x[1..]
        .iter()
        .map(|&v| {
            let s = (S::of(peaks as f64) * S::of(PI) * v).sin();
            S::of(2.0) - s.powi(6)
        })
        .sum();
    let angle = S::of(PI / 2.0) * x[0];
    [(S::one() + g) * angle.cos(), (S::one() + g) * angle.sin()]
}

pub fn mmf14_reference<S: Real>(dim: usize, peaks: usize, n: usize) -> RefData<S> {
    let combos = peaks.checked_pow(dim as u32 - 1).unwrap_or(usize::MAX);
    let niches = combos.min(n.max(1));
    let quotas = allocate(n, niches);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    let mut tuple = vec![0usize; dim - 1];
    for (niche, quota) in quotas.iter().copied().enumerate() {
        let rest: Vec<S> = tuple
            .iter()
            .map(|&k| S::of((2.0 * k as f64 + 1.0) / (2.0 * peaks as f64)))
            .collect();
        let mut a = vec![S::zero(); dim];
        let mut b = vec![S::one(); dim];
        for (j, &r) in rest.iter().enumerate() {
            a[j + 1] = r;
            b[j + 1] = r;
        }
        for p in sample_segment(&a, &b, quota) {
            points.push(p);
            ids.push(niche);
        }
        for slot in tuple.iter_mut().rev() {
            if *slot + 1 < peaks {
                *slot += 1;
                break;
            }
            *slot = 0;
        }
    }
    (points, ids, BTreeMap::new())
}

// ------------------------------------------------------------------ MMF15

/// Like MMF14 but with the deceptive exponential envelope: only the peak
/// nearest 0.1 is globally optimal, the others are local Pareto sets.
pub fn mmf15<S: Real>(x: &[S], peaks: usize) -> [S; 2] {
    let g: S = x[1..]
        .iter()
        .map(|&v| S::of(2.0) - deceptive_factor(v, peaks))
        .sum();
    let angle = S::of(PI / 2.0) * x[0];
    [(S::one() + g) * angle.cos(), (S::one() + g) * angle.sin()]
}

pub fn mmf15_reference<S: Real>(dim: usize, peaks: usize, n: usize) -> RefData<S> {
    let x_rest = deceptive_peak(peaks);
    let mut a = vec![S::of(x_rest); dim];
    let mut b = vec![S::of(x_rest); dim];
    a[0] = S::zero();
    b[0] = S::one();
    let points = sample_segment(&a, &b, n);
    let ids = vec![0usize; points.len()];
    let mut meta = BTreeMap::new();
    meta.insert("global_branch_position".to_string(), format!("{x_rest:.12}"));
    (points, ids, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mmf1_pareto_points_have_zero_penalty() {
        let (points, _, _) = mmf1_reference::<f64>(100);
        for p in &points {
            let f = mmf1(p);
            assert!((f[1] - (1.0 - f[0].sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn mmf2_pareto_points_have_zero_penalty() {
        let (points, _, _) = mmf2_reference::<f64>(100);
        for p in &points {
            let f = mmf2(p);
            assert!(
                (f[1] - (1.0 - p[0].sqrt())).abs() < 1e-6,
                "point {p:?} -> {f:?}"
            );
        }
    }

    #[test]
    fn deceptive_peak_beats_exact_sine_peak() {
        let p = deceptive_peak(2);
        assert!((p - 0.25).abs() < 0.02);
        assert!(deceptive_factor::<f64>(p, 2) >= deceptive_factor::<f64>(0.25, 2));
    }

    #[test]
    fn mmf14_reference_lies_on_concave_arc() {
        let (points, ids, _) = mmf14_reference::<f64>(2, 2, 100);
        assert_eq!(ids.iter().filter(|&&i| i == 0).count(), 50);
        for p in &points {
            let f = mmf14(p, 2);
            let r = (f[0] * f[0] + f[1] * f[1]).sqrt();
            assert!((r - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mmf15_local_branch_is_dominated() {
        // x2 = 0.75 peak is deceptive: larger radius than the global branch
        let f_global = mmf15::<f64>(&[0.5, deceptive_peak(2)], 2);
        let f_local = mmf15::<f64>(&[0.5, 0.75], 2);
        let r_g = (f_global[0].powi(2) + f_global[1].powi(2)).sqrt();
        let r_l = (f_local[0].powi(2) + f_local[1].powi(2)).sqrt();
        assert!(r_g < r_l);
    }

    #[test]
    fn mmf12_front_is_disconnected() {
        let positions = mmf12_front_positions(2, 4, 1000);
        // gaps between kept x1 values mark the disconnected pieces
        let mut gaps = 0;
        for w in positions.windows(2) {
            if w[1] - w[0] > 0.02 {
                gaps += 1;
            }
        }
        assert!(gaps >= 2, "expected several front pieces, got {gaps} gaps");
    }
}
