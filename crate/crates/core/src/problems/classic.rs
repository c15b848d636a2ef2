//! MinDist, OmniTest, TwoOnOne and the SymPart family.

use std::collections::BTreeMap;

use super::{allocate, sample_segment};
use crate::real::Real;

type RefData<S> = (Vec<Vec<S>>, Vec<usize>, BTreeMap<String, String>);

// ---------------------------------------------------------------- MinDist

/// Two attractor pairs, one per niche; pair `j` spans the Pareto segment
/// from its f0 attractor `a_j` to its f1 attractor `b_j`. Both objectives
/// are measured against the pair whose segment is nearest (the sign of the
/// first coordinate), so each half-space is one smooth basin holding exactly
/// one Pareto segment.
fn mindist_attractors<S: Real>(dim: usize) -> ([Vec<S>; 2], [Vec<S>; 2]) {
    let pad = |x: f64, y: f64| {
        let mut v = vec![S::zero(); dim];
        v[0] = S::of(x);
        v[1] = S::of(y);
        v
    };
    (
        [pad(1.0, -1.0), pad(-1.0, 1.0)],
        [pad(1.0, 1.0), pad(-1.0, -1.0)],
    )
}

pub fn mindist<S: Real>(x: &[S]) -> [S; 2] {
    let (a, b) = mindist_attractors::<S>(x.len());
    let pair = |j: usize| -> [S; 2] {
        [crate::linalg::dist(x, &a[j]), crate::linalg::dist(x, &b[j])]
    };
    if x[0] > S::zero() {
        pair(0)
    } else if x[0] < S::zero() {
        pair(1)
    } else {
        // on the boundary both segments are equally near; report the better
        let (p0, p1) = (pair(0), pair(1));
        if p0[0] < p1[0] || (p0[0] == p1[0] && p0[1] <= p1[1]) {
            p0
        } else {
            p1
        }
    }
}

pub fn mindist_reference<S: Real>(dim: usize, n: usize) -> RefData<S> {
    let (a, b) = mindist_attractors::<S>(dim);
    let quotas = allocate(n, 2);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    for (niche, quota) in quotas.into_iter().enumerate() {
        for p in sample_segment(&a[niche], &b[niche], quota) {
            points.push(p);
            ids.push(niche);
        }
    }
    (points, ids, BTreeMap::new())
}

// --------------------------------------------------------------- OmniTest

pub fn omni_test<S: Real>(x: &[S]) -> [S; 2] {
    let pi = S::of(std::f64::consts::PI);
    let f1 = x.iter().map(|&v| (pi * v).sin()).sum();
    let f2 = x.iter().map(|&v| (pi * v).cos()).sum();
    [f1, f2]
}

/// Global Pareto sets: one diagonal segment per mode tuple `k` in {0,1,2}^l,
/// running from `2k + 1` to `2k + 1.5` with a shared offset per coordinate.
pub fn omni_reference<S: Real>(dim: usize, n: usize) -> RefData<S> {
    let total_niches = 3usize.checked_pow(dim as u32).unwrap_or(usize::MAX);
    let niches = total_niches.min(n.max(1));
    let quotas = allocate(n, niches);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    let mut tuple = vec![0u8; dim];
    for (niche, quota) in quotas.iter().copied().enumerate() {
        let a: Vec<S> = tuple.iter().map(|&k| S::of(2.0 * k as f64 + 1.0)).collect();
        let b: Vec<S> = tuple.iter().map(|&k| S::of(2.0 * k as f64 + 1.5)).collect();
        for p in sample_segment(&a, &b, quota) {
            points.push(p);
            ids.push(niche);
        }
        // next tuple in lexicographic order
        for slot in tuple.iter_mut().rev() {
            if *slot < 2 {
                *slot += 1;
                break;
            }
            *slot = 0;
        }
    }
    (points, ids, BTreeMap::new())
}

// --------------------------------------------------------------- TwoOnOne

/// Symmetric quartic with two equal minima on the main diagonal against a
/// sphere centred at the origin.
pub fn two_on_one<S: Real>(x: &[S]) -> [S; 2] {
    let (a, b) = (x[0], x[1]);
    let f1 = a.powi(4) + b.powi(4) - a * a + b * b - S::of(10.0) * a * b + S::of(20.0);
    let f2 = a * a + b * b;
    [f1, f2]
}

fn two_on_one_grad_hess<S: Real>(x: [S; 2], w: S) -> ([S; 2], [S; 4]) {
    let (a, b) = (x[0], x[1]);
    let wc = S::one() - w;
    let four = S::of(4.0);
    let two = S::of(2.0);
    let ten = S::of(10.0);
    let g = [
        w * (four * a.powi(3) - two * a - ten * b) + wc * two * a,
        w * (four * b.powi(3) + two * b - ten * a) + wc * two * b,
    ];
    let h = [
        w * (S::of(12.0) * a * a - two) + wc * two,
        -w * ten,
        -w * ten,
        w * (S::of(12.0) * b * b + two) + wc * two,
    ];
    (g, h)
}

fn two_on_one_weighted<S: Real>(x: [S; 2], w: S) -> S {
    let f = two_on_one(&x);
    w * f[0] + (S::one() - w) * f[1]
}

/// Damped Newton minimization of the weighted sum; used for the numerical
/// Pareto-set continuation since no closed form exists.
fn minimize_weighted<S: Real>(start: [S; 2], w: S) -> [S; 2] {
    let mut x = start;
    let mut lambda = S::of(1e-8);
    for _ in 0..300 {
        let (g, h) = two_on_one_grad_hess(x, w);
        let gnorm = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if gnorm < S::of(1e-13) {
            break;
        }
        let mut stepped = false;
        for _ in 0..60 {
            let (h00, h01, h10, h11) = (h[0] + lambda, h[1], h[2], h[3] + lambda);
            let det = h00 * h11 - h01 * h10;
            if det.abs() > S::of(1e-300) {
                let dx = [
                    -(h11 * g[0] - h01 * g[1]) / det,
                    -(h00 * g[1] - h10 * g[0]) / det,
                ];
                let cand = [x[0] + dx[0], x[1] + dx[1]];
                if two_on_one_weighted(cand, w) < two_on_one_weighted(x, w) + S::of(1e-18) {
                    x = cand;
                    lambda = (lambda * S::of(0.25)).max(S::of(1e-12));
                    stepped = true;
                    break;
                }
            }
            lambda = lambda * S::of(10.0);
        }
        if !stepped {
            break;
        }
    }
    x
}

pub fn two_on_one_reference<S: Real>(n: usize) -> RefData<S> {
    let quotas = allocate(n, 2);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    for (niche, quota) in quotas.into_iter().enumerate() {
        if quota == 0 {
            continue;
        }
        let sign = if niche == 0 { S::one() } else { -S::one() };
        let mut x = [sign * S::of(1.6), sign * S::of(1.6)];
        for i in 0..quota {
            // weight 1 -> f1 minimum, weight 0 -> f2 minimum (origin)
            let w = if quota == 1 {
                S::one()
            } else {
                S::one() - S::of_usize(i) / S::of_usize(quota - 1)
            };
            x = minimize_weighted(x, w);
            points.push(vec![x[0], x[1]]);
            ids.push(niche);
        }
    }
    let mut meta = BTreeMap::new();
    meta.insert(
        "pareto_set_source".to_string(),
        "weighted-sum continuation, damped Newton".to_string(),
    );
    meta.insert("gradient_tolerance".to_string(), "1e-13".to_string());
    (points, ids, meta)
}

// ---------------------------------------------------------------- SymPart

const SYM_A: f64 = 1.0;
const SYM_B: f64 = 10.0;
const SYM_C: f64 = 8.0;
const SYM_ROTATION: f64 = std::f64::consts::FRAC_PI_4;

fn sympart_base<S: Real>(z1: S, z2: S) -> [S; 2] {
    let a = S::of(SYM_A);
    let b = S::of(SYM_B);
    let c = S::of(SYM_C);
    let clamp_tile = |t: S| -> S {
        if t > S::one() {
            S::one()
        } else if t < -S::one() {
            -S::one()
        } else {
            t
        }
    };
    let t1 = {
        let raw = ((z1.abs() - a - c / S::of(2.0)) / (S::of(2.0) * a + c)).ceil();
        clamp_tile(raw.max(S::zero()) * z1.signum())
    };
    let t2 = {
        let raw = ((z2.abs() - b / S::of(2.0)) / b).ceil();
        clamp_tile(raw.max(S::zero()) * z2.signum())
    };
    let p1 = z1 - t1 * (c + S::of(2.0) * a);
    let p2 = z2 - t2 * b;
    [(p1 + a) * (p1 + a) + p2 * p2, (p1 - a) * (p1 - a) + p2 * p2]
}

fn rotate<S: Real>(x1: S, x2: S, angle: f64) -> (S, S) {
    let (sin, cos) = (S::of(angle.sin()), S::of(angle.cos()));
    (cos * x1 - sin * x2, sin * x1 + cos * x2)
}

/// Instance-3 distortion: a sine shear of the second rotated coordinate,
/// bending each tile's Pareto segment into a wave while leaving the
/// objective image (and hence the Pareto front) unchanged.
fn sympart_shear<S: Real>(z1: S, z2: S) -> (S, S) {
    let pi = S::of(std::f64::consts::PI);
    (z1, z2 - (pi * z1).sin())
}

pub fn sympart<S: Real>(x: &[S], variant: u8) -> [S; 2] {
    match variant {
        1 => sympart_base(x[0], x[1]),
        2 => {
            let (z1, z2) = rotate(x[0], x[1], SYM_ROTATION);
            sympart_base(z1, z2)
        }
        _ => {
            let (z1, z2) = rotate(x[0], x[1], SYM_ROTATION);
            let (w1, w2) = sympart_shear(z1, z2);
            sympart_base(w1, w2)
        }
    }
}

pub fn sympart_reference<S: Real>(variant: u8, n: usize) -> RefData<S> {
    let quotas = allocate(n, 9);
    let mut points = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    let centers = [-1.0f64, 0.0, 1.0];
    let mut niche = 0usize;
    for &ty in &centers {
        for &tx in &centers {
            let cy = ty * SYM_B;
            let cx = tx * (SYM_C + 2.0 * SYM_A);
            let quota = quotas[niche];
            for i in 0..quota {
                let t = if quota == 1 {
                    0.0
                } else {
                    i as f64 / (quota - 1) as f64
                };
                let d1 = cx - SYM_A + 2.0 * SYM_A * t;
                let d2 = cy;
                // invert the variant's decision-space transformation
                let (x1, x2) = match variant {
                    1 => (S::of(d1), S::of(d2)),
                    2 => {
                        let (z1, z2) = (S::of(d1), S::of(d2));
                        rotate(z1, z2, -SYM_ROTATION)
                    }
                    _ => {
                        let z1 = S::of(d1);
                        let z2 = S::of(d2 + (std::f64::consts::PI * d1).sin());
                        rotate(z1, z2, -SYM_ROTATION)
                    }
                };
                points.push(vec![x1, x2]);
                ids.push(niche);
            }
            niche += 1;
        }
    }
    (points, ids, BTreeMap::new())
}
