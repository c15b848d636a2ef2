//! Small dense-vector helpers shared by the geometry and search code.

use crate::real::Real;

pub fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm<S: Real>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

pub fn dist<S: Real>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<S>()
        .sqrt()
}

pub fn sub<S: Real>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn mean_vector<S: Real>(rows: &[&[S]]) -> Vec<S> {
    assert!(!rows.is_empty());
    let dim = rows[0].len();
    let n = S::of_usize(rows.len());
    let mut out = vec![S::zero(); dim];
    for row in rows {
        for (o, &v) in out.iter_mut().zip(row.iter()) {
            *o = *o + v;
        }
    }
    for o in &mut out {
        *o = *o / n;
    }
    out
}

/// Euclidean distance between two objective pairs.
pub fn dist2<S: Real>(a: [S; 2], b: [S; 2]) -> S {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    (d0 * d0 + d1 * d1).sqrt()
}

/// Lower-triangular Cholesky factor of a small symmetric matrix, with a
/// diagonal jitter retry for nearly singular inputs. Returns row-major L.
pub fn cholesky<S: Real>(matrix: &[S], n: usize) -> Vec<S> {
    debug_assert_eq!(matrix.len(), n * n);
    let mut jitter = S::zero();
    let trace: S = (0..n).map(|i| matrix[i * n + i]).sum();
    let base = (trace / S::of_usize(n.max(1))).abs().max(S::of(1e-300));
    for _ in 0..12 {
        if let Some(l) = try_cholesky(matrix, n, jitter) {
            return l;
        }
        jitter = if jitter == S::zero() {
            base * S::of(1e-12)
        } else {
            jitter * S::of(10.0)
        };
    }
    // Fall back to a diagonal factor; keeps sampling well-defined.
    let mut l = vec![S::zero(); n * n];
    for i in 0..n {
        l[i * n + i] = matrix[i * n + i].abs().sqrt().max(base.sqrt() * S::of(1e-8));
    }
    l
}

fn try_cholesky<S: Real>(matrix: &[S], n: usize, jitter: S) -> Option<Vec<S>> {
    let mut l = vec![S::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = matrix[i * n + j];
            if i == j {
                sum = sum + jitter;
            }
            for k in 0..j {
                sum = sum - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= S::zero() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}
