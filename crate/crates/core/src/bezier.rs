//! Bézier curve evaluation, solution-set sampling, navigational ordering and
//! the wrap-prevention constraint.
//!
//! An approximation set is encoded as `q` ordered control points in decision
//! space. Sampling the curve at `p` evenly spread parameter values yields the
//! solution set; its non-dominated, monotone subset (the navigational order)
//! is the approximation set that gets scored with the hypervolume, while all
//! excluded samples are charged to a constraint that pushes the curve towards
//! an unfolded, fully non-dominated shape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{strictly_nondominated_mask, uncrowded_distance};
use crate::linalg::dist2;
use crate::real::Real;

/// Ordered set of `q >= 2` control points, each of decision dimension `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct ControlPolygon<S: Real> {
    pub points: Vec<Vec<S>>,
}

impl<S: Real> ControlPolygon<S> {
    pub fn new(points: Vec<Vec<S>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain(format!(
                "a control polygon needs at least 2 control points, got {}",
                points.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Domain(
                "control points must share a nonzero dimension".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points }
    }

    /// Clamp every control point into the box `[lower, upper]`.
    pub fn clamp_to_box(&mut self, lower: &[S], upper: &[S]) {
        for point in &mut self.points {
            for ((x, &lo), &hi) in point.iter_mut().zip(lower).zip(upper) {
                *x = (*x).max(lo).min(hi);
            }
        }
    }

    /// Concatenated decision variables `[c_1, ..., c_q]`.
    pub fn flatten(&self) -> Vec<S> {
        self.points.iter().flatten().copied().collect()
    }

    pub fn from_flat(flat: &[S], q: usize, dim: usize) -> Result<Self> {
        if flat.len() != q * dim {
            return Err(Error::Domain(format!(
                "flat genotype length {} does not match q*dim = {}",
                flat.len(),
                q * dim
            )));
        }
        Self::new(flat.chunks(dim).map(|c| c.to_vec()).collect())
    }
}

/// Bernstein-weighted point on the curve; `t` must already be in `[0, 1]`.
fn bernstein_point<S: Real>(polygon: &ControlPolygon<S>, t: S) -> Vec<S> {
    let q = polygon.num_points();
    let one_minus = S::one() - t;
    let mut out = vec![S::zero(); polygon.dim()];
    let mut binom = S::one();
    for (i, point) in polygon.points.iter().enumerate() {
        let weight = binom * one_minus.powi((q - 1 - i) as i32) * t.powi(i as i32);
        for (o, &c) in out.iter_mut().zip(point) {
            *o = *o + weight * c;
        }
        // next binomial coefficient C(q-1, i+1)
        binom = binom * S::of_usize(q - 1 - i) / S::of_usize(i + 1);
    }
    out
}

/// Evaluate the Bézier curve at parameter `t` in `[0, 1]`.
pub fn evaluate_bezier<S: Real>(polygon: &ControlPolygon<S>, t: S) -> Result<Vec<S>> {
    if !(t >= S::zero() && t <= S::one()) {
        return Err(Error::Domain(format!("curve parameter t={t} outside [0, 1]")));
    }
    Ok(bernstein_point(polygon, t))
}

/// Sample the solution set: `p` points at `t = i / (p - 1)`.
pub fn sample_solution_set<S: Real>(polygon: &ControlPolygon<S>, p: usize) -> Result<Vec<Vec<S>>> {
    if p < 2 {
        return Err(Error::Domain(format!(
            "a solution set needs at least 2 test points, got {p}"
        )));
    }
    let denom = S::of_usize(p - 1);
    Ok((0..p)
        .map(|i| bernstein_point(polygon, S::of_usize(i) / denom))
        .collect())
}

/// Reverse the control-point order unless `f0(c_1) <= f0(c_q)` already holds.
pub fn canonicalize_orientation<S: Real>(
    polygon: &ControlPolygon<S>,
    control_objectives: &[[S; 2]],
) -> ControlPolygon<S> {
    debug_assert_eq!(control_objectives.len(), polygon.num_points());
    let first = control_objectives[0][0];
    let last = control_objectives[control_objectives.len() - 1][0];
    if first > last {
        polygon.reversed()
    } else {
        polygon.clone()
    }
}

/// Navigational order over curve samples: scanning the samples in curve
/// order, keep an index when it is not dominated by (or a duplicate of) any
/// sample and strictly improves `f1` over the previously kept index.
pub fn navigational_order<S: Real>(objective_values: &[[S; 2]]) -> Vec<usize> {
    let mask = strictly_nondominated_mask(objective_values);
    let mut kept: Vec<usize> = Vec::with_capacity(objective_values.len());
    for (i, obj) in objective_values.iter().enumerate() {
        if !mask[i] {
            continue;
        }
        match kept.last() {
            None => kept.push(i),
            Some(&prev) => {
                if obj[1] < objective_values[prev][1] {
                    debug_assert!(obj[0] > objective_values[prev][0]);
                    kept.push(i);
                }
            }
        }
    }
    kept
}

/// One Bézier-parameterized solution set with its cached evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct BezierSolution<S: Real> {
    pub polygon: ControlPolygon<S>,
    pub test_points: Vec<Vec<S>>,
    pub objective_values: Vec<[S; 2]>,
    pub control_objectives: Vec<[S; 2]>,
    pub nav_order: Vec<usize>,
    pub hv: S,
    pub constraint: S,
}

/// Approximation set: navigational-order members, ascending in `f0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct ApproximationSet<S: Real> {
    pub members: Vec<(Vec<S>, [S; 2])>,
}

impl<S: Real> BezierSolution<S> {
    pub fn approximation_set(&self) -> ApproximationSet<S> {
        ApproximationSet {
            members: self
                .nav_order
                .iter()
                .map(|&i| (self.test_points[i].clone(), self.objective_values[i]))
                .collect(),
        }
    }

    /// Objective pairs of the navigational-order members.
    pub fn front(&self) -> Vec<[S; 2]> {
        self.nav_order.iter().map(|&i| self.objective_values[i]).collect()
    }

    /// Decision vectors of the navigational-order members.
    pub fn nav_points(&self) -> Vec<Vec<S>> {
        self.nav_order.iter().map(|&i| self.test_points[i].clone()).collect()
    }
}

/// Wrap-prevention constraint: every test point excluded from the
/// navigational order contributes its uncrowded distance to `front` (zero
/// when it is not dominated) plus the objective-space distance to each of its
/// curve neighbours.
pub fn constraint_value<S: Real>(sol: &BezierSolution<S>, front: &[[S; 2]]) -> S {
    let p = sol.objective_values.len();
    let in_order = {
        let mut mask = vec![false; p];
        for &i in &sol.nav_order {
            mask[i] = true;
        }
        mask
    };
    let mut total = S::zero();
    for i in 0..p {
        if in_order[i] {
            continue;
        }
        let obj = sol.objective_values[i];
        total = total + uncrowded_distance(obj, front);
        if i > 0 {
            total = total + dist2(obj, sol.objective_values[i - 1]);
        }
        if i + 1 < p {
            total = total + dist2(obj, sol.objective_values[i + 1]);
        }
    }
    total
}

/// Evaluate a Bézier solution end to end: orient the polygon canonically,
/// sample the `p` test points, evaluate them (and the interior control
/// points), derive the navigational order, hypervolume and constraint.
///
/// Costs `p + max(q - 2, 0)` evaluator calls, minus one per endpoint whose
/// objectives are supplied in `known_endpoints` (curve endpoints coincide
/// with the first and last control point, bit-exactly).
pub fn build_solution<S: Real>(
    polygon: ControlPolygon<S>,
    p: usize,
    reference_point: [S; 2],
    known_endpoints: (Option<[S; 2]>, Option<[S; 2]>),
    eval: &mut dyn FnMut(&[S]) -> Result<[S; 2]>,
) -> Result<BezierSolution<S>> {
    let q = polygon.num_points();
    let first_obj = match known_endpoints.0 {
        Some(obj) => obj,
        None => eval(&polygon.points[0])?,
    };
    let last_obj = match known_endpoints.1 {
        Some(obj) => obj,
        None => eval(&polygon.points[q - 1])?,
    };
    let (polygon, first_obj, last_obj) = if first_obj[0] > last_obj[0] {
        (polygon.reversed(), last_obj, first_obj)
    } else {
        (polygon, first_obj, last_obj)
    };

    let test_points = sample_solution_set(&polygon, p)?;
    let mut objective_values = Vec::with_capacity(p);
    objective_values.push(first_obj);
    for point in &test_points[1..p - 1] {
        objective_values.push(eval(point)?);
    }
    objective_values.push(last_obj);

    let mut control_objectives = Vec::with_capacity(q);
    control_objectives.push(first_obj);
    for point in &polygon.points[1..q - 1] {
        control_objectives.push(eval(point)?);
    }
    if q >= 2 {
        control_objectives.push(last_obj);
    }

    let nav_order = navigational_order(&objective_values);
    let mut sol = BezierSolution {
        polygon,
        test_points,
        objective_values,
        control_objectives,
        nav_order,
        hv: S::zero(),
        constraint: S::zero(),
    };
    let front = sol.front();
    sol.hv = crate::indicators::hypervolume_2d(&front, reference_point);
    sol.constraint = constraint_value(&sol, &front);
    Ok(sol)
}
