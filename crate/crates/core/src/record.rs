//! Seeded run records: per-generation traces and final approximation sets,
//! serializable to JSON for the benchmark harness.

use serde::{Deserialize, Serialize};

use crate::bezier::{evaluate_bezier, BezierSolution};
use crate::real::Real;

/// One reported approximation set (a Bézier solution plus niche metadata).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct ReportedSet<S: Real> {
    pub control_points: Vec<Vec<S>>,
    pub test_points: Vec<Vec<S>>,
    pub objectives: Vec<[S; 2]>,
    pub nav_order: Vec<usize>,
    pub hv: S,
    pub constraint: S,
    /// Indices of other reported sets judged to share this set's niche.
    pub same_niche_as: Vec<usize>,
}

impl<S: Real> ReportedSet<S> {
    pub fn from_solution(sol: &BezierSolution<S>) -> Self {
        Self {
            control_points: sol.polygon.points.clone(),
            test_points: sol.test_points.clone(),
            objectives: sol.objective_values.clone(),
            nav_order: sol.nav_order.clone(),
            hv: sol.hv,
            constraint: sol.constraint,
            same_niche_as: Vec::new(),
        }
    }

    /// Decision vectors of the navigational-order members.
    pub fn nav_points(&self) -> Vec<Vec<S>> {
        self.nav_order.iter().map(|&i| self.test_points[i].clone()).collect()
    }

    /// Objective pairs of the navigational-order members.
    pub fn front(&self) -> Vec<[S; 2]> {
        self.nav_order.iter().map(|&i| self.objectives[i]).collect()
    }

    /// Interpolate the underlying curve with `n` evenly spread points; no
    /// objective evaluations are involved.
    pub fn interpolate(&self, n: usize) -> Vec<Vec<S>> {
        let polygon = crate::bezier::ControlPolygon {
            points: self.control_points.clone(),
        };
        let denom = S::of_usize(n.max(2) - 1);
        (0..n.max(2))
            .map(|i| evaluate_bezier(&polygon, S::of_usize(i) / denom).expect("t in [0,1]"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct MmTraceRow<S: Real> {
    pub generation: u64,
    pub evaluations: u64,
    pub archive_size: usize,
    pub archive_hv_sum: S,
    pub archive_constraint_sum: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct SetTraceRow<S: Real> {
    pub generation: u64,
    pub evaluations: u64,
    pub best_f0: S,
    pub best_f0_diversity: S,
    pub steering_threshold: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct MmRunRecord<S: Real> {
    pub problem: String,
    pub dim: usize,
    pub seed: u64,
    pub population: usize,
    pub test_points: usize,
    pub control_points: usize,
    pub budget_limit: u64,
    pub restart_doubling: bool,
    pub init_evaluations: u64,
    pub evaluations_used: u64,
    pub generations: u64,
    pub restarts: u64,
    pub trace: Vec<MmTraceRow<S>>,
    pub final_sets: Vec<ReportedSet<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
pub struct SetRunRecord<S: Real> {
    pub problem: String,
    pub dim: usize,
    pub seed: u64,
    pub curves: usize,
    pub population: usize,
    pub test_points: usize,
    pub control_points: usize,
    pub budget_limit: u64,
    pub diversity: String,
    pub init_evaluations: u64,
    pub evaluations_used: u64,
    pub generations: u64,
    pub trace: Vec<SetTraceRow<S>>,
    /// Non-dominated objective triples `(f0, f1, constraint)` of the final
    /// population.
    pub final_front: Vec<[S; 3]>,
    /// Curves of the reported (steered-feasible, max-f0) set solution.
    pub final_sets: Vec<ReportedSet<S>>,
}

/// Record of one seeded run of either algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Real")]
#[serde(tag = "algorithm")]
pub enum RunRecord<S: Real> {
    #[serde(rename = "mm-bezea")]
    MmBezEa(MmRunRecord<S>),
    #[serde(rename = "set-bezea")]
    SetBezEa(SetRunRecord<S>),
}

impl<S: Real> RunRecord<S> {
    pub fn problem(&self) -> &str {
        match self {
            RunRecord::MmBezEa(r) => &r.problem,
            RunRecord::SetBezEa(r) => &r.problem,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            RunRecord::MmBezEa(r) => r.seed,
            RunRecord::SetBezEa(r) => r.seed,
        }
    }

    pub fn evaluations_used(&self) -> u64 {
        match self {
            RunRecord::MmBezEa(r) => r.evaluations_used,
            RunRecord::SetBezEa(r) => r.evaluations_used,
        }
    }

    pub fn budget_limit(&self) -> u64 {
        match self {
            RunRecord::MmBezEa(r) => r.budget_limit,
            RunRecord::SetBezEa(r) => r.budget_limit,
        }
    }

    pub fn solution_eval_cost(&self) -> u64 {
        let (p, q) = match self {
            RunRecord::MmBezEa(r) => (r.test_points, r.control_points),
            RunRecord::SetBezEa(r) => (r.test_points, r.control_points),
        };
        (p + q.saturating_sub(2)) as u64
    }

    pub fn final_sets(&self) -> &[ReportedSet<S>] {
        match self {
            RunRecord::MmBezEa(r) => &r.final_sets,
            RunRecord::SetBezEa(r) => &r.final_sets,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_lossless() {
        let record: RunRecord<f64> = RunRecord::MmBezEa(MmRunRecord {
            problem: "MinDist".into(),
            dim: 2,
            seed: 17,
            population: 4,
            test_points: 5,
            control_points: 2,
            budget_limit: 100,
            restart_doubling: false,
            init_evaluations: 40,
            evaluations_used: 99,
            generations: 3,
            restarts: 0,
            trace: vec![MmTraceRow {
                generation: 0,
                evaluations: 40,
                archive_size: 2,
                archive_hv_sum: 1.234567890123456789,
                archive_constraint_sum: 0.0,
            }],
            final_sets: vec![ReportedSet {
                control_points: vec![vec![1.0, -1.0], vec![1.0, 1.0]],
                test_points: vec![vec![1.0, -1.0], vec![1.0, 1.0]],
                objectives: vec![[0.0, 2.0], [2.0, 0.0]],
                nav_order: vec![0, 1],
                hv: 0.1 + 0.2,
                constraint: 0.0,
                same_niche_as: vec![],
            }],
        });
        let json = serde_json::to_string(&record).unwrap();
        let back: RunRecord<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
        // serializing twice is byte-identical
        assert_eq!(json, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn interpolation_matches_curve_samples() {
        let set = ReportedSet::<f64> {
            control_points: vec![vec![0.0, 0.0], vec![2.0, 2.0]],
            test_points: vec![],
            objectives: vec![],
            nav_order: vec![],
            hv: 0.0,
            constraint: 0.0,
            same_niche_as: vec![],
        };
        let pts = set.interpolate(3);
        assert_eq!(pts, vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
    }
}
