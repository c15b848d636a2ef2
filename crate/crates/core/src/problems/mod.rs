//! Benchmark problem suite: box-bounded bi-objective evaluators with analytic
//! (or, for TwoOnOne, numerically continued) reference Pareto sets, plus the
//! evaluation-counting budget used by every run loop.

mod classic;
mod mmf;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;

/// Counts objective-function evaluations against a hard limit.
///
/// Run loops check [`EvaluationBudget::has_remaining`] before starting a
/// solution-set evaluation and then charge the points of that solution with
/// [`EvaluationBudget::charge_overdraft`], so the final count can exceed the
/// limit by at most one solution-set evaluation (`p + max(q - 2, 0)` points).
/// Hill-valley tests charge strictly and abort on exhaustion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationBudget {
    limit: u64,
    used: u64,
}

impl EvaluationBudget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn has_remaining(&self) -> bool {
        self.used < self.limit
    }

    /// Strict charge: fails without counting once the limit is reached.
    pub fn charge(&mut self) -> Result<()> {
        if self.used >= self.limit {
            return Err(Error::BudgetExhausted);
        }
        self.used += 1;
        Ok(())
    }

    /// Charge inside an already admitted solution-set evaluation.
    pub fn charge_overdraft(&mut self) {
        self.used += 1;
    }
}

/// Decision-space reference set sampled from the (global) Pareto sets.
#[derive(Debug, Clone)]
pub struct ReferenceSet<S: Real> {
    pub problem: String,
    pub dim: usize,
    pub points: Vec<Vec<S>>,
    pub niche_ids: Vec<usize>,
    pub metadata: BTreeMap<String, String>,
}

impl<S: Real> ReferenceSet<S> {
    /// Points belonging to one niche.
    pub fn niche(&self, id: usize) -> Vec<Vec<S>> {
        self.points
            .iter()
            .zip(&self.niche_ids)
            .filter(|(_, &n)| n == id)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn num_niches(&self) -> usize {
        self.niche_ids.iter().copied().max().map_or(0, |m| m + 1)
    }
}

type CustomEval<S> = Arc<dyn Fn(&[S]) -> [S; 2] + Send + Sync>;

#[derive(Clone)]
pub(crate) enum Kind<S: Real> {
    MinDist,
    OmniTest,
    TwoOnOne,
    SymPart { variant: u8 },
    Mmf1,
    Mmf2,
    Mmf12 { peaks: usize, pieces: usize },
    Mmf14 { peaks: usize },
    Mmf15 { peaks: usize },
    Custom { eval: CustomEval<S> },
}

/// A box-bounded bi-objective benchmark problem.
#[derive(Clone)]
pub struct Problem<S: Real> {
    name: String,
    dim: usize,
    lower: Vec<S>,
    upper: Vec<S>,
    kind: Kind<S>,
    niche_count: u64,
    reference_point: [S; 2],
}

impl<S: Real> Problem<S> {
    /// Build a problem by name. Accepted names (case and punctuation
    /// insensitive): MinDist, OmniTest, TwoOnOne, SymPart1, SymPart2,
    /// SymPart3, MMF1, MMF2, MMF12, MMF14, MMF15.
    pub fn make(name: &str, dim: usize) -> Result<Self> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let unsupported = || Error::UnsupportedProblem {
            name: name.to_string(),
            dim,
        };
        let (canonical, kind, lower, upper, niche_count): (&str, Kind<S>, f64, f64, u64) =
            match key.as_str() {
                "mindist" => {
                    if dim < 2 {
                        return Err(unsupported());
                    }
                    ("MinDist", Kind::MinDist, -2.0, 2.0, 2)
                }
                "omnitest" => {
                    if dim < 2 {
                        return Err(unsupported());
                    }
                    ("OmniTest", Kind::OmniTest, 0.0, 6.0, 3u64.saturating_pow(dim as u32))
                }
                "twoonone" => {
                    if dim != 2 {
                        return Err(unsupported());
                    }
                    ("TwoOnOne", Kind::TwoOnOne, -3.0, 3.0, 2)
                }
                "sympart1" | "sympart2" | "sympart3" => {
                    if dim != 2 {
                        return Err(unsupported());
                    }
                    let variant = key.as_bytes()[key.len() - 1] - b'0';
                    let name: &str = match variant {
                        1 => "SymPart1",
                        2 => "SymPart2",
                        _ => "SymPart3",
                    };
                    (name, Kind::SymPart { variant }, -20.0, 20.0, 9)
                }
                "mmf1" => {
                    if dim != 2 {
                        return Err(unsupported());
                    }
                    ("MMF1", Kind::Mmf1, 0.0, 0.0, 2)
                }
                "mmf2" => {
                    if dim != 2 {
                        return Err(unsupported());
                    }
                    ("MMF2", Kind::Mmf2, 0.0, 0.0, 2)
                }
                "mmf12" => {
                    if dim < 2 {
                        return Err(unsupported());
                    }
                    (
                        "MMF12",
                        Kind::Mmf12 { peaks: 2, pieces: 4 },
                        0.0,
                        1.0,
                        2u64.saturating_pow(dim as u32 - 1),
                    )
                }
                "mmf14" => {
                    if dim < 2 {
                        return Err(unsupported());
                    }
                    (
                        "MMF14",
                        Kind::Mmf14 { peaks: 2 },
                        0.0,
                        1.0,
                        2u64.saturating_pow(dim as u32 - 1),
                    )
                }
                "mmf15" => {
                    if dim < 2 {
                        return Err(unsupported());
                    }
                    (
                        "MMF15",
                        Kind::Mmf15 { peaks: 2 },
                        0.0,
                        1.0,
                        2u64.saturating_pow(dim as u32 - 1),
                    )
                }
                _ => return Err(unsupported()),
            };
        let (lower, upper) = match &kind {
            // MMF1 and MMF2 have per-variable bounds
            Kind::Mmf1 => (vec![S::of(1.0), S::of(-1.0)], vec![S::of(3.0), S::of(1.0)]),
            Kind::Mmf2 => (vec![S::zero(), S::zero()], vec![S::one(), S::of(2.0)]),
            _ => (vec![S::of(lower); dim], vec![S::of(upper); dim]),
        };
        let mut problem = Self {
            name: canonical.to_string(),
            dim,
            lower,
            upper,
            kind,
            niche_count,
            reference_point: [S::zero(), S::zero()],
        };
        problem.reference_point = problem.derive_reference_point();
        Ok(problem)
    }

    /// A user-supplied problem, mainly for tests and experiments.
    pub fn custom(
        name: &str,
        lower: Vec<S>,
        upper: Vec<S>,
        niche_count: u64,
        reference_point: [S; 2],
        eval: impl Fn(&[S]) -> [S; 2] + Send + Sync + 'static,
    ) -> Self {
        let dim = lower.len();
        assert_eq!(dim, upper.len());
        Self {
            name: name.to_string(),
            dim,
            lower,
            upper,
            kind: Kind::Custom { eval: Arc::new(eval) },
            niche_count,
            reference_point,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn upper(&self) -> &[S] {
        &self.upper
    }

    pub fn box_volume(&self) -> S {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| hi - lo)
            .fold(S::one(), |acc, w| acc * w)
    }

    pub fn known_niche_count(&self) -> u64 {
        self.niche_count
    }

    pub fn reference_point(&self) -> [S; 2] {
        self.reference_point
    }

    /// Pure objective evaluation, not counted against any budget. Indicator
    /// and reference-set computations use this path.
    pub fn evaluate_raw(&self, x: &[S]) -> [S; 2] {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::MinDist => classic::mindist(x),
            Kind::OmniTest => classic::omni_test(x),
            Kind::TwoOnOne => classic::two_on_one(x),
            Kind::SymPart { variant } => classic::sympart(x, *variant),
            Kind::Mmf1 => mmf::mmf1(x),
            Kind::Mmf2 => mmf::mmf2(x),
            Kind::Mmf12 { peaks, pieces } => mmf::mmf12(x, *peaks, *pieces),
            Kind::Mmf14 { peaks } => mmf::mmf14(x, *peaks),
            Kind::Mmf15 { peaks } => mmf::mmf15(x, *peaks),
            Kind::Custom { eval } => eval(x),
        }
    }

    /// Budget-counted evaluation.
    pub fn evaluate(&self, x: &[S], budget: &mut EvaluationBudget) -> Result<[S; 2]> {
        budget.charge()?;
        Ok(self.evaluate_raw(x))
    }

    /// Sample `n` reference points across the global Pareto sets.
    pub fn reference_set(&self, n: usize) -> ReferenceSet<S> {
        let (points, niche_ids, metadata) = match &self.kind {
            Kind::MinDist => classic::mindist_reference(self.dim, n),
            Kind::OmniTest => classic::omni_reference(self.dim, n),
            Kind::TwoOnOne => classic::two_on_one_reference(n),
            Kind::SymPart { variant } => classic::sympart_reference(*variant, n),
            Kind::Mmf1 => mmf::mmf1_reference(n),
            Kind::Mmf2 => mmf::mmf2_reference(n),
            Kind::Mmf12 { peaks, pieces } => mmf::mmf12_reference(self.dim, *peaks, *pieces, n),
            Kind::Mmf14 { peaks } => mmf::mmf14_reference(self.dim, *peaks, n),
            Kind::Mmf15 { peaks } => mmf::mmf15_reference(self.dim, *peaks, n),
            Kind::Custom { .. } => (Vec::new(), Vec::new(), BTreeMap::new()),
        };
        ReferenceSet {
            problem: self.name.clone(),
            dim: self.dim,
            points,
            niche_ids,
            metadata,
        }
    }

    fn derive_reference_point(&self) -> [S; 2] {
        let refset = self.reference_set(2000);
        if refset.points.is_empty() {
            return [S::one(), S::one()];
        }
        let mut worst = [S::neg_infinity(); 2];
        let mut best = [S::infinity(); 2];
        for p in &refset.points {
            let f = self.evaluate_raw(p);
            for k in 0..2 {
                worst[k] = worst[k].max(f[k]);
                best[k] = best[k].min(f[k]);
            }
        }
        let margin = S::of(0.1);
        [
            worst[0] + margin * (worst[0] - best[0]),
            worst[1] + margin * (worst[1] - best[1]),
        ]
    }
}

/// Quota allocation: split `total` across `groups` as evenly as possible,
/// earlier groups take the remainder.
pub(crate) fn allocate(total: usize, groups: usize) -> Vec<usize> {
    if groups == 0 {
        return Vec::new();
    }
    let base = total / groups;
    let extra = total % groups;
    (0..groups).map(|g| base + usize::from(g < extra)).collect()
}

/// Sample `k` points on the segment `a..b`, endpoints included for `k >= 2`;
/// `k == 1` yields the segment start.
pub(crate) fn sample_segment<S: Real>(a: &[S], b: &[S], k: usize) -> Vec<Vec<S>> {
    if k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return vec![a.to_vec()];
    }
    let denom = S::of_usize(k - 1);
    (0..k)
        .map(|i| {
            let t = S::of_usize(i) / denom;
            a.iter().zip(b).map(|(&x, &y)| x + t * (y - x)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn budget_counts_exactly_and_signals_exhaustion() {
        let problem: Problem<f64> = Problem::make("MinDist", 2).unwrap();
        let mut budget = EvaluationBudget::new(3);
        for _ in 0..3 {
            problem.evaluate(&[0.0, 0.0], &mut budget).unwrap();
        }
        assert_eq!(budget.used(), 3);
        assert!(matches!(
            problem.evaluate(&[0.0, 0.0], &mut budget),
            Err(Error::BudgetExhausted)
        ));
        assert_eq!(budget.used(), 3);
    }

    #[test]
    fn mindist_fixed_points() {
        let p: Problem<f64> = Problem::make("MinDist", 2).unwrap();
        assert_eq!(p.evaluate_raw(&[1.0, -1.0]), [0.0, 2.0]);
        let f = p.evaluate_raw(&[0.0, 0.0]);
        assert!((f[0] - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((f[1] - 2.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.evaluate_raw(&[-1.0, 1.0]), [0.0, 2.0]);
    }

    #[test]
    fn known_niche_counts() {
        assert_eq!(Problem::<f64>::make("OmniTest", 2).unwrap().known_niche_count(), 9);
        assert_eq!(Problem::<f64>::make("MinDist", 2).unwrap().known_niche_count(), 2);
        assert_eq!(Problem::<f64>::make("SymPart1", 2).unwrap().known_niche_count(), 9);
        assert_eq!(Problem::<f64>::make("OmniTest", 5).unwrap().known_niche_count(), 243);
    }

    #[test]
    fn unsupported_configuration_is_rejected() {
        assert!(Problem::<f64>::make("TwoOnOne", 3).is_err());
        assert!(Problem::<f64>::make("nosuch", 2).is_err());
        assert!(Problem::<f64>::make("MMF1", 4).is_err());
    }

    #[test]
    fn name_parsing_is_forgiving() {
        assert_eq!(Problem::<f64>::make("min-dist", 2).unwrap().name(), "MinDist");
        assert_eq!(Problem::<f64>::make("sym_part_1", 2).unwrap().name(), "SymPart1");
        assert_eq!(Problem::<f64>::make("Omni Test", 3).unwrap().name(), "OmniTest");
    }

    #[test]
    fn mindist_two_point_reference_hits_segment_starts() {
        let p: Problem<f64> = Problem::make("MinDist", 2).unwrap();
        let r = p.reference_set(2);
        assert_eq!(r.points.len(), 2);
        // one point per niche, each a segment endpoint
        assert_eq!(r.niche_ids, vec![0, 1]);
        for pt in &r.points {
            assert!((pt[0].abs() - 1.0).abs() < 1e-12);
            assert!((pt[1].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sympart1_reference_has_nine_equal_groups() {
        let p: Problem<f64> = Problem::make("SymPart1", 2).unwrap();
        let r = p.reference_set(900);
        assert_eq!(r.num_niches(), 9);
        for id in 0..9 {
            assert_eq!(r.niche(id).len(), 100);
        }
    }

    #[test]
    fn reference_sets_lie_within_bounds() {
        for (name, dim) in [
            ("MinDist", 2usize),
            ("OmniTest", 2),
            ("OmniTest", 5),
            ("TwoOnOne", 2),
            ("SymPart1", 2),
            ("SymPart2", 2),
            ("SymPart3", 2),
            ("MMF1", 2),
            ("MMF2", 2),
            ("MMF12", 2),
            ("MMF14", 2),
            ("MMF15", 2),
        ] {
            let p: Problem<f64> = Problem::make(name, dim).unwrap();
            let r = p.reference_set(500);
            assert!(!r.points.is_empty(), "{name}");
            for pt in &r.points {
                for ((&x, &lo), &hi) in pt.iter().zip(p.lower()).zip(p.upper()) {
                    assert!(
                        x >= lo - 1e-9 && x <= hi + 1e-9,
                        "{name}: {x} outside [{lo}, {hi}]"
                    );
                }
            }
        }
    }

    #[test]
    fn reference_points_are_nondominated_within_each_niche() {
        for name in ["MinDist", "OmniTest", "SymPart1", "MMF1", "MMF14"] {
            let p: Problem<f64> = Problem::make(name, 2).unwrap();
            let r = p.reference_set(120);
            for id in 0..r.num_niches() {
                let pts = r.niche(id);
                let objs: Vec<[f64; 2]> = pts.iter().map(|x| p.evaluate_raw(x)).collect();
                for i in 0..objs.len() {
                    for j in 0..objs.len() {
                        if i != j {
                            assert!(
                                !crate::indicators::dominates_min(objs[j], objs[i])
                                    || crate::linalg::dist2(objs[i], objs[j]) < 1e-9,
                                "{name} niche {id}: point {j} dominates {i}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reference_objectives_nondominated_against_random_box_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for name in [
            "MinDist", "OmniTest", "TwoOnOne", "SymPart1", "SymPart2", "SymPart3", "MMF1",
            "MMF2", "MMF12", "MMF14", "MMF15",
        ] {
            let p: Problem<f64> = Problem::make(name, 2).unwrap();
            let refset = p.reference_set(200);
            let ref_objs: Vec<[f64; 2]> = refset.points.iter().map(|x| p.evaluate_raw(x)).collect();
            for _ in 0..10_000 {
                let x: Vec<f64> = p
                    .lower()
                    .iter()
                    .zip(p.upper())
                    .map(|(&lo, &hi)| lo + rng.random::<f64>() * (hi - lo))
                    .collect();
                let f = p.evaluate_raw(&x);
                for (i, &ro) in ref_objs.iter().enumerate() {
                    // allow equality plus slack covering the numerically
                    // derived reference sets (TwoOnOne, MMF12)
                    assert!(
                        !(f[0] < ro[0] - 1e-3 && f[1] < ro[1] - 1e-3),
                        "{name}: sample {x:?} -> {f:?} dominates reference point {i} ({ro:?})"
                    );
                }
            }
        }
    }

    #[test]
    fn omni_reference_points_are_pareto_local_at_grid_resolution() {
        let p: Problem<f64> = Problem::make("OmniTest", 2).unwrap();
        let refset = p.reference_set(54);
        let h = 1e-3;
        for pt in refset.points.iter().take(54) {
            let f = p.evaluate_raw(pt);
            for dx in [-h, 0.0, h] {
                for dy in [-h, 0.0, h] {
                    if dx == 0.0 && dy == 0.0 {
                        continue;
                    }
                    let q = vec![
                        (pt[0] + dx).clamp(0.0, 6.0),
                        (pt[1] + dy).clamp(0.0, 6.0),
                    ];
                    let g = p.evaluate_raw(&q);
                    assert!(
                        !(g[0] < f[0] - 1e-12 && g[1] < f[1] - 1e-12),
                        "grid neighbour dominates omni reference point {pt:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn evaluators_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["MinDist", "OmniTest", "TwoOnOne", "SymPart3", "MMF12"] {
            let p: Problem<f64> = Problem::make(name, 2).unwrap();
            for _ in 0..100 {
                let x: Vec<f64> = p
                    .lower()
                    .iter()
                    .zip(p.upper())
                    .map(|(&lo, &hi)| lo + rng.random::<f64>() * (hi - lo))
                    .collect();
                assert_eq!(p.evaluate_raw(&x), p.evaluate_raw(&x));
            }
        }
    }

    #[test]
    fn allocation_is_even_with_earlier_remainder() {
        assert_eq!(allocate(10, 3), vec![4, 3, 3]);
        assert_eq!(allocate(2, 2), vec![1, 1]);
        assert_eq!(allocate(1, 3), vec![1, 0, 0]);
    }
}
