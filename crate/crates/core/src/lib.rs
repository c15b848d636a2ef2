//! Bi-objective multi-modal optimization with Bézier-curve approximation
//! sets.
//!
//! The crate implements two evolutionary algorithms whose individuals encode
//! whole approximation sets as Bézier curves in decision space, which makes
//! every reported set smoothly navigable by construction:
//!
//! * [`mm_bezea`] searches for *all* niches of a problem by combining
//!   multi-objective hill-valley clustering, per-niche scalar hypervolume
//!   search and an elitist archive with taboo regions.
//! * [`set_bezea`] searches for a *fixed number* `b` of diverse, high-quality
//!   approximation sets with a bi-objective fitness (niche-shared
//!   hypervolume versus cosine diversity) and adaptive steering.
//!
//! Supporting modules: [`bezier`] (curve geometry, navigational order and the
//! wrap-prevention constraint), [`niching`] (hill-valley tests, clustering,
//! archive), [`gom`] (linkage trees and gene-pool optimal mixing),
//! [`problems`] (benchmark suite with analytic reference sets),
//! [`indicators`] (hypervolume, gHSS, IGDX/CR/PSP, smoothness) and
//! [`record`] (serializable run records).
//!
//! All numerics are generic over the scalar type via [`real::Real`]
//! (`f32`/`f64`); the aliases below fix `f64` for ordinary use.

pub mod bezier;
pub mod error;
pub mod gom;
pub mod indicators;
pub mod linalg;
pub mod mm_bezea;
pub mod niching;
pub mod problems;
pub mod real;
pub mod record;
pub mod set_bezea;

pub use error::{Error, Result};
pub use real::Real;

/// `f64`-backed aliases for the main types.
pub type ControlPolygon64 = bezier::ControlPolygon<f64>;
pub type BezierSolution64 = bezier::BezierSolution<f64>;
pub type ApproximationSet64 = bezier::ApproximationSet<f64>;
pub type Problem64 = problems::Problem<f64>;
pub type ReferenceSet64 = problems::ReferenceSet<f64>;
pub type ElitistArchive64 = niching::ElitistArchive<f64>;
pub type MmBezEaConfig64 = mm_bezea::MmBezEaConfig<f64>;
pub type SetBezEaConfig64 = set_bezea::SetBezEaConfig<f64>;
pub type BezierSetSolution64 = set_bezea::BezierSetSolution<f64>;
pub type RunRecord64 = record::RunRecord<f64>;
pub type ReportedSet64 = record::ReportedSet<f64>;
