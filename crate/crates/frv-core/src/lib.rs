//! Fuzzy random variables on the real line.
//!
//! The crate models fuzzy numbers through finite families of α-level
//! intervals, equips them with Minkowski arithmetic and the uniform
//! Hausdorff metric, and simulates Minkowski sample means of fuzzy
//! random samples to study how fast they close in on their expectation.
//! Brute-force reference implementations live in [`oracle`] and exist
//! solely to check the closed-form paths in tests.

pub mod fuzzy;
pub mod intervals;
pub mod lln;
pub mod models;
pub mod oracle;

pub use fuzzy::{AlphaKnot, AlphaPartition, FuzzyNumber, InterpMode};
pub use intervals::{Direction, Interval};
pub use lln::{DecompositionReport, ScalarTail, StudyResult, StudyRow, TailEstimate, TrialResult};
pub use models::{CovReport, CsvError, LevelBasis, ModelKind, ModelSpec, OmegaSeed, SimError};
