//! Numerical canonical cycles of normal surface singularities.
//!
//! Given the weighted dual graph of the minimal resolution of a normal
//! surface singularity, this crate computes the numerical canonical cycle
//! `K`, the invariant `-K²`, the fundamental cycle and related numerical
//! data, all in exact rational arithmetic. On top of that it provides
//! (-2)-insertions and string contraction together with the exact
//! difference identities they satisfy, limits of `-K²` under stretching of
//! (-2)-strings, generators for the classical graph families with
//! closed-form values, and a bounded enumeration of dual graphs up to
//! isomorphism.
//!
//! The runnable programs under `examples/` walk through each capability:
//!
//! ```text
//! cargo run -p kdg --example canonical_cycle
//! cargo run -p kdg --example triple_points
//! cargo run -p kdg --example insertion_identities
//! cargo run -p kdg --example accumulation_limits
//! cargo run -p kdg --example spectrum
//! cargo run -p kdg --example graph_files
//! ```

pub mod enumeration;
pub mod error;
pub mod families;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod rational;
pub mod suites;
pub mod transforms;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
pub use graph::{Cycle, ValidationReport, VertexData, WeightedDualGraph};
pub use linalg::{RatMatrix, RatVector};
pub use rational::Rational;
