//! Decomposition graphs of closed orientable prime graph manifolds and upper
//! bounds for their Matveev complexity.
//!
//! A graph manifold is described by a [`DecompositionGraph`]: every vertex
//! carries the parameters of a Seifert piece ([`SeifertData`]) and every
//! directed edge carries the normalized [`Gl2Matrix`] gluing two boundary
//! tori. [`best_bound`] evaluates the sharpest applicable complexity bound and
//! returns a [`BoundReport`] with every term and the labeling that attains it.
//!
//! The [`oracle`] module recomputes everything the fast paths optimize with
//! plain enumeration, so any result can be cross-checked.

pub mod bounds;
pub mod error;
pub mod farey;
mod format;
pub mod gl2z;
pub mod graph;
pub mod oracle;
pub mod sample;
pub mod seifert;
pub mod spanning;

pub use bounds::{
    best_bound, bound, bound_general, bound_regular, bound_tree, f, BoundReport, Limits, PsiPrime, Sign, Theorem,
};
pub use error::{Error, Result};
pub use farey::{cf_sum, complexity_by_search, farey_distance, matrix_complexity, FareyTriangle, Slope};
pub use gl2z::{Gl2Matrix, Normalization, H, U};
pub use graph::{Clause, DecompositionGraph, DegreeStats, EdgeNormalization, ValidationReport, Violation};
pub use seifert::{Fibre, SeifertData};
pub use spanning::{capital_phi, optimal_trees, phi, SpanningTree};
