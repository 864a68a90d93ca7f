use thiserror::Error;

use crate::graph::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix determinant must be +1 or -1, got {0}")]
    Determinant(i64),

    #[error("edge matrices must have determinant -1, got {0}")]
    NotOrientationReversing(i64),

    #[error("beta = 0: the gluing sends a fibre to a fibre, so the decomposition is not minimal")]
    ZeroBeta,

    #[error("matrix is not normalized")]
    NotNormalized,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid exceptional fibre ({p}, {q}): {reason}")]
    InvalidFibre { p: i64, q: i64, reason: &'static str },

    #[error("continued fraction sum needs coprime positive integers, got {0}/{1}")]
    InvalidRational(i64, i64),

    #[error("not a Farey triangle: {0}")]
    InvalidTriangle(String),

    #[error("f_{{m,M}} needs m < M, m <= 1 and M >= -1, got m = {m}, M = {big_m}")]
    FDomain { m: i64, big_m: i64 },

    #[error("malformed decomposition graph: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("no edge with id {0:?}")]
    UnknownEdge(String),

    #[error("edge set is not a spanning tree: {0}")]
    NotSpanningTree(String),

    #[error("theorem {theorem} is inapplicable: {reason}")]
    Inapplicable { theorem: &'static str, reason: String },

    #[error("{what}: {needed} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u64 },

    #[error("graph cannot be evaluated:{}", fmt_violations(.0))]
    NotEvaluable(Vec<Violation>),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("\n  {x}")).collect()
}
