//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the ultrafunction layers (grids, elements, transforms,
/// projections). Expression-language errors have their own type and are
/// wrapped here when they surface through projection or the CLI.
#[derive(Debug, Error)]
pub enum UfError {
    #[error("level must be >= 1, got {0}")]
    InvalidLevel(u32),

    #[error("invalid level ladder: {0}")]
    InvalidLadder(String),

    #[error("division by zero at level {0}")]
    DivisionByZeroAtLevel(u32),

    #[error("point {q} is not on the grid (spacing {spacing}, tolerance {tol})")]
    NotOnGrid { q: f64, spacing: f64, tol: f64 },

    #[error("frequency {k} is not on the grid (spacing {spacing})")]
    FrequencyNotOnGrid { k: f64, spacing: f64 },

    #[error("level/grid mismatch: {left} vs {right}")]
    LevelMismatch { left: String, right: String },

    #[error("expression error: {0}")]
    Expr(#[from] ExprError),

    #[error("function evaluation failed at x = {x}: {source}")]
    EvaluationFailure { x: f64, source: ExprError },

    #[error("unknown catalog distribution `{0}`")]
    UnknownCatalogEntry(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Errors from the small expression language.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {}", expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },

    #[error("not differentiable: {0}")]
    NotDifferentiable(String),
}

pub type UfResult<T> = Result<T, UfError>;
