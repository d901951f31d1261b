use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One failed metric axiom, as reported by [`crate::metric::validate_metric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    AsymmetricMatrix { i: usize, j: usize },
    NegativeEntry { i: usize, j: usize },
    /// Off-diagonal entry at or below tolerance.
    ZeroOffDiagonal { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    /// `d[i][k] > d[i][j] + d[j][k] + tolerance`.
    TriangleViolation { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::AsymmetricMatrix { i, j } => write!(f, "AsymmetricMatrix({i},{j})"),
            Violation::NegativeEntry { i, j } => write!(f, "NegativeEntry({i},{j})"),
            Violation::ZeroOffDiagonal { i, j } => write!(f, "ZeroOffDiagonal({i},{j})"),
            Violation::NonzeroDiagonal { i } => write!(f, "NonzeroDiagonal({i})"),
            Violation::TriangleViolation { i, j, k } => write!(f, "TriangleViolation({i},{j},{k})"),
        }
    }
}

/// Which side of a two-space gluing an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("non-finite entry at ({i},{j})")]
    NonFinite { i: usize, j: usize },

    #[error("empty space")]
    EmptySpace,

    #[error("invalid metric: {}", fmt_violations(.0))]
    InvalidMetric(Vec<Violation>),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("negative radius {0}")]
    NegativeRadius(f64),

    #[error("graph is disconnected (vertex {0} unreachable from 0)")]
    DisconnectedGraph(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("subsets live in different ambient spaces ({left} vs {right} points)")]
    DifferentAmbient { left: usize, right: usize },

    #[error("gluing does not join the given spaces")]
    GlueMismatch,

    #[error("chain lengths differ: {left} vs {right}")]
    ChainLengthMismatch { left: usize, right: usize },

    #[error("infeasible gluing: {side} points ({i},{j}) are shortcut to {glued} < {original}")]
    Infeasible {
        side: Side,
        i: usize,
        j: usize,
        glued: f64,
        original: f64,
    },

    #[error("no cross edge given; no finite gluing exists")]
    EmptyConstraintSet,

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("map is undefined on required index {0}")]
    DomainTooSmall(usize),

    #[error("net lengths differ: {left} vs {right}")]
    NetLengthMismatch { left: usize, right: usize },

    #[error("invalid gluing: {0}")]
    InvalidGluing(String),

    #[error("resolution {resolution} exceeds the diameter scale {scale}")]
    ResolutionTooCoarse { resolution: f64, scale: f64 },

    #[error("search budget of {limit} assignments exceeded")]
    SizeLimitExceeded { limit: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("chain member {member}: points ({i},{j}) shortcut to {glued} < {original}")]
    ShortcutDetected {
        member: usize,
        i: usize,
        j: usize,
        glued: f64,
        original: f64,
    },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("no budget-respecting chain reaches the last member")]
    EmptyLimit,

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

fn fmt_violations(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(8).map(|x| x.to_string()).collect();
    if v.len() > 8 {
        format!("{} (+{} more)", shown.join(", "), v.len() - 8)
    } else {
        shown.join(", ")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
