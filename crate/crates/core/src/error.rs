use thiserror::Error;

use crate::stream::EdgeOp;

/// Malformed tokens and broken stream promises.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("strict turnstile violation: {op:?} of edge {{{u},{v}}}")]
    StrictTurnstileViolation { op: EdgeOp, u: u32, v: u32 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("product of zero colorings")]
    EmptyProduct,
}

/// Failures raised by a coloring algorithm. Every variant is an algorithm
/// FAIL in the game-harness sense, never an adversary fault.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SketchError {
    #[error("list coloring failed at level {level}")]
    ListColoringFailed { level: u32 },
    #[error("no free color for vertex {vertex} at degree {degree}")]
    RecolorFailed { vertex: u32, degree: u32 },
    #[error("degree of vertex {vertex} would exceed the bound {bound}")]
    DegreeBoundExceeded { vertex: u32, bound: usize },
    #[error("sketch pool at level {level} exhausted")]
    SketchesExhausted { level: usize },
    #[error("algorithm accepts insertions only")]
    DeleteUnsupported,
    #[error("algorithm already aborted")]
    Aborted,
    #[error(transparent)]
    Stream(#[from] StreamError),
}

/// Out-of-range configuration, rejected before any state is built.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConfigError {
    #[error("n must be at least 2, got {0}")]
    VertexCount(usize),
    #[error("degree bound L must satisfy 0 < L <= n - 1, got L = {bound} with n = {n}")]
    DegreeBound { bound: usize, n: usize },
    #[error("tradeoff exponent k must be at least 1")]
    Exponent,
    #[error("delta must lie strictly between 0 and 1, got {0}")]
    Delta(f64),
    #[error("stream length m must be positive")]
    StreamLength,
    #[error("{0}")]
    Invalid(&'static str),
}
