//! The subset-avoidance game: Alice holds an `a`-subset of `[t]`, sends one
//! message, and Bob must name a `b`-subset disjoint from it.

use thiserror::Error;

use crate::codec::CodecError;
use crate::error::SketchError;

mod bounds;
mod covering;
pub mod reduction;

pub use bounds::{avoid_lower_bound, covering_size, message_bound, AvoidInstance};
pub use covering::{build_covering, CoveringCollection, DEFAULT_ENUMERATION_CAP};
pub use reduction::{ReductionParams, ReductionSetup};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AvoidError {
    #[error("invalid instance: {0}")]
    Invalid(&'static str),
    #[error("instance too large for exhaustive verification")]
    TooLarge,
    #[error("no verified covering after {attempts} attempts")]
    CoveringNotFound { attempts: usize },
    #[error("block {block}: no permutation with max degree <= L/2 in {attempts} draws")]
    DegreeOverflow { block: usize, attempts: usize },
    #[error("block {block}: recovered {found} elements, needed {needed}")]
    RecoveryShortfall { block: usize, found: usize, needed: usize },
    #[error("algorithm failed: {0}")]
    Algorithm(#[from] SketchError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}
