//! Oblivious coloring sketches and the contract the switching colorer
//! drives them through.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::SketchError;
use crate::stream::EdgeToken;

mod exact;
pub mod listcolor;
mod palette;

pub use exact::ExactBufferSketch;
pub use palette::{PaletteSketch, PaletteSketchConfig};

/// A streaming colorer: tokens in, colorings out.
///
/// Implementations never see their own past outputs; keeping adversarial
/// feedback away from oblivious sketches is the caller's job.
pub trait ColoringSketch {
    fn process(&mut self, t: EdgeToken) -> Result<(), SketchError>;

    fn query(&mut self) -> Result<Coloring, SketchError>;

    /// Stored edges plus stored machine words, excluding PRF keys.
    fn space_proxy(&self) -> usize;

    fn insert_only(&self) -> bool {
        false
    }

    /// The explicit graph this sketch holds, for sketches that keep one.
    fn window_graph(&self) -> Option<&crate::graph::Graph> {
        None
    }

    /// Notable internal events since the last call, oldest first.
    fn drain_events(&mut self) -> Vec<AlgEvent> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckpointKind {
    Fixed,
    AdHoc,
    Vacuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgEvent {
    /// A checkpoint at `level`; `sketch` is the pool index that was queried.
    Checkpoint { level: u32, kind: CheckpointKind, sketch: Option<u32>, max_degree: u32 },
    /// The pool at `level` was rebuilt with fresh seeds.
    PoolReset { level: u32 },
    /// An ad-hoc condition held during processing (no output was exposed).
    AdHocInProcess { level: u32 },
}

/// Builds fresh sketch instances for a pool.
pub trait SketchFactory {
    type Sketch: ColoringSketch;

    /// `initial_degrees` are the ground-truth degrees at the moment the
    /// sketch starts listening; sketches that ignore them may.
    fn create(&self, seed: u64, initial_degrees: &[u32]) -> Self::Sketch;
}

/// Runtime choice of inner sketch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SketchKind {
    Exact { n: usize },
    Palette(PaletteSketchConfig),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum AnySketch {
    Exact(ExactBufferSketch),
    Palette(PaletteSketch),
}

impl ColoringSketch for AnySketch {
    fn process(&mut self, t: EdgeToken) -> Result<(), SketchError> {
        match self {
            AnySketch::Exact(s) => s.process(t),
            AnySketch::Palette(s) => s.process(t),
        }
    }

    fn query(&mut self) -> Result<Coloring, SketchError> {
        match self {
            AnySketch::Exact(s) => s.query(),
            AnySketch::Palette(s) => s.query(),
        }
    }

    fn space_proxy(&self) -> usize {
        match self {
            AnySketch::Exact(s) => s.space_proxy(),
            AnySketch::Palette(s) => s.space_proxy(),
        }
    }

    fn window_graph(&self) -> Option<&crate::graph::Graph> {
        match self {
            AnySketch::Exact(s) => s.window_graph(),
            AnySketch::Palette(_) => None,
        }
    }
}

impl SketchFactory for SketchKind {
    type Sketch = AnySketch;

    fn create(&self, seed: u64, initial_degrees: &[u32]) -> AnySketch {
        match self {
            SketchKind::Exact { n } => AnySketch::Exact(ExactBufferSketch::new(*n)),
            SketchKind::Palette(cfg) => AnySketch::Palette(PaletteSketch::with_degrees(cfg.clone(), seed, initial_degrees)),
        }
    }
}
