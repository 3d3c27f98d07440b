//! Streaming graph coloring against adaptive adversaries.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algorithmic
//! pieces: the stream vocabulary and ground-truth graph, oblivious coloring
//! sketches, the palette-sparsification robust colorer, the sketch-switching
//! colorer for turnstile streams, the solver-versus-adversary game harness,
//! and the subset-avoidance communication protocols. File formats, the CLI and
//! worker pools live in the `robustcolor` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod avoid;
pub mod codec;
pub mod coloring;
pub mod cubic;
pub mod error;
pub mod graph;
pub mod harness;
pub mod math;
pub mod prf;
pub mod sketch;
pub mod stream;
pub mod switching;

pub use coloring::{count_colors, greedy_color, greedy_color_ascending, is_proper, product_coloring, Coloring};
pub use cubic::RobustCubic;
pub use error::{ConfigError, SketchError, StreamError};
pub use graph::Graph;
pub use sketch::{ColoringSketch, ExactBufferSketch, PaletteSketch, SketchFactory};
pub use stream::{Edge, EdgeOp, EdgeToken, StreamConfig, VertexId};
pub use switching::{SwitchingColorer, SwitchingConfig};
