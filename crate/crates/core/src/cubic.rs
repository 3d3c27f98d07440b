//! Robust coloring of insert-only streams with `O(Δ³)` colors and
//! `Õ(n)` stored edges.
//!
//! Each vertex `x` has, for every degree level `i ∈ [1, L]`, a list
//! `P^i_x` of `4⌈log₂n⌉` colors drawn from `[2i²]`. A vertex of degree `d`
//! is colored `(d, p)` with `p ∈ P^d_x`. When an edge arrives, one endpoint
//! is recolored from its fresh list at its new degree; that list has never
//! influenced an output, so the adversary knows nothing about it.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::SketchError;
use crate::graph::Graph;
use crate::math::ceil_log2;
use crate::prf::{tag, LeveledPalettes, PaletteScheme};
use crate::sketch::ColoringSketch;
use crate::stream::{EdgeOp, EdgeToken};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobustCubic {
    n: usize,
    degree_bound: usize,
    palettes: LeveledPalettes,
    deg: Vec<u32>,
    clr: Vec<(u32, u32)>,
    stored: Graph,
    aborted: bool,
}

impl RobustCubic {
    pub fn new(n: usize, degree_bound: usize, seed: u64) -> Self {
        let list_len = (4 * ceil_log2(n as u64) as usize).max(1);
        RobustCubic {
            n,
            degree_bound,
            palettes: LeveledPalettes::new(seed, tag::CUBIC, PaletteScheme::Quadratic, list_len, n, degree_bound + 1, false),
            deg: vec![0; n],
            clr: vec![(0, 0); n],
            stored: Graph::new(n),
            aborted: false,
        }
    }

    pub fn list_len(&self) -> usize {
        self.palettes.list_len()
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.deg[v]
    }

    pub fn color(&self, v: usize) -> (u32, u32) {
        self.clr[v]
    }

    /// The stored edge set `A`.
    pub fn stored(&self) -> &Graph {
        &self.stored
    }

    /// `P^level_v` in draw order.
    pub fn list(&mut self, v: u32, level: u32) -> &[u32] {
        self.palettes.list(v, level)
    }

    /// The endpoint recolored for edge `{u, v}` once degrees are bumped:
    /// larger degree first, then smaller id.
    fn designated(&self, u: usize, v: usize) -> usize {
        if self.deg[v] > self.deg[u] {
            v
        } else {
            u
        }
    }

    fn insert(&mut self, t: EdgeToken) -> Result<(), SketchError> {
        let (u, v) = t.edge.endpoints();
        for x in [u, v] {
            if self.deg[x] as usize + 1 > self.degree_bound {
                return Err(SketchError::DegreeBoundExceeded { vertex: x as u32, bound: self.degree_bound });
            }
        }
        self.deg[u] += 1;
        self.deg[v] += 1;
        let k = self.deg[u].max(self.deg[v]);
        for i in k..=self.degree_bound as u32 {
            if self.palettes.intersect(u as u32, v as u32, i) {
                self.stored.insert(t.edge);
                break;
            }
        }
        let x = self.designated(u, v);
        let d = self.deg[x];
        let list = self.palettes.list(x as u32, d);
        let nbrs = self.stored.neighbors(x);
        let clr = &self.clr;
        let pick = list.iter().copied().find(|&p| nbrs.iter().all(|&w| clr[w as usize] != (d, p)));
        match pick {
            Some(p) => {
                self.clr[x] = (d, p);
                Ok(())
            }
            None => {
                self.aborted = true;
                Err(SketchError::RecolorFailed { vertex: x as u32, degree: d })
            }
        }
    }
}

impl ColoringSketch for RobustCubic {
    fn process(&mut self, t: EdgeToken) -> Result<(), SketchError> {
        if self.aborted {
            return Err(SketchError::Aborted);
        }
        t.edge.check_range(self.n)?;
        match t.op {
            EdgeOp::Insert => self.insert(t),
            EdgeOp::Delete => Err(SketchError::DeleteUnsupported),
        }
    }

    fn query(&mut self) -> Result<Coloring, SketchError> {
        let mut data = Vec::with_capacity(2 * self.n);
        for &(d, p) in &self.clr {
            data.push(d);
            data.push(p);
        }
        Ok(Coloring::from_flat(2, data).expect("arity 2"))
    }

    fn space_proxy(&self) -> usize {
        // |A| plus one word each for deg and clr.
        self.stored.edge_count() + 2 * self.n
    }

    fn insert_only(&self) -> bool {
        true
    }
}

/// Size of the color universe reachable with max degree `delta`:
/// `1 + Σ_{i=1}^{Δ} 2i²`.
pub fn color_universe(delta: u64) -> u64 {
    1 + (1..=delta).map(|i| 2 * i * i).sum::<u64>()
}
