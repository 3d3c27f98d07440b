use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::SketchError;
use crate::graph::Graph;
use crate::math::ceil_log2;
use crate::prf::{tag, LeveledPalettes, PaletteScheme, Prf};
use crate::sketch::listcolor::list_color;
use crate::sketch::ColoringSketch;
use crate::stream::{EdgeOp, EdgeToken};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaletteSketchConfig {
    pub n: usize,
    pub degree_bound: usize,
    /// List length is `list_factor * ceil(log2 n)`.
    pub list_factor: usize,
    pub retries: usize,
    pub backtrack_budget: u64,
}

impl PaletteSketchConfig {
    pub fn new(n: usize, degree_bound: usize) -> Self {
        PaletteSketchConfig { n, degree_bound, list_factor: 4, retries: 8, backtrack_budget: 1_000_000 }
    }

    pub fn list_len(&self) -> usize {
        (self.list_factor * ceil_log2(self.n as u64) as usize).max(1)
    }

    pub fn top_level(&self) -> u32 {
        ceil_log2(self.degree_bound as u64)
    }
}

/// Degree-leveled palette sparsification.
///
/// Level `j` lists are drawn from `[2^(j+1)]`. An inserted edge is stored
/// when its endpoint lists meet at some level at or above the one implied
/// by the current endpoint degrees, so the stored graph contains every
/// conflict a later query at a higher level could hit.
///
/// Degrees are global: the sketch starts from a snapshot and follows every
/// token after that. `watermark[v]` is the largest endpoint degree seen when
/// an edge at `v` was inserted, cleared once `v` becomes isolated; queries
/// work at the level of the largest watermark, which never falls below the
/// storage level of a live edge.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PaletteSketch {
    cfg: PaletteSketchConfig,
    top: u32,
    palettes: LeveledPalettes,
    degrees: Vec<u32>,
    watermark: Vec<u32>,
    stored: Graph,
    queries: u32,
}

impl PaletteSketch {
    pub fn new(cfg: PaletteSketchConfig, seed: u64) -> Self {
        let zeros = vec![0; cfg.n];
        Self::with_degrees(cfg, seed, &zeros)
    }

    pub fn with_degrees(cfg: PaletteSketchConfig, seed: u64, degrees: &[u32]) -> Self {
        assert_eq!(degrees.len(), cfg.n);
        let top = cfg.top_level();
        let palettes = LeveledPalettes::new(seed, tag::PALETTE, PaletteScheme::Geometric, cfg.list_len(), cfg.n, top as usize + 1, true);
        // Pre-existing edges are outside the window; their endpoints still
        // need a watermark so the query level covers their degrees.
        let watermark = degrees.to_vec();
        PaletteSketch { stored: Graph::new(cfg.n), cfg, top, palettes, degrees: degrees.to_vec(), watermark, queries: 0 }
    }

    pub fn stored(&self) -> &Graph {
        &self.stored
    }

    pub fn stored_edges(&self) -> usize {
        self.stored.edge_count()
    }

    /// Level a query would use right now.
    pub fn query_level(&self) -> u32 {
        let w = self.watermark.iter().copied().max().unwrap_or(0).max(1);
        ceil_log2(w as u64).min(self.top)
    }

    pub fn list(&mut self, v: u32, level: u32) -> &[u32] {
        self.palettes.list(v, level)
    }

    pub fn seed(&self) -> u64 {
        self.palettes.seed()
    }
}

impl ColoringSketch for PaletteSketch {
    fn process(&mut self, t: EdgeToken) -> Result<(), SketchError> {
        t.edge.check_range(self.cfg.n)?;
        let (u, v) = t.edge.endpoints();
        match t.op {
            EdgeOp::Insert => {
                self.degrees[u] += 1;
                self.degrees[v] += 1;
                let d = self.degrees[u].max(self.degrees[v]);
                self.watermark[u] = self.watermark[u].max(d);
                self.watermark[v] = self.watermark[v].max(d);
                let from = ceil_log2(d as u64).min(self.top);
                for j in from..=self.top {
                    if self.palettes.intersect(t.edge.u(), t.edge.v(), j) {
                        self.stored.insert(t.edge);
                        break;
                    }
                }
            }
            EdgeOp::Delete => {
                for x in [u, v] {
                    self.degrees[x] = self.degrees[x].saturating_sub(1);
                    if self.degrees[x] == 0 {
                        self.watermark[x] = 0;
                    }
                }
                self.stored.remove(t.edge);
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<Coloring, SketchError> {
        let level = self.query_level();
        let n = self.cfg.n;
        for v in 0..n as u32 {
            self.palettes.list(v, level);
        }
        let mut owned: Vec<Vec<u32>> = Vec::with_capacity(n);
        for v in 0..n as u32 {
            owned.push(self.palettes.list(v, level).to_vec());
        }
        let lists: Vec<&[u32]> = owned.iter().map(|l| l.as_slice()).collect();
        let prf = Prf::new(self.palettes.seed());
        let q = self.queries;
        let orders = |attempt: usize| {
            let mut order: Vec<u32> = (0..n as u32).collect();
            let mut rng = prf.stream(tag::ORDER, q, attempt as u32);
            order.shuffle(&mut rng);
            order
        };
        self.queries += 1;
        let colors = list_color(&self.stored, &lists, self.cfg.retries, self.cfg.backtrack_budget, orders)
            .ok_or(SketchError::ListColoringFailed { level })?;
        let mut data = Vec::with_capacity(2 * n);
        for c in colors {
            data.push(level);
            data.push(c);
        }
        Ok(Coloring::from_flat(2, data).expect("arity 2"))
    }

    fn space_proxy(&self) -> usize {
        // Stored edges, degree counters and watermarks.
        self.stored.edge_count() + 2 * self.cfg.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{count_colors, is_proper};

    fn cfg(n: usize, l: usize) -> PaletteSketchConfig {
        PaletteSketchConfig::new(n, l)
    }

    #[test]
    fn empty_graph_uses_first_entries() {
        let mut s = PaletteSketch::new(cfg(16, 4), 3);
        let c = s.query().unwrap();
        for v in 0..16u32 {
            let first = s.list(v, 0)[0];
            assert_eq!(c.get(v as usize), &[0, first]);
        }
    }

    #[test]
    fn star_is_proper_with_at_most_four_delta_colors() {
        let mut s = PaletteSketch::new(cfg(8, 4), 11);
        let mut g = Graph::new(8);
        for leaf in 1..4 {
            let t = EdgeToken::insert(0, leaf).unwrap();
            g.apply(t).unwrap();
            s.process(t).unwrap();
        }
        let c = s.query().unwrap();
        assert!(is_proper(&c, &g));
        assert!(count_colors(&c) <= 1 << (ceil_log2(3) + 1));
    }

    #[test]
    fn storage_rule_follows_list_intersection() {
        let mut s = PaletteSketch::new(cfg(64, 8), 5);
        let mut expected = 0;
        let mut shadow = PaletteSketch::new(cfg(64, 8), 5);
        for v in 1..6u32 {
            let t = EdgeToken::insert(0, v).unwrap();
            // Degree of vertex 0 after this insertion is v.
            let from = ceil_log2(v as u64);
            if (from..=3).any(|j| {
                let a = shadow.list(0, j).to_vec();
                sorted_meet(&a, shadow.list(v, j))
            }) {
                expected += 1;
            }
            s.process(t).unwrap();
        }
        assert_eq!(s.stored_edges(), expected);
    }

    fn sorted_meet(a: &[u32], b: &[u32]) -> bool {
        a.iter().any(|x| b.contains(x))
    }

    #[test]
    fn deletions_drop_stored_copies_and_watermarks() {
        let mut s = PaletteSketch::new(PaletteSketchConfig { list_factor: 64, ..cfg(8, 2) }, 1);
        s.process(EdgeToken::insert(0, 1).unwrap()).unwrap();
        s.process(EdgeToken::insert(1, 2).unwrap()).unwrap();
        assert_eq!(s.stored_edges(), 2);
        assert_eq!(s.query_level(), 1);
        s.process(EdgeToken::delete(0, 1).unwrap()).unwrap();
        s.process(EdgeToken::delete(1, 2).unwrap()).unwrap();
        assert_eq!(s.stored_edges(), 0);
        assert_eq!(s.query_level(), 0);
    }

    #[test]
    fn replay_is_bit_identical() {
        let tokens: Vec<EdgeToken> = (0..40u32).map(|i| EdgeToken::insert(i % 32, (i * 7 + 3) % 32).unwrap()).filter(|t| t.edge.u() != t.edge.v()).collect();
        let run = || {
            let mut s = PaletteSketch::new(cfg(32, 8), 99);
            let mut g = Graph::new(32);
            for &t in &tokens {
                if g.apply(t).is_ok() {
                    s.process(t).unwrap();
                }
            }
            postcard::to_allocvec(s.stored()).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn snapshot_degrees_raise_the_query_level() {
        let mut degs = vec![0u32; 16];
        degs[3] = 6;
        let s = PaletteSketch::with_degrees(cfg(16, 8), 2, &degs);
        assert_eq!(s.query_level(), 3);
    }
}
