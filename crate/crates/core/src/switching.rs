//! Sketch switching for turnstile streams: `O(Δᵏ)` colors in
//! `Õ(n^{1-1/k} m^{1/k})` space.
//!
//! The stream is cut into nested chunks. Level `i ∈ [1, k-1]` chunks hold
//! `⌈n·d^{(k-i)/k}⌉` tokens (`d = m/n`); the current deepest chunk is kept
//! explicitly in `G′`. At each checkpoint a never-queried sketch from the
//! level's pool colors the graph since the last shallower checkpoint, and
//! is retired for good. Answers are products of the per-level checkpoint
//! colorings and a greedy coloring of `G′`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::coloring::{greedy_color_ascending, product_coloring, Coloring};
use crate::error::{ConfigError, SketchError};
use crate::graph::{DegreeTracker, Graph};
use crate::prf::{tag, Prf};
use crate::sketch::{AlgEvent, CheckpointKind, ColoringSketch, SketchFactory};
use crate::stream::{EdgeOp, EdgeToken, StreamConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PoolSizing {
    /// Enough sketches for the worst-case checkpoint count at each level.
    Derived,
    /// `⌈C·√(m/n)·log₂n⌉` for `k = 2`, `⌈C·d^{1/k}·(k·log₂n)^k⌉` otherwise.
    Constant(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchingConfig {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub degree_bound: usize,
    pub seed: u64,
    pub pool: PoolSizing,
    /// Promise that the stream has no deletions; derived pools then skip
    /// the ad-hoc budget, since the max degree never drops.
    pub insert_only: bool,
    /// Also test the ad-hoc condition after every token (two-level case).
    pub adhoc_in_process: bool,
}

impl SwitchingConfig {
    pub fn new(cfg: &StreamConfig) -> Self {
        SwitchingConfig {
            n: cfg.n,
            m: cfg.m,
            k: cfg.k,
            degree_bound: cfg.degree_bound,
            seed: cfg.seed,
            pool: PoolSizing::Derived,
            insert_only: false,
            adhoc_in_process: cfg.k == 2,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::VertexCount(self.n));
        }
        if self.m == 0 {
            return Err(ConfigError::StreamLength);
        }
        if self.k == 0 {
            return Err(ConfigError::Exponent);
        }
        if self.degree_bound == 0 || self.degree_bound > self.n - 1 {
            return Err(ConfigError::DegreeBound { bound: self.degree_bound, n: self.n });
        }
        if let PoolSizing::Constant(c) = self.pool {
            if !(c > 0.0) {
                return Err(ConfigError::Invalid("pool constant must be positive"));
            }
        }
        Ok(())
    }

    /// Chunk sizes for levels `1..k`, shallowest first.
    pub fn chunk_sizes(&self) -> Vec<usize> {
        let (n, m, k) = (self.n as f64, self.m as f64, self.k as f64);
        (1..self.k)
            .map(|i| {
                if self.k == 2 {
                    return ceil_sqrt(self.n as u128 * self.m as u128) as usize;
                }
                let i = i as f64;
                let x = libm::exp((i * libm::log(n) + (k - i) * libm::log(m)) / k);
                (libm::ceil(x - 1e-9 * x) as usize).max(1)
            })
            .collect()
    }

    /// Ad-hoc trigger `Δ·num < Δ_checkpoint·den`: factor 2 for two
    /// levels, `1 + 1/(2k)` beyond.
    pub fn trigger(&self) -> (u64, u64) {
        if self.k == 2 {
            (2, 1)
        } else {
            (2 * self.k as u64 + 1, 2 * self.k as u64)
        }
    }

    /// Longest possible run of ad-hoc checkpoints at one level: the max
    /// degree shrinks by the trigger factor each time, from at most `L`,
    /// and may end at zero.
    pub fn adhoc_budget(&self) -> usize {
        let (num, den) = self.trigger();
        let theta = num as f64 / den as f64;
        let l = self.degree_bound.max(1) as f64;
        libm::ceil(libm::log(l) / libm::log(theta) - 1e-9) as usize + 1
    }

    pub fn pool_sizes(&self) -> Vec<usize> {
        let chunks = self.chunk_sizes();
        match self.pool {
            PoolSizing::Derived => {
                let budget = if self.insert_only { 0 } else { self.adhoc_budget() };
                (0..chunks.len())
                    .map(|i| {
                        let span = if i == 0 { self.m } else { chunks[i - 1] };
                        let fixed = span.div_ceil(chunks[i]);
                        fixed + (fixed + 1) * budget
                    })
                    .collect()
            }
            PoolSizing::Constant(c) => {
                let lg = libm::log2(self.n as f64);
                let d = self.m as f64 / self.n as f64;
                let s = if self.k == 2 {
                    c * libm::sqrt(d) * lg
                } else {
                    c * libm::pow(d, 1.0 / self.k as f64) * libm::pow(self.k as f64 * lg, self.k as f64)
                };
                alloc::vec![(libm::ceil(s) as usize).max(1); chunks.len()]
            }
        }
    }
}

fn ceil_sqrt(x: u128) -> u128 {
    let mut r = libm::sqrt(x as f64) as u128;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

/// The stored result of the last checkpoint at one level.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub kind: CheckpointKind,
    pub coloring: Coloring,
    /// Global max degree when the checkpoint fired (0 for vacuous ones).
    pub max_degree: u32,
    /// Pool slot of the sketch that produced `coloring`.
    pub sketch: Option<u32>,
    /// The sketch's own graph, when it keeps one; used by audits.
    pub window: Option<Graph>,
}

impl CheckpointRecord {
    fn vacuous(n: usize) -> Self {
        CheckpointRecord { kind: CheckpointKind::Vacuous, coloring: Coloring::ones(n), max_degree: 0, sketch: None, window: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Level<S> {
    chunk: usize,
    pool: Vec<Option<S>>,
    cursor: usize,
    generation: u32,
    counter: usize,
    record: CheckpointRecord,
    adhoc_run: u32,
    longest_adhoc_run: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: Serialize, F::Sketch: Serialize",
    deserialize = "F: Deserialize<'de>, F::Sketch: Deserialize<'de>"
))]
pub struct SwitchingColorer<F: SketchFactory> {
    cfg: SwitchingConfig,
    factory: F,
    pool_sizes: Vec<usize>,
    deg: DegreeTracker,
    gprime: Graph,
    levels: Vec<Level<F::Sketch>>,
    tokens: usize,
    failed: bool,
    #[serde(skip)]
    events: Vec<AlgEvent>,
}

impl<F: SketchFactory> SwitchingColorer<F> {
    pub fn new(cfg: SwitchingConfig, factory: F) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let n = cfg.n;
        let pool_sizes = cfg.pool_sizes();
        let zeros = alloc::vec![0u32; n];
        let mut me = SwitchingColorer {
            factory,
            pool_sizes: pool_sizes.clone(),
            deg: DegreeTracker::new(n),
            gprime: Graph::new(n),
            levels: Vec::new(),
            tokens: 0,
            failed: false,
            events: Vec::new(),
            cfg,
        };
        for (i, chunk) in me.cfg.chunk_sizes().into_iter().enumerate() {
            let pool = me.make_pool(i, 0, &zeros);
            me.levels.push(Level {
                chunk,
                pool,
                cursor: 0,
                generation: 0,
                counter: 0,
                record: CheckpointRecord::vacuous(n),
                adhoc_run: 0,
                longest_adhoc_run: 0,
            });
        }
        Ok(me)
    }

    pub fn config(&self) -> &SwitchingConfig {
        &self.cfg
    }

    pub fn pool_sizes(&self) -> &[usize] {
        &self.pool_sizes
    }

    pub fn chunk_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.chunk).collect()
    }

    /// The explicit buffer of the current deepest chunk.
    pub fn buffer(&self) -> &Graph {
        &self.gprime
    }

    pub fn max_degree(&self) -> usize {
        self.deg.max_degree()
    }

    /// Last checkpoint at `level` (1-based).
    pub fn record(&self, level: usize) -> &CheckpointRecord {
        &self.levels[level - 1].record
    }

    /// Number of sketches queried so far at `level` in its current pool.
    pub fn cursor(&self, level: usize) -> usize {
        self.levels[level - 1].cursor
    }

    /// Longest run of consecutive ad-hoc checkpoints seen at `level`.
    pub fn longest_adhoc_run(&self, level: usize) -> u32 {
        self.levels[level - 1].longest_adhoc_run
    }

    pub fn live_sketches(&self) -> usize {
        self.levels.iter().map(|l| l.pool.iter().filter(|s| s.is_some()).count()).sum()
    }

    fn make_pool(&self, level: usize, generation: u32, degrees: &[u32]) -> Vec<Option<F::Sketch>> {
        let prf = Prf::new(self.cfg.seed);
        (0..self.pool_sizes[level])
            .map(|r| Some(self.factory.create(prf.word(tag::POOL, level as u32 + 1, generation, r as u64), degrees)))
            .collect()
    }

    fn fail<T>(&mut self, e: SketchError) -> Result<T, SketchError> {
        self.failed = true;
        Err(e)
    }

    /// First level whose checkpoint degree is too far above the current one.
    fn adhoc_level(&self) -> Option<usize> {
        let (num, den) = self.cfg.trigger();
        let delta = self.deg.max_degree() as u64;
        self.levels.iter().position(|l| delta * num < l.record.max_degree as u64 * den)
    }

    /// Queries a fresh sketch at level index `i` and resets everything deeper.
    fn checkpoint(&mut self, i: usize, kind: CheckpointKind) -> Result<(), SketchError> {
        let slot = self.levels[i].cursor;
        if slot >= self.levels[i].pool.len() {
            return self.fail(SketchError::SketchesExhausted { level: i + 1 });
        }
        let mut sketch = self.levels[i].pool[slot].take().expect("slots past the cursor are live");
        self.levels[i].cursor += 1;
        let coloring = match sketch.query() {
            Ok(c) => c,
            Err(e) => return self.fail(e),
        };
        let window = sketch.window_graph().cloned();
        drop(sketch);
        let max_degree = self.deg.max_degree() as u32;
        let level = &mut self.levels[i];
        level.record = CheckpointRecord { kind, coloring, max_degree, sketch: Some(slot as u32), window };
        match kind {
            CheckpointKind::Fixed => {
                level.counter = 0;
                level.adhoc_run = 0;
            }
            _ => {
                level.adhoc_run += 1;
                level.longest_adhoc_run = level.longest_adhoc_run.max(level.adhoc_run);
            }
        }
        self.events.push(AlgEvent::Checkpoint { level: i as u32 + 1, kind, sketch: Some(slot as u32), max_degree });
        let snapshot: Vec<u32> = self.deg.as_slice().to_vec();
        for j in i + 1..self.levels.len() {
            let generation = self.levels[j].generation + 1;
            let pool = self.make_pool(j, generation, &snapshot);
            let level = &mut self.levels[j];
            level.generation = generation;
            level.pool = pool;
            level.cursor = 0;
            level.counter = 0;
            level.record = CheckpointRecord::vacuous(self.cfg.n);
            level.adhoc_run = 0;
            self.events.push(AlgEvent::PoolReset { level: j as u32 + 1 });
            self.events.push(AlgEvent::Checkpoint { level: j as u32 + 1, kind: CheckpointKind::Vacuous, sketch: None, max_degree: 0 });
        }
        self.gprime.clear();
        Ok(())
    }
}

impl<F: SketchFactory> ColoringSketch for SwitchingColorer<F> {
    fn process(&mut self, t: EdgeToken) -> Result<(), SketchError> {
        if self.failed {
            return Err(SketchError::Aborted);
        }
        t.edge.check_range(self.cfg.n)?;
        for i in 0..self.levels.len() {
            let cursor = self.levels[i].cursor;
            for slot in self.levels[i].pool[cursor..].iter_mut() {
                if let Some(s) = slot {
                    if let Err(e) = s.process(t) {
                        return self.fail(e);
                    }
                }
            }
        }
        let (u, v) = t.edge.endpoints();
        match t.op {
            EdgeOp::Insert => {
                self.deg.increment(u);
                self.deg.increment(v);
                self.gprime.insert(t.edge);
            }
            EdgeOp::Delete => {
                self.deg.decrement(u);
                self.deg.decrement(v);
                // Absent from G′ means a negative edge: nothing to store.
                self.gprime.remove(t.edge);
            }
        }
        self.tokens += 1;
        for l in &mut self.levels {
            l.counter += 1;
        }
        if let Some(i) = self.levels.iter().position(|l| l.counter >= l.chunk) {
            self.checkpoint(i, CheckpointKind::Fixed)?;
        }
        if self.cfg.adhoc_in_process {
            if let Some(i) = self.adhoc_level() {
                self.events.push(AlgEvent::AdHocInProcess { level: i as u32 + 1 });
                self.checkpoint(i, CheckpointKind::AdHoc)?;
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<Coloring, SketchError> {
        if self.failed {
            return Err(SketchError::Aborted);
        }
        if let Some(i) = self.adhoc_level() {
            self.checkpoint(i, CheckpointKind::AdHoc)?;
            let parts: Vec<&Coloring> = self.levels[..=i].iter().map(|l| &l.record.coloring).collect();
            return Ok(product_coloring(&parts)?);
        }
        let buffered = greedy_color_ascending(&self.gprime);
        let mut parts: Vec<&Coloring> = self.levels.iter().map(|l| &l.record.coloring).collect();
        parts.push(&buffered);
        Ok(product_coloring(&parts)?)
    }

    fn space_proxy(&self) -> usize {
        let sketches: usize = self.levels.iter().flat_map(|l| l.pool.iter().flatten()).map(|s| s.space_proxy()).sum();
        let records: usize = self.levels.iter().map(|l| l.record.coloring.as_flat().len()).sum();
        self.gprime.edge_count() + sketches + records + self.cfg.n
    }

    fn drain_events(&mut self) -> Vec<AlgEvent> {
        core::mem::take(&mut self.events)
    }
}
