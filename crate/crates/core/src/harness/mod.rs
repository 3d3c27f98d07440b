//! The solver-versus-adversary game.
//!
//! The runner owns the ground truth. The adversary sees only colorings;
//! the algorithm sees only tokens. Every answer is checked twice, against
//! the ground-truth graph and against an independently kept edge set.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::coloring::{count_colors, is_proper, Coloring};
use crate::error::{SketchError, StreamError};
use crate::graph::Graph;
use crate::sketch::{AlgEvent, ColoringSketch};
use crate::stream::{EdgeOp, EdgeToken};

mod adversaries;
pub mod random_graph;

pub use adversaries::{FloodAdversary, MonoAdversary, RandomAdversary, ScriptedAdversary};

/// Chooses the next token from the latest answer. Implementations are
/// deterministic given their construction seed and the answers they saw.
pub trait Adversary {
    /// `None` ends the game.
    fn next(&mut self, latest: &Coloring) -> Option<EdgeToken>;
}

/// A broken input promise; the adversary is at fault, not the algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AdversaryFault {
    #[error("step {step}: {source}")]
    Stream { step: usize, source: StreamError },
    #[error("step {step}: vertex {vertex} exceeds degree bound {bound}")]
    DegreeBound { step: usize, vertex: u32, bound: usize },
}

#[derive(Clone, Debug)]
pub struct GameConfig {
    pub n: usize,
    pub degree_bound: usize,
    /// Token budget `m`.
    pub max_tokens: usize,
    pub query_every_token: bool,
    /// Keep every returned coloring in the transcript.
    pub keep_colorings: bool,
}

/// One answered query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryOutcome {
    pub proper: bool,
    pub colors_used: usize,
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: usize,
    pub token: EdgeToken,
    pub query: Option<QueryOutcome>,
    pub space_proxy: usize,
    pub max_degree: usize,
    pub events: Vec<AlgEvent>,
}

#[derive(Clone, Debug, Default)]
pub struct GameTranscript {
    /// The query before the first token.
    pub initial: Option<QueryOutcome>,
    pub steps: Vec<StepRecord>,
    pub colorings: Vec<Coloring>,
    /// Step (1-based; 0 is the initial query) and error of the algorithm's FAIL.
    pub failure: Option<(usize, SketchError)>,
}

impl GameTranscript {
    pub fn tokens(&self) -> impl Iterator<Item = EdgeToken> + '_ {
        self.steps.iter().map(|s| s.token)
    }

    pub fn queries(&self) -> impl Iterator<Item = &QueryOutcome> {
        self.initial.iter().chain(self.steps.iter().filter_map(|s| s.query.as_ref()))
    }

    pub fn improper_count(&self) -> usize {
        self.queries().filter(|q| !q.proper).count()
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn peak_space(&self) -> usize {
        self.steps.iter().map(|s| s.space_proxy).max().unwrap_or(0)
    }
}

fn check_answer(c: &Coloring, g: &Graph, shadow: &BTreeSet<(u32, u32)>) -> QueryOutcome {
    if c.len() != g.n() {
        return QueryOutcome { proper: false, colors_used: count_colors(c) };
    }
    let Some(mut keys) = c.keys() else {
        let proper = is_proper(c, g);
        let recheck = shadow.iter().all(|&(u, v)| c.get(u as usize) != c.get(v as usize));
        assert_eq!(proper, recheck, "ground truth and shadow disagree");
        return QueryOutcome { proper, colors_used: count_colors(c) };
    };
    let proper = (0..g.n()).all(|u| g.neighbors(u).iter().all(|&v| keys[u] != keys[v as usize]));
    let recheck = shadow.iter().all(|&(u, v)| keys[u as usize] != keys[v as usize]);
    assert_eq!(proper, recheck, "ground truth and shadow disagree");
    keys.sort_unstable();
    keys.dedup();
    QueryOutcome { proper, colors_used: keys.len() }
}

/// Plays `adv` against `alg` until the adversary stops, the budget runs
/// out, or the algorithm fails.
pub fn run_game<A, D>(alg: &mut A, adv: &mut D, cfg: &GameConfig) -> Result<GameTranscript, AdversaryFault>
where
    A: ColoringSketch + ?Sized,
    D: Adversary + ?Sized,
{
    let mut ground = Graph::new(cfg.n);
    let mut shadow: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut tr = GameTranscript::default();
    let mut latest = match alg.query() {
        Ok(c) => c,
        Err(e) => {
            tr.failure = Some((0, e));
            return Ok(tr);
        }
    };
    tr.initial = Some(check_answer(&latest, &ground, &shadow));
    if cfg.keep_colorings {
        tr.colorings.push(latest.clone());
    }
    alg.drain_events();
    for step in 1..=cfg.max_tokens {
        let Some(tok) = adv.next(&latest) else { break };
        ground.apply(tok).map_err(|source| AdversaryFault::Stream { step, source })?;
        let (u, v) = tok.edge.endpoints();
        for x in [u, v] {
            if ground.degree(x) > cfg.degree_bound {
                return Err(AdversaryFault::DegreeBound { step, vertex: x as u32, bound: cfg.degree_bound });
            }
        }
        let key = (tok.edge.u(), tok.edge.v());
        match tok.op {
            EdgeOp::Insert => shadow.insert(key),
            EdgeOp::Delete => shadow.remove(&key),
        };
        let mut rec = StepRecord { step, token: tok, query: None, space_proxy: 0, max_degree: ground.max_degree(), events: Vec::new() };
        if let Err(e) = alg.process(tok) {
            rec.events = alg.drain_events();
            rec.space_proxy = alg.space_proxy();
            tr.steps.push(rec);
            tr.failure = Some((step, e));
            return Ok(tr);
        }
        if cfg.query_every_token {
            match alg.query() {
                Ok(c) => {
                    rec.query = Some(check_answer(&c, &ground, &shadow));
                    if cfg.keep_colorings {
                        tr.colorings.push(c.clone());
                    }
                    latest = c;
                }
                Err(e) => {
                    rec.events = alg.drain_events();
                    rec.space_proxy = alg.space_proxy();
                    tr.steps.push(rec);
                    tr.failure = Some((step, e));
                    return Ok(tr);
                }
            }
        }
        rec.events = alg.drain_events();
        rec.space_proxy = alg.space_proxy();
        tr.steps.push(rec);
    }
    Ok(tr)
}
