//! Subset avoidance solved with a robust coloring algorithm as a black box.
//!
//! The vertex set is cut into `s` blocks of `2K` vertices. In each block the
//! universe `[C(2K,2)]` is laid over the block's edges by a public random
//! permutation; Alice inserts the edges of her set, ships the algorithm
//! state, and Bob keeps inserting matchings of like-colored vertices. Every
//! such edge is absent from Alice's graph, so it names an element outside
//! her set.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::avoid::{AvoidError, AvoidInstance};
use crate::codec;
use crate::coloring::Coloring;
use crate::prf::{tag, Prf};
use crate::sketch::ColoringSketch;
use crate::stream::{Edge, EdgeOp, EdgeToken};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub n: usize,
    /// Color budget `K`.
    pub colors: usize,
    /// Degree budget `L`.
    pub degree: usize,
    /// Public redraws of a block permutation before giving up.
    pub resample_cap: u32,
    pub seed: u64,
}

impl ReductionParams {
    pub fn new(n: usize, colors: usize, degree: usize, seed: u64) -> Self {
        ReductionParams { n, colors, degree, resample_cap: 100, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSetup {
    params: ReductionParams,
    blocks: usize,
    universe: u32,
    alice_size: usize,
    bob_size: usize,
}

/// What Alice sends: the permutation redraw used per block and the state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliceMessage {
    pub resamples: Vec<u32>,
    pub state: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AliceOutput {
    pub bytes: Vec<u8>,
    /// Length of the same message for an untouched algorithm.
    pub overhead: usize,
    pub inserted: Vec<Edge>,
}

impl AliceOutput {
    /// Bits beyond the fixed protocol overhead.
    pub fn communication_bits(&self) -> usize {
        self.bytes.len().saturating_sub(self.overhead) * 8
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BobOutput {
    pub recovered: Vec<Vec<u32>>,
    /// The coloring seen at the start of each round.
    pub queries: Vec<Coloring>,
    /// The matching inserted in each round.
    pub rounds: Vec<Vec<Edge>>,
}

impl BobOutput {
    pub fn inserted(&self) -> impl Iterator<Item = Edge> + '_ {
        self.rounds.iter().flatten().copied()
    }
}

impl ReductionSetup {
    pub fn new(params: ReductionParams) -> Result<Self, AvoidError> {
        let k = params.colors;
        let l = params.degree;
        if k == 0 || l < 2 {
            return Err(AvoidError::Invalid("need K >= 1 and L >= 2"));
        }
        if 2 * k > params.n {
            return Err(AvoidError::Invalid("need 2K <= n"));
        }
        if 2 * k > u16::MAX as usize {
            return Err(AvoidError::Invalid("block too large"));
        }
        let universe = (2 * k * (2 * k - 1) / 2) as u32;
        let alice_size = l * k / 4;
        let bob_size = (l / 2) * k.div_ceil(2);
        if alice_size + bob_size > universe as usize {
            return Err(AvoidError::Invalid("a + b exceeds the edge universe"));
        }
        Ok(ReductionSetup { params, blocks: params.n / (2 * k), universe, alice_size, bob_size })
    }

    pub fn params(&self) -> &ReductionParams {
        &self.params
    }

    /// Number of blocks `s = ⌊n/2K⌋`.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Universe size `t = C(2K, 2)`.
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// `a = ⌊LK/4⌋`.
    pub fn alice_size(&self) -> usize {
        self.alice_size
    }

    /// `b = ⌊L/2⌋·⌈K/2⌉`.
    pub fn bob_size(&self) -> usize {
        self.bob_size
    }

    pub fn rounds(&self) -> usize {
        self.params.degree / 2
    }

    /// Upper bound on the number of tokens either party inserts.
    pub fn stream_len(&self) -> usize {
        self.blocks * (self.alice_size + self.rounds() * self.params.colors)
    }

    pub fn instance(&self, delta: f64) -> Result<AvoidInstance, AvoidError> {
        AvoidInstance::new(self.universe as u64, self.alice_size as u64, self.bob_size as u64, self.blocks as u64, delta)
    }

    fn block_size(&self) -> usize {
        2 * self.params.colors
    }

    /// Local endpoints `(i, j)`, `i < j`, of edge index `idx` in
    /// lexicographic order.
    pub fn edge_endpoints(&self, idx: u32) -> (u32, u32) {
        let w = self.block_size() as u32;
        let mut i = 0;
        let mut rem = idx;
        while rem >= w - 1 - i {
            rem -= w - 1 - i;
            i += 1;
        }
        (i, i + 1 + rem)
    }

    pub fn edge_index(&self, i: u32, j: u32) -> u32 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let w = self.block_size() as u32;
        i * w - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Draw `r` of block `block`'s permutation: position `i` carries element
    /// `π[i]`.
    pub fn permutation(&self, block: usize, r: u32) -> Vec<u32> {
        let mut rng = Prf::new(self.params.seed).stream(tag::PERMUTATION, block as u32, r);
        let mut p: Vec<u32> = (0..self.universe).collect();
        p.shuffle(&mut rng);
        p
    }

    fn global(&self, block: usize, local: u32) -> u32 {
        (block * self.block_size()) as u32 + local
    }

    /// Alice's edges in `block` under permutation `pi`, in index order.
    fn block_edges(&self, block: usize, pi: &[u32], set: &[bool]) -> Vec<(u32, u32)> {
        (0..self.universe)
            .filter(|&i| set[pi[i as usize] as usize])
            .map(|i| {
                let (x, y) = self.edge_endpoints(i);
                (self.global(block, x), self.global(block, y))
            })
            .collect()
    }

    fn max_degree(&self, edges: &[(u32, u32)]) -> usize {
        let base = edges.first().map_or(0, |e| e.0 as usize / self.block_size() * self.block_size());
        let mut deg = vec![0usize; self.block_size()];
        for &(u, v) in edges {
            deg[u as usize - base] += 1;
            deg[v as usize - base] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    fn membership(&self, set: &[u32]) -> Result<Vec<bool>, AvoidError> {
        let mut m = vec![false; self.universe as usize];
        for &x in set {
            if x >= self.universe || m[x as usize] {
                return Err(AvoidError::Invalid("Alice's set must be distinct elements of [t]"));
            }
            m[x as usize] = true;
        }
        if set.len() != self.alice_size {
            return Err(AvoidError::Invalid("Alice's set has the wrong size"));
        }
        Ok(m)
    }

    /// Feeds each block's edges into `alg` and serializes the result.
    pub fn alice_encode<A>(&self, sets: &[Vec<u32>], mut alg: A) -> Result<AliceOutput, AvoidError>
    where
        A: ColoringSketch + Serialize,
    {
        if sets.len() != self.blocks {
            return Err(AvoidError::Invalid("one set per block required"));
        }
        let fresh = codec::encode(&alg)?;
        let limit = self.params.degree / 2;
        let mut resamples = Vec::with_capacity(self.blocks);
        let mut inserted = Vec::new();
        for (b, set) in sets.iter().enumerate() {
            let member = self.membership(set)?;
            let mut chosen = None;
            for r in 0..self.params.resample_cap {
                let edges = self.block_edges(b, &self.permutation(b, r), &member);
                if self.max_degree(&edges) <= limit {
                    chosen = Some((r, edges));
                    break;
                }
            }
            let (r, edges) = chosen.ok_or(AvoidError::DegreeOverflow { block: b, attempts: self.params.resample_cap as usize })?;
            resamples.push(r);
            for (u, v) in edges {
                let e = Edge::new(u, v).expect("block edges have distinct endpoints");
                alg.process(EdgeToken { op: EdgeOp::Insert, edge: e })?;
                inserted.push(e);
            }
        }
        let overhead = codec::encode(&AliceMessage { resamples: vec![0; self.blocks], state: fresh })?.len();
        let bytes = codec::encode(&AliceMessage { resamples, state: codec::encode(&alg)? })?;
        Ok(AliceOutput { bytes, overhead, inserted })
    }

    /// Rebuilds the algorithm from Alice's message and runs `⌊L/2⌋` rounds
    /// of query-then-insert-matching.
    pub fn bob_recover<A>(&self, message: &[u8]) -> Result<BobOutput, AvoidError>
    where
        A: ColoringSketch + DeserializeOwned,
    {
        let msg: AliceMessage = codec::decode(message)?;
        if msg.resamples.len() != self.blocks {
            return Err(AvoidError::Invalid("message block count mismatch"));
        }
        let mut alg: A = codec::decode(&msg.state)?;
        let perms: Vec<Vec<u32>> = msg.resamples.iter().enumerate().map(|(b, &r)| self.permutation(b, r)).collect();
        let w = self.block_size();
        let mut recovered: Vec<Vec<u32>> = vec![Vec::new(); self.blocks];
        let mut rounds = Vec::with_capacity(self.rounds());
        let mut queries = Vec::with_capacity(self.rounds());
        for _ in 0..self.rounds() {
            let c = alg.query()?;
            let mut round = Vec::new();
            for (b, pi) in perms.iter().enumerate() {
                let members: Vec<u32> = (0..w as u32).map(|x| self.global(b, x)).collect();
                for (x, y) in like_colored_pairing(&members, &c) {
                    round.push(Edge::new(x, y).expect("distinct vertices"));
                    let base = self.global(b, 0);
                    recovered[b].push(pi[self.edge_index(x - base, y - base) as usize]);
                }
            }
            for &e in &round {
                alg.process(EdgeToken { op: EdgeOp::Insert, edge: e })?;
            }
            rounds.push(round);
            queries.push(c);
        }
        for (b, got) in recovered.iter_mut().enumerate() {
            if got.len() < self.bob_size {
                return Err(AvoidError::RecoveryShortfall { block: b, found: got.len(), needed: self.bob_size });
            }
            got.truncate(self.bob_size);
        }
        Ok(BobOutput { recovered, queries, rounds })
    }
}

/// Greedy maximal pairing inside each color class: members of a class in
/// ascending id order are paired off consecutively.
pub fn like_colored_pairing(members: &[u32], c: &Coloring) -> Vec<(u32, u32)> {
    let mut sorted: Vec<u32> = members.to_vec();
    sorted.sort_by(|&x, &y| c.get(x as usize).cmp(c.get(y as usize)).then(x.cmp(&y)));
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < sorted.len() {
        let (x, y) = (sorted[i], sorted[i + 1]);
        if c.get(x as usize) == c.get(y as usize) {
            out.push((x, y));
            i += 2;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{count_colors, is_proper};
    use crate::graph::Graph;
    use crate::sketch::ExactBufferSketch;

    fn setup(n: usize, k: usize, l: usize) -> ReductionSetup {
        ReductionSetup::new(ReductionParams::new(n, k, l, 11)).unwrap()
    }

    #[test]
    fn derived_sizes() {
        let s = setup(64, 8, 4);
        assert_eq!((s.blocks(), s.universe(), s.alice_size(), s.bob_size()), (4, 120, 8, 8));
        assert_eq!(s.stream_len(), 96);
        assert!(ReductionSetup::new(ReductionParams::new(10, 8, 4, 0)).is_err());
    }

    #[test]
    fn edge_index_is_a_bijection() {
        let s = setup(16, 4, 4);
        let mut seen = vec![false; s.universe() as usize];
        for i in 0..8u32 {
            for j in i + 1..8 {
                let idx = s.edge_index(i, j);
                assert!(!seen[idx as usize]);
                seen[idx as usize] = true;
                assert_eq!(s.edge_endpoints(idx), (i, j));
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn pairing_of_uneven_classes() {
        let c = Coloring::from_scalars(vec![1, 1, 1, 2, 2, 3, 3, 4]);
        let p = like_colored_pairing(&(0..8).collect::<Vec<_>>(), &c);
        assert_eq!(p, vec![(0, 1), (3, 4), (5, 6)]);
    }

    #[test]
    fn alice_inserts_a_edges_per_block() {
        let s = setup(16, 8, 4);
        let set: Vec<u32> = (0..8).collect();
        let out = s.alice_encode(&[set], ExactBufferSketch::new(16)).unwrap();
        assert_eq!(out.inserted.len(), 8);
        let g = Graph::from_edges(16, out.inserted.iter().map(|e| (e.u(), e.v()))).unwrap();
        assert!(g.max_degree() <= 2);
    }

    #[test]
    fn exact_colorer_end_to_end() {
        let s = setup(32, 8, 4);
        let sets: Vec<Vec<u32>> = vec![(0..8).map(|x| x * 3).collect(), (100..108).collect()];
        let alice = s.alice_encode(&sets, ExactBufferSketch::new(32)).unwrap();
        let bob = s.bob_recover::<ExactBufferSketch>(&alice.bytes).unwrap();
        let mut g = Graph::from_edges(32, alice.inserted.iter().map(|e| (e.u(), e.v()))).unwrap();
        for (b, rec) in bob.recovered.iter().enumerate() {
            assert_eq!(rec.len(), 8);
            assert!(rec.iter().all(|x| !sets[b].contains(x)));
        }
        for e in bob.inserted() {
            assert!(g.insert(e), "Bob re-inserted an existing edge");
        }
        assert!(g.max_degree() <= 4);
        let alice_graph = Graph::from_edges(32, alice.inserted.iter().map(|e| (e.u(), e.v()))).unwrap();
        assert!(is_proper(&bob.queries[0], &alice_graph));
        assert!(bob.queries.iter().all(|q| count_colors(q) <= 8));
    }

    #[test]
    fn empty_set_costs_only_overhead() {
        let s = setup(4, 1, 2);
        assert_eq!((s.alice_size(), s.bob_size()), (0, 1));
        let out = s.alice_encode(&[vec![], vec![]], ExactBufferSketch::new(4)).unwrap();
        assert_eq!(out.bytes.len(), out.overhead);
        assert_eq!(out.communication_bits(), 0);
    }

    #[test]
    fn alice_rejects_malformed_sets() {
        let s = setup(8, 4, 2);
        assert_eq!(s.alice_size(), 2);
        let out = s.alice_encode(&[vec![0, 5]], ExactBufferSketch::new(8)).unwrap();
        assert!(out.communication_bits() > 0);
        assert!(s.alice_encode(&[vec![0, 0]], ExactBufferSketch::new(8)).is_err());
        assert!(s.alice_encode(&[vec![0]], ExactBufferSketch::new(8)).is_err());
    }
}
