//! Ground-truth graph with O(1) maximum degree under inserts and deletes.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::StreamError;
use crate::stream::{Edge, EdgeOp, EdgeToken};

/// Simple undirected graph on `0..n` with per-vertex neighbor lists.
///
/// `hist[d]` counts vertices of degree `d`, so the maximum degree is kept
/// exact in O(1) amortized time per update.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    hist: Vec<u32>,
    max_degree: usize,
    edges: usize,
}

#[derive(Clone, Serialize, Deserialize)]
struct GraphRepr {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n() as u32, edges: g.edges().map(|e| (e.u(), e.v())).collect() }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = StreamError;

    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        let mut g = Graph::new(r.n as usize);
        for (u, v) in r.edges {
            g.apply(EdgeToken::insert(u, v)?)?;
        }
        Ok(g)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.edges == other.edges && self.edges().all(|e| other.has_edge(e))
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], hist: vec![n as u32], max_degree: 0, edges: 0 }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, StreamError> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.apply(EdgeToken::insert(u, v)?)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.adj.iter().map(|a| a.len() as u32).collect()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        if v >= self.n() {
            return false;
        }
        // Scan the shorter list.
        if self.adj[u].len() <= self.adj[v].len() {
            self.adj[u].contains(&e.v())
        } else {
            self.adj[v].contains(&e.u())
        }
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let mut out = Vec::with_capacity(self.edges);
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if (u as u32) < v {
                    out.push(Edge::new(u as u32, v).expect("no self-loops stored"));
                }
            }
        }
        out.sort_unstable();
        out.into_iter()
    }

    /// Adds `e` if absent. Returns whether the graph changed.
    pub fn insert(&mut self, e: Edge) -> bool {
        if self.has_edge(e) {
            return false;
        }
        let (u, v) = e.endpoints();
        self.adj[u].push(e.v());
        self.adj[v].push(e.u());
        self.bump(u);
        self.bump(v);
        self.edges += 1;
        true
    }

    /// Removes `e` if present. Returns whether the graph changed.
    pub fn remove(&mut self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        if v >= self.n() {
            return false;
        }
        let Some(iu) = self.adj[u].iter().position(|&x| x == e.v()) else {
            return false;
        };
        self.adj[u].swap_remove(iu);
        let iv = self.adj[v].iter().position(|&x| x == e.u()).expect("adjacency is symmetric");
        self.adj[v].swap_remove(iv);
        self.drop_degree(u);
        self.drop_degree(v);
        self.edges -= 1;
        true
    }

    /// Applies a token under strict turnstile semantics.
    pub fn apply(&mut self, t: EdgeToken) -> Result<(), StreamError> {
        t.edge.check_range(self.n())?;
        let changed = match t.op {
            EdgeOp::Insert => self.insert(t.edge),
            EdgeOp::Delete => self.remove(t.edge),
        };
        if changed {
            Ok(())
        } else {
            Err(StreamError::StrictTurnstileViolation { op: t.op, u: t.edge.u(), v: t.edge.v() })
        }
    }

    pub fn clear(&mut self) {
        let n = self.n();
        for a in &mut self.adj {
            a.clear();
        }
        self.hist.clear();
        self.hist.push(n as u32);
        self.max_degree = 0;
        self.edges = 0;
    }

    /// Stored words: two per edge endpoint list entry plus one per vertex.
    pub fn words(&self) -> usize {
        2 * self.edges + self.n()
    }

    fn bump(&mut self, v: usize) {
        let d = self.adj[v].len();
        self.hist[d - 1] -= 1;
        if self.hist.len() <= d {
            self.hist.push(0);
        }
        self.hist[d] += 1;
        if d > self.max_degree {
            self.max_degree = d;
        }
    }

    fn drop_degree(&mut self, v: usize) {
        let d = self.adj[v].len();
        self.hist[d + 1] -= 1;
        self.hist[d] += 1;
        while self.max_degree > 0 && self.hist[self.max_degree] == 0 {
            self.max_degree -= 1;
        }
    }
}

/// Degrees and exact maximum degree without adjacency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTracker {
    deg: Vec<u32>,
    hist: Vec<u32>,
    max: usize,
}

impl DegreeTracker {
    pub fn new(n: usize) -> Self {
        DegreeTracker { deg: vec![0; n], hist: vec![n as u32], max: 0 }
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u32 {
        self.deg[v]
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.deg
    }

    pub fn increment(&mut self, v: usize) {
        let d = self.deg[v] as usize;
        self.hist[d] -= 1;
        if self.hist.len() <= d + 1 {
            self.hist.push(0);
        }
        self.hist[d + 1] += 1;
        self.deg[v] += 1;
        self.max = self.max.max(d + 1);
    }

    /// Saturates at zero.
    pub fn decrement(&mut self, v: usize) {
        let d = self.deg[v] as usize;
        if d == 0 {
            return;
        }
        self.hist[d] -= 1;
        self.hist[d - 1] += 1;
        self.deg[v] -= 1;
        while self.max > 0 && self.hist[self.max] == 0 {
            self.max -= 1;
        }
    }
}
