//! Tokens of a strict graph turnstile stream and the global run parameters.

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, StreamError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeOp {
    Insert,
    Delete,
}

/// An undirected edge, endpoints stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    u: u32,
    v: u32,
}

impl Edge {
    /// Builds an edge, normalizing endpoint order. Self-loops are rejected.
    pub fn new(a: u32, b: u32) -> Result<Self, StreamError> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            core::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            core::cmp::Ordering::Equal => Err(StreamError::SelfLoop(a)),
        }
    }

    #[inline]
    pub fn u(self) -> u32 {
        self.u
    }

    #[inline]
    pub fn v(self) -> u32 {
        self.v
    }

    #[inline]
    pub fn endpoints(self) -> (usize, usize) {
        (self.u as usize, self.v as usize)
    }

    pub fn check_range(self, n: usize) -> Result<(), StreamError> {
        if (self.v as usize) < n {
            Ok(())
        } else {
            Err(StreamError::VertexOutOfRange { vertex: self.v, n })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeToken {
    pub op: EdgeOp,
    pub edge: Edge,
}

impl EdgeToken {
    pub fn new(op: EdgeOp, a: u32, b: u32) -> Result<Self, StreamError> {
        Ok(EdgeToken { op, edge: Edge::new(a, b)? })
    }

    pub fn insert(a: u32, b: u32) -> Result<Self, StreamError> {
        Self::new(EdgeOp::Insert, a, b)
    }

    pub fn delete(a: u32, b: u32) -> Result<Self, StreamError> {
        Self::new(EdgeOp::Delete, a, b)
    }

    #[inline]
    pub fn is_insert(&self) -> bool {
        self.op == EdgeOp::Insert
    }
}

/// Global parameters shared by every algorithm and adversary in a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    /// Vertex count; vertices are `0..n`.
    pub n: usize,
    /// Upper bound on the number of tokens.
    pub m: usize,
    /// Promised bound `L` on the maximum degree over the whole stream.
    pub degree_bound: usize,
    /// Color/space tradeoff exponent.
    pub k: usize,
    /// Target failure probability.
    pub delta: f64,
    pub seed: u64,
}

impl StreamConfig {
    pub fn new(n: usize, m: usize, degree_bound: usize, k: usize, delta: f64, seed: u64) -> Result<Self, ConfigError> {
        let cfg = StreamConfig { n, m, degree_bound, k, delta, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::VertexCount(self.n));
        }
        if self.degree_bound == 0 || self.degree_bound > self.n - 1 {
            return Err(ConfigError::DegreeBound { bound: self.degree_bound, n: self.n });
        }
        if self.k == 0 {
            return Err(ConfigError::Exponent);
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(ConfigError::Delta(self.delta));
        }
        if self.m == 0 {
            return Err(ConfigError::StreamLength);
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        StreamConfig { seed, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_canonical() {
        let e = Edge::new(5, 2).unwrap();
        assert_eq!((e.u(), e.v()), (2, 5));
        assert_eq!(e, Edge::new(2, 5).unwrap());
        assert_eq!(Edge::new(3, 3), Err(StreamError::SelfLoop(3)));
    }

    #[test]
    fn config_ranges() {
        assert!(StreamConfig::new(64, 100, 16, 2, 0.01, 1).is_ok());
        assert!(matches!(StreamConfig::new(64, 100, 64, 2, 0.01, 1), Err(ConfigError::DegreeBound { .. })));
        assert!(matches!(StreamConfig::new(64, 100, 0, 2, 0.01, 1), Err(ConfigError::DegreeBound { .. })));
        assert_eq!(StreamConfig::new(64, 100, 8, 0, 0.01, 1), Err(ConfigError::Exponent));
        assert_eq!(StreamConfig::new(64, 100, 8, 1, 1.0, 1), Err(ConfigError::Delta(1.0)));
        assert_eq!(StreamConfig::new(64, 100, 8, 1, 0.0, 1), Err(ConfigError::Delta(0.0)));
        assert_eq!(StreamConfig::new(64, 0, 8, 1, 0.5, 1), Err(ConfigError::StreamLength));
    }
}
