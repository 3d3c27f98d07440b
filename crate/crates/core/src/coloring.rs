//! Colorings whose colors are fixed-arity tuples of small integers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::StreamError;
use crate::graph::Graph;

/// Per-vertex color tuples, stored flat: vertex `v` owns
/// `data[v * arity .. (v + 1) * arity]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    arity: usize,
    data: Vec<u32>,
}

impl Coloring {
    /// Every vertex gets the same tuple.
    pub fn uniform(n: usize, tuple: &[u32]) -> Self {
        assert!(!tuple.is_empty(), "arity must be positive");
        let mut data = Vec::with_capacity(n * tuple.len());
        for _ in 0..n {
            data.extend_from_slice(tuple);
        }
        Coloring { arity: tuple.len(), data }
    }

    /// The all-1 coloring of arity one.
    pub fn ones(n: usize) -> Self {
        Coloring { arity: 1, data: vec![1; n] }
    }

    pub fn from_scalars(colors: Vec<u32>) -> Self {
        Coloring { arity: 1, data: colors }
    }

    pub fn from_flat(arity: usize, data: Vec<u32>) -> Result<Self, StreamError> {
        if arity == 0 || data.len() % arity != 0 {
            return Err(StreamError::LengthMismatch { expected: arity.max(1), found: data.len() });
        }
        Ok(Coloring { arity, data })
    }

    pub fn from_tuples<T: AsRef<[u32]>>(tuples: &[T]) -> Result<Self, StreamError> {
        let arity = tuples.first().map_or(1, |t| t.as_ref().len());
        let mut data = Vec::with_capacity(arity * tuples.len());
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(StreamError::LengthMismatch { expected: arity, found: t.len() });
            }
            data.extend_from_slice(t);
        }
        Coloring::from_flat(arity, data)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.arity
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn get(&self, v: usize) -> &[u32] {
        &self.data[v * self.arity..(v + 1) * self.arity]
    }

    #[inline]
    pub fn set(&mut self, v: usize, tuple: &[u32]) {
        assert_eq!(tuple.len(), self.arity);
        self.data[v * self.arity..(v + 1) * self.arity].copy_from_slice(tuple);
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.arity)
    }

    /// One `u128` per vertex, equal iff the tuples are equal, when the
    /// coordinates fit in 128 bits together.
    pub fn keys(&self) -> Option<Vec<u128>> {
        let a = self.arity;
        let mut widths = vec![0u32; a];
        for t in self.data.chunks_exact(a) {
            for i in 0..a {
                widths[i] = widths[i].max(32 - t[i].leading_zeros());
            }
        }
        if widths.iter().sum::<u32>() > 128 {
            return None;
        }
        let mut out = Vec::with_capacity(self.len());
        for t in self.data.chunks_exact(a) {
            let mut k = 0u128;
            for i in 0..a {
                k = (k << widths[i]) | t[i] as u128;
            }
            out.push(k);
        }
        Some(out)
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.data
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// True iff no edge of `g` is monochromatic under `c`.
pub fn is_proper(c: &Coloring, g: &Graph) -> bool {
    if c.len() != g.n() {
        return false;
    }
    match c.keys() {
        Some(k) => proper_by(g, |u, v| k[u] != k[v]),
        None => proper_by(g, |u, v| c.get(u) != c.get(v)),
    }
}

fn proper_by(g: &Graph, differ: impl Fn(usize, usize) -> bool) -> bool {
    (0..g.n()).all(|u| g.neighbors(u).iter().all(|&v| (v as usize) < u || differ(u, v as usize)))
}

/// Vertex `v` gets the concatenation of its tuples in `cs`, in order.
pub fn product_coloring(cs: &[&Coloring]) -> Result<Coloring, StreamError> {
    let first = cs.first().ok_or(StreamError::EmptyProduct)?;
    let n = first.len();
    for c in cs {
        if c.len() != n {
            return Err(StreamError::LengthMismatch { expected: n, found: c.len() });
        }
    }
    let arity: usize = cs.iter().map(|c| c.arity()).sum();
    let mut data = Vec::with_capacity(n * arity);
    for v in 0..n {
        for c in cs {
            data.extend_from_slice(c.get(v));
        }
    }
    Ok(Coloring { arity, data })
}

/// Number of distinct tuples in `c`.
pub fn count_colors(c: &Coloring) -> usize {
    if c.is_empty() {
        return 0;
    }
    if let Some(mut k) = c.keys() {
        k.sort_unstable();
        k.dedup();
        return k.len();
    }
    let mut v: Vec<&[u32]> = c.iter().collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Greedy coloring visiting vertices in `order`; each vertex takes the
/// smallest color in `1..` unused by its already-colored neighbors.
///
/// Vertices missing from `order` are colored afterwards in ascending order.
pub fn greedy_color(g: &Graph, order: &[u32]) -> Coloring {
    let n = g.n();
    let mut color = vec![0u32; n];
    // `mark[c] == stamp` means color c is taken by a neighbor of the current vertex.
    let mut mark = vec![0u32; g.max_degree() + 2];
    let mut stamp = 0u32;
    let mut paint = |v: usize, color: &mut [u32]| {
        stamp += 1;
        for &w in g.neighbors(v) {
            let c = color[w as usize] as usize;
            if c != 0 && c < mark.len() {
                mark[c] = stamp;
            }
        }
        let c = (1..mark.len()).find(|&c| mark[c] != stamp).expect("deg + 1 colors suffice");
        color[v] = c as u32;
    };
    for &v in order {
        if color[v as usize] == 0 {
            paint(v as usize, &mut color);
        }
    }
    for v in 0..n {
        if color[v] == 0 {
            paint(v, &mut color);
        }
    }
    Coloring::from_scalars(color)
}

pub fn greedy_color_ascending(g: &Graph) -> Coloring {
    greedy_color(g, &[])
}
