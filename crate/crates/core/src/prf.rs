//! Keyed pseudorandom function over ChaCha8 and the leveled color lists
//! built from it.
//!
//! A stream id packs `(tag, level, vertex)`; the 64-bit words of that stream
//! are the PRF outputs. Nothing is stored except the key, so replaying a seed
//! reproduces every list exactly.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain-separation tags for the different consumers of one seed.
pub mod tag {
    pub const PALETTE: u8 = 1;
    pub const CUBIC: u8 = 2;
    pub const ORDER: u8 = 3;
    pub const POOL: u8 = 4;
    pub const ADVERSARY: u8 = 5;
    pub const PERMUTATION: u8 = 6;
    pub const COVERING: u8 = 7;
    pub const GRAPH: u8 = 8;
    pub const TRIAL: u8 = 9;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prf {
    seed: u64,
}

impl Prf {
    pub fn new(seed: u64) -> Self {
        Prf { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A generator positioned at word 0 of stream `(tag, level, v)`.
    pub fn stream(&self, tag: u8, level: u32, v: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream_id(tag, level, v));
        rng
    }

    /// Word `slot` of stream `(tag, level, v)`.
    pub fn word(&self, tag: u8, level: u32, v: u32, slot: u64) -> u64 {
        let mut rng = self.stream(tag, level, v);
        rng.set_word_pos(2 * slot as u128);
        rng.next_u64()
    }

    /// Derives an independent child seed.
    pub fn child_seed(&self, tag: u8, a: u32, b: u32) -> u64 {
        self.word(tag, a, b, 0)
    }

    /// `len` colors drawn uniformly with replacement from `1..=palette`.
    pub fn fill_list(&self, tag: u8, level: u32, v: u32, palette: u32, len: usize, out: &mut Vec<u32>) {
        out.clear();
        let mut rng = self.stream(tag, level, v);
        for _ in 0..len {
            out.push(to_palette(rng.next_u64(), palette));
        }
    }
}

#[inline]
fn stream_id(tag: u8, level: u32, v: u32) -> u64 {
    ((tag as u64) << 56) | (((level as u64) & 0xFF_FFFF) << 32) | v as u64
}

/// Maps a uniform word into `1..=palette`.
#[inline]
pub fn to_palette(word: u64, palette: u32) -> u32 {
    debug_assert!(palette > 0);
    if palette.is_power_of_two() {
        (word & (palette as u64 - 1)) as u32 + 1
    } else {
        ((word as u128 * palette as u128) >> 64) as u32 + 1
    }
}

/// Palette size as a function of level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PaletteScheme {
    /// Level `j` draws from `[2^(j+1)]`, levels `0..=top`.
    Geometric,
    /// Level `i` draws from `[2 i^2]`, levels `1..=top`.
    Quadratic,
}

impl PaletteScheme {
    pub fn palette(self, level: u32) -> u32 {
        match self {
            PaletteScheme::Geometric => 1u32 << (level + 1),
            // Level 0 is unused by the quadratic scheme; give it one color.
            PaletteScheme::Quadratic => (2 * level * level).max(1),
        }
    }
}

/// Lazily materialized random color lists `P^level_v`.
///
/// Lists are a cache over the PRF: they are not part of any space
/// accounting, are not serialized, and are rebuilt identically after a
/// round trip. Each cached list also carries a bitset over its palette so
/// that intersection is a word-wise AND.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
#[serde(from = "PalettesRepr", into = "PalettesRepr")]
pub struct LeveledPalettes {
    prf: Prf,
    tag: u8,
    scheme: PaletteScheme,
    list_len: usize,
    n: usize,
    levels: usize,
    sorted: bool,
    cache: Vec<Option<Box<[u32]>>>,
    has_bits: Vec<bool>,
    // Bitset words for (v, level) start at v * stride + offset[level].
    offset: Vec<usize>,
    stride: usize,
    bits: Vec<u64>,
}

#[derive(Clone, serde::Serialize, serde::Deserialize)]
struct PalettesRepr {
    seed: u64,
    tag: u8,
    scheme: PaletteScheme,
    list_len: u32,
    n: u32,
    levels: u32,
    sorted: bool,
}

impl From<LeveledPalettes> for PalettesRepr {
    fn from(p: LeveledPalettes) -> Self {
        PalettesRepr {
            seed: p.prf.seed(),
            tag: p.tag,
            scheme: p.scheme,
            list_len: p.list_len as u32,
            n: p.n as u32,
            levels: p.levels as u32,
            sorted: p.sorted,
        }
    }
}

impl From<PalettesRepr> for LeveledPalettes {
    fn from(r: PalettesRepr) -> Self {
        LeveledPalettes::new(r.seed, r.tag, r.scheme, r.list_len as usize, r.n as usize, r.levels as usize, r.sorted)
    }
}

impl LeveledPalettes {
    /// `levels` is one past the largest level index used. With `sorted`,
    /// each list is returned in ascending order (draw order is lost).
    pub fn new(seed: u64, tag: u8, scheme: PaletteScheme, list_len: usize, n: usize, levels: usize, sorted: bool) -> Self {
        let mut cache = Vec::new();
        cache.resize_with(n * levels, || None);
        let mut offset = Vec::with_capacity(levels);
        let mut stride = 0;
        for level in 0..levels as u32 {
            offset.push(stride);
            stride += words_for(scheme, level);
        }
        let has_bits = alloc::vec![false; n * levels];
        LeveledPalettes { prf: Prf::new(seed), tag, scheme, list_len, n, levels, sorted, cache, has_bits, offset, stride, bits: Vec::new() }
    }

    pub fn list_len(&self) -> usize {
        self.list_len
    }

    pub fn scheme(&self) -> PaletteScheme {
        self.scheme
    }

    pub fn seed(&self) -> u64 {
        self.prf.seed()
    }

    /// The list of `v` at `level`.
    pub fn list(&mut self, v: u32, level: u32) -> &[u32] {
        let idx = v as usize * self.levels + level as usize;
        if self.cache[idx].is_none() {
            let mut buf = Vec::with_capacity(self.list_len);
            self.prf.fill_list(self.tag, level, v, self.scheme.palette(level), self.list_len, &mut buf);
            if self.sorted {
                buf.sort_unstable();
            }
            self.cache[idx] = Some(buf.into_boxed_slice());
        }
        self.cache[idx].as_deref().expect("just filled")
    }

    /// Sets the membership bits of `v`'s list at `level` if not yet done.
    fn ensure_bits(&mut self, v: u32, level: u32) {
        let idx = v as usize * self.levels + level as usize;
        if self.has_bits[idx] {
            return;
        }
        if self.bits.is_empty() {
            self.bits = alloc::vec![0; self.n * self.stride];
        }
        let base = v as usize * self.stride + self.offset[level as usize];
        let palette = self.scheme.palette(level);
        let mut rng = self.prf.stream(self.tag, level, v);
        for _ in 0..self.list_len {
            let b = (to_palette(rng.next_u64(), palette) - 1) as usize;
            self.bits[base + b / 64] |= 1 << (b % 64);
        }
        self.has_bits[idx] = true;
    }

    /// Entry `slot` of `v`'s list at `level` in draw order, without caching.
    pub fn lookup(&self, v: u32, level: u32, slot: usize) -> u32 {
        let mut rng = self.prf.stream(self.tag, level, v);
        rng.set_word_pos(2 * slot as u128);
        to_palette(rng.next_u64(), self.scheme.palette(level))
    }

    /// Whether the lists of `u` and `v` at `level` share a color.
    pub fn intersect(&mut self, u: u32, v: u32, level: u32) -> bool {
        self.ensure_bits(u, level);
        self.ensure_bits(v, level);
        let w = words_for(self.scheme, level);
        let off = self.offset[level as usize];
        let a = &self.bits[u as usize * self.stride + off..][..w];
        let b = &self.bits[v as usize * self.stride + off..][..w];
        a.iter().zip(b).any(|(x, y)| x & y != 0)
    }
}

fn words_for(scheme: PaletteScheme, level: u32) -> usize {
    (scheme.palette(level) as usize).div_ceil(64)
}

pub fn sorted_intersect(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_separated() {
        let p = Prf::new(42);
        assert_eq!(p.word(tag::PALETTE, 3, 7, 5), Prf::new(42).word(tag::PALETTE, 3, 7, 5));
        assert_ne!(p.word(tag::PALETTE, 3, 7, 5), p.word(tag::CUBIC, 3, 7, 5));
        assert_ne!(p.word(tag::PALETTE, 3, 7, 5), p.word(tag::PALETTE, 4, 7, 5));
        assert_ne!(p.word(tag::PALETTE, 3, 7, 5), Prf::new(43).word(tag::PALETTE, 3, 7, 5));
    }

    #[test]
    fn lookup_matches_list_order() {
        let mut lp = LeveledPalettes::new(9, tag::CUBIC, PaletteScheme::Quadratic, 16, 16, 9, false);
        let list = lp.list(3, 5).to_vec();
        assert_eq!(list.len(), 16);
        for (slot, &c) in list.iter().enumerate() {
            assert_eq!(lp.lookup(3, 5, slot), c);
            assert!((1..=50).contains(&c));
        }
    }

    #[test]
    fn palette_mapping_is_roughly_uniform() {
        let p = Prf::new(1);
        let mut counts = [0u32; 6];
        let mut rng = p.stream(tag::GRAPH, 0, 0);
        for _ in 0..60_000 {
            counts[to_palette(rng.next_u64(), 6) as usize - 1] += 1;
        }
        for c in counts {
            assert!((9_000..11_000).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn bitset_and_merge_agree() {
        let mut small = LeveledPalettes::new(3, tag::PALETTE, PaletteScheme::Quadratic, 6, 40, 12, true);
        for level in 1..12 {
            for u in 0..40 {
                for v in u + 1..40 {
                    let a = small.list(u, level).to_vec();
                    let b = small.list(v, level).to_vec();
                    assert_eq!(small.intersect(u, v, level), sorted_intersect(&a, &b));
                }
            }
        }
    }

    #[test]
    fn serde_drops_cache_but_keeps_lists() {
        let mut lp = LeveledPalettes::new(77, tag::PALETTE, PaletteScheme::Geometric, 12, 10, 4, true);
        let before = lp.list(4, 2).to_vec();
        let bytes = postcard::to_allocvec(&lp).unwrap();
        assert!(bytes.len() < 24);
        let mut back: LeveledPalettes = postcard::from_bytes(&bytes).unwrap();
        assert_eq!(back.list(4, 2), &before[..]);
    }

    #[test]
    fn full_list_always_intersects() {
        // 400 draws from a 2-color palette: a miss has probability 2^-399.
        let mut lp = LeveledPalettes::new(5, tag::PALETTE, PaletteScheme::Geometric, 400, 8, 1, true);
        for u in 0..8 {
            for v in u + 1..8 {
                assert!(lp.intersect(u, v, 0));
            }
        }
    }
}
