//! Deterministic one-way protocol from a covering family: `z` target sets
//! `T_1..T_z ⊂ [t]` of size `b` such that every `a`-subset misses at least
//! one of them. Alice sends the index of the first one her set misses.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::avoid::{covering_size, AvoidError};
use crate::math::{binomial_u128, ceil_log2};
use crate::prf::{tag, Prf};

/// Largest `C(t, a)` the exhaustive verifier will enumerate by default.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Subsets of `[t]` are `u128` masks, so `t ≤ 128`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringCollection {
    t: u32,
    a: u32,
    b: u32,
    sets: Vec<u128>,
}

fn full_mask(t: u32) -> u128 {
    if t == 128 {
        u128::MAX
    } else {
        (1u128 << t) - 1
    }
}

/// Calls `f` on every `a`-subset of `[t]` in colexicographic order until it
/// returns false.
fn for_each_subset(t: u32, a: u32, mut f: impl FnMut(u128) -> bool) {
    if a > t {
        return;
    }
    if a == 0 {
        f(0);
        return;
    }
    let limit = full_mask(t);
    let mut s: u128 = full_mask(a);
    loop {
        if !f(s) {
            return;
        }
        // Gosper's hack
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 || r > limit {
            return;
        }
        s = (((r ^ s) >> 2) / c) | r;
        if s > limit {
            return;
        }
    }
}

fn random_subset(prf: &Prf, attempt: u32, j: u32, t: u32, b: u32) -> u128 {
    let mut rng = prf.stream(tag::COVERING, attempt, j);
    let mut idx: Vec<u32> = (0..t).collect();
    let (chosen, _) = idx.partial_shuffle(&mut rng, b as usize);
    chosen.iter().fold(0u128, |m, &x| m | (1u128 << x))
}

/// Draws `z` random `b`-subsets per attempt and keeps the first family that
/// passes exhaustive verification.
pub fn build_covering(
    t: u32,
    a: u32,
    b: u32,
    seed: u64,
    max_attempts: usize,
    cap: u128,
) -> Result<CoveringCollection, AvoidError> {
    if t == 0 || t > 128 {
        return Err(AvoidError::Invalid("universe size must be in 1..=128"));
    }
    if a + b > t {
        return Err(AvoidError::Invalid("a + b must not exceed t"));
    }
    match binomial_u128(t as u64, a as u64) {
        Some(c) if c <= cap => {}
        _ => return Err(AvoidError::TooLarge),
    }
    let z = covering_size(t as u64, a as u64, b as u64) as u32;
    let prf = Prf::new(seed);
    for attempt in 0..max_attempts {
        let sets: Vec<u128> = (0..z).map(|j| random_subset(&prf, attempt as u32, j, t, b)).collect();
        let cand = CoveringCollection { t, a, b, sets };
        if cand.verify() {
            return Ok(cand);
        }
    }
    Err(AvoidError::CoveringNotFound { attempts: max_attempts })
}

impl CoveringCollection {
    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn sets(&self) -> &[u128] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// True if every `a`-subset of `[t]` misses some member.
    pub fn verify(&self) -> bool {
        let mut ok = true;
        for_each_subset(self.t, self.a, |s| {
            ok = self.sets.iter().any(|&m| m & s == 0);
            ok
        });
        ok
    }

    /// Index of the first target set disjoint from `s`.
    pub fn alice_message(&self, s: u128) -> Option<u32> {
        self.sets.iter().position(|&m| m & s == 0).map(|j| j as u32)
    }

    pub fn bob_output(&self, msg: u32) -> Option<u128> {
        self.sets.get(msg as usize).copied()
    }

    /// Fixed message length `⌈log₂ z⌉`.
    pub fn message_bits(&self) -> u32 {
        ceil_log2(self.sets.len() as u64)
    }
}
