//! Monte Carlo check of the max-degree tail of uniform random graphs:
//! `Pr[Δ_G ≥ (2M/n)(1+ε)] ≤ 2n·exp(-(ε²/3)(2M/n))`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::ConfigError;

/// One-sided 99% normal quantile.
pub const Z99: f64 = 2.326_347_874_040_841;

#[derive(Clone, Debug, PartialEq)]
pub struct RandomGraphReport {
    pub n: usize,
    pub edges: usize,
    pub eps: f64,
    pub trials: usize,
    pub hits: usize,
    pub threshold: f64,
    pub bound: f64,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
}

impl RandomGraphReport {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// The data do not contradict the bound at the 99% level: the Wilson
    /// lower limit of the frequency is at most the bound.
    pub fn consistent(&self) -> bool {
        self.wilson_lower <= self.bound
    }
}

pub fn degree_tail_bound(n: usize, edges: usize, eps: f64) -> f64 {
    let mean = 2.0 * edges as f64 / n as f64;
    2.0 * n as f64 * libm::exp(-(eps * eps / 3.0) * mean)
}

/// Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let nt = trials as f64;
    let p = hits as f64 / nt;
    let z2 = z * z;
    let denom = 1.0 + z2 / nt;
    let centre = (p + z2 / (2.0 * nt)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Samples `trials` uniform graphs with exactly `edges` edges on `n`
/// vertices and counts how often the max degree reaches the threshold.
pub fn random_graph_check(n: usize, edges: usize, eps: f64, trials: usize, seed: u64) -> Result<RandomGraphReport, ConfigError> {
    if n < 2 {
        return Err(ConfigError::VertexCount(n));
    }
    let pairs_total = n * (n - 1) / 2;
    if edges > pairs_total {
        return Err(ConfigError::Invalid("edge count exceeds n choose 2"));
    }
    if !(eps >= 0.0) {
        return Err(ConfigError::Invalid("epsilon must be non-negative"));
    }
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(pairs_total);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            pairs.push((u, v));
        }
    }
    let threshold = 2.0 * edges as f64 / n as f64 * (1.0 + eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taken = vec![false; pairs_total];
    let mut chosen: Vec<usize> = Vec::with_capacity(edges);
    let mut deg = vec![0u32; n];
    let mut hits = 0;
    for _ in 0..trials {
        // Floyd's sampling of an `edges`-subset of the pair indices.
        chosen.clear();
        for j in pairs_total - edges..pairs_total {
            let t = rng.gen_range(0..=j);
            let pick = if taken[t] { j } else { t };
            taken[pick] = true;
            chosen.push(pick);
        }
        deg.iter_mut().for_each(|d| *d = 0);
        for &i in &chosen {
            taken[i] = false;
            let (u, v) = pairs[i];
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let max = deg.iter().copied().max().unwrap_or(0);
        if max as f64 >= threshold {
            hits += 1;
        }
    }
    let (wilson_lower, wilson_upper) = wilson_interval(hits, trials, Z99);
    Ok(RandomGraphReport { n, edges, eps, trials, hits, threshold, bound: degree_tail_bound(n, edges, eps), wilson_lower, wilson_upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(degree_tail_bound(64, 64, 0.0), 128.0);
        let b = degree_tail_bound(100, 5000, 1.0);
        assert!((b / 6.6e-13 - 1.0).abs() < 0.05, "{b}");
    }

    #[test]
    fn wilson_reference_values() {
        // 0 of 10: upper limit z²/(n+z²).
        let (lo, hi) = wilson_interval(0, 10, Z99);
        assert_eq!(lo, 0.0);
        assert!((hi - Z99 * Z99 / (10.0 + Z99 * Z99)).abs() < 1e-12);
        let (lo, hi) = wilson_interval(50, 100, 1.959_963_984_540_054);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn sampler_hits_exactly_m_distinct_edges() {
        // With M = C(n,2) every trial is the complete graph: Δ = n-1.
        let r = random_graph_check(6, 15, 0.0, 20, 1).unwrap();
        assert_eq!(r.hits, 20);
        let r = random_graph_check(6, 15, 0.01, 20, 1).unwrap();
        assert_eq!(r.hits, 0);
    }

    #[test]
    fn too_many_edges_rejected() {
        assert!(random_graph_check(100, 5000, 1.0, 10, 0).is_err());
    }

    #[test]
    fn degree_distribution_is_uniform_over_vertices() {
        // Each vertex has expected degree 2M/n; check the mean of vertex 0.
        let n = 16;
        let m = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut total = 0u64;
        let trials = 4000;
        for _ in 0..trials {
            let mut taken = vec![false; n * (n - 1) / 2];
            let mut d0 = 0;
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for j in pairs.len() - m..pairs.len() {
                let t = rng.gen_range(0..=j);
                let pick = if taken[t] { j } else { t };
                taken[pick] = true;
                if pairs[pick].0 == 0 {
                    d0 += 1;
                }
            }
            total += d0;
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 5.0).abs() < 0.15, "{mean}");
    }
}
