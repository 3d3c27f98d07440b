//! Small numeric helpers: base-2 ceilings and exact binomials.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `⌈log₂ x⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
#[inline]
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial as `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    binomial(n, k).to_u128()
}

/// `log₂ x` for a positive big integer, accurate to f64 precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return libm::log2(x.to_u64().expect("fits") as f64);
    }
    // Keep the top 64 bits; the rest only shift the exponent.
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits");
    libm::log2(top as f64) + shift as f64
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    log2_big(x) * core::f64::consts::LN_2
}

/// `⌈a / b⌉` for positive integers.
#[inline]
pub fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceilings() {
        let cases = [(0, 0), (1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (16, 4), (17, 5), (128, 7), (256, 8)];
        for (x, want) in cases {
            assert_eq!(ceil_log2(x), want, "x = {x}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigUint::from(15u32));
        assert_eq!(binomial(12, 3), BigUint::from(220u32));
        assert_eq!(binomial(9, 3), BigUint::from(84u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(120, 0), BigUint::one());
        assert_eq!(binomial_u128(120, 60).is_some(), true);
    }

    #[test]
    fn big_logs() {
        assert!((log2_big(&BigUint::from(1024u32)) - 10.0).abs() < 1e-12);
        let big = BigUint::one() << 300u32;
        assert!((log2_big(&(big * 3u32)) - (300.0 + libm::log2(3.0))).abs() < 1e-9);
    }
}
