//! p-adic valuations and canonical residues for exact rationals.
//!
//! Every set-level predicate in this crate depends only on p-adic valuations
//! and residues modulo powers of p, both of which are exact for reduced
//! rationals: a rational with denominator prime to p behaves like a p-adic
//! integer, and one with p in the denominator is handled through its
//! (negative) valuation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// p-adic valuation of a nonzero integer.
fn vp_int(p: u64, x: &BigInt) -> i64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut x = x.abs();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        x = q;
    }
}

/// p-adic valuation of a rational; `None` encodes +infinity (the zero input).
pub fn vp(p: u64, q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(vp_int(p, q.numer()) - vp_int(p, q.denom()))
}

/// `p^k` as an exact rational, for any sign of `k`.
pub fn p_pow(p: u64, k: i64) -> BigRational {
    assert!(
        k.unsigned_abs() <= 1 << 20,
        "p-adic exponent {k} beyond desk scale"
    );
    let mag = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Canonical representative of `q` modulo `p^i Z_p`.
///
/// The result is the truncation of the p-adic expansion of `q` below
/// exponent `i`: a rational of the form `sum_{k=v}^{i-1} d_k p^k` with
/// digits `d_k` in `{0,...,p-1}` and `v = vp(q)`. In particular the result
/// is `0` exactly when `q` lies in `p^i Z_p`, and `q - residue` always does.
pub fn residue_mod_p_power(p: u64, q: &BigRational, i: i64) -> BigRational {
    let v = match vp(p, q) {
        None => return BigRational::zero(),
        Some(v) => v,
    };
    if v >= i {
        return BigRational::zero();
    }
    // q = p^v * (a/b) with a, b prime to p; reduce a/b modulo p^(i-v).
    let unit = q / p_pow(p, v);
    let modulus = BigInt::from(p).pow((i - v) as u32);
    let inv = mod_inverse(unit.denom(), &modulus);
    let c = (unit.numer() * inv).mod_floor(&modulus);
    BigRational::from_integer(c) * p_pow(p, v)
}

/// True when `q` lies in `p^i Z_p`, i.e. `vp(q) >= i` (zero always passes).
pub fn in_p_power(p: u64, q: &BigRational, i: i64) -> bool {
    match vp(p, q) {
        None => true,
        Some(v) => v >= i,
    }
}

/// Deterministic primality check for the small primes used as base
/// characteristics.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn valuation_basics() {
        // 12 = 4 * 3
        assert_eq!(vp(2, &q(12, 1)), Some(2));
        assert_eq!(vp(2, &q(3, 8)), Some(-3));
        assert_eq!(vp(5, &BigRational::zero()), None);
        assert_eq!(vp(3, &q(18, 5)), Some(2));
    }

    #[test]
    fn residue_truncates_expansion() {
        // 2 mod 2 Z_2 -> 0
        assert_eq!(residue_mod_p_power(2, &q(2, 1), 1), BigRational::zero());
        // 1/2 mod Z_2 -> 1/2 (fractional digits kept verbatim)
        assert_eq!(residue_mod_p_power(2, &q(1, 2), 0), q(1, 2));
        // 11/8 mod Z_2: digits of 11 below 2^3 are 3, so residue 3/8
        assert_eq!(residue_mod_p_power(2, &q(11, 8), 0), q(3, 8));
        // 5 mod Z_2 -> 0, 5 mod 4 Z_2 -> 1
        assert_eq!(residue_mod_p_power(2, &q(5, 1), 0), BigRational::zero());
        assert_eq!(residue_mod_p_power(2, &q(5, 1), 2), q(1, 1));
        // 1/3 is a 2-adic unit: 1/3 = 1 + 2 + ... so mod 4 Z_2 it is 3
        assert_eq!(residue_mod_p_power(2, &q(1, 3), 2), q(3, 1));
    }

    #[test]
    fn residue_is_idempotent_and_exact() {
        for (n, d, i) in [(7, 2, 3), (-5, 4, 1), (9, 1, 2), (1, 6, 0), (22, 7, 4)] {
            let x = q(n, d);
            let r = residue_mod_p_power(2, &x, i);
            assert!(in_p_power(2, &(&x - &r), i), "x - r must be in p^i Z_p");
            assert_eq!(residue_mod_p_power(2, &r, i), r);
        }
    }

    #[test]
    fn small_primes() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
        let _ = BigRational::from_i64(0);
    }
}
