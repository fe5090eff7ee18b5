//! Exact integer primitives: integer square roots, perfect-square detection
//! and prime-power decomposition.
//!
//! Nothing here touches floating point. Square detection runs in the hot loop
//! of the search, so a residue pre-filter rejects most non-squares before the
//! Newton iteration is attempted.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, resource, Result};

/// Largest `q` accepted by [`prime_power_decompose`]: at most 2^28 trial
/// divisions per call.
pub const PRIME_POWER_LIMIT: u64 = 1 << 56;

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(x: &BigInt) -> Result<BigInt> {
    match x.sign() {
        Sign::Minus => Err(domain(format!("isqrt of negative value {x}"))),
        _ => Ok(BigInt::from(isqrt_nat(x.magnitude()))),
    }
}

/// Newton iteration on naturals. The start value `2^ceil(bits/2)` is above
/// the root, and the iterates decrease strictly until they reach it.
pub fn isqrt_nat(x: &BigUint) -> BigUint {
    if x.is_zero() {
        return BigUint::zero();
    }
    let bits = x.bits();
    let mut r = BigUint::one() << bits.div_ceil(2);
    loop {
        let next = (&r + x / &r) >> 1u32;
        if next >= r {
            return r;
        }
        r = next;
    }
}

const fn residue_mask(m: u64) -> u128 {
    let mut mask = 0u128;
    let mut i = 0;
    while i < m {
        mask |= 1 << ((i * i) % m);
        i += 1;
    }
    mask
}

const SQUARES_MOD_64: u128 = residue_mask(64);
const SQUARES_MOD_63: u128 = residue_mask(63);
const SQUARES_MOD_65: u128 = residue_mask(65);
const SQUARES_MOD_11: u128 = residue_mask(11);
const FILTER_MODULUS: u32 = 64 * 63 * 65 * 11;

/// Returns false only when `r` (a residue modulo 64·63·65·11) is a
/// non-square modulo one of the four factors.
#[inline]
fn passes_residue_filter(r: u64) -> bool {
    (SQUARES_MOD_64 >> (r % 64)) & 1 == 1
        && (SQUARES_MOD_63 >> (r % 63)) & 1 == 1
        && (SQUARES_MOD_65 >> (r % 65)) & 1 == 1
        && (SQUARES_MOD_11 >> (r % 11)) & 1 == 1
}

/// The exact square root of `x` when `x` is a perfect square.
pub fn perfect_square_root(x: &BigInt) -> Option<BigUint> {
    if x.sign() == Sign::Minus {
        return None;
    }
    perfect_square_root_nat(x.magnitude())
}

pub fn perfect_square_root_nat(x: &BigUint) -> Option<BigUint> {
    let r = (x % FILTER_MODULUS).to_u64().expect("residue fits in u64");
    if !passes_residue_filter(r) {
        return None;
    }
    let root = isqrt_nat(x);
    if &(&root * &root) == x {
        Some(root)
    } else {
        None
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d <= n / d {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Renders a factorization as `2^2 * 3^2`.
pub fn format_factorization(factors: &[(u64, u32)]) -> String {
    factors
        .iter()
        .map(|&(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

/// Writes `q = p^b` with `p` prime, if possible.
pub fn prime_power_decompose(q: u64) -> Result<Option<(u64, u32)>> {
    if q < 2 {
        return Err(domain(format!(
            "prime power decomposition needs q >= 2, got {q}"
        )));
    }
    if q > PRIME_POWER_LIMIT {
        return Err(resource(format!(
            "q = {q} exceeds the trial-division limit {PRIME_POWER_LIMIT}"
        )));
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut b = 0u32;
    while rest % p == 0 {
        rest /= p;
        b += 1;
    }
    Ok((rest == 1).then_some((p, b)))
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::RandBigInt;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn big(x: u64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&big(0)).unwrap(), big(0));
        assert_eq!(isqrt(&big(2116)).unwrap(), big(46));
        let x = BigInt::from(10u32).pow(40) + 7;
        assert_eq!(isqrt(&x).unwrap(), BigInt::from(10u32).pow(20));
    }

    #[test]
    fn isqrt_rejects_negative() {
        assert!(matches!(
            isqrt(&(big(5) * -1)),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn perfect_square_examples() {
        assert_eq!(perfect_square_root(&big(3025)), Some(BigUint::from(55u32)));
        assert_eq!(perfect_square_root(&big(2117)), None);
        assert_eq!(
            perfect_square_root(&big(103684)),
            Some(BigUint::from(322u32))
        );
        assert_eq!(perfect_square_root(&big(0)), Some(BigUint::zero()));
        assert_eq!(perfect_square_root(&BigInt::from(-4)), None);
    }

    #[test]
    fn residue_filter_never_rejects_a_square() {
        // every residue class that is a square modulo the filter modulus
        for u in 0..FILTER_MODULUS as u64 {
            assert!(
                passes_residue_filter((u * u) % FILTER_MODULUS as u64),
                "u = {u}"
            );
        }
    }

    #[test]
    fn residue_filter_rejects_most_values() {
        let passing = (0..FILTER_MODULUS as u64)
            .filter(|&r| passes_residue_filter(r))
            .count();
        assert!(passing * 100 < FILTER_MODULUS as usize);
    }

    #[test]
    fn isqrt_matches_library_sqrt_on_wide_inputs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for bits in [1u64, 7, 64, 65, 127, 1000, 6000] {
            for _ in 0..20 {
                let x = rng.gen_biguint(bits);
                assert_eq!(isqrt_nat(&x), x.sqrt());
            }
        }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(prime_power_decompose(32).unwrap(), Some((2, 5)));
        assert_eq!(prime_power_decompose(36).unwrap(), None);
        assert_eq!(prime_power_decompose(49).unwrap(), Some((7, 2)));
        assert_eq!(prime_power_decompose(2).unwrap(), Some((2, 1)));
        assert!(matches!(
            prime_power_decompose(1),
            Err(crate::Error::Domain(_))
        ));
        assert!(matches!(
            prime_power_decompose(0),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn decompose_all_small_prime_powers() {
        for p in (2..50).filter(|&p| is_prime(p)) {
            for b in 1..=10u32 {
                assert_eq!(prime_power_decompose(p.pow(b)).unwrap(), Some((p, b)));
            }
        }
    }

    #[test]
    fn factorization_rendering() {
        assert_eq!(format_factorization(&factorize(36)), "2^2 * 3^2");
        assert_eq!(format_factorization(&factorize(47)), "47");
    }

    proptest! {
        #[test]
        fn isqrt_brackets_root(bytes in proptest::collection::vec(any::<u8>(), 0..750)) {
            let x = BigUint::from_bytes_le(&bytes);
            let r = isqrt_nat(&x);
            prop_assert!(&r * &r <= x);
            let r1 = &r + 1u32;
            prop_assert!(&r1 * &r1 > x);
        }

        #[test]
        fn squares_are_recognised(bytes in proptest::collection::vec(any::<u8>(), 0..300)) {
            let u = BigUint::from_bytes_le(&bytes);
            let sq = BigInt::from(&u * &u);
            prop_assert_eq!(perfect_square_root(&sq), Some(u.clone()));
            if !u.is_zero() {
                prop_assert_eq!(perfect_square_root(&(sq + 1)), None);
            }
        }
    }
}
