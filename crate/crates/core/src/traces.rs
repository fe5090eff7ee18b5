//! Frobenius traces: the Hasse interval, Waterhouse's existence criterion
//! and the root-of-unity classification of `(q, a)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::{factorize, format_factorization, prime_power_decompose};

/// `q = p^b` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    q: u64,
    p: u64,
    b: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        match prime_power_decompose(q)? {
            Some((p, b)) => Ok(PrimePower { q, p, b }),
            None => Err(domain(format!(
                "{q} is not a prime power ({q} = {})",
                format_factorization(&factorize(q))
            ))),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Every prime power `2 <= q < qmax`, ascending.
    pub fn all_below(qmax: u64) -> Vec<PrimePower> {
        (2..qmax).filter_map(|q| PrimePower::new(q).ok()).collect()
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Largest `t` with `t^2 <= 4q`.
pub fn hasse_radius(q: &PrimePower) -> i64 {
    let four_q = 4 * u128::from(q.q);
    let mut t = (four_q as f64).sqrt() as u128;
    while t * t > four_q {
        t -= 1;
    }
    while (t + 1) * (t + 1) <= four_q {
        t += 1;
    }
    t as i64
}

pub fn hasse_holds(q: &PrimePower, a: i64) -> bool {
    let a = i128::from(a);
    a * a <= 4 * i128::from(q.q)
}

/// Waterhouse's criterion for `q + 1 - a` to be the order of `E(F_q)` for
/// some elliptic curve `E`. Values outside the Hasse interval are rejected.
pub fn waterhouse_admissible(q: &PrimePower, a: i64) -> bool {
    if !hasse_holds(q, a) {
        return false;
    }
    let (p, b) = (q.p as i64, q.b);
    if a.gcd(&p) == 1 {
        return true;
    }
    let a2 = i128::from(a) * i128::from(a);
    let qq = i128::from(q.q);
    if b % 2 == 0 {
        a2 == 4 * qq || (p % 3 != 1 && a2 == qq) || (p % 4 != 1 && a == 0)
    } else {
        ((p == 2 || p == 3) && a.unsigned_abs() == (p as u64).pow(b.div_ceil(2))) || a == 0
    }
}

/// Admissible traces for `q`, ascending.
pub fn admissible_traces(q: &PrimePower) -> Vec<i64> {
    let r = hasse_radius(q);
    (-r..=r).filter(|&a| waterhouse_admissible(q, a)).collect()
}

/// Whether `alpha/beta` is a root of unity, where `alpha, beta` are the roots
/// of `x^2 - a x + q`; if so, its exact order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Degeneracy {
    Nondegenerate,
    RootOfUnity(u32),
}

impl Degeneracy {
    pub fn order(self) -> Option<u32> {
        match self {
            Degeneracy::Nondegenerate => None,
            Degeneracy::RootOfUnity(m) => Some(m),
        }
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, Degeneracy::RootOfUnity(_))
    }
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::Nondegenerate => f.write_str("nondegenerate"),
            Degeneracy::RootOfUnity(m) => write!(f, "degenerate, m={m}"),
        }
    }
}

/// `a^2 = c q` with `c` in `{4, 0, 1, 2, 3}` gives `m = 1, 2, 3, 4, 6`.
pub fn classify_degeneracy(q: &PrimePower, a: i64) -> Result<Degeneracy> {
    if !hasse_holds(q, a) {
        return Err(domain(format!(
            "trace {a} violates the Hasse bound for q = {q}"
        )));
    }
    let a2 = i128::from(a) * i128::from(a);
    let qq = i128::from(q.q);
    let m = match a2 {
        0 => 2,
        x if x == qq => 3,
        x if x == 2 * qq => 4,
        x if x == 3 * qq => 6,
        x if x == 4 * qq => 1,
        _ => return Ok(Degeneracy::Nondegenerate),
    };
    Ok(Degeneracy::RootOfUnity(m))
}

/// A trace together with its verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceSpec {
    pub q: PrimePower,
    pub a: i64,
    pub admissible: bool,
    pub degeneracy: Degeneracy,
}

impl TraceSpec {
    pub fn new(q: PrimePower, a: i64) -> Result<Self> {
        let degeneracy = classify_degeneracy(&q, a)?;
        Ok(TraceSpec {
            q,
            a,
            admissible: waterhouse_admissible(&q, a),
            degeneracy,
        })
    }
}
