//! The trace recurrence `a_0 = 2, a_1 = a, a_n = a a_{n-1} - q a_{n-2}` and
//! the point counts `N_n = q^n + 1 - a_n` it produces, with square detection.
//!
//! `a_n` is the power sum `alpha^n + beta^n` of the roots of `x^2 - a x + q`;
//! the roots themselves are never formed.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{isqrt_nat, perfect_square_root};
use crate::traces::{classify_degeneracy, hasse_holds, Degeneracy, PrimePower};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTerm {
    pub n: u32,
    /// `a_n`
    pub trace: BigInt,
    /// `N_n = q^n + 1 - a_n`
    pub points: BigInt,
    /// `q^n`
    pub q_pow: BigInt,
}

/// Streams `SequenceTerm`s for `n = 1..=nmax`.
#[derive(Debug, Clone)]
pub struct TraceSequence {
    q: BigInt,
    a: BigInt,
    prev: BigInt,
    cur: BigInt,
    q_pow: BigInt,
    n: u32,
    nmax: u32,
}

impl Iterator for TraceSequence {
    type Item = SequenceTerm;

    fn next(&mut self) -> Option<SequenceTerm> {
        if self.n >= self.nmax {
            return None;
        }
        if self.n > 0 {
            let next = &self.a * &self.cur - &self.q * &self.prev;
            self.prev = std::mem::replace(&mut self.cur, next);
        }
        self.n += 1;
        self.q_pow *= &self.q;
        let points = &self.q_pow + 1u32 - &self.cur;
        Some(SequenceTerm {
            n: self.n,
            trace: self.cur.clone(),
            points,
            q_pow: self.q_pow.clone(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.nmax - self.n) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for TraceSequence {}

fn check_hasse(q: &PrimePower, a: i64) -> Result<()> {
    if hasse_holds(q, a) {
        Ok(())
    } else {
        Err(domain(format!(
            "trace {a} violates the Hasse bound for q = {q}"
        )))
    }
}

pub fn trace_sequence(q: &PrimePower, a: i64, nmax: u32) -> Result<TraceSequence> {
    check_hasse(q, a)?;
    if nmax == 0 {
        return Err(domain("nmax must be at least 1"));
    }
    Ok(TraceSequence {
        q: BigInt::from(q.q()),
        a: BigInt::from(a),
        // a_0 = 2 sits in `prev` once the first step shifts a_1 into `cur`
        prev: BigInt::from(2),
        cur: BigInt::from(a),
        q_pow: BigInt::one(),
        n: 0,
        nmax,
    })
}

/// The single term at index `n`.
pub fn nth_term(q: &PrimePower, a: i64, n: u32) -> Result<SequenceTerm> {
    Ok(trace_sequence(q, a, n)?
        .last()
        .expect("n >= 1 yields a term"))
}

/// Where a square hit came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HitSource {
    /// Found by scanning the sequence of a nondegenerate pair.
    Scan,
    /// Degenerate pair with `m | n`: a square by the closed form.
    Guaranteed,
    /// Degenerate pair with `m` not dividing `n`.
    Sporadic,
}

impl HitSource {
    pub fn as_str(self) -> &'static str {
        match self {
            HitSource::Scan => "scan",
            HitSource::Guaranteed => "guaranteed",
            HitSource::Sporadic => "sporadic",
        }
    }
}

impl fmt::Display for HitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for HitSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scan" => Ok(HitSource::Scan),
            "guaranteed" => Ok(HitSource::Guaranteed),
            "sporadic" => Ok(HitSource::Sporadic),
            other => Err(domain(format!("unknown hit source {other:?}"))),
        }
    }
}

/// `N_n = u^2` for the pair `(q, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareHit {
    pub q: PrimePower,
    pub a: i64,
    pub n: u32,
    pub u: BigUint,
    pub points: BigUint,
    pub degeneracy: Degeneracy,
    pub source: HitSource,
}

impl SquareHit {
    pub fn key(&self) -> (u64, i64, u32) {
        (self.q.q(), self.a, self.n)
    }

    /// Recomputes `N_n` from scratch and checks `u^2 = N_n`.
    pub fn verify(&self) -> bool {
        match nth_term(&self.q, self.a, self.n) {
            Ok(term) => {
                let u2 = BigInt::from(&self.u * &self.u);
                term.points == u2 && BigInt::from(self.points.clone()) == u2
            }
            Err(_) => false,
        }
    }
}

fn natural(x: &BigInt) -> Result<BigUint> {
    match x.sign() {
        Sign::Minus => Err(Error::Internal(format!("negative point count {x}"))),
        _ => Ok(x.magnitude().clone()),
    }
}

/// Every `n <= nmax` with `N_n` a perfect square.
pub fn square_hits_scan(q: &PrimePower, a: i64, nmax: u32) -> Result<Vec<SquareHit>> {
    let degeneracy = classify_degeneracy(q, a)?;
    let mut hits = Vec::new();
    for term in trace_sequence(q, a, nmax)? {
        if let Some(u) = perfect_square_root(&term.points) {
            hits.push(SquareHit {
                q: *q,
                a,
                n: term.n,
                points: natural(&term.points)?,
                u,
                degeneracy,
                source: HitSource::Scan,
            });
        }
    }
    Ok(hits)
}

fn degeneracy_order(q: &PrimePower, a: i64) -> Result<u32> {
    classify_degeneracy(q, a)?.order().ok_or_else(|| {
        domain(format!(
            "(q, a) = ({q}, {a}) is nondegenerate; no square is guaranteed"
        ))
    })
}

/// For `m | n`, `alpha^n = beta^n` is real, so `a_n = 2 alpha^n = +-2s` with
/// `s^2 = q^n`, and `N_n = (s -+ 1)^2`. The sign is read off `a_n`.
fn guaranteed_from_term(q: &PrimePower, a: i64, m: u32, term: &SequenceTerm) -> Result<SquareHit> {
    let q_pow = term.q_pow.magnitude();
    let s = isqrt_nat(q_pow);
    if &(&s * &s) != q_pow {
        return Err(Error::Internal(format!(
            "q^n = {q}^{} is not a square",
            term.n
        )));
    }
    let two_s = BigInt::from(&s << 1u32);
    let u = if term.trace == two_s {
        &s - 1u32
    } else if term.trace == -&two_s {
        &s + 1u32
    } else {
        return Err(Error::Internal(format!(
            "a_{} = {} is not +-2 q^(n/2) for degenerate ({q}, {a})",
            term.n, term.trace
        )));
    };
    let points = natural(&term.points)?;
    if &u * &u != points {
        return Err(Error::Internal(format!(
            "u^2 != N_{} for ({q}, {a})",
            term.n
        )));
    }
    Ok(SquareHit {
        q: *q,
        a,
        n: term.n,
        u,
        points,
        degeneracy: Degeneracy::RootOfUnity(m),
        source: HitSource::Guaranteed,
    })
}

/// The square `N_n` promised by the closed form when `m | n`; `None` when
/// `m` does not divide `n`.
pub fn guaranteed_square(q: &PrimePower, a: i64, n: u32) -> Result<Option<SquareHit>> {
    let m = degeneracy_order(q, a)?;
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if n % m != 0 {
        return Ok(None);
    }
    let term = nth_term(q, a, n)?;
    guaranteed_from_term(q, a, m, &term).map(Some)
}

/// All guaranteed squares for `n <= nmax` in one pass over the sequence.
pub fn guaranteed_squares(q: &PrimePower, a: i64, nmax: u32) -> Result<Vec<SquareHit>> {
    let m = degeneracy_order(q, a)?;
    trace_sequence(q, a, nmax)?
        .filter(|t| t.n % m == 0)
        .map(|t| guaranteed_from_term(q, a, m, &t))
        .collect()
}

/// `(q, a, n, u)` for the squares of degenerate sequences with `m` not
/// dividing `n`.
pub const SPORADIC_SQUARES: [(u64, i64, u32, u32); 7] = [
    (2, 2, 1, 1),
    (3, 3, 1, 1),
    (3, 0, 1, 2),
    (2, 0, 3, 3),
    (8, 0, 1, 3),
    (2, -2, 5, 5),
    (32, 8, 1, 5),
];

/// The sporadic squares as hits, sorted by `(q, a, n)`.
pub fn sporadic_list() -> Vec<SquareHit> {
    let mut hits: Vec<SquareHit> = SPORADIC_SQUARES
        .iter()
        .map(|&(q, a, n, u)| {
            let q = PrimePower::new(q).expect("table entries are prime powers");
            let u = BigUint::from(u);
            SquareHit {
                q,
                a,
                n,
                points: &u * &u,
                u,
                degeneracy: classify_degeneracy(&q, a).expect("table entries satisfy Hasse"),
                source: HitSource::Sporadic,
            }
        })
        .collect();
    hits.sort_by_key(|h| h.key());
    hits
}

/// `|a_n| <= 2 sqrt(q^n)`, checked as `a_n^2 <= 4 q^n`.
pub fn term_satisfies_hasse(term: &SequenceTerm) -> bool {
    let a2 = &term.trace * &term.trace;
    a2 <= &term.q_pow * 4u32
}

/// Whether `N_n > 0`; always true for Hasse-admissible pairs.
pub fn term_is_positive(term: &SequenceTerm) -> bool {
    term.points.is_positive() && !term.points.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{base_change_count, realize_trace};
    use crate::traces::admissible_traces;
    use num_traits::ToPrimitive;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    /// Closed form for the power sum:
    /// `a_n = sum_k (-1)^k n/(n-k) C(n-k, k) a^(n-2k) q^k`.
    fn power_sum_oracle(q: i64, a: i64, n: u32) -> BigInt {
        let n = n as i64;
        let mut total = BigInt::zero();
        for k in 0..=n / 2 {
            let mut binom = BigInt::one();
            for i in 0..k {
                binom = binom * (n - k - i) / (i + 1);
            }
            let coeff = binom * n / (n - k);
            let term =
                coeff * BigInt::from(a).pow((n - 2 * k) as u32) * BigInt::from(q).pow(k as u32);
            if k % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn oracle_sanity() {
        // a_2 = a^2 - 2q, a_3 = a^3 - 3aq
        assert_eq!(power_sum_oracle(7, 3, 2), BigInt::from(9 - 14));
        assert_eq!(power_sum_oracle(7, 3, 3), BigInt::from(27 - 63));
    }

    #[test]
    fn recurrence_matches_power_sum_formula() {
        for q in PrimePower::all_below(50) {
            for a in admissible_traces(&q) {
                for term in trace_sequence(&q, a, 60).unwrap() {
                    assert_eq!(term.trace, power_sum_oracle(q.q() as i64, a, term.n));
                }
            }
        }
    }

    #[test]
    fn sequence_examples() {
        let traces: Vec<i64> = trace_sequence(&pp(2), -1, 11)
            .unwrap()
            .map(|t| t.trace.to_i64().unwrap())
            .collect();
        assert_eq!(traces, vec![-1, -3, 5, 1, -11, 9, 13, -31, 5, 57, -67]);
        assert_eq!(nth_term(&pp(2), -1, 11).unwrap().points, BigInt::from(2116));

        let t = nth_term(&pp(5), 1, 5).unwrap();
        assert_eq!((t.trace, t.points), (BigInt::from(101), BigInt::from(3025)));

        let t = nth_term(&pp(2), 0, 3).unwrap();
        assert_eq!((t.trace, t.points), (BigInt::from(0), BigInt::from(9)));
    }

    #[test]
    fn sequence_errors() {
        assert!(matches!(
            trace_sequence(&pp(7), 6, 5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            trace_sequence(&pp(7), 1, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn counts_match_curves_over_extensions() {
        // (2, 1): counts over F_2, F_4, F_8 from an actual curve
        let curve = realize_trace(&pp(2), 1).unwrap().unwrap();
        let brute: Vec<u64> = (1..=3)
            .map(|n| base_change_count(&curve, n).unwrap())
            .collect();
        assert_eq!(brute, vec![2, 8, 14]);
        let rec: Vec<BigInt> = trace_sequence(&pp(2), 1, 3)
            .unwrap()
            .map(|t| t.points)
            .collect();
        assert_eq!(
            rec,
            brute.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn scan_examples() {
        let hits = square_hits_scan(&pp(2), -1, 20).unwrap();
        let found: Vec<(u32, u64)> = hits.iter().map(|h| (h.n, h.u.to_u64().unwrap())).collect();
        assert_eq!(found, vec![(1, 2), (3, 2), (4, 4), (11, 46)]);
        assert!(hits
            .iter()
            .all(|h| h.source == HitSource::Scan && h.verify()));

        let found: Vec<(u32, u64)> = square_hits_scan(&pp(47), -1, 5)
            .unwrap()
            .iter()
            .map(|h| (h.n, h.u.to_u64().unwrap()))
            .collect();
        assert_eq!(found, vec![(1, 7), (3, 322)]);

        assert!(square_hits_scan(&pp(2), 1, 3).unwrap().is_empty());
    }

    #[test]
    fn guaranteed_examples() {
        let h = guaranteed_square(&pp(5), 0, 2).unwrap().unwrap();
        assert_eq!(
            (h.u.clone(), h.points.clone()),
            (BigUint::from(6u32), BigUint::from(36u32))
        );

        let h = guaranteed_square(&pp(4), 4, 3).unwrap().unwrap();
        assert_eq!(
            (h.u.clone(), h.points.clone()),
            (BigUint::from(7u32), BigUint::from(49u32))
        );

        // m = 4: a_4 = -8 = -2 * 2^2, so N_4 = (4 + 1)^2
        let h = guaranteed_square(&pp(2), 2, 4).unwrap().unwrap();
        assert_eq!(nth_term(&pp(2), 2, 4).unwrap().trace, BigInt::from(-8));
        assert_eq!(
            (h.u.clone(), h.points.clone()),
            (BigUint::from(5u32), BigUint::from(25u32))
        );
        assert_eq!(h.degeneracy, Degeneracy::RootOfUnity(4));

        assert_eq!(guaranteed_square(&pp(2), 2, 3).unwrap(), None);
        assert!(matches!(
            guaranteed_square(&pp(7), 3, 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn guaranteed_stream_agrees_with_single_terms() {
        for (q, a) in [(4u64, -4i64), (9, 3), (8, 4), (27, -9), (11, 0)] {
            let q = pp(q);
            let stream = guaranteed_squares(&q, a, 48).unwrap();
            let single: Vec<SquareHit> = (1..=48)
                .filter_map(|n| guaranteed_square(&q, a, n).unwrap())
                .collect();
            assert_eq!(stream, single);
        }
    }

    #[test]
    fn sporadic_examples() {
        let list = sporadic_list();
        assert_eq!(list.len(), 7);
        let get = |q, a, n| list.iter().find(|h| h.key() == (q, a, n)).unwrap();
        assert_eq!(get(2, -2, 5).points, BigUint::from(25u32));
        assert_eq!(get(8, 0, 1).points, BigUint::from(9u32));
        assert_eq!(get(3, 0, 1).points, BigUint::from(4u32));
        assert_eq!(nth_term(&pp(2), -2, 5).unwrap().trace, BigInt::from(8));
        for h in &list {
            assert!(h.verify(), "{:?}", h.key());
            let m = h.degeneracy.order().unwrap();
            assert_ne!(h.n % m, 0);
        }
    }

    #[test]
    fn degenerate_order_is_exact() {
        for q in PrimePower::all_below(50) {
            let r = crate::traces::hasse_radius(&q);
            for a in -r..=r {
                let Some(m) = classify_degeneracy(&q, a).unwrap().order() else {
                    continue;
                };
                let terms: Vec<SequenceTerm> = trace_sequence(&q, a, m).unwrap().collect();
                for t in &terms {
                    let a2 = &t.trace * &t.trace;
                    let bound = &t.q_pow * 4u32;
                    if t.n == m {
                        assert_eq!(a2, bound, "({q}, {a})");
                    } else {
                        assert!(a2 < bound, "({q}, {a}) d = {}", t.n);
                    }
                }
            }
        }
    }

    #[test]
    fn verify_rejects_fabricated_hit() {
        let fake = SquareHit {
            q: pp(2),
            a: -1,
            n: 2,
            u: BigUint::from(3u32),
            points: BigUint::from(9u32),
            degeneracy: Degeneracy::Nondegenerate,
            source: HitSource::Scan,
        };
        assert_eq!(nth_term(&pp(2), -1, 2).unwrap().points, BigInt::from(8));
        assert!(!fake.verify());
    }
}
