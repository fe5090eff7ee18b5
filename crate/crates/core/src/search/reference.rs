//! Published reference data the search is checked against.

use std::fmt;

/// Why a published entry cannot be reproduced as listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Erratum {
    /// `q` is not a prime power, so there is no field `F_q`.
    NotPrimePower,
    /// `a` fails Waterhouse's criterion: no curve has this trace. The
    /// arithmetic square appears under Hasse-only admissibility.
    Inadmissible,
    /// `(q, a)` is degenerate; the square belongs to the sporadic list and
    /// appears only when degenerate pairs are scanned.
    Degenerate,
}

impl Erratum {
    pub fn describe(self) -> &'static str {
        match self {
            Erratum::NotPrimePower => "q is not a prime power; no field of this size exists",
            Erratum::Inadmissible => {
                "a is not a Waterhouse-admissible trace for q; reproduced only with hasse admissibility"
            }
            Erratum::Degenerate => {
                "alpha/beta is a root of unity; reproduced only when degenerate pairs are scanned"
            }
        }
    }
}

/// One published square `N_n = u^2` for the pair `(q, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReferenceSquare {
    pub q: u64,
    pub a: i64,
    pub n: u32,
    pub u: u64,
    pub erratum: Option<Erratum>,
}

impl ReferenceSquare {
    pub fn key(&self) -> (u64, i64, u32) {
        (self.q, self.a, self.n)
    }
}

const fn sq(q: u64, a: i64, n: u32, u: u64) -> ReferenceSquare {
    ReferenceSquare {
        q,
        a,
        n,
        u,
        erratum: None,
    }
}

const fn flagged(q: u64, a: i64, n: u32, u: u64, erratum: Erratum) -> ReferenceSquare {
    ReferenceSquare {
        q,
        a,
        n,
        u,
        erratum: Some(erratum),
    }
}

/// Published perfect-square counts for nondegenerate sequences with
/// `q < 50`, `n <= 1000`, in publication order.
pub const NONDEGENERATE_SQUARES: [ReferenceSquare; 53] = [
    sq(2, -1, 1, 2),
    sq(2, -1, 3, 2),
    sq(4, 1, 1, 2),
    sq(5, 2, 1, 2),
    sq(7, 4, 1, 2),
    sq(8, 5, 1, 2),
    sq(5, -3, 1, 3),
    sq(7, -1, 1, 3),
    sq(9, 1, 1, 3),
    sq(11, 3, 1, 3),
    sq(13, 5, 1, 3),
    sq(2, -1, 4, 4),
    sq(2, 1, 4, 4),
    sq(4, -3, 2, 4),
    sq(4, 3, 2, 4),
    sq(11, -4, 1, 4),
    sq(13, -2, 1, 4),
    sq(16, 1, 1, 4),
    sq(17, 2, 1, 4),
    sq(19, 4, 1, 4),
    sq(23, 8, 1, 4),
    sq(17, -7, 1, 5),
    sq(19, -5, 1, 5),
    sq(23, -1, 1, 5),
    sq(25, 1, 1, 5),
    flagged(27, 3, 1, 5, Erratum::Inadmissible),
    sq(29, 5, 1, 5),
    sq(31, 7, 1, 5),
    flagged(32, 8, 1, 5, Erratum::Degenerate),
    sq(3, 1, 3, 6),
    sq(27, -8, 1, 6),
    sq(29, -6, 1, 6),
    sq(31, -4, 1, 6),
    flagged(36, 1, 1, 6, Erratum::NotPrimePower),
    sq(37, 2, 1, 6),
    sq(41, 6, 1, 6),
    sq(43, 8, 1, 6),
    sq(47, 12, 1, 6),
    sq(37, -11, 1, 7),
    sq(41, -7, 1, 7),
    sq(43, -5, 1, 7),
    sq(47, -1, 1, 7),
    sq(49, 1, 1, 7),
    sq(5, 3, 3, 12),
    sq(7, -4, 3, 18),
    sq(7, -1, 3, 18),
    sq(7, 5, 3, 18),
    sq(2, -1, 11, 46),
    sq(5, 1, 5, 55),
    sq(17, -7, 3, 70),
    sq(23, -1, 3, 110),
    sq(29, -9, 3, 156),
    sq(47, -1, 3, 322),
];

/// The search range the published tables cover.
pub const REFERENCE_QMAX: u64 = 50;
pub const REFERENCE_NMAX: u32 = 1000;

/// Which sign of `a` a closed-form row covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSign {
    Positive,
    Negative,
    Zero,
    Either,
}

impl TraceSign {
    pub fn matches(self, a: i64) -> bool {
        match self {
            TraceSign::Positive => a > 0,
            TraceSign::Negative => a < 0,
            TraceSign::Zero => a == 0,
            TraceSign::Either => a != 0,
        }
    }
}

/// A sign that may depend on the parity of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signed {
    Plus,
    Minus,
    PlusWhenEven,
    MinusWhenEven,
}

impl Signed {
    pub fn at(self, n: u32) -> i8 {
        let even = n % 2 == 0;
        match self {
            Signed::Plus => 1,
            Signed::Minus => -1,
            Signed::PlusWhenEven if even => 1,
            Signed::PlusWhenEven => -1,
            Signed::MinusWhenEven if even => -1,
            Signed::MinusWhenEven => 1,
        }
    }
}

/// One row of the published closed-form table for degenerate pairs: for
/// `n ≡ residue (mod modulus)` it states `a_n = trace * 2 q^(n/2)` and
/// `N_n = (q^(n/2) + square)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedFormRow {
    pub m: u32,
    pub trace_sign: TraceSign,
    pub modulus: u32,
    pub residue: u32,
    pub trace: Signed,
    pub square: Signed,
}

impl ClosedFormRow {
    pub fn applies(&self, m: u32, a: i64, n: u32) -> bool {
        self.m == m && self.trace_sign.matches(a) && n % self.modulus == self.residue
    }

    /// `(sign of a_n, u - q^(n/2))` as printed.
    pub fn claim(&self, n: u32) -> (i8, i8) {
        (self.trace.at(n), self.square.at(n))
    }
}

impl fmt::Display for ClosedFormRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.trace_sign {
            TraceSign::Positive => "a > 0",
            TraceSign::Negative => "a < 0",
            TraceSign::Zero => "a = 0",
            TraceSign::Either => "a != 0",
        };
        if self.modulus == 1 {
            write!(f, "m={}, {a}, all n", self.m)
        } else {
            write!(
                f,
                "m={}, {a}, n ≡ {} mod {}",
                self.m, self.residue, self.modulus
            )
        }
    }
}

const fn row(
    m: u32,
    trace_sign: TraceSign,
    (modulus, residue): (u32, u32),
    trace: Signed,
    square: Signed,
) -> ClosedFormRow {
    ClosedFormRow {
        m,
        trace_sign,
        modulus,
        residue,
        trace,
        square,
    }
}

use Signed::{Minus, MinusWhenEven, Plus, PlusWhenEven};
use TraceSign::{Either, Negative, Positive, Zero};

/// The closed-form table for degenerate pairs, as published.
pub const CLOSED_FORM_TABLE: [ClosedFormRow; 14] = [
    row(1, Positive, (1, 0), Plus, Minus),
    row(1, Negative, (1, 0), PlusWhenEven, MinusWhenEven),
    row(2, Zero, (4, 2), Minus, Plus),
    row(2, Zero, (4, 0), Plus, Minus),
    row(3, Positive, (6, 0), Plus, Plus),
    row(3, Positive, (6, 3), Plus, Minus),
    row(3, Negative, (6, 0), Plus, Minus),
    row(3, Negative, (6, 3), Minus, Minus),
    row(4, Positive, (8, 0), Plus, Minus),
    row(4, Positive, (8, 4), Minus, Plus),
    row(4, Negative, (8, 0), Plus, Minus),
    row(4, Negative, (8, 4), Minus, Plus),
    row(6, Either, (12, 0), Plus, Minus),
    row(6, Either, (12, 6), Minus, Plus),
];

/// Squares inside the published range that the published list omits. Both
/// pairs are Waterhouse-admissible and nondegenerate; the counts are
/// confirmed by counting points over `GF(32^n)`.
pub const UNLISTED_SQUARES: [ReferenceSquare; 2] = [sq(32, -3, 1, 6), sq(32, 5, 3, 182)];
