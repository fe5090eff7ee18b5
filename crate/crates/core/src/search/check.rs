//! Diff of a search report against the published tables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use super::reference::{
    ClosedFormRow, Erratum, ReferenceSquare, CLOSED_FORM_TABLE, NONDEGENERATE_SQUARES,
    REFERENCE_NMAX, REFERENCE_QMAX, UNLISTED_SQUARES,
};
use super::{Admissibility, DegeneracyFilter, SearchConfig, SearchReport};
use crate::error::{domain, Result};
use crate::sequence::{guaranteed_squares, sporadic_list, HitSource, SquareHit};
use crate::traces::{admissible_traces, classify_degeneracy, PrimePower};

type Key = (u64, i64, u32);

/// A published entry that is listed but cannot be reproduced as listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErratumNote {
    pub entry: ReferenceSquare,
    pub erratum: Erratum,
    /// Whether the current configuration still produces it.
    pub expected_here: bool,
}

/// A closed-form row whose stated `(sign of a_n, u - s)` disagrees with the
/// recurrence, with the first `(q, a, n)` showing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormDelta {
    pub row: ClosedFormRow,
    pub witness: Key,
    pub claimed: (i8, i8),
    pub actual: (i8, i8),
    /// Listed among the known deviations.
    pub known: bool,
}

/// Closed-form rows known to disagree with the recurrence: `(m, sign of a, residue)`.
const KNOWN_TABLE_DELTAS: [(u32, i8, u32); 3] = [(3, 1, 0), (3, 1, 3), (3, -1, 3)];

#[derive(Debug, Clone)]
pub struct PaperCheck {
    pub admissibility: Admissibility,
    pub degeneracy: DegeneracyFilter,
    pub expected: usize,
    pub matching: Vec<Key>,
    pub missing: Vec<Key>,
    pub extra: Vec<Key>,
    /// Hits matching [`UNLISTED_SQUARES`]: found, correct, but not published.
    pub unlisted: Vec<Key>,
    /// `(key, expected u, found u)`.
    pub u_mismatches: Vec<(Key, BigUint, BigUint)>,
    pub verification_failures: Vec<Key>,
    /// Guaranteed squares `m | n` absent from the report.
    pub guaranteed_missing: Vec<Key>,
    pub guaranteed_checked: usize,
    pub errata: Vec<ErratumNote>,
    pub table_deltas: Vec<ClosedFormDelta>,
}

impl PaperCheck {
    /// No differences other than the flagged errata and known table deltas.
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.u_mismatches.is_empty()
            && self.verification_failures.is_empty()
            && self.guaranteed_missing.is_empty()
            && self.table_deltas.iter().all(|d| d.known)
    }
}

fn expected_for(config: &SearchConfig) -> BTreeMap<Key, BigUint> {
    let mut expected = BTreeMap::new();
    let nondegenerate = config.degeneracy != DegeneracyFilter::Only;
    let degenerate = config.degeneracy != DegeneracyFilter::Exclude;
    for entry in &NONDEGENERATE_SQUARES {
        let wanted = match entry.erratum {
            None => nondegenerate,
            Some(Erratum::Inadmissible) => {
                nondegenerate && config.admissibility == Admissibility::Hasse
            }
            // supplied by the sporadic list
            Some(Erratum::Degenerate) => false,
            Some(Erratum::NotPrimePower) => false,
        };
        if wanted {
            expected.insert(entry.key(), BigUint::from(entry.u));
        }
    }
    if degenerate {
        for hit in sporadic_list() {
            if hit.q.q() < config.qmax && config.accepts(&hit.q, hit.a) {
                expected.insert(hit.key(), hit.u);
            }
        }
    }
    expected
}

/// Evaluates every closed-form row on the degenerate admissible pairs below
/// `qmax`, for `n` up to `nmax`.
fn closed_form_deltas(qmax: u64, nmax: u32) -> Result<Vec<ClosedFormDelta>> {
    let mut deltas: Vec<ClosedFormDelta> = Vec::new();
    for q in PrimePower::all_below(qmax) {
        for a in admissible_traces(&q) {
            if !classify_degeneracy(&q, a)?.is_degenerate() {
                continue;
            }
            for hit in guaranteed_squares(&q, a, nmax)? {
                let m = hit.degeneracy.order().unwrap_or(1);
                let Some(row) = CLOSED_FORM_TABLE.iter().find(|r| r.applies(m, a, hit.n)) else {
                    continue;
                };
                if deltas.iter().any(|d| d.row == *row) {
                    continue;
                }
                // a_n = +-2s and N_n = (s -+ 1)^2, so u < s exactly when a_n > 0
                let s = crate::numeric::isqrt_nat(&BigUint::from(q.q()).pow(hit.n));
                let actual = if hit.u < s { (1, -1) } else { (-1, 1) };
                let claimed = row.claim(hit.n);
                if claimed != actual {
                    let a_sign = a.signum() as i8;
                    let known = KNOWN_TABLE_DELTAS.contains(&(row.m, a_sign, row.residue));
                    deltas.push(ClosedFormDelta {
                        row: *row,
                        witness: hit.key(),
                        claimed,
                        actual,
                        known,
                    });
                }
            }
        }
    }
    Ok(deltas)
}

/// Compares `report` against the published tables. Only reports over the
/// published range are accepted.
pub fn paper_check(report: &SearchReport) -> Result<PaperCheck> {
    let config = &report.config;
    if config.qmax != REFERENCE_QMAX || config.nmax != REFERENCE_NMAX {
        return Err(domain(format!(
            "paper-check needs qmax={REFERENCE_QMAX} and nmax={REFERENCE_NMAX}, got qmax={} and nmax={}",
            config.qmax, config.nmax
        )));
    }
    let expected = expected_for(config);

    let mut found: BTreeMap<Key, &SquareHit> = BTreeMap::new();
    let mut verification_failures = Vec::new();
    let mut guaranteed_found: BTreeMap<Key, &SquareHit> = BTreeMap::new();
    for hit in &report.hits {
        if hit.source == HitSource::Guaranteed {
            // checked below against one fresh pass per pair
            guaranteed_found.insert(hit.key(), hit);
            continue;
        }
        if !hit.verify() {
            verification_failures.push(hit.key());
        }
        found.insert(hit.key(), hit);
    }

    let mut matching = Vec::new();
    let mut missing = Vec::new();
    let mut u_mismatches = Vec::new();
    for (key, u) in &expected {
        match found.get(key) {
            Some(hit) => {
                matching.push(*key);
                if &hit.u != u {
                    u_mismatches.push((*key, u.clone(), hit.u.clone()));
                }
            }
            None => missing.push(*key),
        }
    }
    let mut unlisted = Vec::new();
    let mut extra = Vec::new();
    for (key, hit) in &found {
        if expected.contains_key(key) {
            continue;
        }
        match UNLISTED_SQUARES.iter().find(|e| e.key() == *key) {
            Some(e) if hit.u == BigUint::from(e.u) => unlisted.push(*key),
            _ => extra.push(*key),
        }
    }
    if config.degeneracy != DegeneracyFilter::Only {
        missing.extend(
            UNLISTED_SQUARES
                .iter()
                .map(|e| e.key())
                .filter(|k| !found.contains_key(k)),
        );
    }

    // every m | n term of every scanned degenerate pair must be present
    let mut guaranteed_missing = Vec::new();
    let mut guaranteed_checked = 0;
    if config.degeneracy != DegeneracyFilter::Exclude && !config.skip_guaranteed {
        for (q, a) in config.pairs()? {
            if !classify_degeneracy(&q, a)?.is_degenerate() {
                continue;
            }
            for fresh in guaranteed_squares(&q, a, config.nmax)? {
                guaranteed_checked += 1;
                let key = fresh.key();
                match guaranteed_found.remove(&key) {
                    Some(hit) if hit.u == fresh.u && hit.points == fresh.points => {}
                    Some(_) => verification_failures.push(key),
                    None => guaranteed_missing.push(key),
                }
            }
        }
    }
    for (key, hit) in guaranteed_found {
        if !hit.verify() {
            verification_failures.push(key);
        }
    }
    verification_failures.sort();

    let errata = NONDEGENERATE_SQUARES
        .iter()
        .filter_map(|entry| {
            entry.erratum.map(|erratum| ErratumNote {
                entry: *entry,
                erratum,
                expected_here: expected.contains_key(&entry.key()),
            })
        })
        .collect();

    Ok(PaperCheck {
        admissibility: config.admissibility,
        degeneracy: config.degeneracy,
        expected: expected.len(),
        matching,
        missing,
        extra,
        unlisted,
        u_mismatches,
        verification_failures,
        guaranteed_missing,
        guaranteed_checked,
        errata,
        table_deltas: closed_form_deltas(config.qmax, config.nmax)?,
    })
}

fn sign_char(s: i8) -> char {
    if s < 0 {
        '-'
    } else {
        '+'
    }
}

fn keys(f: &mut fmt::Formatter<'_>, label: &str, list: &[Key]) -> fmt::Result {
    write!(f, "{label}: {}", list.len())?;
    for (q, a, n) in list {
        write!(f, " ({q},{a},{n})")?;
    }
    writeln!(f)
}

impl fmt::Display for PaperCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "paper-check: qmax={REFERENCE_QMAX} nmax={REFERENCE_NMAX} admissibility={} degenerate={}",
            self.admissibility, self.degeneracy
        )?;
        writeln!(
            f,
            "published list: {} entries, {} expected under this configuration",
            NONDEGENERATE_SQUARES.len(),
            self.expected
        )?;
        writeln!(f, "matching: {}", self.matching.len())?;
        keys(f, "missing", &self.missing)?;
        keys(f, "extra", &self.extra)?;
        write!(f, "u mismatches: {}", self.u_mismatches.len())?;
        for ((q, a, n), want, got) in &self.u_mismatches {
            write!(f, " ({q},{a},{n}) expected {want} found {got}")?;
        }
        writeln!(f)?;
        keys(f, "re-verification failures", &self.verification_failures)?;
        if self.guaranteed_checked > 0 {
            writeln!(
                f,
                "guaranteed squares: {} checked, {} missing",
                self.guaranteed_checked,
                self.guaranteed_missing.len()
            )?;
        }
        writeln!(f, "expected deviations:")?;
        for (q, a, n) in &self.unlisted {
            writeln!(
                f,
                "  unlisted ({q},{a},{n}): a verified square missing from the published list"
            )?;
        }
        for note in &self.errata {
            let e = note.entry;
            writeln!(
                f,
                "  erratum ({},{},{}) u={}: {} [{}]",
                e.q,
                e.a,
                e.n,
                e.u,
                note.erratum.describe(),
                if note.expected_here {
                    "expected here"
                } else {
                    "not expected here"
                }
            )?;
        }
        for d in &self.table_deltas {
            let (q, a, n) = d.witness;
            writeln!(
                f,
                "  {}closed form {}: listed a_n {}, u = s{}1; recurrence gives a_n {}, u = s{}1 (e.g. q={q}, a={a}, n={n})",
                if d.known { "" } else { "UNEXPECTED " },
                d.row,
                sign_char(d.claimed.0),
                sign_char(d.claimed.1),
                sign_char(d.actual.0),
                sign_char(d.actual.1),
            )?;
        }
        writeln!(
            f,
            "result: {}",
            if self.is_clean() { "clean" } else { "MISMATCH" }
        )
    }
}
