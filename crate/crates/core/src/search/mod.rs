//! Exhaustive scan of `(q, a, n)` for perfect-square point counts.
//!
//! A work unit is one `(q, a)` pair. Units run in parallel and are merged by
//! sorting on `(q, a, n)`, so the report does not depend on scheduling.

mod check;
pub mod reference;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::sequence::{square_hits_scan, HitSource, SquareHit};
use crate::traces::{classify_degeneracy, hasse_radius, waterhouse_admissible, PrimePower};

pub use check::{paper_check, ClosedFormDelta, ErratumNote, PaperCheck};

/// Which traces count as candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Admissibility {
    /// Traces realized by some elliptic curve.
    Waterhouse,
    /// Every trace in the Hasse interval.
    Hasse,
}

/// What to do with pairs whose `alpha/beta` is a root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegeneracyFilter {
    Exclude,
    Include,
    Only,
}

impl FromStr for Admissibility {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "waterhouse" => Ok(Admissibility::Waterhouse),
            "hasse" => Ok(Admissibility::Hasse),
            other => Err(domain(format!("unknown admissibility {other:?}"))),
        }
    }
}

impl FromStr for DegeneracyFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exclude" => Ok(DegeneracyFilter::Exclude),
            "include" => Ok(DegeneracyFilter::Include),
            "only" => Ok(DegeneracyFilter::Only),
            other => Err(domain(format!("unknown degeneracy filter {other:?}"))),
        }
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Admissibility::Waterhouse => "waterhouse",
            Admissibility::Hasse => "hasse",
        })
    }
}

impl fmt::Display for DegeneracyFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegeneracyFilter::Exclude => "exclude",
            DegeneracyFilter::Include => "include",
            DegeneracyFilter::Only => "only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Exclusive bound on `q`.
    pub qmax: u64,
    pub nmax: u32,
    pub admissibility: Admissibility,
    pub degeneracy: DegeneracyFilter,
    /// Drop degenerate hits with `m | n`, keeping only the sporadic ones.
    pub skip_guaranteed: bool,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            qmax: reference::REFERENCE_QMAX,
            nmax: reference::REFERENCE_NMAX,
            admissibility: Admissibility::Waterhouse,
            degeneracy: DegeneracyFilter::Exclude,
            skip_guaranteed: false,
            parallel: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.qmax < 2 {
            return Err(domain(format!(
                "qmax must be at least 2, got {}",
                self.qmax
            )));
        }
        if self.nmax < 1 {
            return Err(domain("nmax must be at least 1"));
        }
        Ok(())
    }

    /// Whether `(q, a)` passes the admissibility and degeneracy filters.
    pub fn accepts(&self, q: &PrimePower, a: i64) -> bool {
        let admissible = match self.admissibility {
            Admissibility::Waterhouse => waterhouse_admissible(q, a),
            Admissibility::Hasse => crate::traces::hasse_holds(q, a),
        };
        if !admissible {
            return false;
        }
        let degenerate = classify_degeneracy(q, a).is_ok_and(|d| d.is_degenerate());
        match self.degeneracy {
            DegeneracyFilter::Exclude => !degenerate,
            DegeneracyFilter::Include => true,
            DegeneracyFilter::Only => degenerate,
        }
    }

    /// Work units in `(q, a)` order.
    pub fn pairs(&self) -> Result<Vec<(PrimePower, i64)>> {
        self.validate()?;
        Ok(PrimePower::all_below(self.qmax)
            .into_iter()
            .flat_map(|q| {
                let r = hasse_radius(&q);
                (-r..=r).map(move |a| (q, a))
            })
            .filter(|(q, a)| self.accepts(q, *a))
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub config: SearchConfig,
    /// Sorted by `(q, a, n)`, no duplicates.
    pub hits: Vec<SquareHit>,
    pub pairs_scanned: usize,
    pub elapsed: Duration,
}

fn scan_pair(config: &SearchConfig, q: &PrimePower, a: i64) -> Result<Vec<SquareHit>> {
    let mut hits = square_hits_scan(q, a, config.nmax)?;
    if let Some(m) = classify_degeneracy(q, a)?.order() {
        for hit in &mut hits {
            hit.source = if hit.n % m == 0 {
                HitSource::Guaranteed
            } else {
                HitSource::Sporadic
            };
        }
        if config.skip_guaranteed {
            hits.retain(|h| h.source != HitSource::Guaranteed);
        }
    }
    Ok(hits)
}

pub fn run_search(config: &SearchConfig) -> Result<SearchReport> {
    let start = Instant::now();
    let pairs = config.pairs()?;
    let per_pair: Vec<Vec<SquareHit>> = if config.parallel {
        pairs
            .par_iter()
            .map(|(q, a)| scan_pair(config, q, *a))
            .collect::<Result<_>>()?
    } else {
        pairs
            .iter()
            .map(|(q, a)| scan_pair(config, q, *a))
            .collect::<Result<_>>()?
    };
    let mut hits: Vec<SquareHit> = per_pair.into_iter().flatten().collect();
    hits.sort_by_key(|h| h.key());
    hits.dedup_by_key(|h| h.key());
    Ok(SearchReport {
        config: config.clone(),
        hits,
        pairs_scanned: pairs.len(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(degeneracy: DegeneracyFilter) -> SearchConfig {
        SearchConfig {
            qmax: 12,
            nmax: 40,
            degeneracy,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            qmax: 1,
            ..SearchConfig::default()
        };
        assert!(matches!(run_search(&bad), Err(Error::Domain(_))));
        let bad = SearchConfig {
            nmax: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Domain(_))));
        assert!("bogus".parse::<Admissibility>().is_err());
        assert_eq!(
            "only".parse::<DegeneracyFilter>().unwrap(),
            DegeneracyFilter::Only
        );
    }

    #[test]
    fn filters_partition_pairs() {
        let all = small(DegeneracyFilter::Include).pairs().unwrap();
        let nondeg = small(DegeneracyFilter::Exclude).pairs().unwrap();
        let deg = small(DegeneracyFilter::Only).pairs().unwrap();
        assert_eq!(all.len(), nondeg.len() + deg.len());
        assert!(deg
            .iter()
            .all(|(q, a)| classify_degeneracy(q, *a).unwrap().is_degenerate()));
    }

    #[test]
    fn parallel_and_serial_agree() {
        let par = run_search(&small(DegeneracyFilter::Include)).unwrap();
        let ser = run_search(&SearchConfig {
            parallel: false,
            ..small(DegeneracyFilter::Include)
        })
        .unwrap();
        assert_eq!(par.hits, ser.hits);
        assert_eq!(par.pairs_scanned, ser.pairs_scanned);
    }

    #[test]
    fn hits_are_sorted_and_verified() {
        let report = run_search(&small(DegeneracyFilter::Include)).unwrap();
        assert!(report.hits.windows(2).all(|w| w[0].key() < w[1].key()));
        assert!(report.hits.iter().all(|h| h.verify()));
    }

    #[test]
    fn degenerate_hits_are_labelled() {
        let report = run_search(&small(DegeneracyFilter::Only)).unwrap();
        for h in &report.hits {
            let m = h.degeneracy.order().unwrap();
            let expected = if h.n % m == 0 {
                HitSource::Guaranteed
            } else {
                HitSource::Sporadic
            };
            assert_eq!(h.source, expected);
        }
        let sporadic = run_search(&SearchConfig {
            skip_guaranteed: true,
            ..small(DegeneracyFilter::Only)
        })
        .unwrap();
        assert!(sporadic
            .hits
            .iter()
            .all(|h| h.source == HitSource::Sporadic));
    }
}
