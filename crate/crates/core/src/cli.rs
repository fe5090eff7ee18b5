//! Command-line front end. [`run`] takes the argument list and two sinks so
//! it can be driven from tests without spawning a process.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::curves::{realize_trace, BaseChange, BASE_CHANGE_LIMIT};
use crate::numeric::perfect_square_root;
use crate::search::reference::{REFERENCE_NMAX, REFERENCE_QMAX};
use crate::search::{paper_check, run_search, Admissibility, DegeneracyFilter, SearchConfig};
use crate::sequence::{trace_sequence, SquareHit};
use crate::traces::{admissible_traces, classify_degeneracy, waterhouse_admissible, PrimePower};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// One square hit as written by `search`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub q: u64,
    pub p: u64,
    pub b: u32,
    pub a: i64,
    pub n: u32,
    #[serde(rename = "N")]
    pub points: String,
    pub u: String,
    pub degenerate_m: Option<u32>,
    pub admissible: bool,
    pub source: String,
}

impl From<&SquareHit> for OutputRecord {
    fn from(hit: &SquareHit) -> Self {
        OutputRecord {
            q: hit.q.q(),
            p: hit.q.p(),
            b: hit.q.b(),
            a: hit.a,
            n: hit.n,
            points: hit.points.to_string(),
            u: hit.u.to_string(),
            degenerate_m: hit.degeneracy.order(),
            admissible: waterhouse_admissible(&hit.q, hit.a),
            source: hit.source.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdmissibilityArg {
    Waterhouse,
    Hasse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DegenerateArg {
    Exclude,
    Include,
    Only,
}

impl From<AdmissibilityArg> for Admissibility {
    fn from(a: AdmissibilityArg) -> Self {
        match a {
            AdmissibilityArg::Waterhouse => Admissibility::Waterhouse,
            AdmissibilityArg::Hasse => Admissibility::Hasse,
        }
    }
}

impl From<DegenerateArg> for DegeneracyFilter {
    fn from(d: DegenerateArg) -> Self {
        match d {
            DegenerateArg::Exclude => DegeneracyFilter::Exclude,
            DegenerateArg::Include => DegeneracyFilter::Include,
            DegenerateArg::Only => DegeneracyFilter::Only,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ecsquares",
    version,
    about = "Perfect-square point counts of elliptic curves over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan (q, a, n) for perfect-square point counts.
    Search {
        #[arg(long, default_value_t = REFERENCE_QMAX)]
        qmax: u64,
        #[arg(long, default_value_t = REFERENCE_NMAX)]
        nmax: u32,
        #[arg(long, value_enum, default_value = "waterhouse")]
        admissibility: AdmissibilityArg,
        #[arg(long, value_enum, default_value = "exclude")]
        degenerate: DegenerateArg,
        /// Drop degenerate hits with m | n.
        #[arg(long)]
        skip_guaranteed: bool,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
        /// Write to FILE instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the admissible traces for q.
    Admissible {
        #[arg(long)]
        q: u64,
    },
    /// Degeneracy class of (q, a).
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// Print a_n and N_n for n = 1..nmax.
    Sequence {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        squares_only: bool,
    },
    /// First curve in the search family with trace a.
    Realize {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// Count a realizing curve over GF(q^n) and compare with the recurrence.
    VerifyExtension {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = BASE_CHANGE_LIMIT)]
        count_limit: u64,
    },
    /// Compare a search with the published tables.
    PaperCheck {
        #[arg(long, default_value_t = REFERENCE_QMAX)]
        qmax: u64,
        #[arg(long, default_value_t = REFERENCE_NMAX)]
        nmax: u32,
        #[arg(long, value_enum, default_value = "waterhouse")]
        admissibility: AdmissibilityArg,
        #[arg(long, value_enum, default_value = "exclude")]
        degenerate: DegenerateArg,
    },
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Mismatch) => EXIT_MISMATCH,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => EXIT_MISMATCH,
                _ => EXIT_DOMAIN,
            }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Search {
            qmax,
            nmax,
            admissibility,
            degenerate,
            skip_guaranteed,
            format,
            out: path,
        } => {
            let config = SearchConfig {
                qmax,
                nmax,
                admissibility: admissibility.into(),
                degeneracy: degenerate.into(),
                skip_guaranteed,
                parallel: true,
            };
            let report = run_search(&config)?;
            let records: Vec<OutputRecord> = report.hits.iter().map(OutputRecord::from).collect();
            let bytes = render(&records, format)?;
            match path {
                Some(path) => std::fs::write(path, &bytes)?,
                None => out.write_all(&bytes)?,
            }
            writeln!(
                err,
                "{} hits from {} (q, a) pairs in {:.2}s",
                records.len(),
                report.pairs_scanned,
                report.elapsed.as_secs_f64()
            )?;
        }
        Command::Admissible { q } => {
            let q = PrimePower::new(q)?;
            writeln!(out, "a\tN\tclass")?;
            for a in admissible_traces(&q) {
                let class = classify_degeneracy(&q, a)?;
                writeln!(out, "{a}\t{}\t{class}", q.q() as i64 + 1 - a)?;
            }
        }
        Command::Classify { q, a } => {
            let q = PrimePower::new(q)?;
            writeln!(out, "{}", classify_degeneracy(&q, a)?)?;
        }
        Command::Sequence {
            q,
            a,
            nmax,
            squares_only,
        } => {
            let q = PrimePower::new(q)?;
            writeln!(out, "n\ta_n\tN\tu")?;
            for term in trace_sequence(&q, a, nmax)? {
                let root = perfect_square_root(&term.points);
                if squares_only && root.is_none() {
                    continue;
                }
                let u = root.map(|u| u.to_string()).unwrap_or_default();
                writeln!(out, "{}\t{}\t{}\t{u}", term.n, term.trace, term.points)?;
            }
        }
        Command::Realize { q, a } => {
            let q = PrimePower::new(q)?;
            match realize_trace(&q, a)? {
                Some(curve) => writeln!(out, "{curve}")?,
                None => writeln!(out, "none: inadmissible")?,
            }
        }
        Command::VerifyExtension { q, a, count_limit } => {
            let q = PrimePower::new(q)?;
            let Some(curve) = realize_trace(&q, a)? else {
                return Err(Error::Domain(format!("no curve over GF({q}) has trace {a}")).into());
            };
            writeln!(out, "curve: {curve}")?;
            writeln!(out, "n\trecurrence\tcounted")?;
            let mut ok = true;
            let mut checked = 0;
            for term in trace_sequence(&q, a, 64)? {
                if term.q_pow > count_limit.into() {
                    break;
                }
                let counted =
                    BaseChange::with_limit(curve.field(), term.n, count_limit)?.count(&curve)?;
                let agree = term.points == counted.into();
                ok &= agree;
                checked += 1;
                writeln!(
                    out,
                    "{}\t{}\t{counted}{}",
                    term.n,
                    term.points,
                    if agree { "" } else { "\tMISMATCH" }
                )?;
            }
            writeln!(
                out,
                "{checked} extensions checked: {}",
                if ok { "ok" } else { "MISMATCH" }
            )?;
            if !ok {
                return Err(Failure::Mismatch);
            }
        }
        Command::PaperCheck {
            qmax,
            nmax,
            admissibility,
            degenerate,
        } => {
            if qmax != REFERENCE_QMAX || nmax != REFERENCE_NMAX {
                return Err(Error::Domain(format!(
                    "paper-check needs qmax={REFERENCE_QMAX} and nmax={REFERENCE_NMAX}, got qmax={qmax} and nmax={nmax}"
                ))
                .into());
            }
            let config = SearchConfig {
                qmax,
                nmax,
                admissibility: admissibility.into(),
                degeneracy: degenerate.into(),
                ..SearchConfig::default()
            };
            let check = paper_check(&run_search(&config)?)?;
            write!(out, "{check}")?;
            if !check.is_clean() {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}

/// Renders records in the requested format.
pub fn render(records: &[OutputRecord], format: Format) -> Result<Vec<u8>, std::io::Error> {
    match format {
        Format::Jsonl => {
            let mut buf = Vec::new();
            for r in records {
                serde_json::to_writer(&mut buf, r)?;
                buf.push(b'\n');
            }
            Ok(buf)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if records.is_empty() {
                w.write_record(CSV_HEADER)?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| e.into_error())
        }
        Format::Table => Ok(render_table(records).into_bytes()),
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "q",
    "p",
    "b",
    "a",
    "n",
    "N",
    "u",
    "degenerate_m",
    "admissible",
    "source",
];

/// Decimal strings longer than 12 digits become `123456789012…(D digits)`.
pub fn truncate_digits(s: &str) -> String {
    let digits = s.trim_start_matches('-').len();
    if digits <= 12 {
        return s.to_string();
    }
    let keep = s.len() - digits + 12;
    format!("{}…({digits} digits)", &s[..keep])
}

fn render_table(records: &[OutputRecord]) -> String {
    let rows: Vec<[String; 10]> = records
        .iter()
        .map(|r| {
            [
                r.q.to_string(),
                r.p.to_string(),
                r.b.to_string(),
                r.a.to_string(),
                r.n.to_string(),
                truncate_digits(&r.points),
                truncate_digits(&r.u),
                r.degenerate_m
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "-".into()),
                r.admissible.to_string(),
                r.source.clone(),
            ]
        })
        .collect();
    let mut widths = CSV_HEADER.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut text = String::new();
    let mut line = |cells: &[&str]| {
        let mut l = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            let pad = w - cell.chars().count();
            // numbers right-aligned, text left-aligned
            if i < 7 {
                l.push_str(&" ".repeat(pad));
                l.push_str(cell);
            } else {
                l.push_str(cell);
                l.push_str(&" ".repeat(pad));
            }
        }
        let _ = writeln!(text, "{}", l.trim_end());
    };
    line(&CSV_HEADER);
    for row in &rows {
        line(&row.each_ref().map(String::as_str));
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["ecsquares"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            call(&["classify", "--q", "32", "--a", "8"]),
            (0, "degenerate, m=4\n".into(), String::new())
        );
        assert_eq!(
            call(&["classify", "--q", "7", "--a", "-3"]).1,
            "nondegenerate\n"
        );
        assert_eq!(call(&["classify", "--q", "7", "--a", "6"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn admissible_rejects_non_prime_powers() {
        let (code, out, err) = call(&["admissible", "--q", "36"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(out.is_empty());
        assert!(err.contains("36 = 2^2 * 3^2"), "{err}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["search", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["classify", "--q", "7"]).0, EXIT_USAGE);
        assert_eq!(call(&["search", "--format", "xml"]).0, EXIT_USAGE);
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn sequence_squares_only() {
        let (code, out, _) = call(&[
            "sequence",
            "--q",
            "2",
            "--a",
            "-1",
            "--nmax",
            "11",
            "--squares-only",
        ]);
        assert_eq!(code, 0);
        let ns: Vec<&str> = out
            .lines()
            .skip(1)
            .map(|l| l.split('\t').next().unwrap())
            .collect();
        assert_eq!(ns, ["1", "3", "4", "11"]);
        assert!(out.lines().last().unwrap().ends_with("\t2116\t46"));
    }

    #[test]
    fn realize_prints_curve_or_none() {
        let (code, out, _) = call(&["realize", "--q", "27", "--a", "3"]);
        assert_eq!((code, out.as_str()), (0, "none: inadmissible\n"));
        let (code, out, _) = call(&["realize", "--q", "5", "--a", "2"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("over GF(5^1) mod x\n"), "{out}");
    }

    #[test]
    fn verify_extension_agrees() {
        let (code, out, _) = call(&[
            "verify-extension",
            "--q",
            "4",
            "--a",
            "-3",
            "--count-limit",
            "4096",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.ends_with("6 extensions checked: ok\n"), "{out}");
        assert_eq!(
            call(&["verify-extension", "--q", "27", "--a", "3"]).0,
            EXIT_DOMAIN
        );
    }

    #[test]
    fn paper_check_rejects_other_ranges() {
        assert_eq!(call(&["paper-check", "--qmax", "20"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn truncation() {
        assert_eq!(truncate_digits("123456789012"), "123456789012");
        assert_eq!(truncate_digits("1234567890123"), "123456789012…(13 digits)");
        assert_eq!(
            truncate_digits("-1234567890123"),
            "-123456789012…(13 digits)"
        );
    }

    #[test]
    fn csv_header_and_json_keys() {
        let (_, csv, _) = call(&["search", "--qmax", "5", "--nmax", "5", "--format", "csv"]);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER.join(","));
        let (_, jsonl, _) = call(&["search", "--qmax", "5", "--nmax", "5"]);
        let first = jsonl.lines().next().unwrap();
        assert!(first.starts_with(r#"{"q":2,"p":2,"b":1,"a":-1,"n":1,"N":"4","u":"2","degenerate_m":null,"admissible":true,"source":"scan"}"#), "{first}");
        let (_, empty, _) = call(&[
            "search",
            "--qmax",
            "3",
            "--nmax",
            "1",
            "--degenerate",
            "only",
            "--skip-guaranteed",
            "--format",
            "csv",
        ]);
        assert!(empty.starts_with(&CSV_HEADER.join(",")));
    }
}
