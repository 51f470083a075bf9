//! Command-line surface over the core library. Decimal inputs are parsed
//! into exact rationals, outputs are machine-readable (JSON everywhere,
//! CSV for the tabular commands), and exit codes are a stable contract:
//!
//!   0  Member / success
//!   1  NotMember / property violation
//!   2  Indeterminate / inconclusive
//!   3  incomplete certificate
//!   64 usage error (bad flags, bad decimals, violated preconditions)
//!   70 internal inconsistency
//!   74 output file I/O error

use clap::{Parser, Subcommand, ValueEnum};
use lpc_core::certificates::{rational_string, sign_chain, verify_structure, ChainStatus};
use lpc_core::membership::Status;
use lpc_core::rigor::parse_decimal;
use lpc_core::scan::{
    classify_point, critical_b, monotonicity_audit, record_to_json, records_to_csv,
    records_to_json, scan_grid, CriticalB,
};
use lpc_core::sequences::{
    czds_corpus_report, czds_sequence, mixed_corpus, ms_corpus_report, multiplier_sequence,
    real_rooted_corpus,
};
use lpc_core::theta::{compute_cn, compute_qinf};
use lpc_core::{Error as CoreError, QuotientSpec, RigorousValue};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NOT_MEMBER: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;
const EXIT_INCOMPLETE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;
const EXIT_IO: u8 = 74;

/// Decimal digits used when rendering constant enclosures; generous so the
/// printed interval stays within the requested tolerance.
const CONSTANT_DIGITS: u32 = 40;
const BOUNDARY_DIGITS: u32 = 24;

#[derive(Parser)]
#[command(
    name = "lpc",
    version,
    about = "Certified membership checks and real-rootedness certificates \
             for entire series with 2-periodic coefficient quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Working precision in bits (minimum 32)
    #[arg(long, global = true, env = "LPC_PRECISION", default_value_t = 128)]
    precision: u32,

    /// Tolerance for bisections and enclosure widths (decimal, > 0)
    #[arg(long, global = true, default_value = "1e-8")]
    tol: String,

    /// Output format; csv applies to the tabular commands only
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for generated test corpora
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel commands (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide membership for the series with even quotient A and odd quotient B
    Check { a: String, b: String },
    /// Emit a real-rootedness certificate for a member spec
    Certify {
        a: String,
        b: String,
        /// Chain depth (even, at least 4)
        #[arg(long, default_value_t = 12)]
        depth: u64,
    },
    /// Enclose the limiting quotient of the diagonal family
    Qinf,
    /// Enclose the degree-N section threshold constant
    Cn { n: u32 },
    /// Classify a rectangular (a, b) grid and audit its monotonicity
    Scan {
        /// a grid as MIN:MAX:STEP
        #[arg(long = "a", value_name = "MIN:MAX:STEP")]
        a_range: String,
        /// b grid as MIN:MAX:STEP (step must match the a grid)
        #[arg(long = "b", value_name = "MIN:MAX:STEP")]
        b_range: String,
    },
    /// Localise the critical b above each given a by bisection
    Boundary {
        #[arg(required = true, value_name = "A")]
        a_values: Vec<String>,
    },
    /// Verify multiplier and zero-decreasing sequence properties on seeded corpora
    MsVerify {
        a: String,
        b: String,
        /// Corpus size per property
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

type CmdResult = Result<u8, (u8, String)>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("lpc: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    if cli.precision < 32 {
        return Err((EXIT_USAGE, format!("precision must be at least 32, got {}", cli.precision)));
    }
    if let Some(n) = cli.threads {
        // A second build_global in one process is a no-op error; ignore it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let tol = parse_positive_decimal(&cli.tol, "tol")?;
    match &cli.command {
        Cmd::Check { a, b } => cmd_check(&cli, a, b),
        Cmd::Certify { a, b, depth } => cmd_certify(&cli, a, b, *depth),
        Cmd::Qinf => cmd_constant(&cli, &tol, "qinf", |prec, tol| compute_qinf(prec, tol)),
        Cmd::Cn { n } => {
            let n = *n;
            cmd_constant(&cli, &tol, &format!("c{n}"), move |prec, tol| compute_cn(n, prec, tol))
        }
        Cmd::Scan { a_range, b_range } => cmd_scan(&cli, a_range, b_range),
        Cmd::Boundary { a_values } => cmd_boundary(&cli, &tol, a_values),
        Cmd::MsVerify { a, b, count } => cmd_ms_verify(&cli, a, b, *count),
    }
}

fn core_exit(err: &CoreError) -> u8 {
    match err {
        CoreError::Parameter(_) | CoreError::Domain(_) | CoreError::PrecisionTooLow(_) => {
            EXIT_USAGE
        }
        CoreError::Inconclusive(_) => EXIT_INDETERMINATE,
        CoreError::Inconsistency(_) => EXIT_INTERNAL,
    }
}

fn fail(err: CoreError) -> (u8, String) {
    (core_exit(&err), err.to_string())
}

fn parse_rational(s: &str, what: &str) -> Result<BigRational, (u8, String)> {
    parse_decimal(s).ok_or_else(|| (EXIT_USAGE, format!("cannot parse {what} '{s}' as a decimal")))
}

fn parse_positive_decimal(s: &str, what: &str) -> Result<BigRational, (u8, String)> {
    let v = parse_rational(s, what)?;
    if v <= BigRational::zero() {
        return Err((EXIT_USAGE, format!("{what} must be positive, got {s}")));
    }
    Ok(v)
}

/// min:max:step with exact decimal parts.
fn parse_range(s: &str, what: &str) -> Result<(BigRational, BigRational, BigRational), (u8, String)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err((EXIT_USAGE, format!("{what} range must be MIN:MAX:STEP, got '{s}'")));
    }
    let min = parse_rational(parts[0], "range minimum")?;
    let max = parse_rational(parts[1], "range maximum")?;
    let step = parse_positive_decimal(parts[2], "range step")?;
    if min > max {
        return Err((EXIT_USAGE, format!("{what} range is empty: {} > {}", parts[0], parts[1])));
    }
    Ok((min, max, step))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), (u8, String)> {
    let payload =
        if content.ends_with('\n') { content.to_string() } else { format!("{content}\n") };
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| (EXIT_IO, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, value: &Value) -> Result<(), (u8, String)> {
    emit(out, &serde_json::to_string_pretty(value).expect("output value serializes"))
}

fn cmd_check(cli: &Cli, a: &str, b: &str) -> CmdResult {
    let a = parse_rational(a, "a")?;
    let b = parse_rational(b, "b")?;
    let record = classify_point(&a, &b, cli.precision).map_err(fail)?;
    match cli.format {
        Format::Json => emit_json(&cli.out, &record_to_json(&record))?,
        Format::Csv => emit(&cli.out, &records_to_csv(std::slice::from_ref(&record)))?,
    }
    Ok(match record.verdict.status {
        Status::Member => EXIT_OK,
        Status::NotMember => EXIT_NOT_MEMBER,
        Status::Indeterminate => EXIT_INDETERMINATE,
    })
}

fn cmd_certify(cli: &Cli, a: &str, b: &str, depth: u64) -> CmdResult {
    if depth < 4 || depth % 2 != 0 {
        return Err((EXIT_USAGE, format!("depth must be even and at least 4, got {depth}")));
    }
    if cli.format == Format::Csv {
        return Err((EXIT_USAGE, "certificates are JSON only".into()));
    }
    let a = parse_rational(a, "a")?;
    let b = parse_rational(b, "b")?;
    let record = classify_point(&a, &b, cli.precision).map_err(fail)?;
    match record.verdict.status {
        Status::Member => {}
        Status::NotMember => {
            return Err((EXIT_NOT_MEMBER, format!("({a}, {b}) classifies NotMember")));
        }
        Status::Indeterminate => {
            return Err((
                EXIT_INDETERMINATE,
                format!("({a}, {b}) is indeterminate at precision {}", cli.precision),
            ));
        }
    }
    let z0 = record.verdict.witness.as_ref().expect("member verdicts carry a witness");
    let spec = QuotientSpec::new(a, b).map_err(fail)?;
    let cert = sign_chain(&spec, z0, depth, cli.precision).map_err(fail)?;
    emit(&cli.out, &cert.to_canonical_json())?;
    match verify_structure(&cert).map_err(fail)? {
        ChainStatus::Complete => Ok(EXIT_OK),
        ChainStatus::Incomplete { first_missing } => {
            eprintln!("lpc: certificate incomplete, first uncertified index {first_missing}");
            Ok(EXIT_INCOMPLETE)
        }
    }
}

fn cmd_constant(
    cli: &Cli,
    tol: &BigRational,
    name: &str,
    compute: impl Fn(u32, &BigRational) -> lpc_core::Result<RigorousValue>,
) -> CmdResult {
    let enclosure = compute(cli.precision, tol).map_err(fail)?;
    let (lo, hi) = enclosure.to_decimal_pair(CONSTANT_DIGITS);
    match cli.format {
        Format::Json => emit_json(
            &cli.out,
            &json!({
                "constant": name,
                "enclosure": { "dec": [lo, hi], "prec": enclosure.prec() },
                "tol": cli.tol,
            }),
        )?,
        Format::Csv => emit(
            &cli.out,
            &format!("constant,lo,hi,prec\n{name},{lo},{hi},{}\n", enclosure.prec()),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_scan(cli: &Cli, a_range: &str, b_range: &str) -> CmdResult {
    let (a_min, a_max, a_step) = parse_range(a_range, "--a")?;
    let (b_min, b_max, b_step) = parse_range(b_range, "--b")?;
    if a_step != b_step {
        return Err((EXIT_USAGE, "the a and b ranges must share one step".into()));
    }
    let records = scan_grid(&(a_min, a_max), &(b_min, b_max), &a_step, cli.precision)
        .map_err(fail)?;
    match cli.format {
        Format::Json => emit_json(&cli.out, &records_to_json(&records))?,
        Format::Csv => emit(&cli.out, &records_to_csv(&records))?,
    }
    let audit = monotonicity_audit(&records);
    if audit.is_clean() {
        eprintln!(
            "lpc: monotonicity audit clean ({} records, {} pairs checked, {} indeterminate skipped)",
            records.len(),
            audit.pairs_checked,
            audit.indeterminate_skipped
        );
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "lpc: monotonicity audit found violations: {}",
            serde_json::to_string(&audit.to_json()).expect("audit serializes")
        );
        Ok(EXIT_NOT_MEMBER)
    }
}

fn cmd_boundary(cli: &Cli, tol: &BigRational, a_values: &[String]) -> CmdResult {
    let mut rows = Vec::new();
    for s in a_values {
        let a = parse_rational(s, "a")?;
        let item = critical_b(&a, cli.precision, tol).map_err(fail)?;
        rows.push((a, item));
    }
    match cli.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(a, item)| match item {
                    CriticalB::Boundary(p) => {
                        let (lo, hi) = p.b_star.to_decimal_pair(BOUNDARY_DIGITS);
                        json!({
                            "a": rational_string(a),
                            "b_star": { "dec": [lo, hi], "prec": p.b_star.prec() },
                            "iterations": p.iterations,
                        })
                    }
                    CriticalB::HutchinsonRegime => {
                        json!({ "a": rational_string(a), "regime": "hutchinson" })
                    }
                })
                .collect();
            emit_json(&cli.out, &Value::Array(items))?;
        }
        Format::Csv => {
            let mut out = String::from("a,b_star_lo,b_star_hi,iterations,regime\n");
            for (a, item) in &rows {
                match item {
                    CriticalB::Boundary(p) => {
                        let (lo, hi) = p.b_star.to_decimal_pair(BOUNDARY_DIGITS);
                        out.push_str(&format!(
                            "{},{lo},{hi},{},boundary\n",
                            rational_string(a),
                            p.iterations
                        ));
                    }
                    CriticalB::HutchinsonRegime => {
                        out.push_str(&format!("{},,,,hutchinson\n", rational_string(a)));
                    }
                }
            }
            emit(&cli.out, &out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_ms_verify(cli: &Cli, a: &str, b: &str, count: usize) -> CmdResult {
    if cli.format == Format::Csv {
        return Err((EXIT_USAGE, "ms-verify reports are JSON only".into()));
    }
    if count == 0 {
        return Err((EXIT_USAGE, "count must be at least 1".into()));
    }
    let a = parse_rational(a, "a")?;
    let b = parse_rational(b, "b")?;
    let spec = QuotientSpec::new(a.clone(), b.clone()).map_err(fail)?;
    // Corpus degrees stay at or below 10, so 16 values always suffice.
    let multiplier = multiplier_sequence(&spec, 16, cli.precision).map_err(fail)?;
    let czds = czds_sequence(&spec, 16, cli.precision).map_err(fail)?;
    let member_certified = multiplier.member_certified;

    let real_corpus = real_rooted_corpus(cli.seed, count);
    let mixed = mixed_corpus(cli.seed, count);
    let ms_report = ms_corpus_report(&multiplier, &real_corpus).map_err(fail)?;
    let czds_report = czds_corpus_report(&czds, &mixed).map_err(fail)?;

    emit_json(
        &cli.out,
        &json!({
            "spec": { "a": rational_string(&a), "b": rational_string(&b) },
            "seed": cli.seed,
            "count": count,
            "member_certified": member_certified,
            "multiplier": ms_report.to_json(&real_corpus),
            "czds": czds_report.to_json(&mixed),
        }),
    )?;

    if !member_certified || ms_report.fails > 0 || czds_report.fails > 0 {
        Ok(EXIT_NOT_MEMBER)
    } else if ms_report.all_hold() && czds_report.all_hold() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_INDETERMINATE)
    }
}
