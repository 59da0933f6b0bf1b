//! `ci-nodes` — exact node counts, factoriality bounds, and verification
//! sweeps for nodal complete-intersection threefolds.
//!
//! Exit codes: 0 success (an inadmissible pair handed to `compute` is still
//! a successful computation), 1 a mathematical violation was detected,
//! 2 usage or domain error, 3 I/O error.

use std::fmt::Display;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ci_nodes::{
    audit_trichotomy, build_schema, check_conditions, classify, emit_cas_script,
    min_nodes_nonfactorial, node_count, scan_relaxed, CoefficientField, Condition, ConfigPair,
    DegreeSeq, Error as CoreError, ScriptDialect, SearchRange,
};
use ci_nodes_cli::report::{
    render_audit, render_scan, AuditDocument, ReportFormat, ReportHeader, ScanDocument, ScanRow,
    AUDIT_SCHEMA, SCAN_SCHEMA,
};

/// Environment variable naming the directory that receives report files
/// when `--out` is not given.
const REPORT_DIR_VAR: &str = "CI_NODES_REPORT_DIR";

/// How many retained pairs the terminal summary lists before deferring to
/// the report file.
const SUMMARY_ROW_LIMIT: usize = 20;

#[derive(Parser)]
#[command(
    name = "ci-nodes",
    version,
    about = "Exact node counts and factoriality bounds for nodal complete-intersection threefolds",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the node count of one degree pair and classify it
    Compute(ComputeArgs),
    /// Print the thresholds below which a nodal threefold stays factorial
    Bound(BoundArgs),
    /// Exhaustively check the classification over a whole degree range
    Audit(AuditArgs),
    /// Search relaxed (condition-violating) pairs for below-bound counts
    Scan(ScanArgs),
    /// Emit a computer-algebra script that instantiates one configuration
    Witness(WitnessArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Threefold degree sequence, comma separated (e.g. 2,5)
    #[arg(long)]
    d: String,
    /// Surface degree sequence, one entry longer than --d (e.g. 1,1,5)
    #[arg(long)]
    e: String,
    /// Sort out-of-order input instead of rejecting it
    #[arg(long)]
    sort: bool,
    /// Also write the result to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Threefold degree sequence, comma separated
    #[arg(long)]
    d: String,
    /// Sort out-of-order input instead of rejecting it
    #[arg(long)]
    sort: bool,
    /// Also write the result to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RangeArgs {
    /// Smallest codimension (length of d) to cover
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    /// Largest codimension to cover
    #[arg(long, default_value_t = 5)]
    k_max: usize,
    /// Largest degree allowed in d and e
    #[arg(long, default_value_t = 8)]
    deg_max: u64,
    /// Number of worker threads (default: one per CPU)
    #[arg(long)]
    jobs: Option<NonZeroUsize>,
    /// Report file path (default: derived name under $CI_NODES_REPORT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report body format
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    range: RangeArgs,
    /// Admissibility condition whose violators are scanned
    #[arg(long, default_value = "cond-three", value_parser = parse_condition)]
    drop: Condition,
}

#[derive(Args)]
struct WitnessArgs {
    /// Threefold degree sequence, comma separated
    #[arg(long)]
    d: String,
    /// Surface degree sequence, one entry longer than --d
    #[arg(long)]
    e: String,
    /// Sort out-of-order input instead of rejecting it
    #[arg(long)]
    sort: bool,
    /// Prime field characteristic for the random coefficients
    #[arg(long, default_value_t = 101, conflicts_with = "rationals")]
    prime: u64,
    /// Draw coefficients from the rationals instead of a prime field
    #[arg(long)]
    rationals: bool,
    /// Seed for the deterministic coefficient stream
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Target computer-algebra system ("singular" or "macaulay2")
    #[arg(long, default_value = "singular", value_parser = parse_dialect)]
    dialect: ScriptDialect,
    /// Write the script here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

fn parse_dialect(s: &str) -> Result<ScriptDialect, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

// ---------------------------------------------------------------------------
// Failure plumbing

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("cannot write {}: {err}", path.display()),
    }
}

/// Domain errors are usage errors (exit 2) with one exception: an internal
/// inconsistency means the mathematics itself failed, which is exactly what
/// exit code 1 exists to report.
fn from_core(err: CoreError) -> Failure {
    match err {
        CoreError::Internal(_) => Failure {
            code: 1,
            message: err.to_string(),
        },
        _ => usage(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders help/version on stdout (success) and real parse
            // errors on stderr; preserve its choice but pin failures to 2.
            let code = if err.exit_code() == 0 { 0 } else { 2 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Compute(args) => cmd_compute(args),
        Cmd::Bound(args) => cmd_bound(args),
        Cmd::Audit(args) => cmd_audit(args),
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Witness(args) => cmd_witness(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers

fn parse_seq(text: &str, sort: bool, flag: &str) -> Result<DegreeSeq, Failure> {
    DegreeSeq::parse(text, sort).map_err(|err| {
        let mut message = format!("invalid {flag}: {err}");
        if matches!(err, CoreError::OutOfOrder { .. }) {
            message.push_str(" (pass --sort to sort the entries first)");
        }
        usage(message)
    })
}

fn parse_pair(d: &str, e: &str, sort: bool) -> Result<ConfigPair, Failure> {
    let d = parse_seq(d, sort, "--d")?;
    let e = parse_seq(e, sort, "--e")?;
    ConfigPair::new(d, e).map_err(|err| usage(err.to_string()))
}

fn line(out: &mut String, key: &str, value: impl Display) {
    out.push_str(key);
    out.push_str(": ");
    out.push_str(&value.to_string());
    out.push('\n');
}

/// The command line as invoked, minus the program name, for report headers.
fn command_line() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    args.join(" ")
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|err| io_failure(path, err))
}

/// Prints a detail block and mirrors it to `--out` when requested.
fn deliver(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = out {
        write_file(path, text)?;
    }
    Ok(())
}

/// Resolves the report path: `--out` verbatim, otherwise a derived file
/// name inside `$CI_NODES_REPORT_DIR` (falling back to the working
/// directory).
fn report_path(out: Option<PathBuf>, stem: &str, format: ReportFormat) -> PathBuf {
    out.unwrap_or_else(|| {
        let dir = std::env::var_os(REPORT_DIR_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{stem}.{}", format.extension()))
    })
}

/// Runs `f` on a dedicated pool when `--jobs` was given, otherwise on the
/// default global pool.
fn run_with_jobs<T: Send>(
    jobs: Option<NonZeroUsize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.get())
                .build()
                .map_err(|err| usage(format!("cannot build a {n}-thread pool: {err}")))?;
            Ok(pool.install(f))
        }
    }
}

fn build_range(args: &RangeArgs) -> Result<SearchRange, Failure> {
    SearchRange::new(args.k_min, args.k_max, args.deg_max, true).map_err(from_core)
}

fn condition_status(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

// ---------------------------------------------------------------------------
// compute

fn cmd_compute(args: ComputeArgs) -> Result<(), Failure> {
    let pair = parse_pair(&args.d, &args.e, args.sort)?;
    let conditions = check_conditions(&pair);
    let s = node_count(&pair);

    let mut text = String::new();
    line(&mut text, "schema", "ci-nodes/compute/v1");
    line(&mut text, "tool", env!("CARGO_PKG_VERSION"));
    line(&mut text, "d", pair.d());
    line(&mut text, "e", pair.e());
    line(&mut text, "k", pair.k());
    line(&mut text, "s_value", &s);
    line(&mut text, "cond_one", condition_status(conditions.cond_one_holds));
    line(&mut text, "cond_two", condition_status(conditions.cond_two_holds));
    line(
        &mut text,
        "cond_three",
        condition_status(conditions.cond_three_holds),
    );
    line(&mut text, "admissible", conditions.is_admissible());
    match conditions.first_violation {
        Some((condition, index)) => {
            line(&mut text, "first_violation", format!("{condition}(i={index})"))
        }
        None => line(&mut text, "first_violation", "none"),
    }
    match classify(&pair) {
        Ok(class) => {
            line(&mut text, "classification", class.kind.as_str());
            line(&mut text, "bound_value", &class.bound_value);
            if let Some(exceptional) = &class.exceptional_value {
                line(&mut text, "exceptional_value", exceptional);
            }
        }
        Err(err @ CoreError::Internal(_)) => return Err(from_core(err)),
        Err(err) => line(&mut text, "classification", format!("none ({err})")),
    }
    deliver(&text, args.out.as_deref())
}

// ---------------------------------------------------------------------------
// bound

fn cmd_bound(args: BoundArgs) -> Result<(), Failure> {
    let d = parse_seq(&args.d, args.sort, "--d")?;
    let bounds = min_nodes_nonfactorial(&d).map_err(from_core)?;

    let mut text = String::new();
    line(&mut text, "schema", "ci-nodes/bound/v1");
    line(&mut text, "tool", env!("CARGO_PKG_VERSION"));
    line(&mut text, "d", &d);
    line(&mut text, "k", d.len());
    line(&mut text, "generic_bound", &bounds.generic_bound);
    line(&mut text, "exceptional_applies", bounds.exceptional_applies);
    match &bounds.exceptional_bound {
        Some(value) => line(&mut text, "exceptional_bound", value),
        None => line(&mut text, "exceptional_bound", "none"),
    }
    line(&mut text, "effective_minimum", &bounds.effective_minimum);
    deliver(&text, args.out.as_deref())
}

// ---------------------------------------------------------------------------
// audit

fn cmd_audit(args: AuditArgs) -> Result<(), Failure> {
    let range = build_range(&args.range)?;
    let report = run_with_jobs(args.range.jobs, || audit_trichotomy(&range))?;
    let doc = AuditDocument::from_report(&report, ReportHeader::now(AUDIT_SCHEMA, command_line()));

    let stem = format!("audit_k{}-{}_deg{}", range.k_min, range.k_max, range.deg_max);
    let path = report_path(args.range.out, &stem, args.range.format);
    write_file(&path, &render_audit(&doc, args.range.format))?;

    let mut text = String::new();
    line(
        &mut text,
        "trichotomy audit",
        format!(
            "k in {}..={}, degrees <= {}, leading threefold degree >= 2",
            range.k_min, range.k_max, range.deg_max
        ),
    );
    line(&mut text, "pairs_examined", doc.pairs_examined);
    line(&mut text, "vanishing", doc.vanishing_count);
    line(&mut text, "at_least_bound", doc.at_least_bound_count);
    line(&mut text, "exceptional", doc.exceptional_count());
    line(&mut text, "violations", doc.violation_count());
    line(&mut text, "elapsed_ms", doc.elapsed_ms);
    for (label, pairs) in [
        ("exceptional pairs", &report.exceptional_pairs),
        ("violating pairs", &report.violations),
    ] {
        if pairs.is_empty() {
            continue;
        }
        text.push_str(label);
        text.push_str(":\n");
        for pair in pairs.iter().take(SUMMARY_ROW_LIMIT) {
            let s = node_count(pair);
            let bound = ci_nodes::factorial_bound(pair.d());
            text.push_str(&format!("  {pair} s_value={s} bound_value={bound}\n"));
        }
        if pairs.len() > SUMMARY_ROW_LIMIT {
            text.push_str(&format!(
                "  ... and {} more (see the report file)\n",
                pairs.len() - SUMMARY_ROW_LIMIT
            ));
        }
    }
    line(&mut text, "report", path.display());
    print!("{text}");

    if doc.violation_count() > 0 {
        return Err(Failure {
            code: 1,
            message: format!(
                "classification violated for {} pair(s); see {}",
                doc.violation_count(),
                path.display()
            ),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// scan

fn cmd_scan(args: ScanArgs) -> Result<(), Failure> {
    let range = build_range(&args.range)?;
    let findings =
        run_with_jobs(args.range.jobs, || scan_relaxed(&range, args.drop))?.map_err(from_core)?;
    let rows: Vec<ScanRow> = findings.iter().map(ScanRow::from).collect();
    let doc = ScanDocument {
        header: ReportHeader::now(SCAN_SCHEMA, command_line()),
        range,
        dropped: args.drop,
        rows,
    };

    let stem = format!(
        "scan_k{}-{}_deg{}_{}",
        range.k_min,
        range.k_max,
        range.deg_max,
        args.drop.as_str()
    );
    let path = report_path(args.range.out, &stem, args.range.format);
    write_file(&path, &render_scan(&doc, args.range.format))?;

    let mut text = String::new();
    line(
        &mut text,
        "relaxed scan",
        format!(
            "k in {}..={}, degrees <= {}, dropping {}",
            range.k_min, range.k_max, range.deg_max, args.drop
        ),
    );
    line(&mut text, "findings", doc.rows.len());
    for row in doc.rows.iter().take(SUMMARY_ROW_LIMIT) {
        text.push_str(&format!(
            "  {} s_value={} bound_value={} violated={}\n",
            row.pair, row.s_value, row.bound_value, row.violated_condition
        ));
    }
    if doc.rows.len() > SUMMARY_ROW_LIMIT {
        text.push_str(&format!(
            "  ... and {} more (see the report file)\n",
            doc.rows.len() - SUMMARY_ROW_LIMIT
        ));
    }
    line(&mut text, "report", path.display());
    print!("{text}");
    Ok(())
}

// ---------------------------------------------------------------------------
// witness

fn cmd_witness(args: WitnessArgs) -> Result<(), Failure> {
    let pair = parse_pair(&args.d, &args.e, args.sort)?;
    let schema = build_schema(&pair).map_err(from_core)?;
    let field = if args.rationals {
        CoefficientField::Rationals
    } else {
        CoefficientField::Prime(args.prime)
    };
    let script = emit_cas_script(&schema, field, args.seed, args.dialect).map_err(from_core)?;
    match args.out {
        Some(path) => write_file(&path, &script),
        None => {
            print!("{script}");
            Ok(())
        }
    }
}
