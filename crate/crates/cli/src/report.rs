//! On-disk report files for the `audit` and `scan` subcommands.
//!
//! A report is a plain-text file with two parts:
//!
//! 1. a header of `# key=value` comment lines carrying the schema id, the
//!    tool version, the command line, a timestamp, the search range, and the
//!    summary counters;
//! 2. a body holding one record per retained pair, either as CSV (with a
//!    column-header row) or as `row key=value ...` lines.
//!
//! Both formats parse back into the same in-memory document, and
//! `parse_*(render_*(doc)) == doc` holds for every well-formed document, so
//! downstream tooling can treat the files as a stable interface.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ci_nodes::{
    factorial_bound, node_count, AuditReport, Condition, ConfigPair, DegreeSeq, NodeCount,
    RelaxedFinding, SearchRange,
};

/// Schema identifier written into (and required from) audit report headers.
pub const AUDIT_SCHEMA: &str = "ci-nodes/audit/v1";
/// Schema identifier written into (and required from) scan report headers.
pub const SCAN_SCHEMA: &str = "ci-nodes/scan/v1";

/// Error produced when a report file cannot be understood.
#[derive(Debug, thiserror::Error)]
#[error("malformed report: {0}")]
pub struct ParseError(pub String);

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

/// Serialization style for the record body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Comma-separated values with a column-header row.
    Csv,
    /// One `row key=value ...` line per record.
    Text,
}

impl ReportFormat {
    /// Conventional file extension for the format.
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Text => "txt",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Text => "text",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReportFormat {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "text" | "txt" => Ok(ReportFormat::Text),
            other => Err(bad(format!(
                "unknown report format {other:?} (expected \"csv\" or \"text\")"
            ))),
        }
    }
}

/// Provenance lines shared by every report file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportHeader {
    /// Schema identifier, e.g. [`AUDIT_SCHEMA`].
    pub schema: String,
    /// Version of the tool that wrote the file.
    pub tool: String,
    /// Command line that produced the file, without the program name.
    pub command: String,
    /// RFC 3339 UTC timestamp of the run.
    pub timestamp: String,
}

impl ReportHeader {
    /// Header for a fresh run of this build of the tool.
    pub fn now(schema: &str, command: String) -> ReportHeader {
        let timestamp = time::OffsetDateTime::now_utc()
            .format(&time::format_description::well_known::Rfc3339)
            .unwrap_or_else(|_| String::from("1970-01-01T00:00:00Z"));
        ReportHeader {
            schema: schema.to_string(),
            tool: env!("CARGO_PKG_VERSION").to_string(),
            command,
            timestamp,
        }
    }
}

/// Why a pair was retained in an audit report body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditRowKind {
    /// Member of the finite catalogue of below-bound configurations.
    Exceptional,
    /// Pair that fit none of the three classes — a genuine failure.
    Violation,
}

impl AuditRowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AuditRowKind::Exceptional => "exceptional",
            AuditRowKind::Violation => "violation",
        }
    }
}

impl fmt::Display for AuditRowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AuditRowKind {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exceptional" => Ok(AuditRowKind::Exceptional),
            "violation" => Ok(AuditRowKind::Violation),
            other => Err(bad(format!("unknown audit row class {other:?}"))),
        }
    }
}

/// One retained pair in an audit report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub kind: AuditRowKind,
    pub pair: ConfigPair,
    pub s_value: NodeCount,
    pub bound_value: NodeCount,
}

/// Fully materialized audit report: header, range, counters, retained rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditDocument {
    pub header: ReportHeader,
    pub range: SearchRange,
    pub pairs_examined: u64,
    pub vanishing_count: u64,
    pub at_least_bound_count: u64,
    pub elapsed_ms: u64,
    pub rows: Vec<AuditRow>,
}

impl AuditDocument {
    /// Builds the document for a finished audit, evaluating the node count
    /// and the generic bound for every retained pair.
    pub fn from_report(report: &AuditReport, header: ReportHeader) -> AuditDocument {
        let mut rows = Vec::new();
        for (kind, pairs) in [
            (AuditRowKind::Exceptional, &report.exceptional_pairs),
            (AuditRowKind::Violation, &report.violations),
        ] {
            for pair in pairs {
                rows.push(AuditRow {
                    kind,
                    pair: pair.clone(),
                    s_value: node_count(pair),
                    bound_value: factorial_bound(pair.d()),
                });
            }
        }
        AuditDocument {
            header,
            range: report.range,
            pairs_examined: report.pairs_examined,
            vanishing_count: report.vanishing_count,
            at_least_bound_count: report.at_least_bound_count,
            elapsed_ms: report.elapsed_ms,
            rows,
        }
    }

    pub fn exceptional_count(&self) -> u64 {
        self.count_kind(AuditRowKind::Exceptional)
    }

    pub fn violation_count(&self) -> u64 {
        self.count_kind(AuditRowKind::Violation)
    }

    fn count_kind(&self, kind: AuditRowKind) -> u64 {
        self.rows.iter().filter(|r| r.kind == kind).count() as u64
    }
}

/// One retained pair in a relaxed-scan report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub pair: ConfigPair,
    pub s_value: NodeCount,
    pub bound_value: NodeCount,
    pub violated_condition: Condition,
}

impl From<&RelaxedFinding> for ScanRow {
    fn from(finding: &RelaxedFinding) -> ScanRow {
        ScanRow {
            pair: finding.pair.clone(),
            s_value: finding.s_value.clone(),
            bound_value: finding.bound_value.clone(),
            violated_condition: finding.violated_condition,
        }
    }
}

/// Fully materialized scan report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanDocument {
    pub header: ReportHeader,
    pub range: SearchRange,
    /// Admissibility condition the scan allowed pairs to break.
    pub dropped: Condition,
    pub rows: Vec<ScanRow>,
}

// ---------------------------------------------------------------------------
// Rendering

fn push_header_line(out: &mut String, key: &str, value: impl fmt::Display) {
    out.push_str("# ");
    out.push_str(key);
    out.push('=');
    out.push_str(&value.to_string());
    out.push('\n');
}

fn push_common_header(out: &mut String, header: &ReportHeader, range: &SearchRange) {
    push_header_line(out, "schema", &header.schema);
    push_header_line(out, "tool", &header.tool);
    push_header_line(out, "command", &header.command);
    push_header_line(out, "timestamp", &header.timestamp);
    push_header_line(out, "k_min", range.k_min);
    push_header_line(out, "k_max", range.k_max);
    push_header_line(out, "deg_max", range.deg_max);
    push_header_line(out, "require_d1_ge_2", range.require_d1_ge_2);
}

const AUDIT_COLUMNS: [&str; 6] = ["class", "k", "d", "e", "s_value", "bound_value"];
const SCAN_COLUMNS: [&str; 6] = ["k", "d", "e", "s_value", "bound_value", "violated_condition"];

fn csv_body(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(columns).expect("csv write to Vec cannot fail");
    for row in rows {
        wtr.write_record(row).expect("csv write to Vec cannot fail");
    }
    let bytes = wtr.into_inner().expect("csv flush to Vec cannot fail");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

fn text_body(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    // Mirror the CSV header row: a body with zero records still carries one
    // mandatory line, so truncation never parses as an empty report.
    out.push_str("columns ");
    out.push_str(&columns.join(" "));
    out.push('\n');
    for row in rows {
        out.push_str("row");
        for (key, value) in columns.iter().zip(row) {
            out.push(' ');
            out.push_str(key);
            out.push('=');
            out.push_str(value);
        }
        out.push('\n');
    }
    out
}

fn audit_row_fields(row: &AuditRow) -> Vec<String> {
    vec![
        row.kind.to_string(),
        row.pair.k().to_string(),
        row.pair.d().to_string(),
        row.pair.e().to_string(),
        row.s_value.to_string(),
        row.bound_value.to_string(),
    ]
}

fn scan_row_fields(row: &ScanRow) -> Vec<String> {
    vec![
        row.pair.k().to_string(),
        row.pair.d().to_string(),
        row.pair.e().to_string(),
        row.s_value.to_string(),
        row.bound_value.to_string(),
        row.violated_condition.as_str().to_string(),
    ]
}

/// Renders an audit document to the requested on-disk format.
pub fn render_audit(doc: &AuditDocument, format: ReportFormat) -> String {
    let mut out = String::new();
    push_common_header(&mut out, &doc.header, &doc.range);
    push_header_line(&mut out, "pairs_examined", doc.pairs_examined);
    push_header_line(&mut out, "vanishing_count", doc.vanishing_count);
    push_header_line(&mut out, "at_least_bound_count", doc.at_least_bound_count);
    push_header_line(&mut out, "exceptional_count", doc.exceptional_count());
    push_header_line(&mut out, "violation_count", doc.violation_count());
    push_header_line(&mut out, "elapsed_ms", doc.elapsed_ms);
    let rows: Vec<Vec<String>> = doc.rows.iter().map(audit_row_fields).collect();
    match format {
        ReportFormat::Csv => out.push_str(&csv_body(&AUDIT_COLUMNS, &rows)),
        ReportFormat::Text => out.push_str(&text_body(&AUDIT_COLUMNS, &rows)),
    }
    out
}

/// Renders a scan document to the requested on-disk format.
pub fn render_scan(doc: &ScanDocument, format: ReportFormat) -> String {
    let mut out = String::new();
    push_common_header(&mut out, &doc.header, &doc.range);
    push_header_line(&mut out, "dropped", doc.dropped.as_str());
    push_header_line(&mut out, "finding_count", doc.rows.len());
    let rows: Vec<Vec<String>> = doc.rows.iter().map(scan_row_fields).collect();
    match format {
        ReportFormat::Csv => out.push_str(&csv_body(&SCAN_COLUMNS, &rows)),
        ReportFormat::Text => out.push_str(&text_body(&SCAN_COLUMNS, &rows)),
    }
    out
}

// ---------------------------------------------------------------------------
// Parsing

struct RawReport {
    header: BTreeMap<String, String>,
    body: Vec<Vec<String>>,
}

fn split_header(text: &str) -> Result<(BTreeMap<String, String>, String), ParseError> {
    let mut header = BTreeMap::new();
    let mut body = String::new();
    let mut in_header = true;
    for line in text.lines() {
        if in_header && line.starts_with('#') {
            let rest = line[1..].trim_start();
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| bad(format!("header line without '=': {line:?}")))?;
            if header.insert(key.to_string(), value.to_string()).is_some() {
                return Err(bad(format!("duplicate header key {key:?}")));
            }
        } else {
            in_header = false;
            body.push_str(line);
            body.push('\n');
        }
    }
    Ok((header, body))
}

fn parse_body(body: &str, columns: &[&str]) -> Result<Vec<Vec<String>>, ParseError> {
    let first = body.lines().find(|l| !l.trim().is_empty());
    let Some(first) = first else {
        return Err(bad("report has no body (missing column header or rows)"));
    };
    if first.starts_with("columns ") || first == "columns" {
        parse_text_body(body, columns)
    } else {
        parse_csv_body(body, columns)
    }
}

fn parse_csv_body(body: &str, columns: &[&str]) -> Result<Vec<Vec<String>>, ParseError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    {
        let got = rdr.headers().map_err(|e| bad(e.to_string()))?;
        let got: Vec<&str> = got.iter().collect();
        if got != columns {
            return Err(bad(format!(
                "unexpected columns {got:?} (expected {columns:?})"
            )));
        }
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != columns.len() {
            return Err(bad(format!(
                "row has {} fields, expected {}",
                record.len(),
                columns.len()
            )));
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(rows)
}

fn parse_text_body(body: &str, columns: &[&str]) -> Result<Vec<Vec<String>>, ParseError> {
    let mut lines = body.lines().filter(|l| !l.trim().is_empty());
    let declared = lines
        .next()
        .and_then(|l| l.strip_prefix("columns"))
        .ok_or_else(|| bad("text body must start with a 'columns' line"))?;
    let declared: Vec<&str> = declared.split_whitespace().collect();
    if declared != columns {
        return Err(bad(format!(
            "unexpected columns {declared:?} (expected {columns:?})"
        )));
    }
    let mut rows = Vec::new();
    for line in lines {
        let rest = line
            .strip_prefix("row")
            .ok_or_else(|| bad(format!("expected a 'row' line, got {line:?}")))?;
        let mut fields = vec![None; columns.len()];
        for token in rest.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("field without '=': {token:?}")))?;
            let idx = columns
                .iter()
                .position(|c| *c == key)
                .ok_or_else(|| bad(format!("unknown field {key:?}")))?;
            if fields[idx].replace(value.to_string()).is_some() {
                return Err(bad(format!("duplicate field {key:?} in {line:?}")));
            }
        }
        let mut row = Vec::with_capacity(columns.len());
        for (column, field) in columns.iter().zip(fields) {
            row.push(field.ok_or_else(|| bad(format!("missing field {column:?} in {line:?}")))?);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn read_raw(text: &str, columns: &[&str]) -> Result<RawReport, ParseError> {
    let (header, body) = split_header(text)?;
    let body = parse_body(&body, columns)?;
    Ok(RawReport { header, body })
}

fn take(header: &BTreeMap<String, String>, key: &str) -> Result<String, ParseError> {
    header
        .get(key)
        .cloned()
        .ok_or_else(|| bad(format!("missing header key {key:?}")))
}

fn take_u64(header: &BTreeMap<String, String>, key: &str) -> Result<u64, ParseError> {
    take(header, key)?
        .parse()
        .map_err(|_| bad(format!("header key {key:?} is not an unsigned integer")))
}

fn take_header(
    header: &BTreeMap<String, String>,
    expected_schema: &str,
) -> Result<ReportHeader, ParseError> {
    let schema = take(header, "schema")?;
    if schema != expected_schema {
        return Err(bad(format!(
            "schema is {schema:?}, expected {expected_schema:?}"
        )));
    }
    Ok(ReportHeader {
        schema,
        tool: take(header, "tool")?,
        command: take(header, "command")?,
        timestamp: take(header, "timestamp")?,
    })
}

fn take_range(header: &BTreeMap<String, String>) -> Result<SearchRange, ParseError> {
    let k_min = take_u64(header, "k_min")? as usize;
    let k_max = take_u64(header, "k_max")? as usize;
    let deg_max = take_u64(header, "deg_max")?;
    let require = match take(header, "require_d1_ge_2")?.as_str() {
        "true" => true,
        "false" => false,
        other => return Err(bad(format!("require_d1_ge_2 is {other:?}, not a bool"))),
    };
    SearchRange::new(k_min, k_max, deg_max, require).map_err(|e| bad(e.to_string()))
}

fn parse_pair(k_text: &str, d_text: &str, e_text: &str) -> Result<ConfigPair, ParseError> {
    let d: DegreeSeq = d_text.parse().map_err(|e| bad(format!("bad d: {e}")))?;
    let e: DegreeSeq = e_text.parse().map_err(|e| bad(format!("bad e: {e}")))?;
    let pair = ConfigPair::new(d, e).map_err(|e| bad(e.to_string()))?;
    let k: usize = k_text
        .parse()
        .map_err(|_| bad(format!("bad k: {k_text:?}")))?;
    if k != pair.k() {
        return Err(bad(format!(
            "k column says {k} but d has {} entries",
            pair.k()
        )));
    }
    Ok(pair)
}

fn parse_count(text: &str, what: &str) -> Result<NodeCount, ParseError> {
    text.parse()
        .map_err(|_| bad(format!("bad {what}: {text:?}")))
}

/// Parses an audit report in either on-disk format, verifying the schema id
/// and the internal consistency of the summary counters.
pub fn parse_audit(text: &str) -> Result<AuditDocument, ParseError> {
    let raw = read_raw(text, &AUDIT_COLUMNS)?;
    let header = take_header(&raw.header, AUDIT_SCHEMA)?;
    let range = take_range(&raw.header)?;
    let mut rows = Vec::with_capacity(raw.body.len());
    for fields in &raw.body {
        rows.push(AuditRow {
            kind: fields[0].parse()?,
            pair: parse_pair(&fields[1], &fields[2], &fields[3])?,
            s_value: parse_count(&fields[4], "s_value")?,
            bound_value: parse_count(&fields[5], "bound_value")?,
        });
    }
    let doc = AuditDocument {
        header,
        range,
        pairs_examined: take_u64(&raw.header, "pairs_examined")?,
        vanishing_count: take_u64(&raw.header, "vanishing_count")?,
        at_least_bound_count: take_u64(&raw.header, "at_least_bound_count")?,
        elapsed_ms: take_u64(&raw.header, "elapsed_ms")?,
        rows,
    };
    for (key, actual) in [
        ("exceptional_count", doc.exceptional_count()),
        ("violation_count", doc.violation_count()),
    ] {
        let declared = take_u64(&raw.header, key)?;
        if declared != actual {
            return Err(bad(format!(
                "{key} header says {declared} but the body holds {actual} such rows"
            )));
        }
    }
    Ok(doc)
}

/// Parses a scan report in either on-disk format, verifying the schema id
/// and the declared finding count.
pub fn parse_scan(text: &str) -> Result<ScanDocument, ParseError> {
    let raw = read_raw(text, &SCAN_COLUMNS)?;
    let header = take_header(&raw.header, SCAN_SCHEMA)?;
    let range = take_range(&raw.header)?;
    let dropped: Condition = take(&raw.header, "dropped")?
        .parse()
        .map_err(|e: ci_nodes::Error| bad(e.to_string()))?;
    let declared = take_u64(&raw.header, "finding_count")?;
    let mut rows = Vec::with_capacity(raw.body.len());
    for fields in &raw.body {
        rows.push(ScanRow {
            pair: parse_pair(&fields[0], &fields[1], &fields[2])?,
            s_value: parse_count(&fields[3], "s_value")?,
            bound_value: parse_count(&fields[4], "bound_value")?,
            violated_condition: fields[5]
                .parse()
                .map_err(|e: ci_nodes::Error| bad(e.to_string()))?,
        });
    }
    if declared != rows.len() as u64 {
        return Err(bad(format!(
            "finding_count header says {declared} but the body holds {} rows",
            rows.len()
        )));
    }
    Ok(ScanDocument {
        header,
        range,
        dropped,
        rows,
    })
}
