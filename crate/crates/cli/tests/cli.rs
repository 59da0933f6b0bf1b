//! End-to-end behavior of the `ci-nodes` binary: golden outputs for the
//! single-query commands, the exit-code contract, report-file plumbing, and
//! flag handling. Heavier sweeps live in the acceptance suite.

mod common;

use std::fs;

use ci_nodes_cli::report::{parse_audit, parse_scan, AuditRowKind};
use common::{normalize_report, run_in};

fn tool_line() -> String {
    format!("tool: {}\n", env!("CARGO_PKG_VERSION"))
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().expect("create temp dir")
}

// ---------------------------------------------------------------------------
// compute

#[test]
fn compute_reports_the_quadric_pencil_pair_as_inadmissible() {
    let dir = tmp();
    let out = run_in(dir.path(), &["compute", "--d", "2,5", "--e", "1,1,5"], &[]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let expected = format!(
        "schema: ci-nodes/compute/v1\n{}d: 2,5\ne: 1,1,5\nk: 2\ns_value: 5\ncond_one: holds\n\
         cond_two: holds\ncond_three: fails\nadmissible: false\nfirst_violation: cond-three(i=1)\n\
         classification: none (degree pair is inadmissible: cond-three fails at i=1)\n",
        tool_line()
    );
    assert_eq!(out.stdout, expected);
}

#[test]
fn compute_classifies_the_two_quadric_pair_as_exceptional() {
    let dir = tmp();
    let out = run_in(dir.path(), &["compute", "--d", "2,2", "--e", "1,1,2"], &[]);
    assert_eq!(out.code, 0);
    let expected = format!(
        "schema: ci-nodes/compute/v1\n{}d: 2,2\ne: 1,1,2\nk: 2\ns_value: 2\ncond_one: holds\n\
         cond_two: holds\ncond_three: holds\nadmissible: true\nfirst_violation: none\n\
         classification: exceptional\nbound_value: 3\nexceptional_value: 2\n",
        tool_line()
    );
    assert_eq!(out.stdout, expected);
}

#[test]
fn compute_classifies_a_contained_pair_as_vanishing() {
    let dir = tmp();
    let out = run_in(dir.path(), &["compute", "--d", "2", "--e", "1,2"], &[]);
    assert_eq!(out.code, 0);
    let expected = format!(
        "schema: ci-nodes/compute/v1\n{}d: 2\ne: 1,2\nk: 1\ns_value: 0\ncond_one: holds\n\
         cond_two: holds\ncond_three: holds\nadmissible: true\nfirst_violation: none\n\
         classification: vanishing\nbound_value: 1\n",
        tool_line()
    );
    assert_eq!(out.stdout, expected);
}

#[test]
fn compute_classifies_a_generic_pair_as_at_least_bound() {
    let dir = tmp();
    let out = run_in(dir.path(), &["compute", "--d", "3", "--e", "1,1"], &[]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("s_value: 4\n"));
    assert!(out.stdout.contains("classification: at-least-bound\n"));
    assert!(out.stdout.contains("bound_value: 4\n"));
}

#[test]
fn compute_skips_classification_when_the_leading_degree_is_one() {
    let dir = tmp();
    let out = run_in(dir.path(), &["compute", "--d", "1,3", "--e", "1,3,7"], &[]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("admissible: true\n"));
    assert!(out.stdout.contains("s_value: 0\n"));
    assert!(
        out.stdout.contains("classification: none (leading degree is 1"),
        "got: {}",
        out.stdout
    );
}

#[test]
fn compute_out_flag_mirrors_stdout_into_a_file() {
    let dir = tmp();
    let path = dir.path().join("detail.txt");
    let out = run_in(
        dir.path(),
        &["compute", "--d", "2,2", "--e", "1,1,2", "--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.code, 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), out.stdout);
}

#[test]
fn compute_rejects_unsorted_input_unless_sort_is_passed() {
    let dir = tmp();
    let rejected = run_in(dir.path(), &["compute", "--d", "5,2", "--e", "1,1,5"], &[]);
    assert_eq!(rejected.code, 2);
    assert!(
        rejected.stderr.contains("--sort"),
        "the error should point at the fix: {}",
        rejected.stderr
    );

    let sorted = run_in(
        dir.path(),
        &["compute", "--d", "5,2", "--e", "5,1,1", "--sort"],
        &[],
    );
    let reference = run_in(dir.path(), &["compute", "--d", "2,5", "--e", "1,1,5"], &[]);
    assert_eq!(sorted.code, 0);
    assert_eq!(sorted.stdout, reference.stdout);
}

// ---------------------------------------------------------------------------
// bound

#[test]
fn bound_prints_both_thresholds_for_the_double_quadric() {
    let dir = tmp();
    let out = run_in(dir.path(), &["bound", "--d", "2,2"], &[]);
    assert_eq!(out.code, 0);
    let expected = format!(
        "schema: ci-nodes/bound/v1\n{}d: 2,2\nk: 2\ngeneric_bound: 3\nexceptional_applies: true\n\
         exceptional_bound: 2\neffective_minimum: 2\n",
        tool_line()
    );
    assert_eq!(out.stdout, expected);
}

#[test]
fn bound_handles_hypersurfaces_and_mixed_degrees() {
    let dir = tmp();
    let quartic = run_in(dir.path(), &["bound", "--d", "4"], &[]);
    assert_eq!(quartic.code, 0);
    assert!(quartic.stdout.contains("generic_bound: 9\n"));
    assert!(quartic.stdout.contains("exceptional_applies: false\n"));
    assert!(quartic.stdout.contains("exceptional_bound: none\n"));
    assert!(quartic.stdout.contains("effective_minimum: 9\n"));

    let mixed = run_in(dir.path(), &["bound", "--d", "2,3"], &[]);
    assert_eq!(mixed.code, 0);
    assert!(mixed.stdout.contains("generic_bound: 7\n"));
    assert!(mixed.stdout.contains("effective_minimum: 7\n"));
}

#[test]
fn bound_rejects_a_leading_linear_degree_with_guidance() {
    let dir = tmp();
    let out = run_in(dir.path(), &["bound", "--d", "1,2"], &[]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("eliminate it and re-run"),
        "got: {}",
        out.stderr
    );
}

// ---------------------------------------------------------------------------
// audit

#[test]
fn audit_finds_the_catalogue_and_writes_a_parsable_report() {
    let dir = tmp();
    let path = dir.path().join("audit.csv");
    let out = run_in(
        dir.path(),
        &["audit", "--k-max", "4", "--deg-max", "2", "--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("pairs_examined: 18\n"));
    assert!(out.stdout.contains("vanishing: 8\n"));
    assert!(out.stdout.contains("at_least_bound: 7\n"));
    assert!(out.stdout.contains("exceptional: 3\n"));
    assert!(out.stdout.contains("violations: 0\n"));
    assert!(out.stdout.contains("(d=2,2; e=1,1,2) s_value=2 bound_value=3\n"));

    let text = fs::read_to_string(&path).unwrap();
    let expected_after_header = format!(
        "# tool={}\n# command=<normalized>\n# timestamp=<normalized>\n# k_min=1\n# k_max=4\n\
         # deg_max=2\n# require_d1_ge_2=true\n# pairs_examined=18\n# vanishing_count=8\n\
         # at_least_bound_count=7\n# exceptional_count=3\n# violation_count=0\n\
         # elapsed_ms=<normalized>\nclass,k,d,e,s_value,bound_value\n\
         exceptional,2,\"2,2\",\"1,1,2\",2,3\n\
         exceptional,3,\"2,2,2\",\"1,1,2,2\",4,6\n\
         exceptional,4,\"2,2,2,2\",\"1,1,2,2,2\",8,10\n",
        env!("CARGO_PKG_VERSION")
    );
    assert_eq!(
        normalize_report(&text),
        format!("# schema=ci-nodes/audit/v1\n{expected_after_header}")
    );

    let doc = parse_audit(&text).unwrap();
    assert_eq!(doc.pairs_examined, 18);
    assert_eq!(doc.exceptional_count(), 3);
    assert_eq!(doc.violation_count(), 0);
    assert!(doc.rows.iter().all(|r| r.kind == AuditRowKind::Exceptional));
}

#[test]
fn audit_k1_range_has_no_exceptional_pairs() {
    let dir = tmp();
    let path = dir.path().join("audit.csv");
    let out = run_in(
        dir.path(),
        &["audit", "--k-max", "1", "--deg-max", "3", "--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("exceptional: 0\n"));
    assert!(out.stdout.contains("violations: 0\n"));
    let doc = parse_audit(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.pairs_examined, 10);
    assert!(doc.rows.is_empty());
}

#[test]
fn audit_report_lands_in_the_env_var_directory_by_default() {
    let dir = tmp();
    let reports = tmp();
    let out = run_in(
        dir.path(),
        &["audit", "--k-max", "1", "--deg-max", "3"],
        &[("CI_NODES_REPORT_DIR", reports.path().to_str().unwrap())],
    );
    assert_eq!(out.code, 0);
    let expected = reports.path().join("audit_k1-1_deg3.csv");
    assert!(expected.is_file(), "missing {}", expected.display());
    assert!(out.stdout.contains(expected.to_str().unwrap()));
    assert!(
        !dir.path().join("audit_k1-1_deg3.csv").exists(),
        "report must not leak into the working directory"
    );
}

#[test]
fn audit_report_defaults_to_the_working_directory_without_the_env_var() {
    let dir = tmp();
    let out = run_in(dir.path(), &["audit", "--k-max", "1", "--deg-max", "3"], &[]);
    assert_eq!(out.code, 0);
    assert!(dir.path().join("audit_k1-1_deg3.csv").is_file());
}

#[test]
fn audit_csv_and_text_reports_parse_to_the_same_document() {
    let dir = tmp();
    let csv_path = dir.path().join("a.csv");
    let text_path = dir.path().join("a.txt");
    for (path, format) in [(&csv_path, "csv"), (&text_path, "text")] {
        let out = run_in(
            dir.path(),
            &[
                "audit", "--k-max", "3", "--deg-max", "3",
                "--format", format, "--out", path.to_str().unwrap(),
            ],
            &[],
        );
        assert_eq!(out.code, 0);
    }
    let mut from_csv = parse_audit(&fs::read_to_string(&csv_path).unwrap()).unwrap();
    let mut from_text = parse_audit(&fs::read_to_string(&text_path).unwrap()).unwrap();
    // Only the provenance half of the header may differ between the runs.
    from_csv.header.command = String::new();
    from_text.header.command = String::new();
    from_csv.header.timestamp = String::new();
    from_text.header.timestamp = String::new();
    from_csv.elapsed_ms = 0;
    from_text.elapsed_ms = 0;
    assert_eq!(from_csv, from_text);
}

// ---------------------------------------------------------------------------
// scan

#[test]
fn scan_reports_the_pencil_counterexamples_and_omits_admissible_pairs() {
    let dir = tmp();
    let path = dir.path().join("scan.txt");
    let out = run_in(
        dir.path(),
        &[
            "scan", "--k-max", "2", "--deg-max", "5",
            "--format", "text", "--out", path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("(d=2,5; e=1,1,5) s_value=5 bound_value=21"));

    let text = fs::read_to_string(&path).unwrap();
    let expected_rows = "\
columns k d e s_value bound_value violated_condition
row k=2 d=2,3 e=1,1,3 s_value=3 bound_value=7 violated_condition=cond-three
row k=2 d=2,4 e=1,1,4 s_value=4 bound_value=13 violated_condition=cond-three
row k=2 d=2,5 e=1,1,5 s_value=5 bound_value=21 violated_condition=cond-three
row k=2 d=3,4 e=1,1,4 s_value=16 bound_value=19 violated_condition=cond-three
row k=2 d=3,4 e=1,2,4 s_value=16 bound_value=19 violated_condition=cond-three
row k=2 d=3,4 e=2,2,4 s_value=16 bound_value=19 violated_condition=cond-three
row k=2 d=3,5 e=1,1,5 s_value=20 bound_value=28 violated_condition=cond-three
row k=2 d=3,5 e=1,2,5 s_value=20 bound_value=28 violated_condition=cond-three
row k=2 d=3,5 e=2,2,5 s_value=20 bound_value=28 violated_condition=cond-three
";
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(body, expected_rows);

    let doc = parse_scan(&text).unwrap();
    assert_eq!(doc.rows.len(), 9);
    assert!(
        doc.rows.iter().all(|r| r.pair.to_string() != "(d=2,2; e=1,1,2)"),
        "admissible pairs must never appear in a relaxed scan"
    );
}

#[test]
fn scan_is_empty_where_the_dropped_condition_is_vacuous() {
    let dir = tmp();
    let path = dir.path().join("scan.csv");
    let out = run_in(
        dir.path(),
        &["scan", "--k-max", "1", "--deg-max", "9", "--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("findings: 0\n"));
    let doc = parse_scan(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(doc.rows.is_empty());
}

#[test]
fn scan_smallest_range_excludes_the_exceptional_pair() {
    let dir = tmp();
    let path = dir.path().join("scan.csv");
    let out = run_in(
        dir.path(),
        &["scan", "--k-max", "2", "--deg-max", "2", "--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.code, 0);
    let doc = parse_scan(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(
        doc.rows.is_empty(),
        "(d=2,2; e=1,1,2) is admissible and must not be scanned as a violator"
    );
}

// ---------------------------------------------------------------------------
// witness

#[test]
fn witness_emits_the_quartic_surface_script() {
    let dir = tmp();
    let out = run_in(
        dir.path(),
        &["witness", "--d", "3", "--e", "1,1", "--prime", "101", "--seed", "7"],
        &[],
    );
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("// schema: ci-nodes/witness/v1\n"));
    assert!(out.stdout.contains("// predicted nodes: 4\n"));
    assert!(out.stdout.contains("ring R = 101, (x(0..4)), dp;\n"));
    assert!(out.stdout.contains("NODES expected=4"));
    assert!(out.stdout.ends_with("quit;\n"));
}

#[test]
fn witness_for_a_vanishing_pair_predicts_an_empty_singular_locus() {
    let dir = tmp();
    let out = run_in(dir.path(), &["witness", "--d", "2", "--e", "1,2"], &[]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("// predicted nodes: 0\n"));
    assert!(out.stdout.contains("NODES expected=0"));
}

#[test]
fn witness_out_flag_writes_the_script_instead_of_stdout() {
    let dir = tmp();
    let path = dir.path().join("witness.sing");
    let piped = run_in(
        dir.path(),
        &["witness", "--d", "3", "--e", "1,1", "--seed", "7"],
        &[],
    );
    let out = run_in(
        dir.path(),
        &[
            "witness", "--d", "3", "--e", "1,1", "--seed", "7",
            "--out", path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "", "--out moves the script off stdout");
    assert_eq!(fs::read_to_string(&path).unwrap(), piped.stdout);
}

#[test]
fn witness_macaulay2_dialect_is_selectable() {
    let dir = tmp();
    let out = run_in(
        dir.path(),
        &["witness", "--d", "3", "--e", "1,1", "--dialect", "macaulay2"],
        &[],
    );
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("R = ZZ/101[x_0..x_4];"), "got: {}", out.stdout);

    let rational = run_in(
        dir.path(),
        &["witness", "--d", "3", "--e", "1,1", "--dialect", "m2", "--rationals"],
        &[],
    );
    assert_eq!(rational.code, 0);
    assert!(rational.stdout.contains("R = QQ[x_0..x_4];"));
}

// ---------------------------------------------------------------------------
// exit-code contract

#[test]
fn usage_and_domain_errors_exit_two() {
    let dir = tmp();
    let cases: &[&[&str]] = &[
        &["compute", "--d", "0,2", "--e", "1,1,2"],
        &["compute", "--d", "a,b", "--e", "1,1"],
        &["compute", "--d", "2,5", "--e", "1,1"],
        &["compute", "--d", "2,5"],
        &["bound", "--d", "1,2"],
        &["audit", "--k-max", "0", "--deg-max", "2"],
        &["audit", "--k-max", "2", "--deg-max", "0"],
        &["audit", "--k-max", "2", "--jobs", "0"],
        &["scan", "--drop", "cond-one", "--k-max", "2", "--deg-max", "2"],
        &["scan", "--drop", "nonsense", "--k-max", "2"],
        &["witness", "--d", "2,5", "--e", "1,1,5"],
        &["witness", "--d", "3", "--e", "1,1", "--prime", "97"],
        &["witness", "--d", "3", "--e", "1,1", "--prime", "111"],
        &["witness", "--d", "3", "--e", "1,1", "--prime", "103", "--rationals"],
        &["witness", "--d", "3", "--e", "1,1", "--dialect", "maple"],
        &["compute", "--d", "2", "--e", "1,2", "--frobnicate"],
        &["no-such-command"],
    ];
    for args in cases {
        let out = run_in(dir.path(), args, &[]);
        assert_eq!(out.code, 2, "expected exit 2 for {args:?}, stderr: {}", out.stderr);
    }
}

#[test]
fn io_errors_exit_three() {
    let dir = tmp();
    let cases: &[&[&str]] = &[
        &["audit", "--k-max", "2", "--deg-max", "2", "--out", "/nonexistent/dir/a.csv"],
        &["scan", "--k-max", "2", "--deg-max", "2", "--out", "/nonexistent/dir/s.csv"],
        &["compute", "--d", "2", "--e", "1,2", "--out", "/nonexistent/dir/c.txt"],
        &["witness", "--d", "3", "--e", "1,1", "--out", "/nonexistent/dir/w.sing"],
    ];
    for args in cases {
        let out = run_in(dir.path(), args, &[]);
        assert_eq!(out.code, 3, "expected exit 3 for {args:?}, stderr: {}", out.stderr);
        assert!(out.stderr.contains("cannot write"));
    }
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tmp();
    for args in [&["--help"][..], &["--version"][..], &["audit", "--help"][..]] {
        let out = run_in(dir.path(), args, &[]);
        assert_eq!(out.code, 0, "expected exit 0 for {args:?}");
    }
    let help = run_in(dir.path(), &["--help"], &[]);
    assert!(help.stdout.contains("Usage"));
}
