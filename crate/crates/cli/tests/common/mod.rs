//! Helpers shared by the CLI integration tests: running the binary and
//! normalizing run-specific report content so outputs compare bytewise.

// Each integration-test binary compiles this module independently and uses
// a different subset of it.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct CmdOut {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn bin_path() -> &'static str {
    env!("CARGO_BIN_EXE_ci-nodes")
}

/// Root of the cargo workspace (two levels above this crate's manifest).
pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .expect("workspace root exists")
        .to_path_buf()
}

/// Runs the compiled binary with a scrubbed environment: the report-dir
/// variable never leaks in from the outer shell.
pub fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> CmdOut {
    run_binary(bin_path(), dir, args, envs)
}

pub fn run_binary(bin: &str, dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> CmdOut {
    let mut cmd = Command::new(bin);
    cmd.args(args)
        .current_dir(dir)
        .env_remove("CI_NODES_REPORT_DIR");
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let out = cmd.output().unwrap_or_else(|e| panic!("cannot run {bin}: {e}"));
    CmdOut {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    }
}

/// Blanks the header values that legitimately differ between two runs of
/// the same query (invocation text, wall-clock data), leaving everything
/// mathematical intact.
pub fn normalize_report(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let replaced = ["# command=", "# timestamp=", "# elapsed_ms="]
            .iter()
            .find(|prefix| line.starts_with(**prefix))
            .map(|prefix| format!("{prefix}<normalized>"));
        out.push_str(&replaced.unwrap_or_else(|| line.to_string()));
        out.push('\n');
    }
    out
}

/// Same idea for terminal summaries: elapsed time and the report path vary
/// per run.
pub fn normalize_summary(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let replaced = ["elapsed_ms: ", "report: "]
            .iter()
            .find(|prefix| line.starts_with(**prefix))
            .map(|prefix| format!("{prefix}<normalized>"));
        out.push_str(&replaced.unwrap_or_else(|| line.to_string()));
        out.push('\n');
    }
    out
}
