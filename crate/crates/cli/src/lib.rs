//! Library half of the `ci-nodes` command-line tool.
//!
//! The binary itself stays thin; everything that is worth testing in
//! isolation — most importantly the report files the `audit` and `scan`
//! subcommands write — lives here.

pub mod report;
