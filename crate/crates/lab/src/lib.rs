//! Experiment runner and report formats for `fracpow-core`.
//!
//! The `fracpow` binary is a thin wrapper around [`run`]. Exit status is 0 on
//! success, 1 on input errors and 2 when a checked invariant fails (the report
//! is still written).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod dto;
pub mod exec;
pub mod report;
pub mod schema;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;

use cli::{Cli, Command};
use report::{Body, Format, Header, ReportDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(violations) if violations.is_empty() => EXIT_OK,
        Ok(violations) => {
            for v in violations {
                eprintln!("fracpow: violation: {v}");
            }
            EXIT_VIOLATION
        }
        Err(e) => {
            eprintln!("fracpow: error: {e:#}");
            EXIT_INPUT
        }
    }
}

/// Runs one parsed command line and returns the violated invariants.
pub fn execute(cli: &Cli) -> anyhow::Result<Vec<String>> {
    if let Command::Schema(a) = &cli.command {
        schema::write_all(&a.out_dir)?;
        return Ok(Vec::new());
    }
    let exec = exec::Exec::new(cli.threads)?;
    let name = cli.command.name();
    let dest = report::destination(cli.output.as_deref(), name, cli.format);
    let started = Instant::now();
    let outcome = commands::dispatch(&cli.command, &exec)?;
    let doc = ReportDoc {
        header: Header::now(started.elapsed()),
        body: Body {
            command: name.into(),
            version: report::VERSION.into(),
            seed: outcome.seed,
            config: outcome.config,
            results: outcome.results,
            violations: outcome.violations,
        },
    };
    let text = match cli.format {
        Format::Json => report::render_json(&doc)?,
        Format::Csv => report::render_csv(&doc, &outcome.table)?,
    };
    report::emit(dest.as_deref(), &text)?;
    Ok(doc.body.violations)
}
