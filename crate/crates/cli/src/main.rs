//! `asm-verify`: runs the check suite for one curve and prints a report.
//!
//! Exit status is 0 when every asserted check passes, 1 when any fails and
//! 2 when the configuration is invalid.

use std::path::PathBuf;
use std::process::ExitCode;

use asm_core::report::{run_report, CheckGroup, OutputFormat, RunConfig};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "asm-verify", version, about = "Verify the Artin-Schreier-Mumford curve (X^q+X)(Y^q+Y)=c")]
struct Args {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// q = p^e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Coefficients of c in powers of the field generator, lowest first.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "1")]
    c: Vec<i64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random F_{q^4} points per sampled check.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Order-sequence precision (default 3q).
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Comma list of check groups, or "all".
    #[arg(long, default_value = "all")]
    checks: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let checks = match CheckGroup::parse_list(&args.checks) {
        Ok(c) => c,
        Err(e) => return invalid(&e.to_string()),
    };
    let config = RunConfig {
        p: args.p,
        e: args.e,
        c: args.c,
        seed: args.seed,
        samples: args.samples,
        precision: args.precision,
        checks,
    };
    let report = match run_report(&config) {
        Ok(r) => r,
        Err(e) => return invalid(&e.to_string()),
    };
    let format = match args.format {
        Format::Json => OutputFormat::Json,
        Format::Markdown => OutputFormat::Markdown,
    };
    let text = report.render(format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return invalid(&format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn invalid(msg: &str) -> ExitCode {
    eprintln!("asm-verify: invalid configuration: {msg}");
    ExitCode::from(2)
}
