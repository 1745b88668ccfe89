//! Command-line front end: reads a JSON problem file, runs one engine
//! operation and renders a report.

use std::io::Read;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod build;
pub mod commands;
pub mod report;
pub mod schema;

pub use commands::{parse_range, run_text, Command, Options};
pub use report::{Report, Status};

#[derive(Debug, Parser)]
#[command(name = "dgweight", version, about = "Weight homology of twisted complexes over Z and Z/n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Check the axioms of a category, twisted complex, complex, SNC
    /// configuration, blow-up or KS input.
    Validate(Args),
    /// Weight homology of a twisted complex, or cohomology of a complex.
    Homology(Args),
    /// Weight homology of an SNC configuration.
    Snc(Args),
    /// Weight homology of a blow-up square.
    Blowup(Args),
    /// Kato-Suslin and arithmetic homology with the structural checks.
    Ks(Args),
    /// Long exact sequences of truncation and cone triangles.
    CheckTriangles(Args),
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Problem file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    pub input: PathBuf,
    /// Inclusive degree window `a..b`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub degree_range: Option<std::ops::RangeInclusive<i64>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include cycle and boundary generators.
    #[arg(long)]
    pub witnesses: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl CliCommand {
    fn split(&self) -> (Command, &Args) {
        match self {
            CliCommand::Validate(a) => (Command::Validate, a),
            CliCommand::Homology(a) => (Command::Homology, a),
            CliCommand::Snc(a) => (Command::Snc, a),
            CliCommand::Blowup(a) => (Command::Blowup, a),
            CliCommand::Ks(a) => (Command::Ks, a),
            CliCommand::CheckTriangles(a) => (Command::CheckTriangles, a),
        }
    }
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

/// Runs one parsed invocation; panics inside the engine become `error` reports.
pub fn execute(cli: &Cli) -> Report {
    let (cmd, args) = cli.command.split();
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let mut r = Report::new(Status::Invalid, cmd.name());
            r.diagnostics.push(format!("cannot read {}: {e}", args.input.display()));
            return r;
        }
    };
    let opts = Options { window: args.degree_range.clone(), witnesses: args.witnesses };
    guarded(cmd, || run_text(cmd, &text, &opts))
}

/// Runs `f`, turning a panic into an `error` report.
pub fn guarded(cmd: Command, f: impl FnOnce() -> Report) -> Report {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            let mut r = Report::new(Status::Error, cmd.name());
            r.diagnostics.push(format!("internal error: {msg}"));
            r
        }
    }
}

/// Parses `argv`, runs it and returns the exit code with the rendered output.
/// Usage errors exit 1; `--help` and `--version` exit 0.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let report = execute(&cli);
    let (_, args) = cli.command.split();
    let out = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    (report.status.exit_code(), out)
}
