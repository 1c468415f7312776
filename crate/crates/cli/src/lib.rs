//! Command-line front end for `freewill-core`.
//!
//! Every command builds a [`report::RunConfig`], runs, and emits either a
//! JSON report (`schema`, `command`, `version`, `config_hash`, `results`) or
//! a plain artifact (text, DOT, DIMACS). Exit codes: 0 success, 1 a
//! domain-negative result, 2 an internal inconsistency, 3 a usage error,
//! 4 an IO error.

pub mod angle;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

pub use angle::Angle;
pub use report::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
    Dimacs,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
            Format::Dot => "dot",
            Format::Dimacs => "dimacs",
        }
    }

    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "txt",
            Format::Dot => "dot",
            Format::Dimacs => "cnf",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "freewill",
    version,
    about = "Peres rays, 101-colorings, spin-1 bounds and Janus simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write output here instead of stdout (default: $FREEWILL_OUT_DIR/<command>.<ext> when set).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock duration to JSON reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The 33-ray configuration and its census.
    Peres {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide 101-colorability and replay the hand proof.
    Lemma {
        /// Ray set as JSON (array of [[a,b],[a,b],[a,b]]); default: built-in 33 rays.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Error bounds for a given angular misalignment.
    Bounds {
        /// Angle with unit suffix: deg, arcmin or rad.
        #[arg(long, allow_hyphen_values = true)]
        delta: Angle,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Seeded simulations.
    Simulate {
        #[command(subcommand)]
        kind: Sim,
    },
    /// DIMACS or graph export of a configuration.
    Export {
        #[arg(value_enum)]
        what: ExportWhat,
        #[arg(long)]
        config: Option<PathBuf>,
        /// For `graph`: dot (default) or json.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExportWhat {
    Cnf,
    Graph,
}

#[derive(Subcommand, Debug)]
enum Sim {
    /// Random Janus sessions over the 40 triples and extended rays.
    Twin {
        #[arg(short = 'n', long = "trials")]
        n: u64,
        #[arg(long)]
        seed: u64,
        /// JSON batch of session plans to cycle through instead of random plans.
        #[arg(long)]
        plans: Option<PathBuf>,
        /// Write every transcript as JSON lines to this file.
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Hexagonal universe under both Janus faces.
    Hex {
        #[arg(short = 'n', long = "days")]
        n: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Noisy twinned spin-1 experiments.
    Montecarlo {
        #[arg(short = 'n', long = "trials")]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true)]
        delta: Angle,
        /// TWIN angles to check against the closed form.
        #[arg(long, value_delimiter = ',', default_value = "1deg,30deg,90deg")]
        phi: Vec<Angle>,
    },
}

/// What a command produced.
pub(crate) struct Output {
    pub body: Option<String>,
    /// JSON results to wrap into a report (instead of `body`).
    pub results: Option<serde_json::Value>,
    pub default_name: String,
    pub exit: i32,
}

/// Parses `args` (program name first), runs, writes output, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let (cfg, out) = commands::dispatch(&cli.cmd)?;
    let body = match (out.results, out.body) {
        (Some(results), _) => {
            let ms = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            report::render_report(&cfg, results, ms)
        }
        (None, Some(body)) => body,
        (None, None) => String::new(),
    };
    report::emit(cli.out.as_deref(), &out.default_name, &body)?;
    Ok(out.exit)
}
