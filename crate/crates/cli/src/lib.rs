//! The `posfo` command-line tool.
//!
//! [`run`] executes a parsed [`Cli`] and returns the text for standard
//! output together with the exit code, so the binary stays a thin wrapper
//! and the commands can be tested in-process.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use posfo::classify::ClassifyError;
use posfo::dsm::DsmError;
use posfo::logic::LogicError;
use posfo::model::ModelError;
use posfo::qe::QeError;
use posfo::shop::ShopError;
use posfo::DEFAULT_ENUMERATION_CAP;
use thiserror::Error;

mod commands;
pub mod galois;
pub mod input;

/// Seed used by randomized checks unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Largest `--cap` accepted; anything above would enumerate billions of shops.
pub const MAX_CAP: usize = 5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "posfo",
    version,
    about = "Evaluate and classify positive equality-free first-order logic over finite structures",
    after_help = "STRUCTURE is a structure file, `-` for standard input, or a built-in \
                  fixture such as `fixture:clique:3`, `fixture:multipartite:2,1` or \
                  `fixture:k2_plus_k1:complement`.\n\n\
                  Exit codes: 0 success, 1 property violation, 2 usage or validation error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable report.
    Text,
    /// Flat `key=value` lines.
    Kv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute shE(B), the surjective hyper-endomorphisms of a structure.
    She {
        structure: String,
        /// List every member, one shop per line.
        #[arg(long)]
        members: bool,
        /// Largest domain size to enumerate shops for.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Classify the complexity of model checking over a structure.
    Classify {
        structure: String,
        /// Classify the fragment with equality instead.
        #[arg(long)]
        equality: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Decide whether a structure satisfies a sentence.
    Eval {
        structure: String,
        /// The sentence; use `--file` to read it from a file instead.
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        formula: Option<String>,
        #[arg(long)]
        file: Option<String>,
        /// auto, brute, forall:B, exists:B, forall-exists:B,B2,
        /// a-reduce:SHOP or e-reduce:SHOP.
        #[arg(long, default_value = "auto")]
        engine: String,
        /// Cross-check the result by brute force.
        #[arg(long)]
        verify: bool,
    },
    /// Enumerate the lattice of down-she-monoids on n elements.
    Lattice {
        n: usize,
        /// Emit Graphviz DOT instead of the listing.
        #[arg(long)]
        dot: bool,
        /// Write the output to a file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Allow n = 4.
        #[arg(long)]
        large: bool,
        /// List the members of every DSM.
        #[arg(long)]
        members: bool,
    },
    /// Check both directions of the relation/she Galois connection.
    Galois {
        structure: String,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// Random formulas for the forward check, and the most invariant
        /// relations checked per arity before sampling.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Nesting depth of the random formulas.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Quotient a structure by an equivalence-relation she.
    Quotient {
        structure: String,
        /// The shop, e.g. `(01|01|2)`.
        #[arg(long)]
        shop: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the built-in fixtures, or print one as a structure file.
    Fixtures {
        name: Option<String>,
        params: Vec<usize>,
        /// Print the complement digraph.
        #[arg(long, requires = "name")]
        complement: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("{source_name}: {error}")]
    Structure {
        source_name: String,
        error: ModelError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Shop(#[from] ShopError),
    #[error(transparent)]
    Dsm(#[from] DsmError),
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    commands::dispatch(cli.command)
}

/// Parses `args` (program name first) and runs the command; usage errors
/// are reported as text with exit code 2, help and version with 0.
pub fn run_args<I, T>(args: I) -> (Outcome, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match run(cli) {
            Ok(outcome) => (outcome, String::new()),
            Err(e) => (
                Outcome {
                    stdout: String::new(),
                    code: e.exit_code(),
                },
                format!("error: {e}\n"),
            ),
        },
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                (Outcome { stdout: String::new(), code }, text)
            } else {
                (Outcome { stdout: text, code }, String::new())
            }
        }
    }
}
