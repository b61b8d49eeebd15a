//! The `sdepth` command line: argument parsing and dispatch to the
//! subcommands. [`run`] is the whole program minus process exit so tests can
//! drive it in memory.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
pub mod tables;

pub use sdepth_core::reductions::SplitMode;

pub const EXIT_OK: i32 = 0;
/// A check failed or the input could not be processed.
pub const EXIT_FAILURE: i32 = 2;
/// The command line itself was malformed.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "sdepth", version, about = "Stanley depth of squarefree monomial ideals and their quotients")]
pub struct Cli {
    /// Ground set size; inferred from the largest vertex when omitted.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Worker threads for the parallel commands.
    #[arg(long, short = 'j', global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Facets separated by whitespace, e.g. "123 124 145 234" or "1,2,3 1,2,4".
    pub antichain: Option<String>,
    /// Read the antichain from a file instead.
    #[arg(long, short = 'i', conflicts_with = "antichain")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    /// The up set `P_I` of non-faces.
    Ideal,
    /// The down set `P_{S/I}` of faces.
    Quotient,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stanley depth of the ideal or the quotient of an antichain.
    Sdepth {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Side::Quotient)]
        side: Side,
        /// Only decide whether the Stanley depth is at least K.
        #[arg(long, value_name = "K")]
        at_least: Option<usize>,
        /// Print a partition achieving the answer.
        #[arg(long)]
        witness: bool,
        /// Cross-check against the exhaustive reference search (n <= 4).
        #[arg(long)]
        oracle: bool,
    },
    /// Plain and strong combinatorial criteria with residual traces.
    Scc {
        #[command(flatten)]
        input: Input,
    },
    /// Bad-degree report and reductions of an antichain.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Replace the facets by their K-subsets.
        #[arg(long, value_name = "K", conflicts_with_all = ["delete_common", "cone"])]
        purify: Option<usize>,
        /// Delete vertex X, which must lie in every facet.
        #[arg(long, value_name = "X", conflicts_with = "cone")]
        delete_common: Option<usize>,
        /// Add a new vertex to every facet.
        #[arg(long)]
        cone: bool,
    },
    /// Which vertices the antichain splits over.
    Splits {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = SplitMode::Exact)]
        split_mode: SplitMode,
    },
    /// Stanley depth of a multigraded ideal or quotient inside a box.
    Grid {
        /// Generators as comma-separated exponent vectors, e.g. "2,1,0 0,1,2".
        generators: Option<String>,
        /// Read the generators from a file instead.
        #[arg(long, short = 'i', conflicts_with = "generators")]
        input: Option<PathBuf>,
        /// Upper corner of the box; defaults to the join of the generators.
        #[arg(long, value_name = "G")]
        g: Option<String>,
        #[arg(long, value_enum, default_value_t = Side::Ideal)]
        side: Side,
        #[arg(long)]
        witness: bool,
        /// Build the ideal's partition with the three-variable construction.
        #[arg(long)]
        construct_n3: bool,
    },
    /// Classify every k-uniform hypergraph on n vertices up to isomorphism.
    Census {
        #[arg(value_name = "N")]
        vertices: usize,
        k: usize,
        /// Allow the n = 7, k in {3, 4} runs (millions of instances).
        #[arg(long)]
        long_running: bool,
        /// Write one JSON record per instance to FILE.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Order the JSON records by canonical form.
        #[arg(long)]
        sort: bool,
        #[arg(long, default_value_t = SplitMode::Exact)]
        split_mode: SplitMode,
        /// Also count the hypergraph with no edges.
        #[arg(long)]
        include_empty: bool,
    },
    /// Count instances by the pair (sdepth S/I, sdepth I).
    Gap {
        #[arg(value_name = "N")]
        vertices: usize,
        k: usize,
        #[arg(long)]
        long_running: bool,
        /// Write the counts as CSV to FILE.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Rerun the censuses and compare with the expected tables.
    VerifyTables {
        #[arg(long)]
        long_running: bool,
        #[arg(long, default_value_t = SplitMode::Exact)]
        split_mode: SplitMode,
        /// Expected tables to use instead of the built-in ones.
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }

    pub(crate) fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
