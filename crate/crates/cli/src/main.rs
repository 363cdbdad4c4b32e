//! `wm`: command-line front end for the word-measures engine.
//!
//! Every subcommand is deterministic given its flags (and `--seed` for the
//! randomised ones). Rationals are printed as `p/q`; JSON output carries
//! polynomials as coefficient arrays from the constant term upwards.
//!
//! Exit codes: 0 success, 2 malformed or invalid input, 3 a resource budget
//! was exceeded, 4 an internal cross-check failed.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use word_measures::Error;

#[derive(Parser, Debug)]
#[command(name = "wm", version, about = "Exact word measures on symmetric groups")]
struct Cli {
    /// Rank of the free group the words live in.
    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// E_w[f] as an exact rational function of N.
    Expect(ExpectArgs),
    /// Primitivity rank and critical subgroups of a word.
    Pirank(WordArgs),
    /// Stable inner product <f, g>.
    Inner(InnerArgs),
    /// The stable irreducible character for a partition.
    Irreducible(IrreducibleArgs),
    /// E_unif[f], the limit of E[f] under uniform permutations.
    Unif(StatArgs),
    /// Brute-force or Monte-Carlo E_w[f] at one N, as CSV.
    Oracle(OracleArgs),
    /// Decides whether two words are conjugate.
    Conj(ConjArgs),
    /// Core graph (or powers graph) of a word.
    Graph(GraphArgs),
    /// Random Schreier graph experiment.
    Schreier(SchreierArgs),
    /// Decompositions of the powers graph onto the bouquet.
    Decomp(DecompArgs),
}

#[derive(Args, Debug)]
struct WordArgs {
    #[arg(long)]
    word: String,
}

#[derive(Args, Debug)]
struct StatArgs {
    /// Class-function expression in xi<k> or a<t>.
    #[arg(long)]
    stat: String,
}

#[derive(Args, Debug)]
struct ExpectArgs {
    #[arg(long)]
    word: String,
    /// Class-function expression in xi<k> or a<t>.
    #[arg(long)]
    stat: String,
    /// Number of Laurent coefficients in 1/N to print.
    #[arg(long)]
    laurent: Option<usize>,
    /// Inclusive range of N to evaluate at, written A..B.
    #[arg(long)]
    eval: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct InnerArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
}

#[derive(Args, Debug)]
struct IrreducibleArgs {
    /// Parts of the partition, comma separated.
    #[arg(long)]
    lambda: String,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    word: String,
    #[arg(long)]
    stat: String,
    #[arg(long = "N")]
    n: usize,
    /// Monte-Carlo sample count; exact enumeration when absent.
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of permutation tuples the exact mode may visit.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args, Debug)]
struct ConjArgs {
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    word: String,
    /// Multiplicities a1,a2,… of the powers w, w², … .
    #[arg(long)]
    powers: Option<String>,
    /// Write Graphviz output to this file (`-` for standard output).
    #[arg(long)]
    dot: Option<String>,
}

#[derive(Args, Debug)]
struct SchreierArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check the trace identity for non-backtracking walks of this length.
    #[arg(long)]
    trace: Option<usize>,
    /// Write the spectra as CSV to this file (`-` for standard output).
    #[arg(long)]
    spectrum: Option<String>,
    /// Also compute the non-backtracking spectrum and compare it with the
    /// Ihara–Bass prediction.
    #[arg(long)]
    hashimoto: bool,
    /// Largest graph the dense eigensolver is given.
    #[arg(long, default_value_t = 4096)]
    max_vertices: usize,
}

#[derive(Args, Debug)]
struct DecompArgs {
    #[arg(long)]
    word: String,
    /// Multiplicities a1,a2,… of the powers w, w², … .
    #[arg(long)]
    powers: String,
    /// List every decomposition.
    #[arg(long)]
    list: bool,
}

/// Failures of a subcommand, with the exit code they map to.
#[derive(Debug)]
enum CliError {
    Engine(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(Error::Parse { .. } | Error::Invalid(_)) | CliError::Usage(_) => 2,
            CliError::Engine(Error::Budget { .. }) => 3,
            CliError::Engine(Error::Invariant(_)) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let rank = cli.rank;
    let result = match cli.command {
        Command::Expect(a) => commands::expect(&mut out, rank, &a),
        Command::Pirank(a) => commands::pirank(&mut out, rank, &a),
        Command::Inner(a) => commands::inner(&mut out, &a),
        Command::Irreducible(a) => commands::irreducible(&mut out, &a),
        Command::Unif(a) => commands::unif(&mut out, &a),
        Command::Oracle(a) => commands::oracle(&mut out, rank, &a),
        Command::Conj(a) => commands::conj(&mut out, rank, &a),
        Command::Graph(a) => commands::graph(&mut out, rank, &a),
        Command::Schreier(a) => commands::schreier(&mut out, &a),
        Command::Decomp(a) => commands::decomp(&mut out, rank, &a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (`wm … | head`) is not a failure.
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
