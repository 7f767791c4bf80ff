//! `arcmub`: finite planes, ovals, Weil sums and mutually unbiased bases.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "arcmub", version, about = "Exact computations with ovals, planes and MUBs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Parallel workers; 0 means one per core.
    #[arg(long, global = true, env = "ARCMUB_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

/// Selects a plane: `--order q` for PG(2,q), `--plane NAME`, or `--in FILE`.
#[derive(Args, Clone)]
struct PlaneArgs {
    #[arg(long)]
    order: Option<u64>,
    /// Built-in plane name: `PG(2,q)` or `Hall(9)`.
    #[arg(long)]
    plane: Option<String>,
    /// Incidence file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Load the incidence file without checking the plane axioms.
    #[arg(long)]
    unchecked: bool,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, alias = "k", default_value_t = 1)]
    n: u32,
    /// Modulus coefficients, low degree first.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

#[derive(Subcommand)]
enum Command {
    /// Describe GF(p^n): modulus, elements, trace and squares.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Weil sums over GF(p^n).
    Weil {
        #[command(flatten)]
        field: FieldArgs,
        /// Table of |W(m,n)|^2 over all pairs.
        #[arg(long)]
        survey: bool,
        /// A single sum W(m, n), given as element indices `m,n`.
        #[arg(long, value_delimiter = ',')]
        at: Option<Vec<u32>>,
        #[command(flatten)]
        common: Common,
    },
    /// Conics in PG(2,q): the canonical conic or the points of a given one.
    Conic {
        #[arg(long)]
        order: u64,
        /// Coefficients c11,c12,c13,c22,c23,c33 as element indices.
        #[arg(long, value_delimiter = ',')]
        coeffs: Option<Vec<u32>>,
        #[command(flatten)]
        common: Common,
    },
    /// Census of ovals and hyperovals.
    OvalCensus {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Node budget of a randomized search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Classify every oval (Desarguesian planes).
        #[arg(long)]
        classify: bool,
        /// List the ovals found.
        #[arg(long)]
        list: bool,
        /// Allow exhaustive search above order 9.
        #[arg(long)]
        long: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Classify an oval and emit its certificate.
    Classify {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Point indices of the oval.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<usize>>,
        /// Use a pointed conic of the canonical conic, dropping this point.
        #[arg(long)]
        pointed_at: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Projective planes: info, axiom verification, saving.
    Plane {
        #[command(subcommand)]
        action: PlaneAction,
    },
    /// Planar ternary ring of a plane and its field properties.
    Ptr {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Frame points origin,x_ideal,y_ideal,unit; default is the standard frame.
        #[arg(long, value_delimiter = ',')]
        frame: Option<Vec<usize>>,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a Desargues violation.
    Desargues {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Configuration budget; unlimited for exhaustive mode when absent.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Complete sets of MUBs.
    Mub {
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, alias = "n", default_value_t = 1)]
        k: u32,
        /// Verify the set exactly.
        #[arg(long)]
        verify: bool,
        /// Load a set from a JSON file instead.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Use the dimension-2 fixture.
        #[arg(long)]
        fixture: bool,
        /// Show how quadratic phases fail in characteristic 2.
        #[arg(long)]
        char2_demo: bool,
        /// Write the set itself as JSON.
        #[arg(long)]
        emit: bool,
        /// Import decimal bases and check them within this tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Oval size against MUB count in one order.
    Analogy {
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce the oval-type table for n = 1..4.
    ReproduceTable {
        /// Run the o-permutation search for the n = 4 irregular cell.
        #[arg(long)]
        long: bool,
        /// Node budget of that search.
        #[arg(long)]
        budget: Option<u64>,
        /// Verify a supplied o-polynomial for that cell instead.
        #[arg(long, value_delimiter = ',')]
        opoly: Option<Vec<u32>>,
        /// Last column to compute.
        #[arg(long)]
        max_n: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-verify a certificate.
    VerifyCert {
        #[arg(long = "in")]
        input: PathBuf,
        /// Incidence file of the plane named in the certificate.
        #[arg(long)]
        plane_file: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum PlaneAction {
    Info {
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
    },
    Verify {
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
    },
    Save {
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("arcmub: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
