//! Command-line harness around the `flagtrop` library.

pub mod cache;
pub mod commands;
pub mod sampling;
pub mod suites;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::run;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] flagtrop::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Process exit status.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass = 0,
    Counterexample = 1,
    Error = 2,
}

#[derive(Parser, Debug)]
#[command(name = "flagtrop", version, about = "Relations, cells and tropical membership on complete flag varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Size of the ambient space, 2 to 6 [default: 3; `check` reads it from the point]
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=6))]
    pub n: Option<u8>,
    /// Seed for all random streams
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per cell, or sampled points for the set-equality suites
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Half-width of the exhaustive integer box for n = 3
    #[arg(long = "box-radius", default_value_t = 2)]
    pub box_radius: u32,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of a summary
    #[arg(long)]
    pub json: bool,
}

impl Common {
    pub fn n(&self) -> usize {
        self.n.map_or(3, usize::from)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the canonical incidence-Plücker relations as JSON lines
    Relations {
        #[command(flatten)]
        common: Common,
        /// Only relations with exactly three terms
        #[arg(long = "three-term")]
        three_term: bool,
    },
    /// Emit every cell of the atlas as JSON lines
    Cells {
        #[command(flatten)]
        common: Common,
    },
    /// Decide membership of a tropical point read from a JSON file (`-` for stdin)
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Tnn)]
        mode: Mode,
        point: PathBuf,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        theorem: Theorem,
    },
    /// Emit image points of the tropicalized cell maps with their certificates
    Sample {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Complete flag Dressian
    Dressian,
    /// Nonnegative complete flag Dressian
    TnnDressian,
    /// Three-term Dressian with flag matroid support
    ThreeTerm,
    /// Nonnegative three-term Dressian with flag matroid support
    TnnThreeTerm,
    /// Nonnegative tropical flag variety, certified by a cell round trip
    Tnn,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Dressian => "dressian",
            Mode::TnnDressian => "tnn-dressian",
            Mode::ThreeTerm => "three-term",
            Mode::TnnThreeTerm => "tnn-three-term",
            Mode::Tnn => "tnn",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Cell points are nonnegative and nonnegative flags are certified
    NonnegPluecker,
    /// Extremal coordinates determine the rest via three-term relations
    ThreeTermReconstruct,
    /// Complete flag Dressian equals the three-term Dressian
    #[value(name = "dressian-3m")]
    Dressian3m,
    /// The three nonnegative tropical sets coincide
    Main,
    /// Parameters are Laurent monomials in extremal coordinates
    PsiMonomial,
    /// Tropical image points and their Puiseux lifts
    Puiseux,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::NonnegPluecker => "nonneg-pluecker",
            Theorem::ThreeTermReconstruct => "three-term-reconstruct",
            Theorem::Dressian3m => "dressian-3m",
            Theorem::Main => "main",
            Theorem::PsiMonomial => "psi-monomial",
            Theorem::Puiseux => "puiseux",
        }
    }
}
