//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "kronload",
    version,
    about = "Kronecker coefficient vanishing via partition loadings",
    long_about = "Computes symmetric-group character tables, exact Kronecker \
coefficients, spectral partition loadings, and the loading thresholds that \
certify coefficient vanishing or nonvanishing."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Cache directory (default: $KRONLOAD_CACHE, then the platform cache dir).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,

    /// Size of the worker thread pool (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    /// Output format for structured results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Unlock long-running computations (large scans and conjecture walks).
    #[arg(long, global = true)]
    pub long: bool,

    /// Run power iteration for exactly K steps instead of to convergence.
    #[arg(long, global = true, value_name = "K", conflicts_with = "tol")]
    pub iters: Option<u32>,

    /// Convergence tolerance for power iteration (default 1e-13).
    #[arg(long, global = true, value_name = "T")]
    pub tol: Option<f64>,

    /// Accepted for interface stability; every computation is deterministic,
    /// so the seed is ignored.
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    /// Small-n reference checks; runs in a few seconds.
    Quick,
    /// The complete embedded reference data up to n = 16.
    Full,
    /// Everything, including the n = 20 full scan and large conjecture walks.
    Long,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the partitions of n in descending lexicographic order.
    Partitions {
        #[arg(long)]
        n: u32,
    },
    /// Print the character table of the symmetric group on n letters.
    Chartable {
        #[arg(long)]
        n: u32,
    },
    /// Compute one Kronecker coefficient g(lambda, mu, nu).
    Kron {
        #[arg(long)]
        n: u32,
        /// Partition, e.g. 12,4,2 or 2^2,1^2.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Compute r- and b-loadings for every partition of n.
    Loadings {
        #[arg(long)]
        n: u32,
    },
    /// Exhaustively scan all triples of partitions of n for the thresholds.
    Scan {
        #[arg(long)]
        n: u32,
        /// Histogram bin count over the triple-loading range [0, 300].
        #[arg(long, default_value_t = 60)]
        bins: usize,
        /// Write scan.json, histogram CSVs, and SVG plots into this directory.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Classify one triple: provably zero, provably nonzero, or unknown.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Show the thresholds r* and b* for n, with their source.
    Thresholds {
        #[arg(long)]
        n: u32,
    },
    /// Evaluate the closed-form threshold conjectures for large n.
    Conjecture {
        #[arg(long)]
        n: u32,
        /// Which conjecture to evaluate; defaults to every applicable side.
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
    },
    /// Loading moments over partitions and triples, with distribution fits.
    Stats {
        #[arg(long)]
        n: u32,
    },
    /// Check the build against the embedded reference data.
    Verify {
        #[arg(long, value_enum, default_value_t = Scope::Quick)]
        scope: Scope,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    R,
    B,
    Both,
}
