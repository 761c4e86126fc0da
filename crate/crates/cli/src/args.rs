use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "kmnub",
    version,
    about = "Roots, orbit classes, nubs and scales of straight elements of Kac-Moody Weyl groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// GCM file: a `rank n` line, n rows of integers, optional `labels ...`.
    #[arg(long)]
    pub gcm: PathBuf,
    /// Height cutoff of the root slice.
    #[arg(long, default_value_t = 20)]
    pub height: u32,
    /// Iteration bound for orbit walks and Δ± block enumeration.
    #[arg(long, default_value_t = 50)]
    pub nmax: usize,
    /// Worker threads for root classification.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the positive real and imaginary roots of the slice.
    Roots {
        #[command(flatten)]
        common: Common,
    },
    /// Classify every root of the slice into K1, K2, K3 for a straight element.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Compute the nub descriptor K(w).
    Nub {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Scale q^l(w); with --audit n, the tidiness-index report for n powers.
    Scale {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Prime power field size.
        #[arg(long)]
        q: u64,
        /// Number of powers to audit.
        #[arg(long)]
        audit: Option<usize>,
    },
    /// Decide whether the nub is trivial.
    TrivialNub {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Decide whether two standard straight elements have the same nub.
    SameNub {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Second element, same format as --word.
        #[arg(long, allow_hyphen_values = true)]
        word2: String,
    },
    /// Find a standard conjugate of a straight element.
    Standardize {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Produce an imaginary root of K(w) of height at least n.
    Witness {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Minimum height of the witness.
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Brute-force orbit classification, for debugging.
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Space-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 400)]
        nbig: usize,
    },
}
