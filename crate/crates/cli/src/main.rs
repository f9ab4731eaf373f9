use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

#[derive(Parser, Debug)]
#[command(name = "specpencil", version, about = "Exact joint spectra of Fourier and Hadamard matrix pencils")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check identities of the Fourier pair.
    #[command(subcommand)]
    Verify(Verify),
    /// Scan all permutation pairs (P1, P2) for B built from P1·F·P2.
    Classify(ClassifyArgs),
    /// Scan the 4x4 family H(t) for a vanishing z^2 coefficient.
    #[command(name = "scan-h4")]
    ScanH4(ScanH4Args),
    /// Complex Hadamard checks on matrices read from files.
    #[command(subcommand)]
    Hadamard(Hadamard),
    /// det(x1*M1 + ... + xk*Mk - I) for matrices read from files.
    Spectrum(SpectrumArgs),
    /// Print one of the built-in matrices as JSON.
    Matrix(MatrixArgs),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Spectrum of (A, B, AB) or (A, B, AB, BA) against the Fourier surface.
    Fourier {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        four_var: bool,
    },
    /// Moment identities of the shift B against A.
    Relations {
        #[arg(long)]
        n: usize,
    },
    /// The two order-3 pairs with equal spectra that are not diagonally equivalent.
    Remark27,
    /// Witnesses for B(P1, P2) when P1 or P2 is affine.
    Lemma41 {
        #[arg(long)]
        n: usize,
        /// Random partners per affine permutation.
        #[arg(long, default_value_t = 2)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(4..=5))]
    pub n: u8,
    #[arg(long, env = "SPECPENCIL_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
    /// Stop at the first pair that contradicts the prediction.
    #[arg(long)]
    pub fail_fast: bool,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave elapsed_ms out of the report.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug)]
pub struct ScanH4Args {
    /// Values of t; `conductor:M` takes all M-th roots of unity.
    #[arg(long, default_value = "conductor:24")]
    pub samples: String,
    #[arg(long, env = "SPECPENCIL_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
}

#[derive(Subcommand, Debug)]
pub enum Hadamard {
    /// Is the matrix a complex Hadamard matrix?
    Check { file: PathBuf },
    /// Search for h2 = D1·P1·h1·P2·D2 with diagonal unitary D and permutations P.
    Similar { file1: PathBuf, file2: PathBuf },
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Comma-separated variable names, one per file.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Omega,
    Fourier,
    BHat,
    BHatHat,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[arg(value_enum)]
    pub kind: MatrixKind,
    #[arg(long)]
    pub n: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => render::json(outcome.kind, &outcome.report),
                Format::Text => render::text(outcome.kind, &outcome.report),
            };
            println!("{}", text.trim_end());
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
