use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use singpencil::linalg::RankTol;
use singpencil::SolveOptions;

#[derive(Debug, Parser)]
#[command(name = "singpencil", version, about = "Finite eigenvalues of singular matrix pencils")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of A - λB by a random rank-completing perturbation.
    Solve {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Normal rank of A - λB.
    Nrank {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build a pencil with a given Kronecker structure from a JSON spec.
    Gen {
        spec: PathBuf,
        /// Directory that receives A.mtx, B.mtx and truth.json.
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Finite regular eigenvalues of a two-parameter eigenvalue problem.
    Twoparam {
        /// JSON object with keys a1, b1, c1, a2, b2, c2 naming .mtx files
        /// relative to the manifest.
        manifest: PathBuf,
        /// Acceptance threshold on the μ discrepancy.
        #[arg(long, default_value_t = f64::EPSILON.sqrt())]
        delta: f64,
        /// Keep only the best μ pair for every λ.
        #[arg(long)]
        unique_lambda: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Values of λ for which A + λB has a multiple eigenvalue.
    Doubleeig {
        a: PathBuf,
        b: PathBuf,
        /// Report the values of the linearization without secant polishing.
        #[arg(long)]
        no_refine: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues shared by two independently perturbed pencils.
    Intersect {
        a: PathBuf,
        b: PathBuf,
        /// Matching tolerance on the chordal distance (default √ε).
        #[arg(long)]
        match_tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Size of the rank-completing perturbation.
    #[arg(long, default_value_t = 1e-2, allow_negative_numbers = true)]
    pub tau: f64,
    /// Threshold on max(‖Vᴴx‖, ‖Uᴴy‖) for true eigenvalues.
    #[arg(long, default_value_t = SolveOptions::default().delta1)]
    pub delta1: f64,
    /// Threshold on |s| separating finite from infinite true eigenvalues.
    #[arg(long, default_value_t = SolveOptions::default().delta2)]
    pub delta2: f64,
    #[arg(long, env = "SINGPENCIL_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Absolute singular value cutoff for rank decisions.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Re-draws of the perturbation when a prescribed value collides with a
    /// true eigenvalue.
    #[arg(long, default_value_t = SolveOptions::default().max_retries)]
    pub retries: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

impl Common {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tau: self.tau,
            delta1: self.delta1,
            delta2: self.delta2,
            seed: self.seed,
            retry_on_collision: self.retries > 0,
            max_retries: self.retries,
            rank_tol: self.tol.map_or(RankTol::Auto, RankTol::Value),
            ..SolveOptions::default()
        }
    }
}
