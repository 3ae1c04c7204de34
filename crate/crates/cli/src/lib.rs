//! Command-line front end for `bjnear`: reads JSON matrices, subspaces and
//! algebras, runs a check or distance computation, and reports in text or
//! JSON.
//!
//! Exit codes: 0 for a decisive answer, 2 for an inconclusive one, 1 for
//! usage, input or numerical errors.

pub mod commands;
pub mod demo;
pub mod error;
pub mod io;

use std::path::{Path, PathBuf};

use bjnear::ToleranceConfig;
use clap::{Parser, Subcommand};

pub use commands::{Decision, Output};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "bjnear",
    version,
    about = "Birkhoff-James orthogonality and distance to matrix algebras"
)]
pub struct Cli {
    /// Feasibility tolerance for certificates.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,
    /// Solver convergence tolerance.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub solver_tol: Option<f64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: Option<u64>,
    /// Seed for randomised starts.
    #[arg(long, global = true, env = "BJNEAR_SEED")]
    pub seed: Option<u64>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print nothing; only the exit code reports the outcome.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operator norm and singular values.
    Norm { matrix: PathBuf },
    /// Orthogonality of A to a subspace.
    OrthoCheck { matrix: PathBuf, subspace: PathBuf },
    /// Orthogonality of A to the complex line through B.
    BsCheck { matrix: PathBuf, direction: PathBuf },
    /// Distance from A to an algebra with primal and dual certificates.
    Distance { matrix: PathBuf, algebra: PathBuf },
    /// Variance functional at a density, or its maximum when none is given.
    Variance {
        matrix: PathBuf,
        algebra: PathBuf,
        #[arg(long)]
        density: Option<PathBuf>,
    },
    /// Minimality of a Hermitian matrix against real diagonals.
    Minimal { matrix: PathBuf },
    /// Rerun the worked examples.
    Demo,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive finite number, got {s}"))
    }
}

impl Cli {
    pub fn config(&self) -> ToleranceConfig {
        let mut cfg = ToleranceConfig::default();
        if let Some(t) = self.tol {
            cfg.feasibility_tol = t;
        }
        if let Some(t) = self.solver_tol {
            cfg.solver_tol = t;
        }
        if let Some(m) = self.max_iter {
            cfg.max_iter = m as usize;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn matrix_at(path: &Path) -> Result<bjnear::ComplexMatrix, CliError> {
    io::parse_matrix(&read(path)?).map_err(|e| at_path(e, path))
}

fn at_path(e: CliError, path: &Path) -> CliError {
    match e {
        CliError::Parse { context, message } => CliError::Parse {
            context: format!("{} ({context})", path.display()),
            message,
        },
        other => other,
    }
}

fn same_size(a: &bjnear::ComplexMatrix, n: usize, what: &str) -> Result<(), CliError> {
    if a.nrows() != n {
        return Err(CliError::Usage(format!(
            "matrix is {0}x{0} but the {what} lives in dimension {n}",
            a.nrows()
        )));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = cli.config();
    cfg.validate()?;
    match &cli.command {
        Command::Norm { matrix } => commands::norm(&matrix_at(matrix)?),
        Command::OrthoCheck { matrix, subspace } => {
            let a = matrix_at(matrix)?;
            let w = io::parse_subspace(&read(subspace)?).map_err(|e| at_path(e, subspace))?;
            same_size(&a, w.ambient_n(), "subspace")?;
            commands::ortho_check(&a, &w, &cfg)
        }
        Command::BsCheck { matrix, direction } => {
            let a = matrix_at(matrix)?;
            let b = matrix_at(direction)?;
            same_size(&a, b.nrows(), "direction")?;
            commands::bs_check(&a, &b, &cfg)
        }
        Command::Distance { matrix, algebra } => {
            let a = matrix_at(matrix)?;
            let alg = io::parse_algebra(&read(algebra)?).map_err(|e| at_path(e, algebra))?;
            same_size(&a, alg.ambient_n(), "algebra")?;
            commands::distance(&a, &alg, &cfg)
        }
        Command::Variance {
            matrix,
            algebra,
            density,
        } => {
            let a = matrix_at(matrix)?;
            let alg = io::parse_algebra(&read(algebra)?).map_err(|e| at_path(e, algebra))?;
            same_size(&a, alg.ambient_n(), "algebra")?;
            let p = density.as_deref().map(matrix_at).transpose()?;
            if let Some(p) = &p {
                same_size(p, alg.ambient_n(), "algebra")?;
            }
            commands::variance(&a, &alg, p.as_ref(), &cfg)
        }
        Command::Minimal { matrix } => commands::minimal(&matrix_at(matrix)?, &cfg),
        Command::Demo => demo::run(&cfg),
    }
}
