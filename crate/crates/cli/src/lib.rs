//! Batch verification harness around the `torusgauss` library.
//!
//! Every subcommand turns its arguments into a list of independent cases,
//! runs them on a rayon pool, and collects the [`VerificationReport`]s in
//! case order into a [`RunSummary`].

pub mod commands;
pub mod config;
pub mod output;

use std::time::{Duration, Instant};

use rug::Float;
use thiserror::Error;
use torusgauss::VerificationReport;

pub use config::{IntRange, OutputFormat, SweepConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] torusgauss::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Output(_) => 3,
        }
    }
}

/// Aggregate of one command run. `elapsed` is diagnostic only and never part
/// of the data output.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_abs_diff: Float,
    pub elapsed: Duration,
    pub reports: Vec<VerificationReport>,
    /// Oracles that were not run, with the reason.
    pub skipped: Vec<String>,
}

impl RunSummary {
    pub fn from_reports(
        reports: Vec<VerificationReport>,
        skipped: Vec<String>,
        started: Instant,
    ) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        let worst = reports
            .iter()
            .map(|r| &r.abs_diff)
            .fold(
                Float::new(64),
                |acc, d| if *d > acc { d.clone() } else { acc },
            );
        Self {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
            worst_abs_diff: worst,
            elapsed: started.elapsed(),
            reports,
            skipped,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            1
        }
    }
}

/// Map `f` over `items` on a pool of `jobs` threads (0 = rayon default),
/// keeping input order.
pub fn run_parallel<T, R, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Replace each report's tolerance and recompute its verdict.
pub fn apply_tolerance(reports: &mut [VerificationReport], tolerance: Option<&Float>) {
    if let Some(tol) = tolerance {
        for r in reports {
            r.tolerance = tol.clone();
            r.pass = r.abs_diff <= *tol;
        }
    }
}
