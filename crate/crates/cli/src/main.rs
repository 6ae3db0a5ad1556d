//! torusgauss: batch verification of Gauss-sum identities.
//!
//! Data goes to stdout in the chosen format; diagnostics and timing go to
//! stderr. Exit status: 0 all cases pass, 1 some case fails, 2 usage error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use torusgauss_cli::commands::{
    cmd_appendix, cmd_jacobi, cmd_kernel_jacobi, cmd_limit, cmd_path_oracle, cmd_reciprocity,
    cmd_trace_compare, cmd_verify_ls, default_tau_grid, kernel_grid, random_taus,
};
use torusgauss_cli::config::{parse_decimal_list, parse_tolerance};
use torusgauss_cli::output::render;
use torusgauss_cli::{CliError, IntRange, OutputFormat, RunSummary, SweepConfig};

#[derive(Parser, Debug)]
#[command(
    name = "torusgauss",
    version,
    about = "Verify quadratic Gauss sum identities with exact phase bookkeeping"
)]
struct Cli {
    /// Working precision in bits.
    #[arg(
        long,
        global = true,
        env = "TORUSGAUSS_PRECISION",
        default_value_t = 256
    )]
    precision: u32,

    /// Replace every computed tolerance with this decimal value.
    #[arg(long, global = true, env = "TORUSGAUSS_TOLERANCE")]
    tolerance: Option<String>,

    #[arg(long, global = true, env = "TORUSGAUSS_FORMAT", value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "TORUSGAUSS_JOBS", default_value_t = 0)]
    jobs: usize,

    /// Largest number of paths a brute-force oracle may enumerate.
    #[arg(
        long,
        global = true,
        env = "TORUSGAUSS_BUDGET",
        default_value_t = 10_000_000
    )]
    budget: u128,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, env = "TORUSGAUSS_SEED", default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Landsberg-Schaar identity over a (p, q) grid.
    VerifyLs {
        #[arg(long, default_value = "1..10")]
        p: String,
        #[arg(long, default_value = "1..10")]
        q: String,
    },
    /// Torus trace by the spectral sum, the path-integral closed form,
    /// matrix powers and path enumeration.
    TraceCompare {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
    },
    /// Shifted Gauss sums of modulus 4r against their closed forms.
    Appendix {
        #[arg(long, default_value_t = 50)]
        r_max: u64,
    },
    /// Quadratic reciprocity for all pairs of odd primes below a bound.
    Reciprocity {
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Theta transformation on a τ grid plus seeded random complex τ.
    Jacobi {
        /// Comma-separated real τ values; defaults to 1/4,1/2,1,3/2,2,4.
        #[arg(long)]
        grid: Option<String>,
        /// Number of random complex τ added to the grid.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Compare the spectral and image propagators on a 5×5 (θ, t) grid instead.
        #[arg(long)]
        kernel: bool,
    },
    /// Regularized approach to the Landsberg-Schaar value as ε decreases.
    Limit {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "0.1,0.01,0.001")]
        eps: String,
    },
    /// Kernel entries by path enumeration against matrix power and spectral form.
    PathOracle {
        /// Even Hilbert-space dimension.
        #[arg(long)]
        n: u64,
        /// Number of time steps.
        #[arg(long)]
        p: u64,
    },
}

fn run(cli: &Cli) -> Result<RunSummary, CliError> {
    let tolerance = cli.tolerance.as_deref().map(parse_tolerance).transpose()?;
    let tol = tolerance.as_ref();
    let prec = cli.precision;
    if prec < torusgauss::phasecalc::MIN_PRECISION {
        return Err(CliError::Usage(format!(
            "--precision must be at least {} bits",
            torusgauss::phasecalc::MIN_PRECISION
        )));
    }
    match &cli.command {
        Command::VerifyLs { p, q } => {
            let cfg = SweepConfig {
                p_range: p.parse::<IntRange>()?,
                q_range: q.parse::<IntRange>()?,
                precision_bits: prec,
                tolerance_override: tolerance.clone(),
                output_format: cli.format,
                parallelism: cli.jobs,
            };
            cmd_verify_ls(&cfg)
        }
        Command::TraceCompare { q, p } => cmd_trace_compare(*q, *p, prec, cli.budget, tol),
        Command::Appendix { r_max } => cmd_appendix(*r_max, prec, cli.jobs, tol),
        Command::Reciprocity { bound } => cmd_reciprocity(*bound, cli.jobs),
        Command::Jacobi {
            grid,
            random,
            kernel,
        } => {
            if *kernel {
                return cmd_kernel_jacobi(&kernel_grid(), prec, cli.jobs, tol);
            }
            let mut taus = match grid {
                Some(g) => parse_decimal_list(g)?
                    .iter()
                    .map(|t| (t.to_f64(), 0.0))
                    .collect(),
                None => default_tau_grid(),
            };
            taus.extend(random_taus(*random, cli.seed));
            cmd_jacobi(&taus, prec, cli.jobs, tol)
        }
        Command::Limit { q, p, eps } => cmd_limit(*q, *p, &parse_decimal_list(eps)?, prec, tol),
        Command::PathOracle { n, p } => cmd_path_oracle(*n, *p, prec, cli.budget, cli.jobs, tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let summary = match run(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("torusgauss: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let data = match render(&summary, cli.format) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("torusgauss: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut out = std::io::stdout().lock();
    if out
        .write_all(data.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return ExitCode::from(3);
    }
    eprintln!(
        "{} cases, {} passed, {} failed, {} skipped in {:.3}s",
        summary.total,
        summary.passed,
        summary.failed,
        summary.skipped.len(),
        summary.elapsed.as_secs_f64()
    );
    ExitCode::from(summary.exit_code() as u8)
}
