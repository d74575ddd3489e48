//! `alphabb` command-line tool. Every subcommand prints one JSON document on
//! standard output; failures print a message on standard error and exit with
//! a stable code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | unreadable input, bad JSON or schema, bad arguments |
//! | 2 | numerical failure in a subsystem solve |
//! | 3 | structural problem: asymmetric or reducible (with `--strict-irreducible`) input, nonpositive radius or scaling |
//! | 4 | iteration anomaly or a conjecture counterexample |

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use alphabb::experiment::Family;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "alphabb", version, about = "Scaled Gerschgorin alpha values for alphaBB underestimators")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Li1,
    Li2,
}

#[derive(Debug, Args)]
struct Radius {
    /// Box file whose radius weights the objective (default: all ones).
    #[arg(long = "box", value_name = "BOX_JSON")]
    box_path: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce an interval matrix to its point matrix.
    Pointmat { matrix: PathBuf },
    /// Interval enclosure of the Hessian of an expression over a box.
    Hessian {
        expr: PathBuf,
        #[arg(long = "box", value_name = "BOX_JSON")]
        box_path: PathBuf,
    },
    /// Alpha values for a scaling vector.
    Alpha {
        matrix: PathBuf,
        /// `radius`, `li1`, `li2` or `@file.json`.
        #[arg(long, default_value = "radius")]
        d: String,
        #[command(flatten)]
        radius: Radius,
    },
    /// Improve the scaling vector with one of the heuristics.
    Improve {
        matrix: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Saturation tolerance (default 1e-9 * max(1, ‖H‖∞)).
        #[arg(long)]
        tol: Option<f64>,
        /// Sweep or iteration cap.
        #[arg(long = "max")]
        max_iters: Option<usize>,
        /// Include every step in the output.
        #[arg(long)]
        trace: bool,
        /// Fail with exit code 3 on reducible input instead of splitting it.
        #[arg(long)]
        strict_irreducible: bool,
        #[command(flatten)]
        radius: Radius,
    },
    /// Check a scaling vector against the necessary optimality conditions.
    Check {
        matrix: PathBuf,
        /// `@file.json` holding the scaling vector.
        #[arg(long)]
        d: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        strict_irreducible: bool,
        #[command(flatten)]
        radius: Radius,
    },
    /// Brute-force minimum of the alpha objective (n <= 4).
    Oracle {
        matrix: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
        #[command(flatten)]
        radius: Radius,
    },
    /// Compare the set heuristic with the oracle on random instances.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
    },
    /// Sample the underestimator of an expression over a box.
    Underest {
        expr: PathBuf,
        #[arg(long = "box", value_name = "BOX_JSON")]
        box_path: PathBuf,
        /// `radius`, `li1`, `li2` or `@file.json`.
        #[arg(long, default_value = "radius")]
        d: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Iteration statistics of the set heuristic on random matrices.
    Experiment {
        /// One or more dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// One or more of general, tridiagonal.
        #[arg(long, value_delimiter = ',', default_value = "general")]
        family: Vec<Family>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = alphabb::experiment::TABLE_SEED)]
        seed: u64,
        /// Print an aligned text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
}

fn run(cli: Cli) -> Result<String, Failure> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match cli.command {
        Command::Pointmat { matrix } => commands::pointmat(&matrix),
        Command::Hessian { expr, box_path } => commands::hessian(&expr, &box_path),
        Command::Alpha { matrix, d, radius } => commands::alpha(&matrix, &d, radius.box_path.as_deref()),
        Command::Improve {
            matrix,
            method,
            tol,
            max_iters,
            trace,
            strict_irreducible,
            radius,
        } => commands::improve(
            &matrix,
            method == Method::Li2,
            tol,
            max_iters,
            trace,
            strict_irreducible,
            radius.box_path.as_deref(),
        ),
        Command::Check {
            matrix,
            d,
            tol,
            strict_irreducible,
            radius,
        } => commands::check(&matrix, &d, tol, strict_irreducible, radius.box_path.as_deref()),
        Command::Oracle { matrix, grid, radius } => commands::oracle(&matrix, grid, radius.box_path.as_deref()),
        Command::Conjecture { n, trials, seed, grid } => commands::conjecture(n, trials, seed, grid),
        Command::Underest {
            expr,
            box_path,
            d,
            samples,
            seed,
        } => commands::underest(&expr, &box_path, &d, samples, seed),
        Command::Experiment {
            n,
            family,
            trials,
            seed,
            table,
        } => commands::experiment(&n, &family, trials, seed, table),
    }
}

/// Writes to standard output, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(out) = &failure.output {
                emit(out);
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
