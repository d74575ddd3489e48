//! Random point-matrix families and iteration statistics for the set
//! heuristic.
//!
//! Every trial draws from its own ChaCha8 stream seeded by a hash of
//! `(seed, trial)`, so results are identical however the trials are spread
//! over threads.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gersch::PointMatrix;
use crate::matrix::SquareMatrix;
use crate::scaling::{li2, per_block, Options};

/// Seed used for the published iteration table.
pub const TABLE_SEED: u64 = 2013;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Dense integer entries in `[-10, 10]`, diagonal shifted by `n`.
    General,
    /// Integer entries in `[-10, 10]` on the three central diagonals only.
    Tridiagonal,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::General => "general",
            Family::Tridiagonal => "tridiagonal",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "general" => Ok(Family::General),
            "tridiagonal" => Ok(Family::Tridiagonal),
            other => Err(format!("unknown family '{other}' (expected general or tridiagonal)")),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for trial `t` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, t: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed) ^ t))
}

/// Draws a random symmetric point matrix.
///
/// The diagonal and upper triangle (restricted to the band for the
/// tridiagonal family) are uniform integers in `[-10, 10]`, mirrored to the
/// lower triangle. The general family adds `n` to the diagonal. Off-diagonal
/// entries are then replaced by `-|h_ij|`.
pub fn gen_matrix<R: Rng + ?Sized>(n: usize, family: Family, rng: &mut R) -> PointMatrix<f64> {
    let mut h = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            if family == Family::Tridiagonal && j > i + 1 {
                continue;
            }
            let v = rng.random_range(-10i32..=10) as f64;
            if i == j {
                h[(i, i)] = match family {
                    Family::General => v + n as f64,
                    Family::Tridiagonal => v,
                };
            } else {
                h[(i, j)] = -v.abs();
                h[(j, i)] = -v.abs();
            }
        }
    }
    PointMatrix::new(h).expect("generated matrix is symmetric with nonpositive off-diagonals")
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Skipped,
    Iterations(usize),
}

/// Runs the set heuristic from `d = 1` on each irreducible block and returns
/// the largest block iteration count.
///
/// The trial is skipped when there is nothing to do: `Hd >= -tau` (already
/// convex by the Gerschgorin test), no row of `Hd` exceeds `tau`, or no block
/// needs a single iteration.
pub fn run_trial(h: &PointMatrix<f64>) -> Result<TrialOutcome> {
    let n = h.dim();
    let ones = vec![1.0; n];
    let tol = h.saturation_tol();
    let hd = h.hd(&ones);
    if hd.iter().all(|v| *v >= -tol) || hd.iter().all(|v| *v <= tol) {
        return Ok(TrialOutcome::Skipped);
    }
    let out = per_block(h, &ones, &ones, |b, d, r| li2(b, d, r, &Options::default()))?;
    match out.max_iterations() {
        0 => Ok(TrialOutcome::Skipped),
        k => Ok(TrialOutcome::Iterations(k)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Anomaly {
    pub trial: u64,
    pub error: String,
    /// The offending matrix, row by row.
    pub h: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub n: usize,
    pub family: Family,
    pub trials_requested: u64,
    pub trials_counted: u64,
    /// Trials not counted, anomalies included.
    pub skipped: u64,
    /// Mean over counted trials; `None` when nothing was counted.
    pub average_iterations: Option<f64>,
    pub max_iterations: usize,
    pub seed: u64,
    pub anomalies: Vec<Anomaly>,
}

/// Runs `trials` independent trials in parallel and aggregates the counts.
pub fn run_experiment(n: usize, family: Family, trials: u64, seed: u64) -> Result<TrialStats> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
        });
    }
    let outcomes: Vec<(u64, Result<TrialOutcome>, PointMatrix<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = gen_matrix(n, family, &mut trial_rng(seed, t));
            (t, run_trial(&h), h)
        })
        .collect();

    let mut counted = 0u64;
    let mut total = 0u64;
    let mut max_iterations = 0;
    let mut anomalies = Vec::new();
    for (trial, outcome, h) in outcomes {
        match outcome {
            Ok(TrialOutcome::Iterations(k)) => {
                counted += 1;
                total += k as u64;
                max_iterations = max_iterations.max(k);
            }
            Ok(TrialOutcome::Skipped) => {}
            Err(e) => anomalies.push(Anomaly {
                trial,
                error: e.to_string(),
                h: h.rows(),
            }),
        }
    }
    Ok(TrialStats {
        n,
        family,
        trials_requested: trials,
        trials_counted: counted,
        skipped: trials - counted,
        average_iterations: (counted > 0).then(|| total as f64 / counted as f64),
        max_iterations,
        seed,
        anomalies,
    })
}
