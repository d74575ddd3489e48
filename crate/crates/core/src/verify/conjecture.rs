use rayon::prelude::*;
use serde::Serialize;

use super::oracle::{oracle_min, ORACLE_MAX_DIM};
use crate::error::{Error, Result};
use crate::experiment::{gen_matrix, trial_rng, Family};
use crate::gersch::PointMatrix;
use crate::scaling::{li2, per_block, Options};

/// An instance where the set heuristic lost to the grid oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub n: usize,
    pub h: Vec<Vec<f64>>,
    pub d_li2: Vec<f64>,
    pub d_oracle: Vec<f64>,
    pub alpha_objective_li2: f64,
    pub alpha_objective_oracle: f64,
    pub allowance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub grid_step: f64,
    pub passes: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

/// Draws general-family matrices for trial `t` until one is irreducible.
pub fn irreducible_instance(n: usize, seed: u64, t: u64) -> PointMatrix<f64> {
    let mut rng = trial_rng(seed, t);
    loop {
        let h = gen_matrix(n, Family::General, &mut rng);
        if h.is_irreducible() {
            return h;
        }
    }
}

/// Compares one instance; `Ok(None)` means the heuristic was within the
/// allowance of the oracle.
pub fn compare_with_oracle(h: &PointMatrix<f64>, grid_step: f64) -> Result<Option<Counterexample>> {
    let n = h.dim();
    let rad = vec![1.0; n];
    let state = per_block(h, &rad, &rad, |b, d, r| li2(b, d, r, &Options::default()))?;
    let ours = h.alpha_objective(&state.d, &rad)?;
    let best = oracle_min(h, &rad, grid_step)?;
    let allowance = f64::max(1e-6, 2.0 * grid_step * h.matrix().norm_inf());
    if ours <= best.alpha_objective + allowance {
        return Ok(None);
    }
    Ok(Some(Counterexample {
        trial: 0,
        n,
        h: h.rows(),
        d_li2: state.d,
        d_oracle: best.d_star,
        alpha_objective_li2: ours,
        alpha_objective_oracle: best.alpha_objective,
        allowance,
    }))
}

/// Checks on random irreducible instances that the set heuristic, started
/// at `d = rad = 1`, reaches the oracle's optimum up to the grid allowance
/// `max(1e-6, 2 grid_step ‖H‖∞)`. Failures are collected, not asserted.
pub fn conjecture_test(n: usize, trials: u64, seed: u64, grid_step: f64) -> Result<ConjectureReport> {
    if n > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
        });
    }
    let outcomes: Vec<Option<Counterexample>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = irreducible_instance(n, seed, t);
            Ok(compare_with_oracle(&h, grid_step)?.map(|c| Counterexample { trial: t, ..c }))
        })
        .collect::<Result<_>>()?;
    let counterexamples: Vec<Counterexample> = outcomes.into_iter().flatten().collect();
    let failures = counterexamples.len() as u64;
    Ok(ConjectureReport {
        n,
        trials,
        seed,
        grid_step,
        passes: trials - failures,
        failures,
        counterexamples,
    })
}
