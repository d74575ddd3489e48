use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gersch::{check_positive, nonpositive_radius, PointMatrix};

/// Largest dimension the grid oracle accepts.
pub const ORACLE_MAX_DIM: usize = 4;

/// Rounds of cyclic coordinate-wise refinement after the grid search.
const REFINE_ROUNDS: usize = 30;
/// Golden-section steps per coordinate search.
const GOLDEN_STEPS: usize = 80;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Best scaling found, in original coordinates, rescaled to max 1.
    pub d_star: Vec<f64>,
    /// The same point in normalized coordinates `c = d / rad`, max 1.
    pub c_star: Vec<f64>,
    /// `sum_i alpha_i rad_i^2`.
    pub alpha_objective: f64,
    /// `sum_i rad_i^2 deficit_i`, twice the alpha objective.
    pub deficit_objective: f64,
    pub grid_step: f64,
}

/// Deficit objective of a normalized row-major matrix at `c`.
fn deficit(h: &[f64], n: usize, c: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..n {
        let row = &h[i * n..(i + 1) * n];
        let s: f64 = row.iter().zip(c).map(|(a, b)| a * b).sum();
        total += (-s / c[i]).max(0.0);
    }
    total
}

fn grid_values(step: f64) -> Vec<f64> {
    let k = (1.0 / step + 1e-9).floor() as usize;
    let mut v: Vec<f64> = (1..=k).map(|i| i as f64 * step).collect();
    match v.last() {
        Some(&last) if last >= 1.0 - 1e-12 => *v.last_mut().unwrap() = 1.0,
        _ => v.push(1.0),
    }
    v
}

/// Point of the grid with linear index `idx`: component `fixed` is 1, the
/// others are read off the base-`len` digits of the remainder, most
/// significant first.
fn grid_point(n: usize, values: &[f64], fixed: usize, mut rest: usize) -> Vec<f64> {
    let mut c = vec![1.0; n];
    for k in (0..n).rev().filter(|&k| k != fixed) {
        c[k] = values[rest % values.len()];
        rest /= values.len();
    }
    c
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Minimizes the alpha objective over all positive scalings by exhaustive
/// grid search plus coordinate-wise golden-section refinement.
///
/// The objective only depends on ratios of `d`, so one component of
/// `c = d / rad` is pinned to 1 and the rest range over
/// `{step, 2 step, ..., 1}`, for every choice of the pinned component. The
/// grid is scanned in parallel; ties go to the smallest linear grid index, so
/// the result does not depend on scheduling.
///
/// Along any single coordinate the objective is convex, which is what makes
/// the golden-section refinement reliable.
pub fn oracle_min(h: &PointMatrix<f64>, rad: &[f64], grid_step: f64) -> Result<OracleResult> {
    let n = h.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    if rad.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rad.len(),
        });
    }
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::InvalidParameter {
            name: "grid_step",
            value: grid_step,
        });
    }
    check_positive(rad, nonpositive_radius)?;

    let hn = h.normalize(rad)?;
    let flat: Vec<f64> = hn.rows().concat();
    let values = grid_values(grid_step);
    let per_fixed = values.len().pow(n.saturating_sub(1) as u32);

    let (_, best_idx) = (0..n * per_fixed)
        .into_par_iter()
        .map(|idx| {
            let c = grid_point(n, &values, idx / per_fixed, idx % per_fixed);
            (deficit(&flat, n, &c), idx)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("grid is never empty");
    let fixed = best_idx / per_fixed;
    let mut c = grid_point(n, &values, fixed, best_idx % per_fixed);
    let mut best = deficit(&flat, n, &c);

    let lo = grid_step / 10.0;
    for _ in 0..REFINE_ROUNDS {
        for k in (0..n).filter(|&k| k != fixed) {
            let along = |t: f64| {
                let mut trial = c.clone();
                trial[k] = t;
                deficit(&flat, n, &trial)
            };
            let t = golden_section(along, lo, 1.0);
            let value = along(t);
            if value < best {
                best = value;
                c[k] = t;
            }
        }
    }

    let raw: Vec<f64> = c.iter().zip(rad).map(|(a, b)| a * b).collect();
    let top = raw.iter().cloned().fold(0.0, f64::max);
    Ok(OracleResult {
        d_star: raw.iter().map(|x| x / top).collect(),
        c_star: c,
        alpha_objective: best / 2.0,
        deficit_objective: best,
        grid_step,
    })
}
