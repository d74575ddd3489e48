use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{hessian, Expr};
use crate::interval::IntervalBox;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnderestimationReport {
    pub samples: usize,
    /// Largest `g(x) - f(x)` seen; nonpositive for a valid underestimator.
    pub max_g_minus_f: f64,
    /// Largest `f(x) - g(x)` seen and where.
    pub max_separation: f64,
    pub argmax: Vec<f64>,
    /// `sum_i alpha_i rad_i^2`, the separation at the box midpoint.
    pub midpoint_separation: f64,
    /// Smallest eigenvalue of the Hessian of `g` over the samples.
    pub min_hessian_eigenvalue: f64,
}

/// Samples the underestimator
/// `g(x) = f(x) - sum_i alpha_i (hi_i - x_i)(x_i - lo_i)` uniformly over the
/// box and reports how far it stays below `f` and how convex it is.
pub fn underestimation_check(
    f: &Expr,
    b: &IntervalBox<f64>,
    alpha: &[f64],
    samples: usize,
    seed: u64,
) -> Result<UnderestimationReport> {
    let n = b.dim();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.len(),
        });
    }
    if let Some(i) = alpha.iter().position(|a| a.is_nan() || *a < 0.0) {
        return Err(Error::NegativeAlpha { index: i + 1 });
    }
    if f.max_var() > n {
        return Err(Error::VariableIndex {
            index: f.max_var(),
            dim: n,
        });
    }
    let bounds: Vec<(f64, f64)> = b.intervals().iter().map(|iv| (*iv.lo(), *iv.hi())).collect();
    let separation = |x: &[f64]| -> f64 {
        bounds
            .iter()
            .zip(alpha)
            .zip(x)
            .map(|(((lo, hi), a), xi)| a * (hi - xi) * (xi - lo))
            .sum()
    };
    let hess = hessian(f, n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = UnderestimationReport {
        samples,
        max_g_minus_f: f64::NEG_INFINITY,
        max_separation: f64::NEG_INFINITY,
        argmax: Vec::new(),
        midpoint_separation: separation(&b.midpoint()),
        min_hessian_eigenvalue: f64::INFINITY,
    };
    for _ in 0..samples {
        let x: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
        let fx = f.eval(&x)?;
        let gx = fx - separation(&x);
        report.max_g_minus_f = report.max_g_minus_f.max(gx - fx);
        if fx - gx > report.max_separation {
            report.max_separation = fx - gx;
            report.argmax = x.clone();
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = hess[i][j].eval(&x)?;
            }
            m[(i, i)] += 2.0 * alpha[i];
        }
        let lambda = m.symmetric_eigenvalues().min();
        report.min_hessian_eigenvalue = report.min_hessian_eigenvalue.min(lambda);
    }
    Ok(report)
}
