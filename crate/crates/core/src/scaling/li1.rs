use super::{check_start, Options, ScalingState, Status, StepKind, TraceStep};
use crate::error::{Error, Result};
use crate::gersch::PointMatrix;
use crate::scalar::{lit, Scalar};

fn row_ratio<T: Scalar>(h: &PointMatrix<T>, d: &[T], i: usize) -> T {
    let mut s = h.get(i, i).clone();
    for j in (0..h.dim()).filter(|&j| j != i) {
        s = s + h.get(i, j).clone() * d[j].clone() / d[i].clone();
    }
    s
}

/// Smallest `d_i` keeping row `i` saturated: `-(1/h_ii) sum_{j != i} h_ij d_j`.
///
/// Row `i` must be unsaturated beyond `tol`, which forces `h_ii > 0`.
pub fn li1_row_update<T: Scalar>(h: &PointMatrix<T>, d: &[T], i: usize, tol: &T) -> Result<T> {
    if d.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: d.len(),
        });
    }
    crate::gersch::check_positive(d, crate::gersch::nonpositive_scaling)?;
    if row_ratio(h, d, i) <= *tol {
        return Err(Error::RowSaturated { row: i + 1 });
    }
    let coupling = (0..h.dim())
        .filter(|&j| j != i)
        .fold(T::zero(), |acc, j| acc + h.get(i, j).clone() * d[j].clone());
    if coupling.is_zero() {
        return Err(Error::DegenerateRow { row: i + 1 });
    }
    Ok(-coupling / h.get(i, i).clone())
}

/// Repeated ascending sweeps of [`li1_row_update`], each update applied
/// immediately.
///
/// Stops when a sweep changes nothing, when `hd_over_d >= -tol` for every row,
/// when a sweep improves the deficit objective by a relative amount below
/// `opts.min_rel_improvement`, or after `opts.max_iters` sweeps (default 1000).
pub fn li1<T: Scalar>(
    h: &PointMatrix<T>,
    d0: &[T],
    rad: &[T],
    opts: &Options<T>,
) -> Result<ScalingState<T>> {
    check_start(h, d0, rad)?;
    let n = h.dim();
    let tol = opts.tol_for(h);
    let max_sweeps = opts.max_iters.unwrap_or(1000);
    let min_rel: T = lit(opts.min_rel_improvement);
    let mut d = d0.to_vec();
    let mut trace = Vec::new();
    let mut objective = h.deficit_objective(&d, rad)?;
    let all_rows = |d: &[T], pred: &dyn Fn(T) -> bool| (0..n).all(|i| pred(row_ratio(h, d, i)));

    let done = |d: Vec<T>, trace, status, iterations| {
        Ok(ScalingState {
            d,
            trace,
            status,
            iterations,
        })
    };

    for sweep in 1..=max_sweeps {
        if all_rows(&d, &|v| v >= -tol.clone()) {
            return done(d, trace, Status::Convex, sweep - 1);
        }
        let mut updated = false;
        for i in 0..n {
            if row_ratio(h, &d, i) > tol {
                d[i] = li1_row_update(h, &d, i, &tol)?;
                updated = true;
                trace.push(TraceStep {
                    kind: StepKind::RowUpdate(i),
                    iteration: sweep,
                    d_after: d.clone(),
                    deficit_objective_after: h.deficit_objective(&d, rad)?,
                });
            }
        }
        if !updated {
            return done(d, trace, Status::AllSaturated, sweep - 1);
        }
        let next = h.deficit_objective(&d, rad)?;
        let improvement = objective.clone() - next.clone();
        objective = next;
        if improvement <= min_rel.clone() * objective.abs() {
            let status = if all_rows(&d, &|v| v >= -tol.clone()) {
                Status::Convex
            } else if all_rows(&d, &|v| v <= tol.clone()) {
                Status::AllSaturated
            } else {
                Status::ToleranceStop
            };
            return done(d, trace, status, sweep);
        }
    }
    done(d, trace, Status::IterationCap, max_sweeps)
}
