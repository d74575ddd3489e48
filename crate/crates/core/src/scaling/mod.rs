//! Heuristics for choosing the Gerschgorin scaling vector `d`.
//!
//! Both start from `d = rad(x)` and only ever decrease components of `d`, so
//! the alpha values never increase along a run:
//!
//! * [`li1`] lowers one unsaturated row at a time until `(Hd)_i = 0`.
//! * [`li2`] collects every unsaturated row, closes the set over
//!   exactly-saturated neighbours, and saturates the whole set at once by
//!   solving an M-matrix system.
//!
//! Row and set indices are 0-based throughout the library API.

mod li1;
mod li2;

pub use li1::{li1, li1_row_update};
pub use li2::{identify_active_set, li2, solve_subsystem, Subsystem};

use crate::error::{Error, Result};
use crate::gersch::{check_positive, nonpositive_radius, nonpositive_scaling, PointMatrix};
use crate::scalar::Scalar;

/// Why a heuristic stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// `Hd <= tau`: no row can be lowered further.
    AllSaturated,
    /// `Hd >= -tau`: every matrix of the enclosure is positive semidefinite.
    Convex,
    /// A full sweep improved the deficit objective by less than the threshold.
    ToleranceStop,
    /// The iteration budget ran out.
    IterationCap,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::AllSaturated => "all_saturated",
            Status::Convex => "convex",
            Status::ToleranceStop => "tolerance_stop",
            Status::IterationCap => "iteration_cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    RowUpdate(usize),
    SubsystemUpdate(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep<T> {
    pub kind: StepKind,
    /// Sweep number for the row heuristic, iteration number for the set
    /// heuristic; 1-based.
    pub iteration: usize,
    pub d_after: Vec<T>,
    pub deficit_objective_after: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingState<T> {
    pub d: Vec<T>,
    pub trace: Vec<TraceStep<T>>,
    pub status: Status,
    /// Completed sweeps (row heuristic) or subsystem solves (set heuristic).
    pub iterations: usize,
}

/// Tuning knobs shared by both heuristics.
#[derive(Debug, Clone, PartialEq)]
pub struct Options<T> {
    /// Saturation tolerance; defaults to [`PointMatrix::saturation_tol`].
    pub tol: Option<T>,
    /// Sweep cap for the row heuristic (default 1000) or iteration cap for
    /// the set heuristic (default `n`).
    pub max_iters: Option<usize>,
    /// Relative deficit-objective improvement below which a sweep counts as
    /// stalled.
    pub min_rel_improvement: f64,
}

impl<T> Default for Options<T> {
    fn default() -> Self {
        Self {
            tol: None,
            max_iters: None,
            min_rel_improvement: 1e-12,
        }
    }
}

impl<T: Scalar> Options<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn with_max_iters(mut self, max: usize) -> Self {
        self.max_iters = Some(max);
        self
    }

    pub(crate) fn tol_for(&self, h: &PointMatrix<T>) -> T {
        self.tol.clone().unwrap_or_else(|| h.saturation_tol())
    }
}

/// The recommended starting point `d = rad(x)`.
pub fn initial_d<T: Scalar>(rad: &[T]) -> Result<Vec<T>> {
    check_positive(rad, nonpositive_radius)?;
    Ok(rad.to_vec())
}

pub(crate) fn check_start<T: Scalar>(h: &PointMatrix<T>, d0: &[T], rad: &[T]) -> Result<()> {
    for v in [d0, rad] {
        if v.len() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: v.len(),
            });
        }
    }
    check_positive(d0, nonpositive_scaling)?;
    check_positive(rad, nonpositive_radius)
}

/// Result of running a heuristic independently on each irreducible block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockwiseState<T> {
    /// 0-based index sets of the blocks.
    pub blocks: Vec<Vec<usize>>,
    /// Per-block results in block-local indices.
    pub states: Vec<ScalingState<T>>,
    /// The reassembled scaling vector.
    pub d: Vec<T>,
    /// All steps in global indices, block by block; `d_after` is the full
    /// vector at that point.
    pub trace: Vec<TraceStep<T>>,
}

impl<T: Scalar> BlockwiseState<T> {
    pub fn max_iterations(&self) -> usize {
        self.states.iter().map(|s| s.iterations).max().unwrap_or(0)
    }
}

/// Splits `h` into irreducible blocks and runs `method` on each.
pub fn per_block<T, F>(h: &PointMatrix<T>, d0: &[T], rad: &[T], method: F) -> Result<BlockwiseState<T>>
where
    T: Scalar,
    F: Fn(&PointMatrix<T>, &[T], &[T]) -> Result<ScalingState<T>>,
{
    check_start(h, d0, rad)?;
    let blocks = h.decompose_blocks();
    let mut d = d0.to_vec();
    let mut states = Vec::with_capacity(blocks.len());
    let mut trace = Vec::new();
    let block_deficits = |d: &[T]| -> Result<Vec<T>> {
        blocks
            .iter()
            .map(|b| {
                let pick = |v: &[T]| b.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
                h.principal(b).deficit_objective(&pick(d), &pick(rad))
            })
            .collect()
    };
    let mut deficits = block_deficits(&d)?;
    for (k, block) in blocks.iter().enumerate() {
        let pick = |v: &[T]| block.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        let state = method(&h.principal(block), &pick(d0), &pick(rad))?;
        for step in &state.trace {
            for (local, &global) in block.iter().enumerate() {
                d[global] = step.d_after[local].clone();
            }
            deficits[k] = step.deficit_objective_after.clone();
            let kind = match &step.kind {
                StepKind::RowUpdate(i) => StepKind::RowUpdate(block[*i]),
                StepKind::SubsystemUpdate(set) => {
                    StepKind::SubsystemUpdate(set.iter().map(|&i| block[i]).collect())
                }
            };
            trace.push(TraceStep {
                kind,
                iteration: step.iteration,
                d_after: d.clone(),
                deficit_objective_after: deficits.iter().fold(T::zero(), |a, b| a + b.clone()),
            });
        }
        for (local, &global) in block.iter().enumerate() {
            d[global] = state.d[local].clone();
        }
        states.push(state);
    }
    Ok(BlockwiseState {
        blocks,
        states,
        d,
        trace,
    })
}
