//! Scaled Gerschgorin alpha computation for αBB convex underestimators.
//!
//! Given an objective `f` and a box `x`, the αBB underestimator is
//! `g(x) = f(x) - sum_i alpha_i (hi_i - x_i)(x_i - lo_i)`. This crate computes
//! `alpha` from an interval enclosure of the Hessian through the scaled
//! Gerschgorin bound, improves the scaling vector `d` with two local
//! heuristics, and checks candidate scalings against necessary optimality
//! conditions and a brute-force oracle.
//!
//! The interval, expression, Gerschgorin and scaling code is generic over
//! [`Scalar`], so the same routines run in `f64` and in exact rational
//! arithmetic ([`Exact`]). Random sampling, the grid oracle and the
//! experiment harness are `f64` only.

pub mod error;
pub mod experiment;
pub mod expr;
pub mod gersch;
pub mod interval;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod scaling;
pub mod verify;

pub use error::{Error, Result};
pub use expr::Expr;
pub use gersch::{AlphaVector, PointMatrix, RowValues};
pub use interval::{Interval, IntervalBox};
pub use matrix::{IntervalMatrix, SquareMatrix};
pub use scalar::Scalar;
pub use scaling::{BlockwiseState, Options, ScalingState, Status, StepKind, TraceStep};

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type Interval64 = Interval<f64>;
pub type IntervalBox64 = IntervalBox<f64>;
pub type IntervalMatrix64 = IntervalMatrix<f64>;
pub type PointMatrix64 = PointMatrix<f64>;
pub type AlphaVector64 = AlphaVector<f64>;
pub type ScalingState64 = ScalingState<f64>;

pub type PointMatrixExact = PointMatrix<Exact>;
pub type IntervalMatrixExact = IntervalMatrix<Exact>;
