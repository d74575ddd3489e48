use thiserror::Error;

/// Errors raised by the library. Indices in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("variable x{index} is out of range for dimension {dim}")]
    VariableIndex { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("interval matrix is not symmetric at ({row}, {col})")]
    AsymmetricInput { row: usize, col: usize },

    #[error("radius component {index} is not strictly positive")]
    NonpositiveRadius { index: usize },

    #[error("scaling component {index} is not strictly positive")]
    NonpositiveScaling { index: usize },

    #[error("row {row} is already saturated")]
    RowSaturated { row: usize },

    #[error("row {row} has no off-diagonal coupling; the update would zero d_{row}")]
    DegenerateRow { row: usize },

    #[error("subsystem on rows {rows:?} is singular (pivot {pivot:e})")]
    SingularSubsystem { rows: Vec<usize>, pivot: f64 },

    #[error("subsystem solution component d_{index} = {value:e} is not positive")]
    NonpositiveSolution { index: usize, value: f64 },

    #[error("scaling loop needed more than {bound} iterations on a {n}x{n} block")]
    IterationAnomaly { n: usize, bound: usize },

    #[error("matrix is reducible into {blocks} blocks")]
    Reducible { blocks: usize },

    #[error("brute-force oracle supports n <= {max}, got {n}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("alpha component {index} is negative")]
    NegativeAlpha { index: usize },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
