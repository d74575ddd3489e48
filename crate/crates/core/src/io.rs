//! JSON and text file formats.
//!
//! * box: `{"box": [[lo, hi], ...]}`
//! * interval matrix: `{"n": k, "lower": [[...]], "upper": [[...]]}`
//! * point matrix: `{"n": k, "h": [[...]]}`
//! * scaling vector: `[d1, ...]` or `{"d": [d1, ...]}`
//! * expression: first line `n=<dim>`, second line the expression
//!
//! Indices written to JSON are 1-based. Floats are written in the shortest
//! form that parses back to the same `f64`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::expr::{parse, Expr};
use crate::gersch::PointMatrix;
use crate::interval::IntervalBox;
use crate::matrix::{IntervalMatrix, SquareMatrix};
use crate::scaling::{StepKind, TraceStep};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Model(#[from] Error),
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
}

pub fn parse_box(text: &str) -> Result<IntervalBox<f64>, IoError> {
    let file: BoxFile = serde_json::from_str(text)?;
    let bounds: Vec<(f64, f64)> = file.bounds.iter().map(|b| (b[0], b[1])).collect();
    Ok(IntervalBox::from_bounds(&bounds)?)
}

pub fn box_json(b: &IntervalBox<f64>) -> Value {
    let bounds: Vec<[f64; 2]> = b.intervals().iter().map(|iv| [*iv.lo(), *iv.hi()]).collect();
    json!({ "box": bounds })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalMatrixFile {
    pub n: usize,
    pub lower: Vec<Vec<f64>>,
    pub upper: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointMatrixFile {
    pub n: usize,
    pub h: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum AnyMatrixFile {
    Interval(IntervalMatrixFile),
    Point(PointMatrixFile),
}

/// A matrix file in either form.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixInput {
    Interval(IntervalMatrix<f64>),
    Point(PointMatrix<f64>),
}

impl MatrixInput {
    pub fn dim(&self) -> usize {
        match self {
            MatrixInput::Interval(m) => m.dim(),
            MatrixInput::Point(h) => h.dim(),
        }
    }

    /// The point matrix, reducing an interval matrix if needed.
    pub fn point_matrix(&self) -> Result<PointMatrix<f64>, Error> {
        match self {
            MatrixInput::Interval(m) => PointMatrix::from_interval(m),
            MatrixInput::Point(h) => Ok(h.clone()),
        }
    }
}

fn square(name: &str, n: usize, rows: Vec<Vec<f64>>) -> Result<SquareMatrix<f64>, IoError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(schema(format!("\"{name}\" must be a {n}x{n} array")));
    }
    Ok(SquareMatrix::from_rows(rows)?)
}

pub fn parse_matrix(text: &str) -> Result<MatrixInput, IoError> {
    let value: Value = serde_json::from_str(text)?;
    let file: AnyMatrixFile = serde_json::from_value(value).map_err(|_| {
        schema("expected {\"n\", \"lower\", \"upper\"} or {\"n\", \"h\"} with numeric arrays")
    })?;
    match file {
        AnyMatrixFile::Interval(f) => {
            let lower = square("lower", f.n, f.lower)?;
            let upper = square("upper", f.n, f.upper)?;
            let m = IntervalMatrix::from_bounds(&lower, &upper)?;
            if let Some((row, col)) = m.asymmetry() {
                return Err(Error::AsymmetricInput { row, col }.into());
            }
            Ok(MatrixInput::Interval(m))
        }
        AnyMatrixFile::Point(f) => {
            let h = square("h", f.n, f.h)?;
            Ok(MatrixInput::Point(PointMatrix::new(h)?))
        }
    }
}

pub fn point_matrix_json(h: &PointMatrix<f64>) -> Value {
    json!({ "n": h.dim(), "h": h.rows() })
}

pub fn interval_matrix_json(m: &IntervalMatrix<f64>) -> Value {
    json!({ "n": m.dim(), "lower": m.lower().rows(), "upper": m.upper().rows() })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DFile {
    Bare(Vec<f64>),
    Wrapped {
        d: Vec<f64>,
    },
}

pub fn parse_d(text: &str) -> Result<Vec<f64>, IoError> {
    let value: Value = serde_json::from_str(text)?;
    match serde_json::from_value(value) {
        Ok(DFile::Bare(d)) | Ok(DFile::Wrapped { d }) => Ok(d),
        Err(_) => Err(schema("expected a numeric array or {\"d\": [...]}")),
    }
}

/// Reads `n=<dim>` followed by the expression on the next line.
pub fn parse_expr_file(text: &str) -> Result<(usize, Expr), IoError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| schema("empty expression file"))?;
    let n = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| schema(format!("expected header \"n=<dim>\", found \"{header}\"")))?;
    let body = lines.next().ok_or_else(|| schema("missing expression line"))?;
    if lines.next().is_some() {
        return Err(schema("expression must fit on one line"));
    }
    Ok((n, parse(body, n)?))
}

pub fn trace_step_json(step: &TraceStep<f64>) -> Value {
    let (kind, index_or_set) = match &step.kind {
        StepKind::RowUpdate(i) => ("row_update", json!(i + 1)),
        StepKind::SubsystemUpdate(set) => (
            "subsystem_update",
            json!(set.iter().map(|i| i + 1).collect::<Vec<_>>()),
        ),
    };
    json!({
        "kind": kind,
        "index_or_set": index_or_set,
        "iteration": step.iteration,
        "d_after": step.d_after,
        "deficit_objective_after": step.deficit_objective_after,
    })
}

pub fn trace_json(trace: &[TraceStep<f64>]) -> Value {
    Value::Array(trace.iter().map(trace_step_json).collect())
}

/// Converts 0-based indices to the 1-based form used in output.
pub fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}
