//! Scaled Gerschgorin bounds for interval Hessians.
//!
//! Only the lower diagonal endpoints and the off-diagonal magnitudes of an
//! interval Hessian enter the scaled Gerschgorin bound, so everything here
//! works on the [`PointMatrix`] `H` with `h_ii = lo(h_ii)` and
//! `h_ij = -max(|lo(h_ij)|, |hi(h_ij)|)`. For a positive scaling vector `d`
//!
//! ```text
//! alpha_i = max(0, -(h_ii + sum_{j != i} h_ij d_j / d_i) / 2)
//! ```
//!
//! makes every matrix of the enclosure plus `2 diag(alpha)` positive
//! semidefinite.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::{IntervalMatrix, SquareMatrix};
use crate::scalar::{self, lit, Scalar};

/// Relative factor of the saturation tolerance `tau = 1e-9 · max(1, ‖H‖∞)`.
pub const SATURATION_REL_TOL: f64 = 1e-9;

/// Symmetric real matrix with nonpositive off-diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMatrix<T> {
    h: SquareMatrix<T>,
}

/// Per-row saturation quantities at a scaling vector `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowValues<T> {
    /// `h_ii + sum_{j != i} h_ij d_j / d_i`.
    pub hd_over_d: Vec<T>,
    /// `max(0, -hd_over_d_i)`, i.e. `2 alpha_i`.
    pub deficit: Vec<T>,
    /// `(H d)_i`.
    pub hd: Vec<T>,
}

/// Nonnegative alpha values, one per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector<T>(Vec<T>);

impl<T: Scalar> AlphaVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        match values.iter().position(|a| *a < T::zero()) {
            Some(index) => Err(Error::NegativeAlpha { index: index + 1 }),
            None => Ok(Self(values)),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub(crate) fn check_positive<T: Scalar>(d: &[T], err: fn(usize) -> Error) -> Result<()> {
    match d.iter().position(|x| *x <= T::zero()) {
        Some(i) => Err(err(i + 1)),
        None => Ok(()),
    }
}

pub(crate) fn nonpositive_scaling(index: usize) -> Error {
    Error::NonpositiveScaling { index }
}

pub(crate) fn nonpositive_radius(index: usize) -> Error {
    Error::NonpositiveRadius { index }
}

impl<T: Scalar> PointMatrix<T> {
    /// Validates symmetry and off-diagonal sign.
    pub fn new(h: SquareMatrix<T>) -> Result<Self> {
        let n = h.dim();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && (h[(i, j)] != h[(j, i)] || h[(i, j)] > T::zero()) {
                    return Err(Error::AsymmetricInput {
                        row: i + 1,
                        col: j + 1,
                    });
                }
            }
        }
        Ok(Self { h })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    /// Reduces a symmetric interval matrix to its point matrix.
    pub fn from_interval(im: &IntervalMatrix<T>) -> Result<Self> {
        if let Some((row, col)) = im.asymmetry() {
            return Err(Error::AsymmetricInput { row, col });
        }
        let h = SquareMatrix::from_fn(im.dim(), |i, j| {
            if i == j {
                im[(i, i)].lo().clone()
            } else {
                -im[(i, j)].mag()
            }
        });
        Self::new(h)
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.h
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.h[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.h.rows()
    }

    /// `tau = 1e-9 · max(1, ‖H‖∞)`, the single saturation tolerance.
    pub fn saturation_tol(&self) -> T {
        lit::<T>(SATURATION_REL_TOL) * scalar::max(T::one(), self.h.norm_inf())
    }

    pub fn hd(&self, d: &[T]) -> Vec<T> {
        self.h.mul_vec(d)
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        Self {
            h: self.h.principal(idx),
        }
    }

    /// Connected components of the off-diagonal sparsity graph, as sorted
    /// 0-based index lists ordered by their smallest member.
    pub fn decompose_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut block = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if !seen[j] && j != i && !self.h[(i, j)].is_zero() {
                        seen[j] = true;
                        block.push(j);
                        queue.push_back(j);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    pub fn is_irreducible(&self) -> bool {
        self.decompose_blocks().len() == 1
    }

    /// Congruence `H'_ij = rad_i rad_j h_ij`, mapping the problem to unit radii.
    pub fn normalize(&self, rad: &[T]) -> Result<Self> {
        self.check_len(rad)?;
        check_positive(rad, nonpositive_radius)?;
        Ok(Self {
            h: SquareMatrix::from_fn(self.dim(), |i, j| {
                rad[i].clone() * rad[j].clone() * self.h[(i, j)].clone()
            }),
        })
    }

    pub fn row_values(&self, d: &[T]) -> Result<RowValues<T>> {
        self.check_len(d)?;
        check_positive(d, nonpositive_scaling)?;
        let n = self.dim();
        let mut hd_over_d = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = self.h[(i, i)].clone();
            for j in (0..n).filter(|&j| j != i) {
                s = s + self.h[(i, j)].clone() * d[j].clone() / d[i].clone();
            }
            hd_over_d.push(s);
        }
        let deficit = hd_over_d
            .iter()
            .map(|v| scalar::max(T::zero(), -v.clone()))
            .collect();
        Ok(RowValues {
            hd_over_d,
            deficit,
            hd: self.hd(d),
        })
    }

    pub fn alpha(&self, d: &[T]) -> Result<AlphaVector<T>> {
        let two = T::one() + T::one();
        let rv = self.row_values(d)?;
        Ok(AlphaVector(rv.deficit.into_iter().map(|x| x / two.clone()).collect()))
    }

    /// `D(d) = sum_i rad_i^2 · deficit_i`.
    pub fn deficit_objective(&self, d: &[T], rad: &[T]) -> Result<T> {
        self.check_len(rad)?;
        let rv = self.row_values(d)?;
        Ok(weighted_sum(&rv.deficit, rad))
    }

    /// `J(d) = sum_i alpha_i rad_i^2 = D(d) / 2`.
    pub fn alpha_objective(&self, d: &[T], rad: &[T]) -> Result<T> {
        Ok(self.deficit_objective(d, rad)? / (T::one() + T::one()))
    }

    fn check_len(&self, v: &[T]) -> Result<()> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            })
        }
    }
}

fn weighted_sum<T: Scalar>(values: &[T], rad: &[T]) -> T {
    values
        .iter()
        .zip(rad)
        .fold(T::zero(), |acc, (v, r)| acc + v.clone() * r.clone() * r.clone())
}

/// Alpha computed directly from the interval matrix, without forming the
/// point matrix first.
pub fn alpha_from_interval<T: Scalar>(im: &IntervalMatrix<T>, d: &[T]) -> Result<AlphaVector<T>> {
    let n = im.dim();
    if d.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.len(),
        });
    }
    check_positive(d, nonpositive_scaling)?;
    let two = T::one() + T::one();
    let values = (0..n)
        .map(|i| {
            let mut s = im[(i, i)].lo().clone();
            for j in (0..n).filter(|&j| j != i) {
                s = s - im[(i, j)].mag() * d[j].clone() / d[i].clone();
            }
            scalar::max(T::zero(), -s / two.clone())
        })
        .collect();
    Ok(AlphaVector(values))
}

/// Maximum separation between `f` and its underestimator, `sum_i alpha_i rad_i^2`,
/// attained at the box midpoint.
pub fn separation_objective<T: Scalar>(alpha: &AlphaVector<T>, rad: &[T]) -> Result<T> {
    if alpha.len() != rad.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: rad.len(),
        });
    }
    Ok(weighted_sum(alpha.values(), rad))
}

/// Scaled Gerschgorin test: every row satisfies
/// `h_ii + 2 alpha_i + sum_{j != i} h_ij d_j / d_i >= -tol`.
pub fn psd_certificate<T: Scalar>(
    h: &PointMatrix<T>,
    alpha: &AlphaVector<T>,
    d: &[T],
    tol: &T,
) -> Result<bool> {
    if alpha.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: alpha.len(),
        });
    }
    let rv = h.row_values(d)?;
    let two = T::one() + T::one();
    Ok(rv
        .hd_over_d
        .iter()
        .zip(alpha.values())
        .all(|(v, a)| v.clone() + two.clone() * a.clone() >= -tol.clone()))
}
