//! Small dense square matrices over a [`Scalar`], plus interval matrices.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{self, Scalar};

/// Row-major dense `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(T::zero(), |acc, x| acc + x.abs())
            })
            .fold(T::zero(), scalar::max)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Principal submatrix on the given (0-based) indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self[(idx[a], idx[b])].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    ///
    /// Fails with [`Error::SingularSubsystem`] when a pivot falls below
    /// `rel_pivot_tol · ‖A‖∞`. `rows` only labels the error.
    pub fn lu_solve(&self, b: &[T], rel_pivot_tol: &T, rows: &[usize]) -> Result<Vec<T>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let threshold = rel_pivot_tol.clone() * self.norm_inf();
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&r, &s| {
                    a[r * n + k]
                        .abs()
                        .partial_cmp(&a[s * n + k].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("non-empty pivot range");
            let pivot = a[p * n + k].clone();
            if pivot.abs() <= threshold || pivot.is_zero() {
                return Err(Error::SingularSubsystem {
                    rows: rows.to_vec(),
                    pivot: scalar::to_f64(&pivot),
                });
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                x.swap(k, p);
            }
            for r in k + 1..n {
                let factor = a[r * n + k].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a[k * n + c].clone() * factor.clone();
                    a[r * n + c] = a[r * n + c].clone() - v;
                }
                x[r] = x[r].clone() - factor * x[k].clone();
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k].clone();
            for c in k + 1..n {
                s = s - a[k * n + c].clone() * x[c].clone();
            }
            x[k] = s / a[k * n + k].clone();
        }
        Ok(x)
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// An `n × n` matrix of intervals, e.g. a Hessian enclosure over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix<T> {
    n: usize,
    data: Vec<Interval<T>>,
}

impl<T: Scalar> IntervalMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Interval<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds the matrix from entrywise lower and upper endpoint matrices.
    pub fn from_bounds(lower: &SquareMatrix<T>, upper: &SquareMatrix<T>) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                found: upper.dim(),
            });
        }
        let n = lower.dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(Interval::new(lower[(i, j)].clone(), upper[(i, j)].clone())?);
            }
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> SquareMatrix<T> {
        SquareMatrix::from_fn(self.n, |i, j| self[(i, j)].lo().clone())
    }

    pub fn upper(&self) -> SquareMatrix<T> {
        SquareMatrix::from_fn(self.n, |i, j| self[(i, j)].hi().clone())
    }

    /// First `(i, j)` (1-based) where entries `(i, j)` and `(j, i)` differ.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .find(|&(i, j)| self[(i, j)] != self[(j, i)])
            .map(|(i, j)| (i + 1, j + 1))
    }
}

impl<T> Index<(usize, usize)> for IntervalMatrix<T> {
    type Output = Interval<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Interval<T> {
        &self.data[i * self.n + j]
    }
}
