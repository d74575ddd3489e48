//! Closed intervals and boxes with natural (non-rounded) interval arithmetic.
//!
//! Endpoints are computed in the scalar type's own arithmetic. For `f64` this
//! means enclosures are valid up to roundoff; for exact rationals they are
//! exact.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval {
                lo: scalar::to_f64(&lo),
                hi: scalar::to_f64(&hi),
            })
        }
    }

    pub fn point(x: T) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Half-width.
    pub fn radius(&self) -> T {
        (self.hi.clone() - self.lo.clone()) / (T::one() + T::one())
    }

    pub fn midpoint(&self) -> T {
        (self.hi.clone() + self.lo.clone()) / (T::one() + T::one())
    }

    /// Largest absolute value over the interval, `max(|lo|, |hi|)`.
    pub fn mag(&self) -> T {
        scalar::max(self.lo.abs(), self.hi.abs())
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = scalar::max(self.lo.clone(), other.lo.clone());
        let hi = scalar::min(self.hi.clone(), other.hi.clone());
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn scale(&self, c: &T) -> Self {
        let a = self.lo.clone() * c.clone();
        let b = self.hi.clone() * c.clone();
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    /// Tight image of `x^k` over the interval.
    pub fn powi(&self, k: u32) -> Self {
        if k == 0 {
            return Self::point(T::one());
        }
        let lo_k = num_traits::pow(self.lo.clone(), k as usize);
        let hi_k = num_traits::pow(self.hi.clone(), k as usize);
        if k % 2 == 1 {
            return Self { lo: lo_k, hi: hi_k };
        }
        if self.lo >= T::zero() {
            Self { lo: lo_k, hi: hi_k }
        } else if self.hi <= T::zero() {
            Self { lo: hi_k, hi: lo_k }
        } else {
            Self {
                lo: T::zero(),
                hi: num_traits::pow(self.mag(), k as usize),
            }
        }
    }
}

impl<T: Scalar> Add for &Interval<T> {
    type Output = Interval<T>;

    fn add(self, rhs: Self) -> Interval<T> {
        Interval {
            lo: self.lo.clone() + rhs.lo.clone(),
            hi: self.hi.clone() + rhs.hi.clone(),
        }
    }
}

impl<T: Scalar> Sub for &Interval<T> {
    type Output = Interval<T>;

    fn sub(self, rhs: Self) -> Interval<T> {
        Interval {
            lo: self.lo.clone() - rhs.hi.clone(),
            hi: self.hi.clone() - rhs.lo.clone(),
        }
    }
}

impl<T: Scalar> Neg for &Interval<T> {
    type Output = Interval<T>;

    fn neg(self) -> Interval<T> {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl<T: Scalar> Mul for &Interval<T> {
    type Output = Interval<T>;

    fn mul(self, rhs: Self) -> Interval<T> {
        let products = [
            self.lo.clone() * rhs.lo.clone(),
            self.lo.clone() * rhs.hi.clone(),
            self.hi.clone() * rhs.lo.clone(),
            self.hi.clone() * rhs.hi.clone(),
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        Interval { lo, hi }
    }
}

/// A box `x_1 × … × x_n` of variable domains, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox<T> {
    intervals: Vec<Interval<T>>,
}

impl<T: Scalar> IntervalBox<T> {
    pub fn new(intervals: Vec<Interval<T>>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { intervals })
    }

    /// Builds a box from `(lo, hi)` pairs.
    pub fn from_bounds(bounds: &[(T, T)]) -> Result<Self> {
        let intervals = bounds
            .iter()
            .map(|(lo, hi)| Interval::new(lo.clone(), hi.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.intervals
    }

    pub fn radius(&self) -> Vec<T> {
        self.intervals.iter().map(Interval::radius).collect()
    }

    pub fn midpoint(&self) -> Vec<T> {
        self.intervals.iter().map(Interval::midpoint).collect()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim() && self.intervals.iter().zip(x).all(|(iv, xi)| iv.contains(xi))
    }
}
