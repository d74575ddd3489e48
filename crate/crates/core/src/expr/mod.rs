//! Polynomial expressions with rational constants.
//!
//! Enough symbolic machinery to go from the text of an objective function to
//! an interval enclosure of its Hessian over a box: parsing, symbolic
//! differentiation, and point / natural-interval evaluation.

mod diff;
mod parse;

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::scalar::Scalar;

pub use diff::{differentiate, hessian, interval_hessian};
pub use parse::parse;

/// Expression tree. Variables are 1-based, `Var(1)` is `x1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational64),
    Var(usize),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Pow(Arc<Expr>, u32),
}

impl Expr {
    pub fn constant(c: impl Into<Rational64>) -> Self {
        Expr::Const(c.into())
    }

    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn as_const(&self) -> Option<&Rational64> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    /// Largest variable index appearing in the expression (0 if none).
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => *i,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var(),
        }
    }

    /// Evaluates at a point, in the arithmetic of `T`.
    pub fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        check_dim(self, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked<T: Scalar>(&self, x: &[T]) -> T {
        match self {
            Expr::Const(c) => rational_to(c),
            Expr::Var(i) => x[i - 1].clone(),
            Expr::Add(a, b) => a.eval_unchecked(x) + b.eval_unchecked(x),
            Expr::Sub(a, b) => a.eval_unchecked(x) - b.eval_unchecked(x),
            Expr::Mul(a, b) => a.eval_unchecked(x) * b.eval_unchecked(x),
            Expr::Neg(a) => -a.eval_unchecked(x),
            Expr::Pow(a, k) => num_traits::pow(a.eval_unchecked(x), *k as usize),
        }
    }

    /// Natural interval extension over a box.
    pub fn eval_interval<T: Scalar>(&self, b: &IntervalBox<T>) -> Result<Interval<T>> {
        check_dim(self, b.dim())?;
        Ok(self.eval_interval_unchecked(b.intervals()))
    }

    fn eval_interval_unchecked<T: Scalar>(&self, b: &[Interval<T>]) -> Interval<T> {
        match self {
            Expr::Const(c) => Interval::point(rational_to(c)),
            Expr::Var(i) => b[i - 1].clone(),
            Expr::Add(l, r) => &l.eval_interval_unchecked(b) + &r.eval_interval_unchecked(b),
            Expr::Sub(l, r) => &l.eval_interval_unchecked(b) - &r.eval_interval_unchecked(b),
            Expr::Mul(l, r) => match (l.as_const(), r.as_const()) {
                (Some(c), _) => r.eval_interval_unchecked(b).scale(&rational_to(c)),
                (_, Some(c)) => l.eval_interval_unchecked(b).scale(&rational_to(c)),
                _ => &l.eval_interval_unchecked(b) * &r.eval_interval_unchecked(b),
            },
            Expr::Neg(a) => -&a.eval_interval_unchecked(b),
            Expr::Pow(a, k) => a.eval_interval_unchecked(b).powi(*k),
        }
    }
}

fn check_dim(e: &Expr, n: usize) -> Result<()> {
    let m = e.max_var();
    if m > n {
        Err(Error::VariableIndex { index: m, dim: n })
    } else {
        Ok(())
    }
}

/// Converts a rational constant into `T`, exactly when `T` is rational.
fn rational_to<T: Scalar>(c: &Rational64) -> T {
    let num = T::from_i64(*c.numer()).expect("i64 fits in scalar");
    let den = T::from_i64(*c.denom()).expect("i64 fits in scalar");
    num / den
}

fn fmt_rational(c: &Rational64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_negative() => {
                write!(f, "(")?;
                fmt_rational(c, f)?;
                write!(f, ")")
            }
            Expr::Const(c) => fmt_rational(c, f),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, k) => match a.as_ref() {
                Expr::Var(_) => write!(f, "{a}^{k}"),
                _ => write!(f, "({a})^{k}"),
            },
        }
    }
}

/// Lossy conversion used only for diagnostics.
pub fn rational_to_f64(c: &Rational64) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    const CUBIC: &str = "5*x1*x2^2 + (100/3)*x1^3 - (7/6)*x2^3";

    #[test]
    fn point_evaluation() {
        let f = parse(CUBIC, 2).unwrap();
        let exact: Exact = f.eval(&[Exact::from_integer(1.into()), Exact::from_integer(1.into())]).unwrap();
        assert_eq!(exact, Exact::new(223.into(), 6.into()));
        let approx: f64 = f.eval(&[1.0, 1.0]).unwrap();
        assert!((approx - 223.0 / 6.0).abs() < 1e-12);
        assert_eq!(Expr::constant(7).eval(&[3.0, 4.0]).unwrap(), 7.0);
        assert_eq!(parse("x1^2", 1).unwrap().eval(&[-3.0]).unwrap(), 9.0);
    }

    #[test]
    fn interval_evaluation() {
        let b = IntervalBox::from_bounds(&[(1.0, 2.0), (1.0, 2.0)]).unwrap();
        let e = parse("200*x1", 2).unwrap();
        assert_eq!(e.eval_interval(&b).unwrap(), Interval::new(200.0, 400.0).unwrap());
        let e = parse("10*x1 - 7*x2", 2).unwrap();
        assert_eq!(e.eval_interval(&b).unwrap(), Interval::new(-4.0, 13.0).unwrap());
        let b1 = IntervalBox::from_bounds(&[(-1.0, 2.0)]).unwrap();
        assert_eq!(
            parse("x1^2", 1).unwrap().eval_interval(&b1).unwrap(),
            Interval::new(0.0, 4.0).unwrap()
        );
    }

    #[test]
    fn dimension_checked_on_evaluation() {
        let e = parse("x1*x2", 2).unwrap();
        assert!(matches!(
            e.eval(&[1.0]),
            Err(Error::VariableIndex { index: 2, dim: 1 })
        ));
    }

    #[test]
    fn display_reparses_to_same_values() {
        let f = parse(CUBIC, 2).unwrap();
        let g = parse(&f.to_string(), 2).unwrap();
        for x in [[1.0, 2.0], [-0.5, 3.25], [0.0, -1.0]] {
            assert!((f.eval(&x).unwrap() - g.eval(&x).unwrap()).abs() < 1e-12);
        }
    }
}
