use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub};

use super::Expr;
use crate::error::Result;
use crate::interval::IntervalBox;
use crate::matrix::IntervalMatrix;
use crate::scalar::Scalar;

fn zero() -> Expr {
    Expr::Const(Rational64::from_integer(0))
}

fn add(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(s) = x.checked_add(y) {
            return Expr::Const(s);
        }
    }
    Expr::Add(Arc::new(a), Arc::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_zero() {
        return a;
    }
    if a.is_zero() {
        return neg(b);
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(s) = x.checked_sub(y) {
            return Expr::Const(s);
        }
    }
    Expr::Sub(Arc::new(a), Arc::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return zero();
    }
    if a.is_one() {
        return b;
    }
    if b.is_one() {
        return a;
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(p) = x.checked_mul(y) {
            return Expr::Const(p);
        }
    }
    Expr::Mul(Arc::new(a), Arc::new(b))
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => (*inner).clone(),
        e => Expr::Neg(Arc::new(e)),
    }
}

fn pow(a: Expr, k: u32) -> Expr {
    match k {
        0 => Expr::Const(Rational64::from_integer(1)),
        1 => a,
        _ => Expr::Pow(Arc::new(a), k),
    }
}

/// `∂e/∂x_i` (1-based `i`), folding only trivial constants.
pub fn differentiate(e: &Expr, i: usize) -> Expr {
    match e {
        Expr::Const(_) => zero(),
        Expr::Var(j) => Expr::Const(Rational64::from_integer((*j == i) as i64)),
        Expr::Add(a, b) => add(differentiate(a, i), differentiate(b, i)),
        Expr::Sub(a, b) => sub(differentiate(a, i), differentiate(b, i)),
        Expr::Mul(a, b) => add(
            mul(differentiate(a, i), (**b).clone()),
            mul((**a).clone(), differentiate(b, i)),
        ),
        Expr::Neg(a) => neg(differentiate(a, i)),
        Expr::Pow(a, k) => {
            if *k == 0 {
                return zero();
            }
            let da = differentiate(a, i);
            mul(
                Expr::Const(Rational64::from_integer(*k as i64)),
                mul(pow((**a).clone(), k - 1), da),
            )
        }
    }
}

/// Symbolic Hessian; entry `[i][j]` is `∂²e/∂x_{i+1}∂x_{j+1}`.
pub fn hessian(e: &Expr, n: usize) -> Vec<Vec<Expr>> {
    let grad: Vec<Expr> = (1..=n).map(|i| differentiate(e, i)).collect();
    grad.iter()
        .map(|g| (1..=n).map(|j| differentiate(g, j)).collect())
        .collect()
}

/// Entrywise natural interval extension of the Hessian over `b`.
///
/// The `(i, j)` and `(j, i)` enclosures are intersected so the result is
/// exactly symmetric.
pub fn interval_hessian<T: Scalar>(e: &Expr, b: &IntervalBox<T>) -> Result<IntervalMatrix<T>> {
    let n = b.dim();
    let h = hessian(e, n);
    let mut enclosures = Vec::with_capacity(n);
    for row in &h {
        enclosures.push(
            row.iter()
                .map(|entry| entry.eval_interval(b))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(IntervalMatrix::from_fn(n, |i, j| {
        let (a, c) = (&enclosures[i][j], &enclosures[j][i]);
        a.intersect(c).unwrap_or_else(|| a.clone())
    }))
}
