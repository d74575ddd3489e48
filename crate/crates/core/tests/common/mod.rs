#![allow(dead_code)]

use alphabb::{Exact, PointMatrix, PointMatrix64, Scalar, SquareMatrix};
use num_traits::{FromPrimitive, One, Zero};

pub const CUBIC: &str = "5*x1*x2^2 + (100/3)*x1^3 - (7/6)*x2^3";

pub fn q(n: i64, d: i64) -> Exact {
    Exact::new(n.into(), d.into())
}

pub fn exact(x: f64) -> Exact {
    Exact::from_float(x).expect("finite")
}

pub fn oscillating<T: Scalar>() -> PointMatrix<T> {
    let rows = [[8, -1, -6], [-1, -2, 0], [-6, 0, 6]];
    PointMatrix::new(SquareMatrix::from_fn(3, |i, j| T::from_i64(rows[i][j]).unwrap())).unwrap()
}

/// Tridiagonal chain that forces `n - 1` subsystem solves: `h_11 = 2`,
/// `h_nn = 0`, `h_kk = 4 (4^(k-1) - 1) / (2 4^(k-1) - 1)` otherwise, unit
/// negative couplings.
pub fn chain_exact(n: usize) -> PointMatrix<Exact> {
    let h = SquareMatrix::from_fn(n, |i, j| {
        let k = i + 1;
        if i == j {
            if k == 1 {
                q(2, 1)
            } else if k == n {
                Exact::zero()
            } else {
                let p = 1i64 << (2 * k - 2);
                q(4 * (p - 1), 2 * p - 1)
            }
        } else if i.abs_diff(j) == 1 {
            -Exact::one()
        } else {
            Exact::zero()
        }
    });
    PointMatrix::new(h).unwrap()
}

pub fn chain_f64(n: usize) -> PointMatrix64 {
    let e = chain_exact(n);
    PointMatrix::new(e.matrix().map(|x| num_traits::ToPrimitive::to_f64(x).unwrap())).unwrap()
}

pub fn to_exact(h: &PointMatrix64) -> PointMatrix<Exact> {
    PointMatrix::new(h.matrix().map(|x| exact(*x))).unwrap()
}

pub fn f(x: i64) -> Exact {
    Exact::from_i64(x).unwrap()
}
