use super::{check_start, Options, ScalingState, Status, StepKind, TraceStep};
use crate::error::{Error, Result};
use crate::gersch::PointMatrix;
use crate::matrix::SquareMatrix;
use crate::scalar::{lit, to_f64, Scalar};

/// Pivots below this multiple of `‖H_I‖∞` are treated as singular.
const PIVOT_REL_TOL: f64 = 1e-12;

/// Rows to saturate together: every strictly unsaturated row (`(Hd)_i > tol`),
/// closed under adding exactly saturated rows (`|(Hd)_i| <= tol`) coupled to a
/// row already in the set. Sorted, 0-based; empty iff no row is unsaturated.
pub fn identify_active_set<T: Scalar>(h: &PointMatrix<T>, d: &[T], tol: &T) -> Vec<usize> {
    let n = h.dim();
    let hd = h.hd(d);
    let mut member: Vec<bool> = hd.iter().map(|v| v > tol).collect();
    loop {
        let joining: Vec<usize> = (0..n)
            .filter(|&i| !member[i] && hd[i].abs() <= *tol)
            .filter(|&i| (0..n).any(|j| member[j] && j != i && !h.get(i, j).is_zero()))
            .collect();
        if joining.is_empty() {
            break;
        }
        for i in joining {
            member[i] = true;
        }
    }
    (0..n).filter(|&i| member[i]).collect()
}

/// The linear system `H_I d_I = a` with `a_i = -sum_{j not in I} h_ij d_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subsystem<T> {
    pub indices: Vec<usize>,
    pub h_sub: SquareMatrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> Subsystem<T> {
    pub fn build(h: &PointMatrix<T>, d: &[T], indices: &[usize]) -> Self {
        let n = h.dim();
        let mut inside = vec![false; n];
        for &i in indices {
            inside[i] = true;
        }
        let rhs = indices
            .iter()
            .map(|&i| {
                -(0..n)
                    .filter(|&j| !inside[j])
                    .fold(T::zero(), |acc, j| acc + h.get(i, j).clone() * d[j].clone())
            })
            .collect();
        Self {
            indices: indices.to_vec(),
            h_sub: h.matrix().principal(indices),
            rhs,
        }
    }
}

/// Solves the subsystem by LU with partial pivoting and checks that every
/// component exceeds `tol`.
pub fn solve_subsystem<T: Scalar>(s: &Subsystem<T>, tol: &T) -> Result<Vec<T>> {
    let labels: Vec<usize> = s.indices.iter().map(|i| i + 1).collect();
    let x = s.h_sub.lu_solve(&s.rhs, &lit(PIVOT_REL_TOL), &labels)?;
    if let Some(k) = x.iter().position(|v| v <= tol) {
        return Err(Error::NonpositiveSolution {
            index: s.indices[k] + 1,
            value: to_f64(&x[k]),
        });
    }
    Ok(x)
}

/// Repeatedly saturates the active set by an M-matrix solve until `Hd <= tol`
/// or `Hd >= -tol`.
///
/// `h` should be irreducible (see [`super::per_block`]). Needing more than
/// `n - 1` solves raises [`Error::IterationAnomaly`]; `opts.max_iters`
/// (default `n`) caps the loop with [`Status::IterationCap`].
pub fn li2<T: Scalar>(
    h: &PointMatrix<T>,
    d0: &[T],
    rad: &[T],
    opts: &Options<T>,
) -> Result<ScalingState<T>> {
    check_start(h, d0, rad)?;
    let n = h.dim();
    let tol = opts.tol_for(h);
    let max_iters = opts.max_iters.unwrap_or(n);
    let mut d = d0.to_vec();
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let hd = h.hd(&d);
        let status = if hd.iter().all(|v| *v <= tol) {
            Some(Status::AllSaturated)
        } else if hd.iter().all(|v| *v >= -tol.clone()) {
            Some(Status::Convex)
        } else if iterations >= max_iters {
            Some(Status::IterationCap)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(ScalingState {
                d,
                trace,
                status,
                iterations,
            });
        }
        if iterations + 1 > n.saturating_sub(1) {
            return Err(Error::IterationAnomaly {
                n,
                bound: n.saturating_sub(1),
            });
        }
        let active = identify_active_set(h, &d, &tol);
        let sub = Subsystem::build(h, &d, &active);
        let solution = solve_subsystem(&sub, &tol)?;
        for (&i, v) in active.iter().zip(solution) {
            d[i] = v;
        }
        iterations += 1;
        trace.push(TraceStep {
            kind: StepKind::SubsystemUpdate(active),
            iteration: iterations,
            d_after: d.clone(),
            deficit_objective_after: h.deficit_objective(&d, rad)?,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::new(n.into(), d.into())
    }

    fn oscillating() -> PointMatrix<f64> {
        PointMatrix::from_rows(vec![
            vec![8.0, -1.0, -6.0],
            vec![-1.0, -2.0, 0.0],
            vec![-6.0, 0.0, 6.0],
        ])
        .unwrap()
    }

    /// Tridiagonal family with `h_11 = 2`, `h_nn = 0`,
    /// `h_kk = 4 (4^(k-1) - 1) / (2·4^(k-1) - 1)` and unit negative couplings.
    fn chain(n: usize) -> PointMatrix<Exact> {
        let h = SquareMatrix::from_fn(n, |i, j| {
            let k = i + 1;
            if i == j {
                if k == 1 {
                    q(2, 1)
                } else if k == n {
                    q(0, 1)
                } else {
                    let p = 1i64 << (2 * k - 2);
                    q(4 * (p - 1), 2 * p - 1)
                }
            } else if i.abs_diff(j) == 1 {
                q(-1, 1)
            } else {
                q(0, 1)
            }
        });
        PointMatrix::new(h).unwrap()
    }

    #[test]
    fn active_set_with_closure() {
        let h = oscillating();
        assert_eq!(identify_active_set(&h, &[1.0; 3], &1e-9), vec![0, 2]);
        let neg = PointMatrix::from_rows(vec![vec![-2.0]]).unwrap();
        assert!(identify_active_set(&neg, &[1.0], &1e-9).is_empty());
    }

    #[test]
    fn active_set_closure_chain() {
        // At d = (7/17, 14/17, 1, 1) only row 3 is strict; rows 2 and 1 are
        // exactly zero and join one after the other.
        let h = chain(4);
        let d = [q(7, 17), q(14, 17), q(1, 1), q(1, 1)];
        let hd = h.hd(&d);
        assert_eq!(hd[0], q(0, 1));
        assert_eq!(hd[1], q(0, 1));
        assert_eq!(hd[2], q(59, 527));
        assert_eq!(hd[3], q(-1, 1));
        assert_eq!(identify_active_set(&h, &d, &q(0, 1)), vec![0, 1, 2]);
    }

    #[test]
    fn subsystem_solves() {
        let s = Subsystem::<f64> {
            indices: vec![0, 2],
            h_sub: SquareMatrix::from_rows(vec![vec![8.0, -6.0], vec![-6.0, 6.0]]).unwrap(),
            rhs: vec![1.0, 0.0],
        };
        let x = solve_subsystem(&s, &1e-9).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - 0.5).abs() < 1e-15);

        let s = Subsystem::<f64> {
            indices: vec![0],
            h_sub: SquareMatrix::from_rows(vec![vec![2.0]]).unwrap(),
            rhs: vec![1.0],
        };
        assert_eq!(solve_subsystem(&s, &1e-9).unwrap(), vec![0.5]);

        let s = Subsystem::<f64> {
            indices: vec![0, 1],
            h_sub: SquareMatrix::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap(),
            rhs: vec![0.0, 0.0],
        };
        assert!(matches!(
            solve_subsystem(&s, &1e-9),
            Err(Error::SingularSubsystem { .. })
        ));
    }

    #[test]
    fn nonpositive_solution_reported() {
        let s = Subsystem::<f64> {
            indices: vec![3],
            h_sub: SquareMatrix::from_rows(vec![vec![2.0]]).unwrap(),
            rhs: vec![0.0],
        };
        assert!(matches!(
            solve_subsystem(&s, &1e-9),
            Err(Error::NonpositiveSolution { index: 4, .. })
        ));
    }

    #[test]
    fn subsystem_rhs_nonnegative() {
        let h = oscillating();
        let s = Subsystem::build(&h, &[1.0; 3], &[0, 2]);
        assert_eq!(s.rhs, vec![1.0, 0.0]);
        assert_eq!(s.h_sub.rows(), vec![vec![8.0, -6.0], vec![-6.0, 6.0]]);
    }

    #[test]
    fn oscillating_matrix_one_iteration() {
        let h = oscillating();
        let s = li2(&h, &[1.0; 3], &[1.0; 3], &Options::default()).unwrap();
        assert_eq!(s.iterations, 1);
        assert_eq!(s.status, Status::AllSaturated);
        assert_eq!(s.trace[0].kind, StepKind::SubsystemUpdate(vec![0, 2]));
        for (a, b) in s.d.iter().zip([0.5, 1.0, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((s.trace[0].deficit_objective_after - 2.5).abs() < 1e-12);
    }

    #[test]
    fn linear_chain_needs_n_minus_one() {
        let h = chain(4);
        let ones = vec![q(1, 1); 4];
        let s = li2(&h, &ones, &ones, &Options::default().with_tol(q(0, 1))).unwrap();
        assert_eq!(s.iterations, 3);
        assert_eq!(s.status, Status::AllSaturated);
        assert_eq!(
            s.d,
            vec![q(217, 586), q(434, 586), q(527, 586), q(1, 1)]
        );
        assert_eq!(h.hd(&s.d), vec![q(0, 1), q(0, 1), q(0, 1), q(-527, 586)]);
        assert_eq!(s.trace[0].d_after[0], q(1, 2));
    }

    #[test]
    fn convex_input_untouched() {
        let h = PointMatrix::<f64>::from_rows(vec![vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        let s = li2(&h, &[1.0, 1.0], &[1.0, 1.0], &Options::default()).unwrap();
        assert_eq!(s.status, Status::Convex);
        assert_eq!(s.iterations, 0);
        assert_eq!(s.d, vec![1.0, 1.0]);
    }

    #[test]
    fn iteration_cap_before_anomaly() {
        let h = chain(4);
        let ones = vec![q(1, 1); 4];
        let opts = Options::default().with_tol(q(0, 1)).with_max_iters(2);
        let s = li2(&h, &ones, &ones, &opts).unwrap();
        assert_eq!(s.status, Status::IterationCap);
        assert_eq!(s.iterations, 2);
    }
}
