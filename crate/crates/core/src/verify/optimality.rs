use serde::Serialize;

use crate::error::{Error, Result};
use crate::gersch::{check_positive, nonpositive_radius, nonpositive_scaling, PointMatrix};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationCheck<T> {
    pub pass: bool,
    /// Row with the largest `(H'c)_i`, 0-based.
    pub worst_row: usize,
    pub worst_value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCheck<T> {
    pub pass: bool,
    /// Smallest `c_i` over `I*`, or `None` when `I*` is empty.
    pub common_ratio: Option<T>,
    pub max_deviation: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCheck {
    pub pass: bool,
    /// `(i, j)` with `i` outside `I*`, `j` inside and `c_i > c_j`.
    pub violation: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionCheck {
    pub pass: bool,
    /// A row with nonnegative normalized row sum that lies in `I*`.
    pub violating_row: Option<usize>,
}

/// Verdicts of the four necessary conditions on a candidate scaling `d`.
///
/// Everything is evaluated in normalized coordinates `H' = normalize(H, rad)`,
/// `c = d / rad`, rescaled so that `max c = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityReport<T> {
    /// Strictly over-saturated rows, `(H'c)_i < -tol`; 0-based.
    pub i_star: Vec<usize>,
    pub c: Vec<T>,
    pub normalized_hd: Vec<T>,
    /// `H'c <= tol`.
    pub saturation: SaturationCheck<T>,
    /// `c` is constant on `I*`.
    pub equal_on_i_star: EqualityCheck<T>,
    /// `c_i <= c_j` for `i` outside and `j` inside `I*`.
    pub dominance: DominanceCheck,
    /// No originally unsaturated row belongs to `I*`.
    pub diag_dominant_exclusion: ExclusionCheck,
    /// `d_i rad_i <= d_j rad_j` across the `I*` boundary. Informational only.
    pub unnormalized_dominance: bool,
    pub tol: T,
}

impl<T: Scalar> OptimalityReport<T> {
    pub fn all_pass(&self) -> bool {
        self.saturation.pass
            && self.equal_on_i_star.pass
            && self.dominance.pass
            && self.diag_dominant_exclusion.pass
    }
}

pub fn check_optimality<T: Scalar>(
    h: &PointMatrix<T>,
    d: &[T],
    rad: &[T],
    tol: &T,
) -> Result<OptimalityReport<T>> {
    let n = h.dim();
    for v in [d, rad] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    check_positive(d, nonpositive_scaling)?;
    check_positive(rad, nonpositive_radius)?;

    let hn = h.normalize(rad)?;
    let raw: Vec<T> = d.iter().zip(rad).map(|(a, b)| a.clone() / b.clone()).collect();
    let top = raw.iter().cloned().fold(T::zero(), scalar::max);
    let c: Vec<T> = raw.iter().map(|x| x.clone() / top.clone()).collect();
    let hc = hn.hd(&c);
    let neg_tol = -tol.clone();

    let i_star: Vec<usize> = (0..n).filter(|&i| hc[i] < neg_tol).collect();
    let in_star = |i: usize| i_star.binary_search(&i).is_ok();

    let worst_row = (0..n)
        .reduce(|a, b| if hc[b] > hc[a] { b } else { a })
        .unwrap_or(0);
    let saturation = SaturationCheck {
        pass: hc[worst_row] <= *tol,
        worst_row,
        worst_value: hc[worst_row].clone(),
    };

    let star_values = i_star.iter().map(|&i| c[i].clone());
    let lo = star_values.clone().reduce(scalar::min);
    let hi = star_values.reduce(scalar::max);
    let max_deviation = match (&lo, &hi) {
        (Some(lo), Some(hi)) => hi.clone() - lo.clone(),
        _ => T::zero(),
    };
    let equal_on_i_star = EqualityCheck {
        pass: max_deviation <= *tol,
        common_ratio: lo,
        max_deviation,
    };

    let outside: Vec<usize> = (0..n).filter(|&i| !in_star(i)).collect();
    let violation = outside.iter().find_map(|&i| {
        i_star
            .iter()
            .find(|&&j| c[i] > c[j].clone() + tol.clone())
            .map(|&j| (i, j))
    });
    let dominance = DominanceCheck {
        pass: violation.is_none(),
        violation,
    };

    let ones = vec![T::one(); n];
    let row_sums = hn.hd(&ones);
    let violating_row = (0..n).find(|&k| row_sums[k] >= neg_tol && in_star(k));
    let diag_dominant_exclusion = ExclusionCheck {
        pass: violating_row.is_none(),
        violating_row,
    };

    let unnormalized_dominance = outside.iter().all(|&i| {
        i_star
            .iter()
            .all(|&j| d[i].clone() * rad[i].clone() <= d[j].clone() * rad[j].clone())
    });

    Ok(OptimalityReport {
        i_star,
        c,
        normalized_hd: hc,
        saturation,
        equal_on_i_star,
        dominance,
        diag_dominant_exclusion,
        unnormalized_dominance,
        tol: tol.clone(),
    })
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

    #[test]
    fn known_optimum_passes() {
        let r = check_optimality(&oscillating(), &[0.5, 1.0, 0.5], &[1.0; 3], &1e-9).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.i_star, vec![1]);
        assert_eq!(r.normalized_hd, vec![0.0, -2.5, 0.0]);
        assert_eq!(r.equal_on_i_star.common_ratio, Some(1.0));
    }

    #[test]
    fn starting_point_fails_saturation() {
        let r = check_optimality(&oscillating(), &[1.0; 3], &[1.0; 3], &1e-9).unwrap();
        assert!(!r.saturation.pass);
        assert_eq!(r.saturation.worst_row, 0);
        assert_eq!(r.saturation.worst_value, 1.0);
    }

    #[test]
    fn closed_form_chain_vector_fails_saturation() {
        let h = PointMatrix::from_rows(vec![
            vec![q(2, 1), q(-1, 1), q(0, 1), q(0, 1)],
            vec![q(-1, 1), q(12, 7), q(-1, 1), q(0, 1)],
            vec![q(0, 1), q(-1, 1), q(60, 31), q(-1, 1)],
            vec![q(0, 1), q(0, 1), q(-1, 1), q(0, 1)],
        ])
        .unwrap();
        let d = [q(1, 2), q(7, 8), q(31, 32), q(1, 1)];
        let r = check_optimality(&h, &d, &vec![q(1, 1); 4], &q(0, 1)).unwrap();
        assert!(!r.saturation.pass);
        assert_eq!(r.saturation.worst_row, 0);
        assert_eq!(r.saturation.worst_value, q(1, 8));
    }

    #[test]
    fn violations_are_located() {
        // Rows 1 and 3 in I* with different c; row 2 outside with a larger c.
        let h = PointMatrix::from_rows(vec![
            vec![-5.0, -1.0, 0.0],
            vec![-1.0, 1.0, -1.0],
            vec![0.0, -1.0, -5.0],
        ])
        .unwrap();
        let r = check_optimality(&h, &[0.5, 1.0, 0.25], &[1.0; 3], &1e-9).unwrap();
        assert_eq!(r.i_star, vec![0, 2]);
        assert!(!r.equal_on_i_star.pass);
        assert!((r.equal_on_i_star.max_deviation - 0.25f64).abs() < 1e-15);
        assert_eq!(r.dominance.violation, Some((1, 0)));
        assert!(r.diag_dominant_exclusion.pass);
    }

    #[test]
    fn dominant_row_in_i_star_is_flagged() {
        // Row 1 has row sum 1 >= 0 but is pushed negative by a large d_2.
        let h = PointMatrix::from_rows(vec![vec![3.0, -2.0], vec![-2.0, -1.0]]).unwrap();
        let r = check_optimality(&h, &[1.0, 4.0], &[1.0, 1.0], &1e-9).unwrap();
        assert_eq!(r.diag_dominant_exclusion.violating_row, Some(0));
    }

    #[test]
    fn scale_of_d_is_irrelevant() {
        let a = check_optimality(&oscillating(), &[0.5, 1.0, 0.5], &[1.0; 3], &1e-9).unwrap();
        let b = check_optimality(&oscillating(), &[2.0, 4.0, 2.0], &[1.0; 3], &1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert_eq!(
            check_optimality(&oscillating(), &[0.0, 1.0, 1.0], &[1.0; 3], &1e-9),
            Err(Error::NonpositiveScaling { index: 1 })
        );
        assert_eq!(
            check_optimality(&oscillating(), &[1.0; 3], &[1.0, -1.0, 1.0], &1e-9),
            Err(Error::NonpositiveRadius { index: 2 })
        );
    }
}
