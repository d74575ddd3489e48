use std::fs;
use std::path::Path;

use alphabb::experiment::{run_experiment, Family, TrialStats};
use alphabb::expr::interval_hessian;
use alphabb::io::{self, IoError, MatrixInput};
use alphabb::scaling::{li1, li2, per_block, BlockwiseState, Options};
use alphabb::verify::{check_optimality, conjecture_test, oracle_min, underestimation_check, OptimalityReport};
use alphabb::{Error, PointMatrix64, Status};
use serde_json::{json, Value};

/// A failed command: exit code, message for standard error and, for
/// failures that still produced a result (counterexamples, anomalies), the
/// JSON document to print.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub output: Option<String>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
            output: None,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SingularSubsystem { .. }
        | Error::NonpositiveSolution { .. }
        | Error::RowSaturated { .. }
        | Error::DegenerateRow { .. } => 2,
        Error::AsymmetricInput { .. }
        | Error::Reducible { .. }
        | Error::NonpositiveRadius { .. }
        | Error::NonpositiveScaling { .. } => 3,
        Error::IterationAnomaly { .. } => 4,
        _ => 1,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
            output: None,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Model(e) => e.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn load_matrix(path: &Path) -> Result<MatrixInput, Failure> {
    Ok(io::parse_matrix(&read(path)?)?)
}

fn load_radius(box_path: Option<&Path>, n: usize) -> Result<Vec<f64>, Failure> {
    match box_path {
        None => Ok(vec![1.0; n]),
        Some(p) => {
            let b = io::parse_box(&read(p)?)?;
            if b.dim() != n {
                return Err(Failure::usage(format!("box has dimension {}, matrix has {n}", b.dim())));
            }
            Ok(b.radius())
        }
    }
}

fn blockwise(h: &PointMatrix64, rad: &[f64], use_li2: bool, opts: &Options<f64>) -> Result<BlockwiseState<f64>, Failure> {
    let out = if use_li2 {
        per_block(h, rad, rad, |b, d, r| li2(b, d, r, opts))
    } else {
        per_block(h, rad, rad, |b, d, r| li1(b, d, r, opts))
    };
    Ok(out?)
}

/// Resolves a `--d` strategy: `radius`, `li1`, `li2` or `@file.json`.
fn resolve_d(h: &PointMatrix64, rad: &[f64], strategy: &str) -> Result<Vec<f64>, Failure> {
    match strategy {
        "radius" => Ok(rad.to_vec()),
        "li1" => Ok(blockwise(h, rad, false, &Options::default())?.d),
        "li2" => Ok(blockwise(h, rad, true, &Options::default())?.d),
        s if s.starts_with('@') => {
            let d = io::parse_d(&read(Path::new(&s[1..]))?)?;
            if d.len() != h.dim() {
                return Err(Failure::usage(format!(
                    "scaling vector has {} entries, matrix dimension is {}",
                    d.len(),
                    h.dim()
                )));
            }
            Ok(d)
        }
        other => Err(Failure::usage(format!(
            "unknown --d strategy '{other}' (expected radius, li1, li2 or @file.json)"
        ))),
    }
}

fn check_strict(h: &PointMatrix64, strict: bool) -> Result<(), Failure> {
    let blocks = h.decompose_blocks().len();
    if strict && blocks > 1 {
        return Err(Error::Reducible { blocks }.into());
    }
    Ok(())
}

pub fn pointmat(matrix: &Path) -> CmdResult {
    let h = load_matrix(matrix)?.point_matrix()?;
    Ok(render(&io::point_matrix_json(&h)))
}

pub fn hessian(expr: &Path, box_path: &Path) -> CmdResult {
    let (n, f) = io::parse_expr_file(&read(expr)?)?;
    let b = io::parse_box(&read(box_path)?)?;
    if b.dim() != n {
        return Err(Failure::usage(format!("box has dimension {}, expression has {n}", b.dim())));
    }
    let im = interval_hessian(&f, &b)?;
    Ok(render(&io::interval_matrix_json(&im)))
}

pub fn alpha(matrix: &Path, strategy: &str, box_path: Option<&Path>) -> CmdResult {
    let h = load_matrix(matrix)?.point_matrix()?;
    let rad = load_radius(box_path, h.dim())?;
    let d = resolve_d(&h, &rad, strategy)?;
    let alpha = h.alpha(&d)?;
    Ok(render(&json!({
        "alpha": alpha.values(),
        "d": d,
        "alpha_objective": h.alpha_objective(&d, &rad)?,
        "deficit_objective": h.deficit_objective(&d, &rad)?,
    })))
}

fn overall_status(state: &BlockwiseState<f64>) -> &'static str {
    let first = state.states.first().map(|s| s.status).unwrap_or(Status::Convex);
    if state.states.iter().all(|s| s.status == first) {
        first.as_str()
    } else {
        "mixed"
    }
}

pub fn improve(
    matrix: &Path,
    use_li2: bool,
    tol: Option<f64>,
    max_iters: Option<usize>,
    trace: bool,
    strict: bool,
    box_path: Option<&Path>,
) -> CmdResult {
    let h = load_matrix(matrix)?.point_matrix()?;
    check_strict(&h, strict)?;
    let rad = load_radius(box_path, h.dim())?;
    let opts = Options {
        tol,
        max_iters,
        ..Options::default()
    };
    let state = blockwise(&h, &rad, use_li2, &opts)?;
    let blocks: Vec<Value> = state
        .blocks
        .iter()
        .zip(&state.states)
        .map(|(b, s)| {
            json!({
                "indices": io::one_based(b),
                "status": s.status.as_str(),
                "iterations": s.iterations,
            })
        })
        .collect();
    let mut out = json!({
        "method": if use_li2 { "li2" } else { "li1" },
        "status": overall_status(&state),
        "iterations": state.max_iterations(),
        "d": state.d,
        "alpha": h.alpha(&state.d)?.values(),
        "alpha_objective": h.alpha_objective(&state.d, &rad)?,
        "deficit_objective": h.deficit_objective(&state.d, &rad)?,
        "blocks": blocks,
    });
    if trace {
        out["trace"] = io::trace_json(&state.trace);
    }
    Ok(render(&out))
}

fn report_json(r: &OptimalityReport<f64>, block: &[usize]) -> Value {
    let global = |i: usize| block[i] + 1;
    json!({
        "i_star": r.i_star.iter().map(|&i| global(i)).collect::<Vec<_>>(),
        "c": r.c,
        "normalized_hd": r.normalized_hd,
        "c1_saturation": {
            "pass": r.saturation.pass,
            "worst_row": global(r.saturation.worst_row),
            "worst_value": r.saturation.worst_value,
        },
        "c2_equal_on_i_star": {
            "pass": r.equal_on_i_star.pass,
            "common_ratio": r.equal_on_i_star.common_ratio,
            "max_deviation": r.equal_on_i_star.max_deviation,
        },
        "c3_dominance": {
            "pass": r.dominance.pass,
            "violation": r.dominance.violation.map(|(i, j)| [global(i), global(j)]),
        },
        "c4_diag_dominant_exclusion": {
            "pass": r.diag_dominant_exclusion.pass,
            "violating_row": r.diag_dominant_exclusion.violating_row.map(global),
        },
        "unnormalized_dominance": r.unnormalized_dominance,
        "tol": r.tol,
        "all_pass": r.all_pass(),
    })
}

pub fn check(matrix: &Path, strategy: &str, tol: Option<f64>, strict: bool, box_path: Option<&Path>) -> CmdResult {
    if !strategy.starts_with('@') {
        return Err(Failure::usage("check expects --d @file.json"));
    }
    let h = load_matrix(matrix)?.point_matrix()?;
    check_strict(&h, strict)?;
    let rad = load_radius(box_path, h.dim())?;
    let d = resolve_d(&h, &rad, strategy)?;
    let mut all_pass = true;
    let mut blocks = Vec::new();
    for block in h.decompose_blocks() {
        let pick = |v: &[f64]| block.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let sub = h.principal(&block);
        let (sub_d, sub_rad) = (pick(&d), pick(&rad));
        let tol = match tol {
            Some(t) => t,
            None => sub.normalize(&sub_rad)?.saturation_tol(),
        };
        let report = check_optimality(&sub, &sub_d, &sub_rad, &tol)?;
        all_pass &= report.all_pass();
        blocks.push(json!({
            "indices": io::one_based(&block),
            "report": report_json(&report, &block),
        }));
    }
    Ok(render(&json!({ "d": d, "all_pass": all_pass, "blocks": blocks })))
}

pub fn oracle(matrix: &Path, grid: f64, box_path: Option<&Path>) -> CmdResult {
    let h = load_matrix(matrix)?.point_matrix()?;
    let rad = load_radius(box_path, h.dim())?;
    let r = oracle_min(&h, &rad, grid)?;
    Ok(render(&serde_json::to_value(r).expect("oracle result serializes")))
}

pub fn conjecture(n: usize, trials: u64, seed: u64, grid: f64) -> CmdResult {
    let report = conjecture_test(n, trials, seed, grid)?;
    let mut out = serde_json::to_value(&report).expect("report serializes");
    if let Some(list) = out["counterexamples"].as_array_mut() {
        for c in list {
            let h = c["h"].take();
            c["h"] = json!({ "n": n, "h": h });
        }
    }
    let text = render(&out);
    if report.failures > 0 {
        return Err(Failure {
            code: 4,
            message: format!("{} counterexample(s) found", report.failures),
            output: Some(text),
        });
    }
    Ok(text)
}

pub fn underest(expr: &Path, box_path: &Path, strategy: &str, samples: usize, seed: u64) -> CmdResult {
    let (n, f) = io::parse_expr_file(&read(expr)?)?;
    let b = io::parse_box(&read(box_path)?)?;
    if b.dim() != n {
        return Err(Failure::usage(format!("box has dimension {}, expression has {n}", b.dim())));
    }
    let h = PointMatrix64::from_interval(&interval_hessian(&f, &b)?)?;
    let rad = b.radius();
    let d = resolve_d(&h, &rad, strategy)?;
    let alpha = h.alpha(&d)?;
    let report = underestimation_check(&f, &b, alpha.values(), samples, seed)?;
    Ok(render(&json!({
        "d": d,
        "alpha": alpha.values(),
        "report": report,
    })))
}

fn table(rows: &[TrialStats], ns: &[usize], families: &[Family]) -> String {
    let mut header = format!("{:>4}", "n");
    for f in families {
        header += &format!("  {:>16}  {:>4}", format!("{f} avg"), "max");
    }
    let mut lines = vec![header];
    for &n in ns {
        let mut line = format!("{n:>4}");
        for &f in families {
            let s = rows.iter().find(|s| s.n == n && s.family == f).expect("every row was run");
            let avg = s.average_iterations.map_or("-".to_string(), |a| format!("{a:.4}"));
            line += &format!("  {avg:>16}  {:>4}", s.max_iterations);
        }
        lines.push(line);
    }
    lines.join("\n")
}

pub fn experiment(ns: &[usize], families: &[Family], trials: u64, seed: u64, as_table: bool) -> CmdResult {
    let mut rows = Vec::new();
    for &f in families {
        for &n in ns {
            rows.push(run_experiment(n, f, trials, seed)?);
        }
    }
    let text = if as_table {
        table(&rows, ns, families)
    } else if rows.len() == 1 {
        render(&serde_json::to_value(&rows[0]).expect("stats serialize"))
    } else {
        render(&serde_json::to_value(&rows).expect("stats serialize"))
    };
    let anomalies: usize = rows.iter().map(|s| s.anomalies.len()).sum();
    if anomalies > 0 {
        return Err(Failure {
            code: 4,
            message: format!("{anomalies} trial(s) raised an anomaly"),
            output: Some(text),
        });
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::SingularSubsystem { rows: vec![1], pivot: 0.0 }), 2);
        assert_eq!(exit_code(&Error::NonpositiveSolution { index: 1, value: 0.0 }), 2);
        assert_eq!(exit_code(&Error::AsymmetricInput { row: 1, col: 2 }), 3);
        assert_eq!(exit_code(&Error::Reducible { blocks: 2 }), 3);
        assert_eq!(exit_code(&Error::NonpositiveRadius { index: 1 }), 3);
        assert_eq!(exit_code(&Error::IterationAnomaly { n: 3, bound: 2 }), 4);
        assert_eq!(exit_code(&Error::Syntax { position: 1, message: String::new() }), 1);
        assert_eq!(exit_code(&Error::DimensionTooLarge { n: 5, max: 4 }), 1);
    }

    #[test]
    fn table_layout() {
        let stats = |n, family| TrialStats {
            n,
            family,
            trials_requested: 10,
            trials_counted: 4,
            skipped: 6,
            average_iterations: Some(1.25),
            max_iterations: 2,
            seed: 1,
            anomalies: vec![],
        };
        let rows = vec![stats(3, Family::General), stats(3, Family::Tridiagonal)];
        let t = table(&rows, &[3], &[Family::General, Family::Tridiagonal]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("general avg") && lines[0].contains("tridiagonal avg"));
        assert_eq!(lines[0].len(), lines[1].len());
        assert!(lines[1].contains("1.2500"));
    }
}
