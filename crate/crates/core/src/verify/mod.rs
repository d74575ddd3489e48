//! Checks on candidate scalings: the necessary optimality conditions, a
//! brute-force grid oracle for small matrices, a harness comparing the set
//! heuristic with that oracle, and sampling of the resulting underestimator.

mod conjecture;
mod optimality;
mod oracle;
mod underest;

pub use conjecture::{compare_with_oracle, conjecture_test, irreducible_instance, ConjectureReport, Counterexample};
pub use optimality::{
    check_optimality, DominanceCheck, EqualityCheck, ExclusionCheck, OptimalityReport, SaturationCheck,
};
pub use oracle::{oracle_min, OracleResult, ORACLE_MAX_DIM};
pub use underest::{underestimation_check, UnderestimationReport};
