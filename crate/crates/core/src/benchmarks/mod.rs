//! Offline optimum solvers and test oracles.

mod lp;
mod mix;
mod oracle;
mod theta_star;

pub use lp::{brute_force_lp, solve_lp_discrete, LpClass, LpParams, LpSolution, LP_FEAS_TOL};
pub use mix::{grid_search_thm1_mix, solve_thm1_mix, MixLp, MixSolution};
pub use oracle::{
    brute_force_sample_path_opt, realization_benchmark, RealizationBenchmark, SamplePathOpt,
    MAX_ENUM_HORIZON, MAX_ORACLE_SLOTS,
};
pub use theta_star::{opt_value_repeated, solve_theta_star, ThetaStarKind, ThetaStarSolution};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("value is not constant across atoms")]
    NotConstantValue,
    #[error("{0} slots is too many for exhaustive search")]
    TooManySlots(usize),
    #[error("invalid LP parameters: {0}")]
    Lp(&'static str),
}
