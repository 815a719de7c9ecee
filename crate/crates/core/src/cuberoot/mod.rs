//! Cube roots from powers of `[[a, alpha, alpha], [1, a, alpha], [1, 1, a]]`.

mod corollaries;
mod optimal;
mod problem;
mod surd;

pub use corollaries::{
    a0_sums, a1_sum, alpha_sq_sum, corollary_a0, corollary_a1, corollary_alpha_sq,
};
pub use optimal::{
    a_bar_expr, error_model_check, error_model_report, main_term_complex, optimal_a,
    optimal_a_with, signature, ErrorModelReport, OptimalParamReport,
};
pub use problem::{
    acond_bound, gamma_delta_rho, h_expr, make_cuberoot_iter, power_matrix_form,
    ratio_limit_exponent, ratio_limit_general, CubeRootIterState, CubeRootProblem,
};
pub use surd::{h_equal, h_parts, CubicSurd};

use crate::error::Result;
use crate::oracle;
use crate::report::ConvergenceReport;

/// Run the iteration through index `upto` and tabulate it against the
/// bisection value of `alpha^(1/3)`.
pub fn convergence_report(problem: &CubeRootProblem, upto: u64, bits: u32) -> Result<ConvergenceReport> {
    let rows = problem.iter().run_to(upto);
    let target = oracle::nth_root(problem.alpha(), 3, bits + 32)?.to_interval();
    let predicted = problem.predicted_rate(32)?;
    Ok(ConvergenceReport::build(&rows, Some(&target), bits, Some(predicted)))
}
