//! Real roots of `x^3 - p x - q` from powers of `[[1, p, q], [1, 1, 0], [0, 1, 1]]`,
//! and the reduction of a general cubic to that form.

mod depress;
mod problem;

pub use depress::{depress, BackMap, Depressed, GeneralCubic};
pub use problem::{
    cardano_parts, cardano_reference, cubic_power_matrix, make_cubic_iter, subdominant_ratio,
    CubicCardano, CubicIter, CubicProblem,
};

use crate::error::{Error, Result};
use crate::oracle;
use crate::report::ConvergenceReport;

/// Run through index `upto` and tabulate against the bisection root.
pub fn convergence_report(prob: &CubicProblem, upto: u64, bits: u32) -> Result<ConvergenceReport> {
    let rows = prob.iter().run_to(upto);
    let target = oracle::real_root(&prob.coefficients(), bits + 32)?
        .ok_or_else(|| Error::Verification("no bracket found for the real root".into()))?
        .to_interval();
    let predicted = subdominant_ratio(prob, 32)?;
    Ok(ConvergenceReport::build(&rows, Some(&target), bits, Some(predicted)))
}
