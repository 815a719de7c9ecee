//! Fitted convergence rates next to the predicted ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Format;
use crate::cubic::{self, CubicProblem};
use crate::cuberoot::{optimal_a, CubeRootProblem};
use crate::error::Result;
use crate::exactnum::{abs_error, FixedReal};
use crate::mthroot::{self, MthRootProblem};
use crate::oracle;
use crate::report::{interval_log2, step_ratio_rate, RATE_BITS};

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub method: &'static str,
    pub problem: String,
    pub empirical: Option<FixedReal>,
    pub predicted: Option<FixedReal>,
    /// `empirical / predicted - 1`.
    pub relative_gap: Option<FixedReal>,
}

fn row(method: &'static str, problem: String, empirical: Option<f64>, predicted: Option<FixedReal>) -> BenchRow {
    let gap = match (empirical, &predicted) {
        (Some(e), Some(p)) if p.to_f64() > 0.0 => Some(e / p.to_f64() - 1.0),
        _ => None,
    };
    BenchRow {
        method,
        problem,
        empirical: empirical.map(|e| FixedReal::from_f64(e, RATE_BITS)),
        predicted,
        relative_gap: gap.map(|g| FixedReal::from_f64(g, RATE_BITS)),
    }
}

/// Rate of `|r_n - alpha^(1/3)|` from six-step ratios over `n` in `[24, 60]`.
pub fn cube_root_rate(alpha: &BigInt, bits: u32) -> Result<(BigInt, Option<f64>, FixedReal)> {
    let a = optimal_a(alpha)?.chosen;
    let prob = CubeRootProblem::new(alpha.clone(), a.clone())?;
    let target = oracle::nth_root(alpha, 3, bits + 32)?.to_interval();
    let logs: BTreeMap<u64, f64> = prob
        .iter()
        .run_to(60)
        .into_iter()
        .filter_map(|(n, r)| interval_log2(&abs_error(&r, &target)).map(|l| (n, l)))
        .collect();
    Ok((a, step_ratio_rate(&logs, 6, 24, 60), prob.predicted_rate(32)?))
}

pub fn run_bench(seed: u64, bits: u32) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphas: Vec<i64> = vec![2, 3, 5, 10, 100, 1000];
    alphas.push(rng.gen_range(2..=1_000_000));
    let cube: Vec<Result<BenchRow>> = alphas
        .par_iter()
        .map(|&alpha| {
            let (a, emp, pred) = cube_root_rate(&BigInt::from(alpha), bits)?;
            Ok(row("cbrt", format!("alpha={alpha} a={a}"), emp, Some(pred)))
        })
        .collect();

    let cubics: Vec<Result<BenchRow>> = [(1i64, 1i64), (2, 3), (5, 7), (9, 27)]
        .par_iter()
        .map(|&(p, q)| {
            let prob = CubicProblem::new(p, q)?;
            let rep = cubic::convergence_report(&prob, 80, bits)?;
            let emp = rep.rate_estimate.as_ref().map(FixedReal::to_f64);
            Ok(row("cubic", format!("p={p} q={q}"), emp, rep.predicted_rate))
        })
        .collect();

    let mth: Vec<Result<BenchRow>> = (2..=6u32)
        .into_par_iter()
        .map(|m| {
            let prob = MthRootProblem::with_default_a(10, m)?;
            let r = mthroot::approximate_root_with(&prob, bits / 2, mthroot::DEFAULT_N_CAP, bits)?;
            let emp = r.report.rate_estimate.as_ref().map(FixedReal::to_f64);
            Ok(row("mthroot", format!("alpha=10 m={m} a={}", prob.a()), emp, r.report.predicted_rate))
        })
        .collect();

    cube.into_iter().chain(cubics).chain(mth).collect()
}

pub fn render(rows: &[BenchRow], format: Format) -> String {
    let fmt = |x: &Option<FixedReal>| x.as_ref().map(|v| format!("{:.6}", v.to_f64())).unwrap_or_default();
    let gap = |g: &Option<FixedReal>| g.as_ref().map(|g| format!("{:+.4}", g.to_f64())).unwrap_or_default();
    let mut s = String::new();
    match format {
        Format::Json => {
            s = serde_json::to_string_pretty(rows).expect("bench rows serialize");
            s.push('\n');
        }
        Format::Csv => {
            writeln!(s, "method,problem,empirical,predicted,relative_gap").unwrap();
            for r in rows {
                let fields = [
                    r.method.to_string(),
                    r.problem.clone(),
                    fmt(&r.empirical),
                    fmt(&r.predicted),
                    gap(&r.relative_gap),
                ];
                writeln!(s, "{}", fields.join(",")).unwrap();
            }
        }
        Format::Text => {
            writeln!(s, "{:<8} {:<24} {:>10} {:>10} {:>9}", "method", "problem", "empirical", "predicted", "gap").unwrap();
            for r in rows {
                writeln!(
                    s,
                    "{:<8} {:<24} {:>10} {:>10} {:>9}",
                    r.method,
                    r.problem,
                    fmt(&r.empirical),
                    fmt(&r.predicted),
                    gap(&r.relative_gap)
                )
                .unwrap();
            }
        }
    }
    s
}
