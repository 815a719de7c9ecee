//! Convergence tables and geometric rate estimates.
//!
//! Rates are statistics over `log2 |error|` and are computed in `f64`; they
//! are reported, never used to decide correctness of an approximant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::exactnum::{abs_error, log2_abs, rational_to_decimal, FixedReal, Interval};

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// How an iteration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The exact root was found (perfect power).
    Exact,
    /// Successive approximants agreed to the requested precision.
    Converged,
    /// The iteration cap was reached first; the last value is partial.
    Unconverged,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::Converged => "converged",
            Status::Unconverged => "unconverged",
        })
    }
}

/// Decimal places shown for approximants in tables.
pub const DECIMAL_PLACES: usize = 5;

/// Trailing window used for the per-row rate column.
pub const RATE_WINDOW: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub n: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub num: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub den: BigInt,
    pub decimal: String,
    pub abs_error: Option<FixedReal>,
    /// `(|e_n| / |e_{n-w}|)^(1/w)` over the trailing window.
    pub rate_window: Option<FixedReal>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub precision_bits: u32,
    pub rows: Vec<ReportRow>,
    pub rate_estimate: Option<FixedReal>,
    pub predicted_rate: Option<FixedReal>,
}

/// Precision claimed for `f64` rate statistics.
pub const RATE_BITS: u32 = 32;

impl ConvergenceReport {
    /// Tabulate approximants against an optional oracle enclosure.
    ///
    /// `oracle` should be at least `bits + 32` bits wide so the rounded error
    /// is honest to `bits`.
    pub fn build(
        approximants: &[(u64, BigRational)],
        oracle: Option<&Interval>,
        bits: u32,
        predicted_rate: Option<FixedReal>,
    ) -> Self {
        let mut rows = Vec::with_capacity(approximants.len());
        let mut log_errors: Vec<(u64, f64)> = Vec::new();
        let floor = -(bits as f64) + 16.0;
        for (n, r) in approximants {
            let err = oracle.map(|o| abs_error(r, o));
            let abs_err = err
                .as_ref()
                .and_then(|e| FixedReal::from_interval(e, bits.min(e.bits())));
            if let Some(e) = &err {
                let l = interval_log2(e);
                if let Some(l) = l.filter(|&l| l > floor) {
                    log_errors.push((*n, l));
                }
            }
            let rate_window = trailing_rate(&log_errors, *n, RATE_WINDOW as u64)
                .map(|r| FixedReal::from_f64(r, RATE_BITS));
            rows.push(ReportRow {
                n: *n,
                num: r.numer().clone(),
                den: r.denom().clone(),
                decimal: rational_to_decimal(r, DECIMAL_PLACES),
                abs_error: abs_err,
                rate_window,
            });
        }
        let tail_start = log_errors.len() - log_errors.len() / 3;
        let tail = if log_errors.len() >= 3 {
            &log_errors[tail_start.min(log_errors.len() - 3)..]
        } else {
            &log_errors[..]
        };
        let rate_estimate = least_squares_rate(tail).map(|r| FixedReal::from_f64(r, RATE_BITS));
        ConvergenceReport {
            precision_bits: bits,
            rows,
            rate_estimate,
            predicted_rate,
        }
    }
}

/// `log2` of the midpoint of a positive enclosure; `None` if it touches zero.
pub fn interval_log2(iv: &Interval) -> Option<f64> {
    if !iv.lo_scaled().is_positive() {
        return None;
    }
    let mid = (iv.lo_scaled() + iv.hi_scaled()) / BigInt::from(2);
    Some(log2_abs(&mid) - iv.bits() as f64)
}

fn trailing_rate(log_errors: &[(u64, f64)], n: u64, window: u64) -> Option<f64> {
    let (last_n, last) = *log_errors.last()?;
    if last_n != n {
        return None;
    }
    let (first_n, first) = log_errors
        .iter()
        .rev()
        .find(|(m, _)| *m + window <= n)
        .copied()?;
    let span = (n - first_n) as f64;
    Some(2f64.powf((last - first) / span))
}

/// Geometric rate `2^slope` from a least-squares line through `(n, log2 e_n)`.
pub fn least_squares_rate(points: &[(u64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| 2f64.powf(sxy / sxx))
}

/// Geometric mean of `(|e_{n+step}| / |e_n|)^(1/step)` for `n` in `from..=to-step`.
pub fn step_ratio_rate(log_errors: &BTreeMap<u64, f64>, step: u64, from: u64, to: u64) -> Option<f64> {
    let mut acc = 0.0;
    let mut count = 0usize;
    for n in from..=to.checked_sub(step)? {
        let (a, b) = (log_errors.get(&n)?, log_errors.get(&(n + step))?);
        acc += (b - a) / step as f64;
        count += 1;
    }
    (count > 0).then(|| 2f64.powf(acc / count as f64))
}
