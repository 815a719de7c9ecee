use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::surd::h_equal;
use super::problem::{gamma_delta_rho, h_expr, theta, CubeRootProblem};
use crate::error::{Error, Result};
use crate::exactnum::{
    adaptive_compare, adaptive_floor, exact_root, root_of_unity, ComplexInterval, Expr, FixedReal, Interval,
    PrecisionPolicy,
};
use crate::report::ser_bigint;

/// Bits used for reported diagnostics.
const REPORT_BITS: u32 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct OptimalParamReport {
    #[serde(serialize_with = "ser_bigint")]
    pub alpha: BigInt,
    /// `(alpha^(1/3) + alpha) / (1 + alpha^(1/3))`.
    pub a_bar: FixedReal,
    #[serde(serialize_with = "ser_pair")]
    pub candidates: (BigInt, BigInt),
    #[serde(serialize_with = "ser_bigint")]
    pub chosen: BigInt,
    pub h_at_chosen: FixedReal,
    /// `sqrt(h(chosen))`.
    pub predicted_rate: FixedReal,
    /// `h(a_bar) = (theta - 1)^2 / (4 (1 + theta + theta^2))`.
    pub h_min: FixedReal,
    /// `chosen - a_bar`.
    pub eta: FixedReal,
    /// `g(eta)` with `h(chosen) = 1/4 + 3/4 g(eta)`.
    pub g_eta: FixedReal,
    /// `|delta_1| = |delta_2|` where `beta_2/beta_1 = -omega/2 + delta_1/theta`.
    pub delta1_abs: FixedReal,
}

fn ser_pair<S: serde::Serializer>(p: &(BigInt, BigInt), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&p.0.to_string())?;
    t.serialize_element(&p.1.to_string())?;
    t.end()
}

pub fn a_bar_expr(alpha: &BigInt) -> Expr {
    let t = theta(alpha);
    (t.clone() + Expr::int(alpha.clone())) / (Expr::int(1) + t)
}

/// The better of the two integers around `a_bar`; ties go to the smaller.
pub fn optimal_a(alpha: &BigInt) -> Result<OptimalParamReport> {
    optimal_a_with(alpha, &PrecisionPolicy::from_env())
}

pub fn optimal_a_with(alpha: &BigInt, policy: &PrecisionPolicy) -> Result<OptimalParamReport> {
    if alpha <= &BigInt::one() {
        return Err(Error::domain(format!("alpha must exceed 1, got {alpha}")));
    }
    let a_bar = a_bar_expr(alpha);
    let lo = adaptive_floor(&a_bar, policy)?;
    let hi = if a_bar.eval_exact().is_some_and(|v| v.is_integer()) {
        lo.clone()
    } else {
        &lo + 1
    };
    // exact ties occur (alpha = 2 has h(1) = h(2)); interval refinement
    // alone would never settle them
    let tie = lo == hi || (exact_root(alpha, 3).is_none() && h_equal(alpha, &lo, &hi));
    let chosen = if tie {
        lo.clone()
    } else {
        match adaptive_compare(&h_expr(alpha, &lo), &h_expr(alpha, &hi), policy)? {
            Ordering::Greater => hi.clone(),
            _ => lo.clone(),
        }
    };
    let h = h_expr(alpha, &chosen);
    let t = theta(alpha);
    let h_min = (t.clone() - Expr::int(1)).pow(2)
        / (Expr::int(4) * (Expr::int(1) + t.clone() + t.clone().pow(2)));
    let eta = Expr::int(chosen.clone()) - a_bar.clone();
    let g_eta = (Expr::int(4) * h.clone() - Expr::int(1)) / Expr::int(3);
    let delta1_abs = delta1_abs(alpha, &chosen, policy)?;
    Ok(OptimalParamReport {
        alpha: alpha.clone(),
        a_bar: a_bar.to_fixed(REPORT_BITS, policy)?,
        candidates: (lo, hi),
        h_at_chosen: h.to_fixed(REPORT_BITS, policy)?,
        predicted_rate: h.sqrt().to_fixed(REPORT_BITS, policy)?,
        h_min: h_min.to_fixed(REPORT_BITS, policy)?,
        eta: eta.to_fixed(REPORT_BITS, policy)?,
        g_eta: g_eta.to_fixed(REPORT_BITS, policy)?,
        delta1_abs,
        chosen,
    })
}

/// `|(beta_2/beta_1 + omega/2) theta|` by complex interval arithmetic.
fn delta1_abs(alpha: &BigInt, a: &BigInt, policy: &PrecisionPolicy) -> Result<FixedReal> {
    let bits = REPORT_BITS + 64;
    let t = theta(alpha).enclose(bits, policy)?.with_bits(bits);
    let w = root_of_unity(1, 3, bits);
    let w2 = root_of_unity(2, 3, bits);
    let a = Interval::from_int(a, bits);
    let beta1 = a.add(&t).add(&t.mul(&t));
    let beta2 = ComplexInterval::real(a)
        .add(&w.scale(&t))
        .add(&w2.scale(&t.mul(&t)));
    let ratio = beta2
        .div(&ComplexInterval::real(beta1))
        .ok_or(Error::UnresolvedComparison { cap_bits: bits })?;
    let half = Interval::from_rational(&BigRational::new(1.into(), 2.into()), bits);
    let delta = ratio.add(&w.scale(&half)).scale(&t);
    FixedReal::from_interval(&delta.abs(), REPORT_BITS).ok_or(Error::UnresolvedComparison { cap_bits: bits })
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorModelReport {
    #[serde(serialize_with = "ser_bigint")]
    pub alpha: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub a: BigInt,
    pub n: u64,
    /// `A_{n,2,1} / A_{n,3,1} - alpha^(1/3)`.
    pub lhs: FixedReal,
    pub main_term: FixedReal,
    /// `8n / 2^n + 48 alpha^(1/3) / 4^n`.
    pub residual_bound: FixedReal,
    /// `|lhs - main_term|`.
    pub residual: FixedReal,
    pub signature: i8,
    /// `2^n (2^n (A_{n,2,1} / (A_{n,3,1} alpha^(1/3)) - 1) - signature)`.
    pub k_n: FixedReal,
    /// `alpha > 2^(4n)`.
    pub remark_applies: bool,
    pub holds: bool,
    pub k_n_within_61: bool,
}

/// `-3`, `0` or `+3` by `n mod 6`.
pub fn signature(n: u64) -> i8 {
    match n % 6 {
        1 | 2 => -3,
        4 | 5 => 3,
        _ => 0,
    }
}

/// Compare the entry ratio of `A^n` at the optimal shift with its
/// asymptotic expansion. A violated bound is an error carrying the report.
pub fn error_model_check(alpha: &BigInt, n: u64, bits: u32) -> Result<ErrorModelReport> {
    let report = error_model_report(alpha, n, bits)?;
    if !report.holds {
        let dump = serde_json::to_string(&report).unwrap_or_default();
        return Err(Error::Verification(format!("error model bound violated: {dump}")));
    }
    Ok(report)
}

/// Same as [`error_model_check`] but returns the report either way.
pub fn error_model_report(alpha: &BigInt, n: u64, bits: u32) -> Result<ErrorModelReport> {
    if n < 3 {
        return Err(Error::domain(format!("error model needs n >= 3, got {n}")));
    }
    let policy = PrecisionPolicy::from_env();
    let a = optimal_a_with(alpha, &policy)?.chosen;
    let problem = CubeRootProblem::with_policy(alpha.clone(), a.clone(), policy)?;
    let (_, delta, rho) = gamma_delta_rho(&problem, n);
    if rho.is_zero() {
        return Err(Error::Verification(format!("A_(n,3,1) vanishes at n = {n}")));
    }
    // K_n scales the error by 4^n
    let work = bits + 64 + 2 * n as u32;
    let t = theta(alpha).enclose(work, &policy)?.with_bits(work);
    let ratio = Interval::from_rational(&BigRational::new(delta, rho), work);
    let lhs = ratio.sub(&t);

    let sig = signature(n);
    let two_n = BigInt::one() << n as usize;
    let main = t.mul_int(&BigInt::from(sig)).div_int(&two_n);
    let residual = lhs.sub(&main).abs();
    let bound = Interval::from_rational(&BigRational::new(BigInt::from(8 * n), two_n.clone()), work)
        .add(&t.mul_int(&BigInt::from(48)).div_int(&(&two_n * &two_n)));
    let holds = residual.hi() <= bound.lo();

    // K_n = 2^n (2^n lhs / theta - sig)
    let scaled = lhs
        .mul_int(&two_n)
        .div(&t)
        .ok_or(Error::UnresolvedComparison { cap_bits: work })?;
    let k_n = scaled.sub(&Interval::from_i64(sig as i64, work)).mul_int(&two_n);
    let limit = BigRational::from_integer(61.into());
    let k_abs = k_n.abs();
    let k_n_within_61 = k_abs.hi() < limit;
    let remark_applies = alpha > &(BigInt::one() << (4 * n) as usize);

    let fixed = |iv: &Interval| {
        FixedReal::from_interval(iv, bits).ok_or(Error::UnresolvedComparison { cap_bits: work })
    };
    Ok(ErrorModelReport {
        alpha: alpha.clone(),
        a,
        n,
        lhs: fixed(&lhs)?,
        main_term: fixed(&main)?,
        residual_bound: fixed(&bound)?,
        residual: fixed(&residual)?,
        signature: sig,
        k_n: fixed(&k_n)?,
        remark_applies,
        holds,
        k_n_within_61,
    })
}

/// The main term through complex arithmetic:
/// `(omega - 1) omega ((-omega/2)^n - (-omega^2/2)^n) alpha^(1/3)`.
pub fn main_term_complex(theta: &Interval, n: u64) -> ComplexInterval {
    let bits = theta.bits();
    let w = root_of_unity(1, 3, bits);
    let w2 = root_of_unity(2, 3, bits);
    let neg_half = Interval::from_rational(&BigRational::new((-1).into(), 2.into()), bits);
    let x = w.scale(&neg_half).pow(n);
    let y = w2.scale(&neg_half).pow(n);
    w.sub(&ComplexInterval::one(bits))
        .mul(&w)
        .mul(&x.sub(&y))
        .scale(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::interval_is_zero_within;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn optimal_for_perfect_cubes() {
        let r = optimal_a(&8.into()).unwrap();
        assert_eq!(r.candidates, (3.into(), 4.into()));
        assert_eq!(r.chosen, 3.into());
        assert_eq!(r.h_at_chosen.to_rational(), FixedReal::from_rational(&q(1, 27), 64).to_rational());
        assert!(r.predicted_rate.to_decimal(4) == "0.1925");
        assert!(r.a_bar.to_decimal(6) == "3.333333");

        let r = optimal_a(&27.into()).unwrap();
        assert_eq!(r.candidates, (7.into(), 8.into()));
        assert_eq!(r.chosen, 8.into());
    }

    #[test]
    fn optimal_rates_stay_below_half() {
        for alpha in [2i64, 3, 5, 10, 100, 1000, 2999] {
            let r = optimal_a(&alpha.into()).unwrap();
            assert!(r.predicted_rate.to_f64() < 0.5);
            assert!(r.h_min.to_f64() <= r.h_at_chosen.to_f64() + 1e-15);
            assert!(r.eta.to_f64().abs() < 1.0);
            assert!(r.delta1_abs.to_f64() < 1.0);
        }
        assert!(optimal_a(&1.into()).is_err());
    }

    #[test]
    fn signature_agrees_with_complex_main_term() {
        let bits = 96;
        let t = Interval::from_i64(1, bits);
        for n in 1..=18u64 {
            let z = main_term_complex(&t, n);
            let want = BigRational::new(signature(n).into(), BigInt::one() << n as usize);
            let tol = q(1, 1 << 20);
            assert!(z.re.contains(&want) || interval_is_zero_within(&z.re.sub(&Interval::from_rational(&want, bits)), &tol));
            assert!(interval_is_zero_within(&z.im, &tol));
        }
    }

    #[test]
    fn error_model_small_grid() {
        for alpha in [2i64, 10, 1000] {
            for n in [3u64, 4, 7, 12, 20] {
                let r = error_model_check(&alpha.into(), n, 128).unwrap();
                assert!(r.holds);
            }
        }
    }

    #[test]
    fn remark_regime() {
        let alpha = BigInt::from((1i64 << 13) + 0);
        let r = error_model_report(&alpha, 3, 192).unwrap();
        assert_eq!(r.signature, 0);
        assert!(r.remark_applies);
        assert!(r.k_n_within_61);
        let alpha = BigInt::from(1_000_003);
        for n in [4u64, 5] {
            let r = error_model_report(&alpha, n, 192).unwrap();
            assert_eq!(r.signature, 3);
            assert!(r.k_n_within_61, "K_{n} = {}", r.k_n);
        }
    }
}
