//! Arithmetic substrate: unbounded integers and rationals, outward-rounded
//! dyadic intervals, fixed-point reals, and adaptive comparison of rationals
//! against real radical expressions.

mod complex;
mod expr;
mod fixed;
mod interval;
mod roots;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use complex::{pi, root_of_unity, ComplexInterval};
pub use expr::{
    adaptive_compare, adaptive_floor, adaptive_sign, EvalFailure, Expr, PrecisionPolicy,
    PRECISION_CAP_ENV,
};
pub use fixed::FixedReal;
pub use interval::Interval;
pub use roots::{binomial, exact_root, fixed_nth_root, integer_root_floor};

#[cfg(test)]
pub(crate) use complex::interval_is_zero_within;
pub(crate) use roots::pow2;

pub type ExactInteger = BigInt;
pub type ExactRational = BigRational;

/// `x * 2^-bits` as an `f64`. Display and statistics only.
pub(crate) fn scaled_to_f64(x: &BigInt, bits: u32) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * 2f64.powf(log2_abs(x) - bits as f64)
}

/// `log2 |x|` for nonzero `x`, without overflow for huge magnitudes.
pub fn log2_abs(x: &BigInt) -> f64 {
    let x = x.abs();
    let len = x.bits();
    if len <= 60 {
        let v: u64 = x.try_into().unwrap_or(0);
        return (v as f64).log2();
    }
    let shift = len - 60;
    let top: u64 = (&x >> shift as usize).try_into().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// `log2 |x|` for a nonzero rational.
pub fn log2_abs_rational(x: &BigRational) -> f64 {
    log2_abs(x.numer()) - log2_abs(x.denom())
}

/// Decimal string with `digits` places after the point, rounded half away
/// from zero.
pub fn rational_to_decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let r = scaled.round().to_integer();
    let (int_part, frac_part) = r.div_rem(&scale);
    let sign = if x.is_negative() && !r.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Absolute difference between an exact rational and the interval enclosure
/// of a target value, as an enclosure at the same precision.
pub fn abs_error(approx: &BigRational, target: &Interval) -> Interval {
    Interval::from_rational(approx, target.bits())
        .sub(target)
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_strings() {
        let r = BigRational::new(29.into(), 23.into());
        assert_eq!(rational_to_decimal(&r, 5), "1.26087");
        assert_eq!(rational_to_decimal(&BigRational::from_integer(2.into()), 3), "2.000");
        let n = BigRational::new((-1).into(), 3.into());
        assert_eq!(rational_to_decimal(&n, 4), "-0.3333");
        assert_eq!(rational_to_decimal(&n, 0), "0");
    }

    #[test]
    fn logs_of_large_values() {
        let x = BigInt::from(1) << 1000usize;
        assert!((log2_abs(&x) - 1000.0).abs() < 1e-9);
        let r = BigRational::new(BigInt::from(3), BigInt::from(1) << 500usize);
        assert!((log2_abs_rational(&r) - (3f64.log2() - 500.0)).abs() < 1e-9);
    }
}
