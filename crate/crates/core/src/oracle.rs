//! Reference real roots by bisection over exact rationals.
//!
//! Nothing here touches matrix powers or coefficient sequences, so these
//! values can be used to judge the matrix iterations.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::FixedReal;

/// A polynomial `a_0 + a_1 x + ... + a_m x^m` with a bracket around one root.
#[derive(Clone, Debug)]
pub struct RootQuery {
    /// Ascending order: `coeffs[i]` multiplies `x^i`.
    pub coeffs: Vec<BigInt>,
    pub lo: BigRational,
    pub hi: BigRational,
    pub bits: u32,
}

impl RootQuery {
    pub fn new(coeffs: Vec<BigInt>, lo: BigRational, hi: BigRational, bits: u32) -> Self {
        RootQuery { coeffs, lo, hi, bits }
    }

    pub fn from_i64(coeffs: &[i64], lo: i64, hi: i64, bits: u32) -> Self {
        Self::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            BigRational::from_integer(lo.into()),
            BigRational::from_integer(hi.into()),
            bits,
        )
    }
}

/// Exact polynomial value at a rational point.
pub fn eval_poly(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Sign of `f(p/q)` from the integer `q^m f(p/q)`; `q > 0` always holds for
/// a normalized rational.
pub fn sign_at(coeffs: &[BigInt], x: &BigRational) -> Ordering {
    let (p, q) = (x.numer(), x.denom());
    // sum c_i p^i q^(m-i), accumulated Horner-style from the top
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * p + c * &qpow;
        qpow *= q;
    }
    acc.cmp(&BigInt::zero())
}

/// Bisect to `|result - root| < 2^-bits`, evaluating signs exactly.
///
/// An endpoint or midpoint that is an exact root ends the search with that
/// value.
pub fn bisect_root(q: &RootQuery) -> Result<FixedReal> {
    let (lo, hi) = bisect_bracket(q)?;
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    Ok(FixedReal::from_rational(&mid, q.bits))
}

/// The final bracket: either a single exact root or width `< 2^-(bits+1)`.
pub fn bisect_bracket(q: &RootQuery) -> Result<(BigRational, BigRational)> {
    if q.coeffs.iter().all(Zero::is_zero) {
        return Err(Error::domain("zero polynomial has no isolated root"));
    }
    let (mut lo, mut hi) = if q.lo <= q.hi {
        (q.lo.clone(), q.hi.clone())
    } else {
        (q.hi.clone(), q.lo.clone())
    };
    let s_lo = sign_at(&q.coeffs, &lo);
    let s_hi = sign_at(&q.coeffs, &hi);
    if s_lo == Ordering::Equal {
        return Ok((lo.clone(), lo));
    }
    if s_hi == Ordering::Equal {
        return Ok((hi.clone(), hi));
    }
    if s_lo == s_hi {
        return Err(Error::domain(format!("no sign change on [{lo}, {hi}]")));
    }
    let target = BigRational::new(BigInt::one(), BigInt::one() << (q.bits as usize + 1));
    let two = BigRational::from_integer(2.into());
    while &hi - &lo >= target {
        let mid = (&lo + &hi) / &two;
        match sign_at(&q.coeffs, &mid) {
            Ordering::Equal => return Ok((mid.clone(), mid)),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok((lo, hi))
}

/// Cauchy bound `1 + max |a_i / a_m|`.
pub fn cauchy_bound(coeffs: &[BigInt]) -> Result<BigRational> {
    let lead = coeffs
        .last()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::domain("leading coefficient must be nonzero"))?;
    let lead = BigRational::from_integer(lead.abs());
    let max = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| BigRational::from_integer(c.abs()) / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    Ok(BigRational::one() + max)
}

/// A sign-change bracket for the largest real root found by sampling
/// `[-B, B]` at step `2^-10 B`, scanning downward from `B`.
///
/// `None` means the sampling saw no sign change; that is inconclusive, not a
/// proof that no real root exists. An exact zero at a sample point comes back
/// as a degenerate bracket.
pub fn bracket_real_root(coeffs: &[BigInt]) -> Option<(BigRational, BigRational)> {
    let bound = cauchy_bound(coeffs).ok()?;
    let steps: i64 = 1 << 11;
    let step = &bound / BigRational::from_integer(BigInt::from(1 << 10));
    let point = |j: i64| &bound - &step * BigRational::from_integer(j.into());
    let mut prev_x = point(0);
    let mut prev = sign_at(coeffs, &prev_x);
    if prev == Ordering::Equal {
        return Some((prev_x.clone(), prev_x));
    }
    for j in 1..=steps {
        let x = point(j);
        let s = sign_at(coeffs, &x);
        if s == Ordering::Equal {
            return Some((x.clone(), x));
        }
        if s != prev {
            return Some((x, prev_x));
        }
        prev = s;
        prev_x = x;
    }
    None
}

/// Bracket then bisect; `None` if no bracket is found.
pub fn real_root(coeffs: &[BigInt], bits: u32) -> Result<Option<FixedReal>> {
    match bracket_real_root(coeffs) {
        None => Ok(None),
        Some((lo, hi)) => bisect_root(&RootQuery::new(coeffs.to_vec(), lo, hi, bits)).map(Some),
    }
}

/// `alpha^(1/m)` for `alpha >= 1` by bisection of `x^m - alpha` on `[1, alpha]`.
pub fn nth_root(alpha: &BigInt, m: u32, bits: u32) -> Result<FixedReal> {
    if m == 0 || alpha < &BigInt::one() {
        return Err(Error::domain("nth_root oracle needs m >= 1 and alpha >= 1"));
    }
    let mut coeffs = vec![BigInt::zero(); m as usize + 1];
    coeffs[0] = -alpha.clone();
    coeffs[m as usize] = BigInt::one();
    bisect_root(&RootQuery::new(
        coeffs,
        BigRational::one(),
        BigRational::from_integer(alpha.clone()),
        bits,
    ))
}
