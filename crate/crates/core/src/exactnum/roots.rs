use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::FixedReal;
use crate::error::{Error, Result};

/// Largest `r` with `r^m <= x`.
///
/// Negative `x` is accepted for odd `m` (the result is still the floor of the
/// real root); even `m` with negative `x` is a domain error.
pub fn integer_root_floor(x: &BigInt, m: u32) -> Result<BigInt> {
    if m < 2 {
        return Err(Error::domain(format!("root index must be >= 2, got {m}")));
    }
    if !x.is_negative() {
        return Ok(x.nth_root(m));
    }
    if m % 2 == 0 {
        return Err(Error::domain("even root of a negative integer"));
    }
    // nth_root truncates toward zero; step down when that overshoots.
    let mut r = x.nth_root(m);
    if r.pow(m) > *x {
        r -= 1;
    }
    Ok(r)
}

/// Smallest `r` with `r^m >= x`, for `x >= 0`.
pub(crate) fn integer_root_ceil(x: &BigInt, m: u32) -> BigInt {
    debug_assert!(!x.is_negative());
    let r = x.nth_root(m);
    if r.pow(m) == *x {
        r
    } else {
        r + 1
    }
}

/// The exact `m`-th root of `x` when `x` is a perfect power.
pub fn exact_root(x: &BigInt, m: u32) -> Option<BigInt> {
    if x.is_negative() && m % 2 == 0 {
        return None;
    }
    let r = integer_root_floor(x, m).ok()?;
    (r.pow(m) == *x).then_some(r)
}

/// `alpha^(1/m)` to within `2^-bits`, as the floor of the scaled root.
pub fn fixed_nth_root(alpha: &BigInt, m: u32, bits: u32) -> Result<FixedReal> {
    if !alpha.is_positive() {
        return Err(Error::domain("fixed_nth_root needs alpha > 0"));
    }
    if bits == 0 {
        return Err(Error::domain("precision must be positive"));
    }
    let scaled = alpha << (bits as usize * m as usize);
    let mantissa = integer_root_floor(&scaled, m)?;
    Ok(FixedReal::new(mantissa, bits))
}

pub(crate) fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

pub(crate) fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    x.div_floor(&pow2(k))
}

pub(crate) fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    x.div_ceil(&pow2(k))
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
