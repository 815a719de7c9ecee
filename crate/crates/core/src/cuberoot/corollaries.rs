//! Closed-form sums for three special shifts, computed directly from their
//! binomial sums rather than from the recurrence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::binomial;

fn check_alpha(alpha: &BigInt) -> Result<()> {
    if alpha < &BigInt::one() {
        return Err(Error::domain(format!("alpha must be at least 1, got {alpha}")));
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    Ok(())
}

/// `sum over 2i + 3j <= n of C(i+j, j) C(n-i-2j, i+j) 3^(n-i-3j) (alpha-1)^(i+2j)`.
pub fn a1_sum(alpha: &BigInt, n: u64) -> BigInt {
    let am1 = alpha - BigInt::one();
    let three = BigInt::from(3);
    let mut total = BigInt::zero();
    let mut j = 0u64;
    while 3 * j <= n {
        let mut i = 0u64;
        while 2 * i + 3 * j <= n {
            let c = binomial(i + j, j) * binomial(n - i - 2 * j, i + j);
            if !c.is_zero() {
                total += c * three.pow((n - i - 3 * j) as u32) * am1.pow((i + 2 * j) as u32);
            }
            i += 1;
        }
        j += 1;
    }
    total
}

/// `1 + (alpha - 1) a_{n-1} / a_n` with the shift fixed at 1.
pub fn corollary_a1(alpha: &BigInt, n: u64) -> Result<BigRational> {
    check_alpha(alpha)?;
    check_n(n)?;
    let (prev, cur) = (a1_sum(alpha, n - 1), a1_sum(alpha, n));
    if cur.is_zero() {
        return Err(Error::domain(format!("a_{n} vanishes")));
    }
    Ok(BigRational::one() + BigRational::new((alpha - BigInt::one()) * prev, cur))
}

/// The two split sums for the zero shift:
/// `a_n = sum_{i=0..n} C(2n+i, 2n-2i) 27^i alpha^(2n+i) (alpha+1)^(2n-2i)` and
/// `b_n = sum_{i=0..n-1} C(2n+i, 2n-2i-1) 3^(3i+1) alpha^(2n+i) (alpha+1)^(2n-2i-1)`.
pub fn a0_sums(alpha: &BigInt, n: u64) -> (BigInt, BigInt) {
    let ap1 = alpha + BigInt::one();
    let three = BigInt::from(3);
    let mut a = BigInt::zero();
    for i in 0..=n {
        a += binomial(2 * n + i, 2 * n - 2 * i)
            * three.pow(3 * i as u32)
            * alpha.pow((2 * n + i) as u32)
            * ap1.pow((2 * n - 2 * i) as u32);
    }
    let mut b = BigInt::zero();
    for i in 0..n {
        b += binomial(2 * n + i, 2 * n - 2 * i - 1)
            * three.pow((3 * i + 1) as u32)
            * alpha.pow((2 * n + i) as u32)
            * ap1.pow((2 * n - 2 * i - 1) as u32);
    }
    (a, b)
}

/// `1 + (alpha - 1) / (a_n / b_n + 1)` with the shift fixed at 0.
pub fn corollary_a0(alpha: &BigInt, n: u64) -> Result<BigRational> {
    check_alpha(alpha)?;
    check_n(n)?;
    let (a, b) = a0_sums(alpha, n);
    let den = &a + &b;
    if b.is_zero() || den.is_zero() {
        return Err(Error::domain("zero-shift sums degenerate"));
    }
    Ok(BigRational::one() + BigRational::new((alpha - BigInt::one()) * b, den))
}

/// `sum_{i=0..floor(n/3)} C(n-2i, i) 3^(n-3i) alpha^(n-i) (alpha-1)^(2i)`.
pub fn alpha_sq_sum(alpha: &BigInt, n: u64) -> BigInt {
    let am1 = alpha - BigInt::one();
    let three = BigInt::from(3);
    (0..=n / 3)
        .map(|i| {
            binomial(n - 2 * i, i)
                * three.pow((n - 3 * i) as u32)
                * alpha.pow((n - i) as u32)
                * am1.pow(2 * i as u32)
        })
        .sum()
}

/// `1 + (alpha^2 - 1) / (a_n / a_{n-1} - alpha + 1)`, tending to `alpha^(2/3)`.
/// `None` when the ratio is undefined.
pub fn corollary_alpha_sq(alpha: &BigInt, n: u64) -> Result<Option<BigRational>> {
    check_alpha(alpha)?;
    check_n(n)?;
    let (prev, cur) = (alpha_sq_sum(alpha, n - 1), alpha_sq_sum(alpha, n));
    let den = &cur - (alpha - BigInt::one()) * &prev;
    if prev.is_zero() || den.is_zero() {
        return Ok(None);
    }
    Ok(Some(
        BigRational::one() + BigRational::new((alpha * alpha - BigInt::one()) * prev, den),
    ))
}
