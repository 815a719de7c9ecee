use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::roots::{integer_root_ceil, integer_root_floor, pow2, shr_ceil, shr_floor};

/// Closed interval `[lo, hi] * 2^-bits` with integer endpoints.
///
/// Every operation rounds outward, so the true value of any expression
/// evaluated through these operations stays inside the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

impl Interval {
    pub fn from_scaled(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, bits }
    }

    pub fn from_int(x: &BigInt, bits: u32) -> Self {
        let v = x << bits as usize;
        Interval {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn from_i64(x: i64, bits: u32) -> Self {
        Self::from_int(&BigInt::from(x), bits)
    }

    pub fn from_rational(x: &BigRational, bits: u32) -> Self {
        let scaled = x.numer() << bits as usize;
        let (lo, hi) = (scaled.div_floor(x.denom()), scaled.div_ceil(x.denom()));
        Interval { lo, hi, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.bits))
    }

    /// Width in units of `2^-bits`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    /// Sign when the interval excludes zero, `Equal` only for the point zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
            bits: self.bits,
        }
    }

    /// Widen symmetrically by `ulps` units of `2^-bits`.
    pub fn widen(&self, ulps: &BigInt) -> Interval {
        Interval {
            lo: &self.lo - ulps,
            hi: &self.hi + ulps,
            bits: self.bits,
        }
    }

    fn check(&self, other: &Interval) {
        assert_eq!(self.bits, other.bits, "interval precision mismatch");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: BigInt::zero(),
                hi: (-&self.lo).max(self.hi.clone()),
                bits: self.bits,
            }
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        self.check(other);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval {
            lo: shr_floor(min, self.bits),
            hi: shr_ceil(max, self.bits),
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Interval {
        assert!(!k.is_zero(), "division by zero");
        let candidates = [self.lo.div_floor(k), self.hi.div_floor(k)];
        let ceilings = [self.lo.div_ceil(k), self.hi.div_ceil(k)];
        Interval {
            lo: candidates.iter().min().unwrap().clone(),
            hi: ceilings.iter().max().unwrap().clone(),
            bits: self.bits,
        }
    }

    /// `None` when the divisor interval contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        self.check(other);
        if other.contains_zero() {
            return None;
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&self.lo, &self.hi] {
            let scaled = x << self.bits as usize;
            for y in [&other.lo, &other.hi] {
                let f = scaled.div_floor(y);
                let c = scaled.div_ceil(y);
                if lo.as_ref().map_or(true, |l| f < *l) {
                    lo = Some(f);
                }
                if hi.as_ref().map_or(true, |h| c > *h) {
                    hi = Some(c);
                }
            }
        }
        Some(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            bits: self.bits,
        })
    }

    pub fn pow(&self, k: u32) -> Interval {
        if k == 0 {
            return Interval::from_int(&BigInt::one(), self.bits);
        }
        if k % 2 == 0 {
            // even powers of a zero-straddling interval bottom out at zero
            let base = self.abs();
            return base.pow_odd_or_positive(k);
        }
        self.pow_odd_or_positive(k)
    }

    fn pow_odd_or_positive(&self, k: u32) -> Interval {
        let mut result = Interval::from_int(&BigInt::one(), self.bits);
        let mut base = self.clone();
        let mut e = k;
        // repeated squaring keeps the rounding count logarithmic; each step
        // multiplies intervals that are either both nonnegative or where the
        // generic endpoint rule applies
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Principal real `m`-th root; `None` when the interval lies entirely
    /// below zero and `m` is even. A straddling interval is clamped at zero.
    pub fn nth_root(&self, m: u32) -> Option<Interval> {
        assert!(m >= 1);
        if m == 1 {
            return Some(self.clone());
        }
        let shift = self.bits as usize * (m as usize - 1);
        if m % 2 == 0 {
            if self.hi.is_negative() {
                return None;
            }
            let lo = if self.lo.is_negative() {
                BigInt::zero()
            } else {
                integer_root_floor(&(&self.lo << shift), m).ok()?
            };
            let hi = integer_root_ceil(&(&self.hi << shift), m);
            return Some(Interval {
                lo,
                hi,
                bits: self.bits,
            });
        }
        let root_floor = |x: &BigInt| integer_root_floor(&(x << shift), m).unwrap();
        let root_ceil = |x: &BigInt| {
            if x.is_negative() {
                -integer_root_floor(&((-x) << shift), m).unwrap()
            } else {
                integer_root_ceil(&(x << shift), m)
            }
        };
        Some(Interval {
            lo: root_floor(&self.lo),
            hi: root_ceil(&self.hi),
            bits: self.bits,
        })
    }

    pub fn sqrt(&self) -> Option<Interval> {
        self.nth_root(2)
    }

    /// Re-express at a different precision, rounding outward.
    pub fn with_bits(&self, bits: u32) -> Interval {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (bits - self.bits) as usize;
                Interval {
                    lo: &self.lo << s,
                    hi: &self.hi << s,
                    bits,
                }
            }
            Ordering::Less => {
                let s = self.bits - bits;
                Interval {
                    lo: shr_floor(&self.lo, s),
                    hi: shr_ceil(&self.hi, s),
                    bits,
                }
            }
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: (&self.lo).max(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
            bits: self.bits,
        }
    }

    /// Midpoint as an `f64`, for display and statistics only.
    pub fn approx_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigInt::from(2);
        super::scaled_to_f64(&mid, self.bits)
    }
}
