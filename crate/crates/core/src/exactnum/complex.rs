use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::interval::Interval;
use super::roots::pow2;

/// Rectangular complex enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn real(re: Interval) -> Self {
        let bits = re.bits();
        ComplexInterval {
            re,
            im: Interval::from_i64(0, bits),
        }
    }

    pub fn one(bits: u32) -> Self {
        Self::real(Interval::from_i64(1, bits))
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, k: &Interval) -> Self {
        ComplexInterval {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    /// `None` when `|o|^2` cannot be separated from zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let den = o.norm_sqr();
        let num = self.mul(&o.conj());
        Some(ComplexInterval {
            re: num.re.div(&den)?,
            im: num.im.div(&den)?,
        })
    }

    pub fn conj(&self) -> Self {
        ComplexInterval {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::one(self.bits());
        let mut base = self.clone();
        let mut e = k;
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

    pub fn norm_sqr(&self) -> Interval {
        self.re.pow(2).add(&self.im.pow(2))
    }

    pub fn abs(&self) -> Interval {
        self.norm_sqr().sqrt().expect("norm is nonnegative")
    }
}

/// Enclosure of pi via Machin's formula.
pub fn pi(bits: u32) -> Interval {
    let a = atan_inv(5, bits);
    let b = atan_inv(239, bits);
    a.mul_int(&BigInt::from(16)).sub(&b.mul_int(&BigInt::from(4)))
}

/// `atan(1/x)` for integer `x > 1`, from the alternating series with the
/// first omitted term as the tail bound.
fn atan_inv(x: u64, bits: u32) -> Interval {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let eps = BigRational::new(BigInt::one(), pow2(bits + 2));
    let mut sum = Interval::from_i64(0, bits);
    let mut power = x.clone();
    let mut j: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &power * BigInt::from(2 * j + 1));
        if term < eps {
            let tail = Interval::from_rational(&term, bits);
            return sum.widen(tail.hi_scaled());
        }
        let t = Interval::from_rational(&term, bits);
        sum = if j % 2 == 0 { sum.add(&t) } else { sum.sub(&t) };
        power *= &x2;
        j += 1;
    }
}

/// Enclosure of `exp(2 pi i k / m)`.
pub fn root_of_unity(k: i64, m: u64, bits: u32) -> ComplexInterval {
    let m_i = m as i64;
    let mut r = k.rem_euclid(m_i);
    // exact special angles
    if r == 0 {
        return ComplexInterval::one(bits);
    }
    if 2 * r == m_i {
        return ComplexInterval::real(Interval::from_i64(-1, bits));
    }
    if 4 * r == m_i {
        return ComplexInterval {
            re: Interval::from_i64(0, bits),
            im: Interval::from_i64(1, bits),
        };
    }
    if 4 * r == 3 * m_i {
        return ComplexInterval {
            re: Interval::from_i64(0, bits),
            im: Interval::from_i64(-1, bits),
        };
    }
    if 2 * r > m_i {
        r -= m_i;
    }
    let work = bits + 32;
    let angle = pi(work)
        .mul_int(&BigInt::from(2 * r))
        .div_int(&BigInt::from(m));
    let (c, s) = cos_sin(&angle);
    ComplexInterval {
        re: c.with_bits(bits),
        im: s.with_bits(bits),
    }
}

/// Taylor series for `|x| <= 4` with a rigorous tail bound.
fn cos_sin(x: &Interval) -> (Interval, Interval) {
    let bits = x.bits();
    let eps = BigRational::new(BigInt::one(), pow2(bits + 2));
    let four = BigRational::from_integer(BigInt::from(4));
    let mut cos = Interval::from_i64(0, bits);
    let mut sin = Interval::from_i64(0, bits);
    let mut term = Interval::from_i64(1, bits);
    let mut bound = BigRational::one();
    let mut j: u64 = 0;
    loop {
        match j % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        j += 1;
        term = term.mul(x).div_int(&BigInt::from(j));
        bound = bound * &four / BigRational::from_integer(BigInt::from(j));
        if bound < eps && j > 2 {
            break;
        }
    }
    // every omitted term is bounded by 4^j / j!, and the terms decrease
    // geometrically from here on, so twice the first bound covers the tail
    let tail = Interval::from_rational(&(bound * BigRational::from_integer(2.into())), bits);
    let w = tail.hi_scaled().clone();
    (cos.widen(&w), sin.widen(&w))
}

#[cfg(test)]
pub(crate) fn interval_is_zero_within(iv: &Interval, tol: &BigRational) -> bool {
    let neg = -tol.clone();
    iv.lo() >= neg && iv.hi() <= *tol && !num_traits::Zero::is_zero(tol)
}
