//! Exact arithmetic in `Q(alpha^(1/3))`: `x + y theta + z theta^2` with
//! `theta^3 = alpha`. Used to detect exact ties that interval refinement
//! could never separate.

use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicSurd {
    alpha: BigInt,
    c: [BigRational; 3],
}

impl CubicSurd {
    pub fn new(alpha: &BigInt, c: [BigRational; 3]) -> Self {
        CubicSurd {
            alpha: alpha.clone(),
            c,
        }
    }

    pub fn from_ints(alpha: &BigInt, x: BigInt, y: BigInt, z: BigInt) -> Self {
        Self::new(
            alpha,
            [x, y, z].map(BigRational::from_integer),
        )
    }

    pub fn coefficients(&self) -> &[BigRational; 3] {
        &self.c
    }

    /// Zero exactly when all coefficients vanish, provided `alpha` is not a
    /// perfect cube (then `1, theta, theta^2` are independent over `Q`).
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl Mul for &CubicSurd {
    type Output = CubicSurd;

    fn mul(self, o: &CubicSurd) -> CubicSurd {
        let mut prod: [BigRational; 5] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] += &self.c[i] * &o.c[j];
            }
        }
        let al = BigRational::from_integer(self.alpha.clone());
        let [p0, p1, p2, p3, p4] = prod;
        CubicSurd {
            alpha: self.alpha.clone(),
            c: [p0 + &al * p3, p1 + al * p4, p2],
        }
    }
}

impl Sub for &CubicSurd {
    type Output = CubicSurd;

    fn sub(self, o: &CubicSurd) -> CubicSurd {
        CubicSurd {
            alpha: self.alpha.clone(),
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
            ],
        }
    }
}

/// Numerator and denominator of `h(a)`:
/// `(a^2 - alpha) + (alpha - a) theta + (1 - a) theta^2` over `(a + theta + theta^2)^2`.
pub fn h_parts(alpha: &BigInt, a: &BigInt) -> (CubicSurd, CubicSurd) {
    let num = CubicSurd::from_ints(alpha, a * a - alpha, alpha - a, BigInt::from(1) - a);
    let base = CubicSurd::from_ints(alpha, a.clone(), 1.into(), 1.into());
    (num, &base * &base)
}

/// Whether `h(a1) = h(a2)` holds exactly.
pub fn h_equal(alpha: &BigInt, a1: &BigInt, a2: &BigInt) -> bool {
    let (n1, d1) = h_parts(alpha, a1);
    let (n2, d2) = h_parts(alpha, a2);
    (&(&n1 * &d2) - &(&n2 * &d1)).is_zero()
}
