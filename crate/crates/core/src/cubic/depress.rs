use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::problem::CubicProblem;
use crate::error::{Error, Result};
use crate::report::ser_bigint;

/// `a x^3 + b x^2 + c x + d` with `a != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralCubic {
    #[serde(serialize_with = "ser_bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub b: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub c: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub d: BigInt,
}

impl GeneralCubic {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        GeneralCubic {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    /// Ascending coefficients `[d, c, b, a]`.
    pub fn coefficients(&self) -> Vec<BigInt> {
        vec![self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone()]
    }
}

/// `y -> (sign * y - b) / (3a)`, taking a root of the supported depressed
/// cubic back to a root of the original.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BackMap {
    /// `-1` when `x -> -x` was used to make `q` positive.
    pub sign: i8,
    #[serde(serialize_with = "ser_bigint")]
    pub b: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub three_a: BigInt,
}

impl BackMap {
    pub fn apply(&self, y: &BigRational) -> BigRational {
        let y = if self.sign < 0 { -y.clone() } else { y.clone() };
        (y - BigRational::from_integer(self.b.clone())) / BigRational::from_integer(self.three_a.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Depressed {
    /// `9ac - 3b^2` in `y^3 + P y + Q`.
    #[serde(serialize_with = "ser_bigint")]
    pub big_p: BigInt,
    /// `2b^3 - 9abc + 27a^2 d`.
    #[serde(serialize_with = "ser_bigint")]
    pub big_q: BigInt,
    pub back_map: BackMap,
}

impl Depressed {
    /// `y^3 - p y - q` with `p, q > 0`, flipping `y -> -y` if that is what
    /// makes `q` positive; unsupported otherwise.
    pub fn problem(&self) -> Result<CubicProblem> {
        let p = -self.big_p.clone();
        let q = if self.back_map.sign < 0 {
            self.big_q.clone()
        } else {
            -self.big_q.clone()
        };
        CubicProblem::new(p, q)
    }
}

/// Reduce to `y^3 + P y + Q`, whose roots are `3a x_i + b`.
///
/// The returned map already accounts for the sign flip chosen so that the
/// problem lands in the supported regime, when one exists; call
/// [`Depressed::problem`] to obtain it or the unsupported-regime error.
pub fn depress(g: &GeneralCubic) -> Result<Depressed> {
    if g.a.is_zero() {
        return Err(Error::domain("leading coefficient a must be nonzero"));
    }
    let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
    let big_p = BigInt::from(9) * a * c - BigInt::from(3) * b * b;
    let big_q = BigInt::from(2) * b * b * b - BigInt::from(9) * a * b * c + BigInt::from(27) * a * a * d;
    // y^3 + P y + Q has q = -Q; if that is negative, y -> -y gives q = Q
    let sign = if big_q.is_positive() { -1 } else { 1 };
    Ok(Depressed {
        big_p,
        big_q,
        back_map: BackMap {
            sign,
            b: b.clone(),
            three_a: BigInt::from(3) * a,
        },
    })
}
