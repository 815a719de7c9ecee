use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::interval::Interval;
use super::roots::pow2;

/// Binary fixed-point real: `mantissa * 2^-bits`, within one unit in the last
/// place of the quantity it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedReal {
    mantissa: BigInt,
    bits: u32,
}

impl FixedReal {
    pub fn new(mantissa: BigInt, bits: u32) -> Self {
        FixedReal { mantissa, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// Nearest representable value to an exact rational.
    pub fn from_rational(x: &BigRational, bits: u32) -> Self {
        let scaled = x * BigRational::from_integer(pow2(bits));
        FixedReal {
            mantissa: scaled.round().to_integer(),
            bits,
        }
    }

    /// Round an enclosure to `bits`. Fails when the enclosure is too wide to
    /// guarantee an error below `2^-bits`.
    pub fn from_interval(iv: &Interval, bits: u32) -> Option<Self> {
        if iv.bits() < bits {
            return None;
        }
        let drop = iv.bits() - bits;
        if iv.width_ulps() >= pow2(drop) {
            return None;
        }
        // round(mid * 2^bits) = floor((lo + hi + 2^drop) / 2^(drop + 1))
        let twice_mid = iv.lo_scaled() + iv.hi_scaled();
        let mantissa = (twice_mid + pow2(drop)).div_floor(&pow2(drop + 1));
        Some(FixedReal { mantissa, bits })
    }

    /// Lossy conversion for statistics that are only ever reported.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        let scaled = x * 2f64.powi(bits as i32);
        let mantissa = BigInt::from(scaled.round() as i128);
        FixedReal { mantissa, bits }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow2(self.bits))
    }

    /// Enclosure of the true value.
    pub fn to_interval(&self) -> Interval {
        Interval::from_scaled(
            &self.mantissa - 1,
            &self.mantissa + 1,
            self.bits,
        )
    }

    pub fn abs(&self) -> Self {
        FixedReal {
            mantissa: self.mantissa.abs(),
            bits: self.bits,
        }
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.mantissa > BigInt::from(1)
    }

    pub fn to_f64(&self) -> f64 {
        super::scaled_to_f64(&self.mantissa, self.bits)
    }

    /// Decimal rendering with `digits` places after the point, rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        super::rational_to_decimal(&self.to_rational(), digits)
    }

    /// Number of decimal places this precision honestly supports.
    pub fn decimal_places(&self) -> usize {
        // log10(2) ~ 0.30103
        ((self.bits as f64) * 0.30103).floor() as usize
    }
}

impl fmt::Display for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = self.decimal_places().min(40);
        f.write_str(&self.to_decimal(places))
    }
}

/// Serialized as `{ "value": "<decimal>", "bits": <precision> }` so every
/// number carries its precision.
impl Serialize for FixedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FixedReal", 2)?;
        st.serialize_field("value", &self.to_string())?;
        st.serialize_field("bits", &self.bits)?;
        st.end()
    }
}

impl Default for FixedReal {
    fn default() -> Self {
        FixedReal {
            mantissa: BigInt::zero(),
            bits: 1,
        }
    }
}
