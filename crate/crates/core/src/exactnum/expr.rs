use std::cmp::Ordering;
use std::ops;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::interval::Interval;
use super::roots::exact_root;
use super::FixedReal;
use crate::error::{Error, Result};

/// Environment variable that overrides the adaptive precision cap.
pub const PRECISION_CAP_ENV: &str = "KHOVANSKII_PRECISION_CAP";

/// Start and cap, in bits, for adaptive interval evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: 128,
            cap_bits: 4096,
        }
    }
}

impl PrecisionPolicy {
    /// Default policy with the cap taken from `KHOVANSKII_PRECISION_CAP`
    /// when that is set to a positive integer.
    pub fn from_env() -> Self {
        let mut policy = Self::default();
        if let Some(cap) = std::env::var(PRECISION_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&c| c > 0)
        {
            policy.cap_bits = cap;
            policy.start_bits = policy.start_bits.min(cap);
        }
        policy
    }

    fn schedule(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits;
        std::iter::successors(Some(self.start_bits.max(8)), move |&b| {
            (b < cap).then(|| (b * 2).min(cap))
        })
    }
}

/// Real algebraic expression over rational constants and real radicals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(BigRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Principal real root.
    Root(Box<Expr>, u32),
}

/// Why an interval evaluation produced no enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalFailure {
    /// A divisor enclosure still contains zero; more precision may help.
    Straddle,
    /// The expression is undefined (even root of a negative, division by zero).
    Domain(String),
}

impl Expr {
    pub fn int(x: impl Into<BigInt>) -> Expr {
        Expr::Const(BigRational::from_integer(x.into()))
    }

    pub fn rational(x: BigRational) -> Expr {
        Expr::Const(x)
    }

    /// `alpha^(k/m)`.
    pub fn radical(alpha: &BigInt, k: u32, m: u32) -> Expr {
        Expr::int(alpha.clone()).root(m).pow(k)
    }

    pub fn pow(self, k: u32) -> Expr {
        match k {
            1 => self,
            _ => Expr::Pow(Box::new(self), k),
        }
    }

    pub fn root(self, m: u32) -> Expr {
        Expr::Root(Box::new(self), m)
    }

    pub fn sqrt(self) -> Expr {
        self.root(2)
    }

    /// Exact value when every radical involved is rational.
    pub fn eval_exact(&self) -> Option<BigRational> {
        Some(match self {
            Expr::Const(c) => c.clone(),
            Expr::Add(a, b) => a.eval_exact()? + b.eval_exact()?,
            Expr::Sub(a, b) => a.eval_exact()? - b.eval_exact()?,
            Expr::Mul(a, b) => a.eval_exact()? * b.eval_exact()?,
            Expr::Div(a, b) => {
                let d = b.eval_exact()?;
                if d.is_zero() {
                    return None;
                }
                a.eval_exact()? / d
            }
            Expr::Neg(a) => -a.eval_exact()?,
            Expr::Pow(a, k) => num_traits::pow(a.eval_exact()?, *k as usize),
            Expr::Root(a, m) => {
                let v = a.eval_exact()?;
                let n = exact_root(v.numer(), *m)?;
                let d = exact_root(v.denom(), *m)?;
                BigRational::new(n, d)
            }
        })
    }

    /// Enclosure at a fixed working precision.
    pub fn eval(&self, bits: u32) -> std::result::Result<Interval, EvalFailure> {
        Ok(match self {
            Expr::Const(c) => Interval::from_rational(c, bits),
            Expr::Add(a, b) => a.eval(bits)?.add(&b.eval(bits)?),
            Expr::Sub(a, b) => a.eval(bits)?.sub(&b.eval(bits)?),
            Expr::Mul(a, b) => a.eval(bits)?.mul(&b.eval(bits)?),
            Expr::Div(a, b) => {
                let den = b.eval(bits)?;
                match a.eval(bits)?.div(&den) {
                    Some(q) => q,
                    None if b.eval_exact().is_some_and(|d| d.is_zero()) => {
                        return Err(EvalFailure::Domain("division by zero".into()))
                    }
                    None => return Err(EvalFailure::Straddle),
                }
            }
            Expr::Neg(a) => a.eval(bits)?.neg(),
            Expr::Pow(a, k) => a.eval(bits)?.pow(*k),
            Expr::Root(a, m) => a
                .eval(bits)?
                .nth_root(*m)
                .ok_or_else(|| EvalFailure::Domain("even root of a negative value".into()))?,
        })
    }

    /// Enclosure whose width is below `2^-target_bits`, refining adaptively.
    pub fn enclose(&self, target_bits: u32, policy: &PrecisionPolicy) -> Result<Interval> {
        let guard = 32;
        let cap = policy.cap_bits.max(target_bits + guard);
        let mut bits = (target_bits + guard).max(policy.start_bits);
        loop {
            match self.eval(bits) {
                Ok(iv) => {
                    let drop = bits - target_bits;
                    if iv.width_ulps() < super::roots::pow2(drop) {
                        return Ok(iv);
                    }
                }
                Err(EvalFailure::Domain(msg)) => return Err(Error::Domain(msg)),
                Err(EvalFailure::Straddle) => {}
            }
            if bits >= cap {
                return Err(Error::UnresolvedComparison { cap_bits: cap });
            }
            bits = (bits * 2).min(cap);
        }
    }

    /// Value to within `2^-bits`.
    pub fn to_fixed(&self, bits: u32, policy: &PrecisionPolicy) -> Result<FixedReal> {
        if let Some(v) = self.eval_exact() {
            return Ok(FixedReal::from_rational(&v, bits));
        }
        let iv = self.enclose(bits + 1, policy)?;
        FixedReal::from_interval(&iv, bits).ok_or(Error::UnresolvedComparison {
            cap_bits: policy.cap_bits,
        })
    }
}

/// Sign of an expression: exact when every radical is rational, otherwise by
/// doubling precision until the enclosure excludes zero.
pub fn adaptive_sign(e: &Expr, policy: &PrecisionPolicy) -> Result<Ordering> {
    if let Some(v) = e.eval_exact() {
        return Ok(v.cmp(&BigRational::zero()));
    }
    for bits in policy.schedule() {
        match e.eval(bits) {
            Ok(iv) => match iv.sign() {
                Some(Ordering::Equal) | None => {}
                Some(s) => return Ok(s),
            },
            Err(EvalFailure::Domain(msg)) => return Err(Error::Domain(msg)),
            Err(EvalFailure::Straddle) => {}
        }
    }
    Err(Error::UnresolvedComparison {
        cap_bits: policy.cap_bits,
    })
}

/// Three-way comparison `lhs` vs `rhs`. `Equal` is only returned when the
/// equality is established exactly.
pub fn adaptive_compare(lhs: &Expr, rhs: &Expr, policy: &PrecisionPolicy) -> Result<Ordering> {
    adaptive_sign(&(lhs.clone() - rhs.clone()), policy)
}

/// Floor of an expression's value.
pub fn adaptive_floor(e: &Expr, policy: &PrecisionPolicy) -> Result<BigInt> {
    if let Some(v) = e.eval_exact() {
        return Ok(v.floor().to_integer());
    }
    for bits in policy.schedule() {
        match e.eval(bits) {
            Ok(iv) => {
                let lo = iv.lo().floor().to_integer();
                if lo == iv.hi().floor().to_integer() {
                    return Ok(lo);
                }
            }
            Err(EvalFailure::Domain(msg)) => return Err(Error::Domain(msg)),
            Err(EvalFailure::Straddle) => {}
        }
    }
    Err(Error::UnresolvedComparison {
        cap_bits: policy.cap_bits,
    })
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl From<i64> for Expr {
    fn from(x: i64) -> Self {
        Expr::int(x)
    }
}

impl From<&BigInt> for Expr {
    fn from(x: &BigInt) -> Self {
        Expr::int(x.clone())
    }
}

impl From<BigRational> for Expr {
    fn from(x: BigRational) -> Self {
        Expr::Const(x)
    }
}
