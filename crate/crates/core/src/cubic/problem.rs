use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{root_of_unity, ComplexInterval, Expr, FixedReal, Interval, PrecisionPolicy};
use crate::matpow::{CharPoly3, CoefficientSequence, SquareMatrix};
use crate::report::ser_bigint;

/// `x^3 - p x - q` with `p, q > 0` and `27 q^2 - 4 p^3 > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicProblem {
    #[serde(serialize_with = "ser_bigint")]
    p: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    q: BigInt,
}

impl CubicProblem {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if !p.is_positive() || !q.is_positive() {
            return Err(Error::Unsupported(format!(
                "x^3 - px - q needs p > 0 and q > 0, got p = {p}, q = {q}"
            )));
        }
        let disc = BigInt::from(27) * &q * &q - BigInt::from(4) * &p * &p * &p;
        if !disc.is_positive() {
            return Err(Error::Unsupported(format!(
                "27q^2 - 4p^3 = {disc} is not positive; more than one real root"
            )));
        }
        Ok(CubicProblem { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Ascending coefficients of `x^3 - p x - q`.
    pub fn coefficients(&self) -> Vec<BigInt> {
        vec![-self.q.clone(), -self.p.clone(), BigInt::zero(), BigInt::one()]
    }

    /// `[[1, p, q], [1, 1, 0], [0, 1, 1]]`.
    pub fn matrix(&self) -> SquareMatrix {
        let (z, o) = (BigInt::zero, BigInt::one);
        SquareMatrix::from_rows(&[
            vec![o(), self.p.clone(), self.q.clone()],
            vec![o(), o(), z()],
            vec![z(), o(), o()],
        ])
        .expect("square by construction")
    }

    /// `X^3 = 3 X^2 - (3 - p) X + (q + 1 - p)`.
    pub fn char_poly(&self) -> CharPoly3 {
        CharPoly3::new(3, BigInt::from(3) - &self.p, &self.q + BigInt::one() - &self.p)
    }

    pub fn sequence(&self) -> CoefficientSequence {
        CoefficientSequence::from_cubic(&self.char_poly())
    }

    pub fn iter(&self) -> CubicIter {
        CubicIter::new(self.clone())
    }

    /// `81 q^2 - 12 p^3`.
    fn radicand(&self) -> BigInt {
        BigInt::from(81) * &self.q * &self.q - BigInt::from(12) * &self.p * &self.p * &self.p
    }

    /// `(2/3)^(1/3) p / W^(1/3) + W^(1/3) / (2^(1/3) 3^(2/3))` with
    /// `W = 9q + sqrt(81 q^2 - 12 p^3)`.
    pub fn cardano_expr(&self) -> Expr {
        let w = Expr::int(BigInt::from(9) * &self.q) + Expr::int(self.radicand()).sqrt();
        cardano_terms(&self.p, w)
    }

    /// The pair `(alpha, beta)` with `q = alpha^3 + beta^3`, `p = 3 alpha beta`,
    /// built from `W' = 9q - sqrt(81 q^2 - 12 p^3)`.
    pub fn cardano_parts_expr(&self) -> (Expr, Expr) {
        let w = Expr::int(BigInt::from(9) * &self.q) - Expr::int(self.radicand()).sqrt();
        cardano_pair(&self.p, w)
    }
}

fn cardano_pair(p: &BigInt, w: Expr) -> (Expr, Expr) {
    let cbrt_w = w.root(3);
    let first = Expr::rational(BigRational::new(2.into(), 3.into())).root(3) * Expr::int(p.clone())
        / cbrt_w.clone();
    let second = cbrt_w / (Expr::int(2).root(3) * Expr::int(9).root(3));
    (first, second)
}

fn cardano_terms(p: &BigInt, w: Expr) -> Expr {
    let (a, b) = cardano_pair(p, w);
    a + b
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicCardano {
    pub alpha_part: FixedReal,
    pub beta_part: FixedReal,
}

/// `alpha` and `beta` of the eigenvalue decomposition, to `bits` bits.
pub fn cardano_parts(prob: &CubicProblem, bits: u32) -> Result<CubicCardano> {
    let policy = PrecisionPolicy::from_env();
    let (a, b) = prob.cardano_parts_expr();
    Ok(CubicCardano {
        alpha_part: a.to_fixed(bits, &policy)?,
        beta_part: b.to_fixed(bits, &policy)?,
    })
}

/// The closed-form real root to within `2^-bits`.
pub fn cardano_reference(prob: &CubicProblem, bits: u32) -> Result<FixedReal> {
    prob.cardano_expr().to_fixed(bits, &PrecisionPolicy::from_env())
}

/// `|gamma_2 / gamma_1|` where `gamma_1 = 1 + alpha + beta` and
/// `gamma_2 = 1 + alpha omega^2 + beta omega`.
pub fn subdominant_ratio(prob: &CubicProblem, bits: u32) -> Result<FixedReal> {
    let work = bits + 64;
    let policy = PrecisionPolicy::from_env();
    let (a, b) = prob.cardano_parts_expr();
    let a = a.enclose(work, &policy)?.with_bits(work);
    let b = b.enclose(work, &policy)?.with_bits(work);
    let one = Interval::from_i64(1, work);
    let g1 = one.add(&a).add(&b);
    let w = root_of_unity(1, 3, work);
    let w2 = root_of_unity(2, 3, work);
    let g2 = ComplexInterval::one(work).add(&w2.scale(&a)).add(&w.scale(&b));
    let ratio = g2
        .abs()
        .div(&g1)
        .ok_or(Error::UnresolvedComparison { cap_bits: work })?;
    FixedReal::from_interval(&ratio, bits).ok_or(Error::UnresolvedComparison { cap_bits: work })
}

/// Iteration state `(a_{n-2}, a_{n-1}, a_n)` for `r_n = -1 + a_n / a_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicIter {
    problem: CubicProblem,
    cp: CharPoly3,
    n: u64,
    window: [BigInt; 3],
}

impl CubicIter {
    fn new(problem: CubicProblem) -> Self {
        let cp = problem.char_poly();
        let a1 = cp.t.clone();
        let a2 = &cp.t * &cp.t - &cp.s;
        CubicIter {
            problem,
            cp,
            n: 2,
            window: [BigInt::one(), a1, a2],
        }
    }

    pub fn problem(&self) -> &CubicProblem {
        &self.problem
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn window(&self) -> &[BigInt; 3] {
        &self.window
    }

    /// `None` when `a_{n-1} = 0`.
    pub fn approximant(&self) -> Option<BigRational> {
        let [_, prev, cur] = &self.window;
        if prev.is_zero() {
            return None;
        }
        Some(BigRational::new(cur.clone(), prev.clone()) - BigRational::one())
    }

    pub fn advance(&mut self) -> Option<BigRational> {
        let [p2, p1, p0] = &self.window;
        let next = &self.cp.t * p0 - &self.cp.s * p1 + &self.cp.d * p2;
        self.window.rotate_left(1);
        self.window[2] = next;
        self.n += 1;
        self.approximant()
    }

    pub fn run_to(&mut self, upto: u64) -> Vec<(u64, BigRational)> {
        let mut out = Vec::new();
        if let Some(r) = self.approximant() {
            out.push((self.n, r));
        }
        while self.n < upto {
            if let Some(r) = self.advance() {
                out.push((self.n, r));
            }
        }
        out
    }
}

impl Iterator for CubicIter {
    type Item = (u64, Option<BigRational>);

    fn next(&mut self) -> Option<Self::Item> {
        let r = self.advance();
        Some((self.n, r))
    }
}

pub fn make_cubic_iter(prob: &CubicProblem) -> CubicIter {
    prob.iter()
}

/// `A^n` from `epsilon_n = (1 - p + q) a_{n-3} + (p - 2) a_{n-2} + a_{n-1}`
/// and the coefficient sequence, for `n >= 1` (`a_j = 0` for `j < 0`).
pub fn cubic_power_matrix(prob: &CubicProblem, n: u64) -> Result<SquareMatrix> {
    if n == 0 {
        return Err(Error::domain("closed-form power needs n >= 1"));
    }
    let mut seq = prob.sequence();
    let n = n as i64;
    let (a1, a2, a3) = (seq.at(n - 1), seq.at(n - 2), seq.at(n - 3));
    let (p, q) = (&prob.p, &prob.q);
    let eps = (BigInt::one() - p + q) * &a3 + (p - BigInt::from(2)) * &a2 + &a1;
    let diff = &a1 - &a2;
    Ok(SquareMatrix::from_rows(&[
        vec![eps.clone(), (q - p) * &a2 + p * &a1, q * &diff],
        vec![diff.clone(), eps.clone(), q * &a2],
        vec![a2.clone(), diff, eps - p * &a2],
    ])
    .expect("square by construction"))
}
