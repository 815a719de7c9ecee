use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{adaptive_compare, adaptive_sign, exact_root, Expr, FixedReal, PrecisionPolicy};
use crate::matpow::{CharPoly3, SquareMatrix};

/// `alpha^(1/3)` as a radical expression.
pub(crate) fn theta(alpha: &BigInt) -> Expr {
    Expr::radical(alpha, 1, 3)
}

/// A cube-root problem: approximate `alpha^(1/3)` using the shift `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeRootProblem {
    alpha: BigInt,
    a: BigInt,
    policy: PrecisionPolicy,
}

impl CubeRootProblem {
    /// Validates `alpha > 1` and `a > -alpha^(2/3) / (1 + alpha^(1/3))`.
    pub fn new(alpha: impl Into<BigInt>, a: impl Into<BigInt>) -> Result<Self> {
        Self::with_policy(alpha.into(), a.into(), PrecisionPolicy::from_env())
    }

    pub fn with_policy(alpha: BigInt, a: BigInt, policy: PrecisionPolicy) -> Result<Self> {
        if alpha <= BigInt::one() {
            return Err(Error::domain(format!("alpha must exceed 1, got {alpha}")));
        }
        let bound = acond_bound(&alpha);
        // the bound is never an integer for alpha > 1, so Equal cannot occur
        // for a valid comparison; treat it as a failure all the same
        if adaptive_compare(&Expr::int(a.clone()), &bound, &policy)? != Ordering::Greater {
            return Err(Error::ParameterOutOfRange {
                name: "a",
                value: a.to_string(),
                bound: format!("a > -{alpha}^(2/3) / (1 + {alpha}^(1/3))"),
            });
        }
        Ok(CubeRootProblem { alpha, a, policy })
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    /// `[[a, alpha, alpha], [1, a, alpha], [1, 1, a]]`.
    pub fn matrix(&self) -> SquareMatrix {
        let (a, al) = (self.a.clone(), self.alpha.clone());
        let one = BigInt::one;
        SquareMatrix::from_rows(&[
            vec![a.clone(), al.clone(), al.clone()],
            vec![one(), a.clone(), al],
            vec![one(), one(), a],
        ])
        .expect("square by construction")
    }

    /// `(3a, 3a^2 - 3 alpha, a^3 + alpha - 3 a alpha + alpha^2)`.
    pub fn char_poly(&self) -> CharPoly3 {
        let (a, al) = (&self.a, &self.alpha);
        CharPoly3::new(
            a * 3,
            a * a * 3 - al * 3,
            a * a * a + al - a * al * 3 + al * al,
        )
    }

    /// `beta_1 = a + theta + theta^2`, the dominant eigenvalue.
    pub fn beta1(&self) -> Expr {
        let t = theta(&self.alpha);
        Expr::int(self.a.clone()) + t.clone() + t.pow(2)
    }

    /// `|beta_2|^2 = |beta_3|^2 = a^2 + theta^2 + theta^4 - a theta - a theta^2 - theta^3`.
    pub fn beta2_norm_sqr(&self) -> Expr {
        let t = theta(&self.alpha);
        let a = Expr::int(self.a.clone());
        let al = Expr::int(self.alpha.clone());
        a.clone().pow(2) + t.clone().pow(2) + al.clone() * t.clone()
            - a.clone() * t.clone()
            - a * t.pow(2)
            - al
    }

    /// `beta_1 - |beta_2|`.
    pub fn dominance_margin_expr(&self) -> Expr {
        self.beta1() - self.beta2_norm_sqr().sqrt()
    }

    pub fn dominance_margin(&self, bits: u32) -> Result<FixedReal> {
        self.dominance_margin_expr().to_fixed(bits, &self.policy)
    }

    /// Strict dominance of `beta_1`, decided by adaptive interval evaluation.
    pub fn is_dominant(&self) -> Result<bool> {
        Ok(adaptive_sign(&self.dominance_margin_expr(), &self.policy)? == Ordering::Greater)
    }

    /// `h(a) = |beta_2 / beta_1|^2`.
    pub fn h_expr(&self) -> Expr {
        h_expr(&self.alpha, &self.a)
    }

    /// `sqrt(h(a))`, the asymptotic error ratio per step.
    pub fn predicted_rate(&self, bits: u32) -> Result<FixedReal> {
        self.h_expr().sqrt().to_fixed(bits, &self.policy)
    }

    /// `k` when `alpha = k^3`.
    pub fn exact_root(&self) -> Option<BigInt> {
        exact_root(&self.alpha, 3)
    }

    /// Whether `r` equals the integer cube root exactly.
    pub fn is_exact(&self, r: &BigRational) -> bool {
        self.exact_root()
            .is_some_and(|k| *r == BigRational::from_integer(k))
    }

    pub fn iter(&self) -> CubeRootIterState {
        CubeRootIterState::seeded(self.clone())
    }
}

/// `-alpha^(2/3) / (1 + alpha^(1/3))`.
pub fn acond_bound(alpha: &BigInt) -> Expr {
    let t = theta(alpha);
    -(t.clone().pow(2)) / (Expr::int(1) + t)
}

/// `h(a) = (a^2 - a theta + theta^2 - a theta^2 - alpha + theta^4) / (a + theta + theta^2)^2`.
pub fn h_expr(alpha: &BigInt, a: &BigInt) -> Expr {
    let t = theta(alpha);
    let a = Expr::int(a.clone());
    let al = Expr::int(alpha.clone());
    let num = a.clone().pow(2) - a.clone() * t.clone() + t.clone().pow(2)
        - a.clone() * t.clone().pow(2)
        - al.clone()
        + al * t.clone();
    let den = (a + t.clone() + t.pow(2)).pow(2);
    num / den
}

/// Validated constructor returning the seeded iteration at `n = 2`.
pub fn make_cuberoot_iter(alpha: impl Into<BigInt>, a: impl Into<BigInt>) -> Result<CubeRootIterState> {
    Ok(CubeRootProblem::new(alpha, a)?.iter())
}

/// Iteration state holding `(a_{n-2}, a_{n-1}, a_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeRootIterState {
    problem: CubeRootProblem,
    cp: CharPoly3,
    n: u64,
    window: [BigInt; 3],
}

impl CubeRootIterState {
    fn seeded(problem: CubeRootProblem) -> Self {
        let cp = problem.char_poly();
        let a1 = cp.t.clone();
        let a2 = &cp.t * &cp.t - &cp.s;
        CubeRootIterState {
            problem,
            cp,
            n: 2,
            window: [BigInt::one(), a1, a2],
        }
    }

    pub fn problem(&self) -> &CubeRootProblem {
        &self.problem
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn window(&self) -> &[BigInt; 3] {
        &self.window
    }

    /// `r_n = 1 + (alpha - 1) a_{n-1} / (a_n - (a - 1) a_{n-1})`, or `None`
    /// when `a_{n-1}` or the denominator vanishes.
    pub fn approximant(&self) -> Option<BigRational> {
        let [_, prev, cur] = &self.window;
        if prev.is_zero() {
            return None;
        }
        let den = cur - (&self.problem.a - BigInt::one()) * prev;
        if den.is_zero() {
            return None;
        }
        let frac = BigRational::new((&self.problem.alpha - BigInt::one()) * prev, den);
        Some(BigRational::one() + frac)
    }

    /// Advance one index and return the new approximant (`None` marks a
    /// skipped, transient zero denominator).
    pub fn step(&self) -> (CubeRootIterState, Option<BigRational>) {
        let [p2, p1, p0] = &self.window;
        let next = &self.cp.t * p0 - &self.cp.s * p1 + &self.cp.d * p2;
        let state = CubeRootIterState {
            problem: self.problem.clone(),
            cp: self.cp.clone(),
            n: self.n + 1,
            window: [p1.clone(), p0.clone(), next],
        };
        let r = state.approximant();
        (state, r)
    }

    /// In-place variant of [`step`](Self::step).
    pub fn advance(&mut self) -> Option<BigRational> {
        let [p2, p1, p0] = &self.window;
        let next = &self.cp.t * p0 - &self.cp.s * p1 + &self.cp.d * p2;
        self.window.rotate_left(1);
        self.window[2] = next;
        self.n += 1;
        self.approximant()
    }

    /// Approximants from the current index through `upto`, skipping
    /// undefined ones.
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

/// `A^n` assembled from
/// `gamma_n = a_n - 2a a_{n-1} + (a^2 - alpha) a_{n-2}`,
/// `delta_n = a_{n-1} + (alpha - a) a_{n-2}`,
/// `rho_n = a_{n-1} + (1 - a) a_{n-2}`,
/// with `a_j = 0` for `j < 0`, so every `n >= 0` is covered.
pub fn power_matrix_form(problem: &CubeRootProblem, n: u64) -> SquareMatrix {
    let (g, d, r) = gamma_delta_rho(problem, n);
    let al = problem.alpha();
    SquareMatrix::from_rows(&[
        vec![g.clone(), al * &r, al * &d],
        vec![d.clone(), g.clone(), al * &r],
        vec![r, d, g],
    ])
    .expect("square by construction")
}

/// `(gamma_n, delta_n, rho_n)`.
pub fn gamma_delta_rho(problem: &CubeRootProblem, n: u64) -> (BigInt, BigInt, BigInt) {
    let mut seq = crate::matpow::CoefficientSequence::from_cubic(&problem.char_poly());
    let n = n as i64;
    let (an, an1, an2) = (seq.at(n), seq.at(n - 1), seq.at(n - 2));
    let (a, al) = (problem.a(), problem.alpha());
    let gamma = an - a * 2 * &an1 + (a * a - al) * &an2;
    let delta = &an1 + (al - a) * &an2;
    let rho = &an1 + (BigInt::one() - a) * &an2;
    (gamma, delta, rho)
}

/// `A_{n,i,j} / A_{n,u,v}` with 1-based indices; tends to
/// `alpha^((j + u - i - v) / 3)`. `None` when the denominator entry is zero.
pub fn ratio_limit_general(
    problem: &CubeRootProblem,
    (i, j): (usize, usize),
    (u, v): (usize, usize),
    n: u64,
) -> Result<Option<BigRational>> {
    for idx in [i, j, u, v] {
        if !(1..=3).contains(&idx) {
            return Err(Error::domain(format!("matrix index {idx} outside 1..=3")));
        }
    }
    let m = power_matrix_form(problem, n);
    let den = m[(u - 1, v - 1)].clone();
    if den.is_zero() {
        return Ok(None);
    }
    Ok(Some(BigRational::new(m[(i - 1, j - 1)].clone(), den)))
}

/// Exponent `k` in the limit `alpha^(k/3)` of [`ratio_limit_general`].
pub fn ratio_limit_exponent((i, j): (usize, usize), (u, v): (usize, usize)) -> i64 {
    j as i64 + u as i64 - i as i64 - v as i64
}
