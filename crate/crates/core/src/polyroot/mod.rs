//! Roots of a general integer polynomial from entry ratios of a
//! `(k, l)`-parameterized matrix.
//!
//! If `A_{n,i,1} / A_{n,m,1} -> beta_i` for every `i`, then `beta_{m-1}` is
//! a root of `f`. Nothing guarantees the limits exist, so every run is
//! labelled with what was observed.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{log2_abs_rational, pow2, FixedReal};
use crate::matpow::{mat_pow, SquareMatrix};
use crate::oracle::{self, RootQuery};
use crate::report::{ser_bigint, RATE_BITS};

pub const DEFAULT_AGREE_BITS: u32 = 48;
pub const DEFAULT_MAX_N: u64 = 4096;

/// `f(x) = a_0 + a_1 x + ... + a_m x^m` together with the nonzero
/// parameters `k` and `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralPolyProblem {
    #[serde(serialize_with = "ser_bigints")]
    coeffs: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigint")]
    k: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    l: BigInt,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl GeneralPolyProblem {
    /// `coeffs` ascending, `a_0` first.
    pub fn new(coeffs: Vec<BigInt>, k: impl Into<BigInt>, l: impl Into<BigInt>) -> Result<Self> {
        let (k, l) = (k.into(), l.into());
        validate_coeffs(&coeffs)?;
        if k.is_zero() || l.is_zero() {
            return Err(Error::domain("k and l must be nonzero"));
        }
        Ok(GeneralPolyProblem { coeffs, k, l })
    }

    pub fn from_i64(coeffs: &[i64], k: i64, l: i64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| c.into()).collect(), k, l)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn l(&self) -> &BigInt {
        &self.l
    }
}

fn validate_coeffs(coeffs: &[BigInt]) -> Result<()> {
    if coeffs.len() < 3 {
        return Err(Error::domain("polynomial degree must be at least 2"));
    }
    if coeffs.last().is_some_and(Zero::is_zero) {
        return Err(Error::domain("leading coefficient a_m must be nonzero"));
    }
    Ok(())
}

/// The `m x m` matrix whose fixed-point equations on
/// `(beta_1, ..., beta_{m-1}, 1)` are
/// `beta_i = (k beta_i + l a_m beta_{i+1}) / (l a_m beta_{m-1} + k)` for
/// `i <= m-3`, the same with `beta_{m-1}` replaced by `1` for `i = m-2`, and
/// the `f`-carrying row `m-1`.
pub fn build_general_matrix(prob: &GeneralPolyProblem) -> SquareMatrix {
    let m = prob.degree();
    let a = &prob.coeffs;
    let (k, l) = (&prob.k, &prob.l);
    let lam = l * &a[m];
    let mut mat = SquareMatrix::zeros(m);
    // 0-based: rows 0..m-3 shift right by one, row m-3 jumps to the last column
    for i in 0..m.saturating_sub(2) {
        mat[(i, i)] = k.clone();
        let col = if i + 3 == m { m - 1 } else { i + 1 };
        mat[(i, col)] = lam.clone();
    }
    let r = m - 2;
    for c in 0..m - 2 {
        mat[(r, c)] = -(l * &a[c]);
    }
    mat[(r, m - 2)] = k - l * &a[m - 1];
    mat[(r, m - 1)] = -(l * &a[m - 2]);
    mat[(m - 1, m - 2)] = lam;
    mat[(m - 1, m - 1)] = k.clone();
    mat
}

/// `A_{n,i,1} / A_{n,m,1}` for `i = 1..m`, or `None` when `A_{n,m,1} = 0`.
pub fn column_ratios(power: &SquareMatrix) -> Option<Vec<BigRational>> {
    let m = power.dim();
    let den = &power[(m - 1, 0)];
    if den.is_zero() {
        return None;
    }
    Some((0..m).map(|i| BigRational::new(power[(i, 0)].clone(), den.clone())).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Converged,
    /// Ratios stayed bounded without settling.
    Oscillating,
    /// Ratios grew without bound.
    Diverged,
    /// Ratios settled but the limit fails the fixed-point identities.
    Inconsistent,
    /// `A_{n,m,1}` vanished at every sampled `n`.
    StructuralFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitVector {
    /// Exact approximants `beta_1 .. beta_m` at the last sampled `n`.
    #[serde(skip)]
    pub betas: Vec<BigRational>,
    /// The same values rounded for display.
    #[serde(rename = "betas")]
    pub betas_fixed: Vec<FixedReal>,
    /// `(n, beta_{m-1})` at every sampled `n` with a defined ratio.
    #[serde(skip)]
    pub history: Vec<(u64, BigRational)>,
    pub n: u64,
    pub converged: bool,
    pub outcome: Outcome,
    /// `|f(beta_{m-1})|`.
    pub residual: Option<FixedReal>,
    /// `log2` of the largest violation of `beta_{m-1} beta_{m-2} = 1` and
    /// `beta_{i+1} = beta_{m-1} beta_i`.
    pub identity_error_log2: Option<FixedReal>,
    /// A bisection root of `f` near `beta_{m-1}`, when a sign change is found.
    pub oracle_root: Option<FixedReal>,
}

impl LimitVector {
    pub fn root(&self) -> Option<&BigRational> {
        let m = self.betas.len();
        (m >= 2).then(|| &self.betas[m - 2])
    }
}

fn max_abs_diff(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

fn max_abs(x: &[BigRational]) -> BigRational {
    x.iter().map(Signed::abs).max().unwrap_or_else(BigRational::zero)
}

/// Largest violation of the identities implied by the fixed-point system.
pub fn identity_error(betas: &[BigRational]) -> BigRational {
    let m = betas.len();
    let b = &betas[m - 2];
    let mut worst = (&betas[m - 1] - BigRational::one()).abs();
    if m >= 3 {
        worst = worst.max((b * &betas[m - 3] - BigRational::one()).abs());
    }
    for i in 0..m.saturating_sub(3) {
        worst = worst.max((&betas[i + 1] - b * &betas[i]).abs());
    }
    worst
}

/// Sample the ratios at `n = 4, 8, 16, ...` up to `max_n`; converged once
/// the samples at `n`, `2n` and `2n + 1` agree to `agree_bits`.
pub fn iterate_general(prob: &GeneralPolyProblem, max_n: u64, agree_bits: u32) -> Result<LimitVector> {
    if max_n < 4 {
        return Err(Error::domain("max_n must be at least 4"));
    }
    let mat = build_general_matrix(prob);
    let tol = BigRational::new(BigInt::one(), pow2(agree_bits));
    let mut n = 4u64;
    let mut power = mat_pow(&mat, n);
    let mut prev: Option<Vec<BigRational>> = None;
    let mut sizes: Vec<BigRational> = Vec::new();
    let mut last: Option<(u64, Vec<BigRational>)> = None;
    let mut history = Vec::new();
    let mut settled = false;
    loop {
        if let Some(cur) = column_ratios(&power) {
            sizes.push(max_abs(&cur));
            if let Some(p) = &prev {
                if max_abs_diff(p, &cur) < tol {
                    let next = column_ratios(&(&power * &mat));
                    if next.as_ref().is_some_and(|nx| max_abs_diff(nx, &cur) < tol) {
                        settled = true;
                    }
                }
            }
            history.push((n, cur[cur.len() - 2].clone()));
            prev = Some(cur.clone());
            last = Some((n, cur));
        }
        if settled || n * 2 > max_n {
            break;
        }
        power = &power * &power;
        n *= 2;
    }
    let bits = 2 * agree_bits + 64;
    let Some((n, betas)) = last else {
        return Ok(LimitVector {
            betas: Vec::new(),
            betas_fixed: Vec::new(),
            history,
            n,
            converged: false,
            outcome: Outcome::StructuralFailure,
            residual: None,
            identity_error_log2: None,
            oracle_root: None,
        });
    };
    let m = betas.len();
    let root = &betas[m - 2];
    let residual = oracle::eval_poly(&prob.coeffs, root).abs();
    let id_err = identity_error(&betas);
    let identities_ok = id_err < tol;
    let outcome = if settled {
        if identities_ok && residual < BigRational::new(BigInt::one(), pow2(agree_bits / 2)) {
            Outcome::Converged
        } else {
            Outcome::Inconsistent
        }
    } else if diverging(&sizes) {
        Outcome::Diverged
    } else {
        Outcome::Oscillating
    };
    let oracle_root = if outcome == Outcome::Converged {
        nearby_root(&prob.coeffs, root, agree_bits / 2, bits)
    } else {
        None
    };
    Ok(LimitVector {
        betas_fixed: betas.iter().map(|b| FixedReal::from_rational(b, agree_bits + 16)).collect(),
        history,
        n,
        converged: outcome == Outcome::Converged,
        outcome,
        residual: Some(FixedReal::from_rational(&residual, bits)),
        identity_error_log2: (!id_err.is_zero()).then(|| FixedReal::from_f64(log2_abs_rational(&id_err), RATE_BITS)),
        oracle_root,
        betas,
    })
}

/// Strictly growing over the last three samples and past `2^32`.
fn diverging(sizes: &[BigRational]) -> bool {
    let k = sizes.len();
    k >= 3
        && sizes[k - 3] < sizes[k - 2]
        && sizes[k - 2] < sizes[k - 1]
        && sizes[k - 1] > BigRational::from_integer(pow2(32))
}

fn nearby_root(coeffs: &[BigInt], x: &BigRational, radius_bits: u32, bits: u32) -> Option<FixedReal> {
    let r = BigRational::new(BigInt::one(), pow2(radius_bits));
    let q = RootQuery::new(coeffs.to_vec(), x - &r, x + &r, bits);
    oracle::bisect_root(&q).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanBudget {
    pub max_n: u64,
    pub agree_bits: u32,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            max_n: DEFAULT_MAX_N,
            agree_bits: DEFAULT_AGREE_BITS,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanCell {
    pub k: i64,
    pub l: i64,
    pub outcome: Outcome,
    pub limit: LimitVector,
}

/// Run [`iterate_general`] over the grid, in `(k, l)` order with `l`
/// varying fastest. Cells with `k = 0` or `l = 0` are left out.
pub fn parameter_scan(
    coeffs: &[BigInt],
    k_range: RangeInclusive<i64>,
    l_range: RangeInclusive<i64>,
    budget: ScanBudget,
) -> Result<Vec<ScanCell>> {
    validate_coeffs(coeffs)?;
    let grid: Vec<(i64, i64)> = k_range
        .flat_map(|k| l_range.clone().map(move |l| (k, l)))
        .filter(|&(k, l)| k != 0 && l != 0)
        .collect();
    grid.par_iter()
        .map(|&(k, l)| {
            let prob = GeneralPolyProblem::new(coeffs.to_vec(), k, l)?;
            let limit = iterate_general(&prob, budget.max_n, budget.agree_bits)?;
            Ok(ScanCell {
                k,
                l,
                outcome: limit.outcome,
                limit,
            })
        })
        .collect()
}
