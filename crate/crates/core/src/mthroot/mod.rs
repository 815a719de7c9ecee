//! m-th roots from powers of the m x m matrix with `a` on the diagonal,
//! `alpha` above it and `1` below it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    exact_root, integer_root_floor, pow2, root_of_unity, ComplexInterval, Expr, FixedReal, Interval,
    PrecisionPolicy,
};
use crate::matpow::{mat_pow, SquareMatrix};
use crate::oracle;
use crate::report::{ser_bigint, ConvergenceReport, Status};

/// Default largest power tried by [`approximate_root`].
pub const DEFAULT_N_CAP: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MthRootProblem {
    #[serde(serialize_with = "ser_bigint")]
    alpha: BigInt,
    m: u32,
    #[serde(serialize_with = "ser_bigint")]
    a: BigInt,
}

impl MthRootProblem {
    pub fn new(alpha: impl Into<BigInt>, m: u32, a: impl Into<BigInt>) -> Result<Self> {
        let (alpha, a) = (alpha.into(), a.into());
        if alpha < BigInt::one() {
            return Err(Error::domain(format!("alpha must be at least 1, got {alpha}")));
        }
        if m < 2 {
            return Err(Error::domain(format!("root order m must be at least 2, got {m}")));
        }
        if !a.is_positive() {
            return Err(Error::ParameterOutOfRange {
                name: "a",
                value: a.to_string(),
                bound: "a > 0".into(),
            });
        }
        Ok(MthRootProblem { alpha, m, a })
    }

    /// Uses the heuristic shift `ceil(alpha^(1/m))`.
    pub fn with_default_a(alpha: impl Into<BigInt>, m: u32) -> Result<Self> {
        let alpha = alpha.into();
        if alpha < BigInt::one() || m < 2 {
            return Self::new(alpha, m, 1);
        }
        let a = heuristic_a(&alpha, m)?;
        Self::new(alpha, m, a)
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
}

/// `ceil(alpha^(1/m))`. A heuristic only: no optimal shift is known for
/// general `m`.
pub fn heuristic_a(alpha: &BigInt, m: u32) -> Result<BigInt> {
    let floor = integer_root_floor(alpha, m)?;
    Ok(if exact_root(alpha, m).is_some() {
        floor
    } else {
        floor + 1
    })
}

/// Diagonal `a`, `alpha` strictly above, `1` strictly below.
pub fn build_matrix(prob: &MthRootProblem) -> SquareMatrix {
    SquareMatrix::from_fn(prob.m as usize, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => prob.a.clone(),
        std::cmp::Ordering::Less => prob.alpha.clone(),
        std::cmp::Ordering::Greater => BigInt::one(),
    })
}

/// The entry pair whose ratio tends to `alpha^(1/m)`: `(2,1)/(3,1)` for
/// `m >= 3`, `(1,2)/(1,1)` for `m = 2`.
pub fn default_pair(m: u32) -> ((usize, usize), (usize, usize)) {
    if m == 2 {
        ((1, 2), (1, 1))
    } else {
        ((2, 1), (3, 1))
    }
}

/// Numerator `j + u - i - v` of the limit exponent over `m`.
pub fn limit_exponent((i, j): (usize, usize), (u, v): (usize, usize)) -> i64 {
    j as i64 + u as i64 - i as i64 - v as i64
}

fn check_indices(m: u32, idx: &[usize]) -> Result<()> {
    for &k in idx {
        if k == 0 || k > m as usize {
            return Err(Error::domain(format!("matrix index {k} outside 1..={m}")));
        }
    }
    Ok(())
}

/// `A_{n,i,j} / A_{n,u,v}` read from an already computed power (1-based).
pub fn ratio_from_power(power: &SquareMatrix, (i, j): (usize, usize), (u, v): (usize, usize)) -> Option<BigRational> {
    let den = &power[(u - 1, v - 1)];
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(power[(i - 1, j - 1)].clone(), den.clone()))
}

/// `A_{n,i,j} / A_{n,u,v}` by repeated squaring; `None` when the
/// denominator entry is zero.
pub fn ratio(
    prob: &MthRootProblem,
    ij: (usize, usize),
    uv: (usize, usize),
    n: u64,
) -> Result<Option<BigRational>> {
    check_indices(prob.m, &[ij.0, ij.1, uv.0, uv.1])?;
    Ok(ratio_from_power(&mat_pow(&build_matrix(prob), n), ij, uv))
}

fn unit_roots(m: u32, bits: u32) -> Vec<ComplexInterval> {
    (0..m as i64).map(|k| root_of_unity(k, m as u64, bits)).collect()
}

fn theta_interval(prob: &MthRootProblem, bits: u32) -> Result<Interval> {
    Ok(Expr::radical(&prob.alpha, 1, prob.m)
        .enclose(bits, &PrecisionPolicy::from_env())?
        .with_bits(bits))
}

/// `beta_k = a + sum_{j=1}^{m-1} (omega^(k-1) theta)^j` for `k = 1..m`.
pub fn eigenvalues(prob: &MthRootProblem, bits: u32) -> Result<Vec<ComplexInterval>> {
    let m = prob.m as u64;
    let theta = theta_interval(prob, bits)?;
    let a = ComplexInterval::real(Interval::from_int(&prob.a, bits));
    let w = unit_roots(prob.m, bits);
    let mut out = Vec::with_capacity(m as usize);
    for k in 1..=m {
        let mut acc = a.clone();
        let mut tp = Interval::from_i64(1, bits);
        for j in 1..m {
            tp = tp.mul(&theta);
            acc = acc.add(&w[((k - 1) * j % m) as usize].scale(&tp));
        }
        out.push(acc);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexFixed {
    pub re: FixedReal,
    pub im: FixedReal,
}

#[derive(Clone, Debug, Serialize)]
pub struct MthRootDiag {
    pub eigen_values: Vec<ComplexFixed>,
    /// `beta_1 - max_{i >= 2} |beta_i|`.
    pub dominance_margin: FixedReal,
    /// Whether the margin's enclosure is strictly positive.
    pub dominant: bool,
    /// `max_{i >= 2} |beta_i| / beta_1`, the asymptotic error ratio per step.
    pub subdominant_ratio: FixedReal,
}

pub fn diagonalize(prob: &MthRootProblem, bits: u32) -> Result<MthRootDiag> {
    let work = bits + 64;
    let betas = eigenvalues(prob, work)?;
    let unresolved = || Error::UnresolvedComparison { cap_bits: work };
    let fixed = |iv: &Interval| FixedReal::from_interval(iv, bits).ok_or_else(unresolved);
    let beta1 = betas[0].re.clone();
    let max_sub = betas[1..]
        .iter()
        .map(ComplexInterval::abs)
        .reduce(|x, y| x.max(&y))
        .expect("m >= 2");
    let margin = beta1.sub(&max_sub);
    let dominant = margin.lo_scaled().is_positive();
    let ratio = max_sub.div(&beta1).ok_or_else(unresolved)?;
    Ok(MthRootDiag {
        eigen_values: betas
            .iter()
            .map(|b| Ok(ComplexFixed { re: fixed(&b.re)?, im: fixed(&b.im)? }))
            .collect::<Result<_>>()?,
        dominance_margin: fixed(&margin)?,
        dominant,
        subdominant_ratio: fixed(&ratio)?,
    })
}

/// The diagonalizer `M_{i,j} = alpha^((m-i)/m) omega^((m-j+1) i)` and its
/// claimed inverse `1 / (m M_{j,i})`, row-major, 0-based storage.
pub fn diagonalizer(prob: &MthRootProblem, bits: u32) -> Result<(Vec<ComplexInterval>, Vec<ComplexInterval>)> {
    let m = prob.m as usize;
    let theta = theta_interval(prob, bits)?;
    let mut theta_pows = vec![Interval::from_i64(1, bits)];
    for _ in 1..m {
        let next = theta_pows.last().unwrap().mul(&theta);
        theta_pows.push(next);
    }
    let w = unit_roots(prob.m, bits);
    let mut mat = Vec::with_capacity(m * m);
    for i in 1..=m {
        for j in 1..=m {
            mat.push(w[(m - j + 1) * i % m].scale(&theta_pows[m - i]));
        }
    }
    let mm = ComplexInterval::real(Interval::from_i64(m as i64, bits));
    let one = ComplexInterval::one(bits);
    let mut inv = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let d = mm.mul(&mat[j * m + i]);
            inv.push(one.div(&d).ok_or(Error::UnresolvedComparison { cap_bits: bits })?);
        }
    }
    Ok((mat, inv))
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheckReport {
    pub n: u64,
    pub tolerance_bits: u32,
    pub entries_checked: usize,
    /// Largest `|closed form - exact| / max(1, |exact|)` seen, as `log2`.
    pub worst_relative_error_log2: Option<f64>,
    pub inverse_ok: bool,
    pub passed: bool,
}

/// Compare every entry of `A^n` with
/// `(alpha^((j-i)/m) / m) sum_k omega^((m-k+1)(i-j)) beta_k^n`,
/// and check `M M^-1 = I`, each to relative tolerance `2^-tolerance_bits`.
pub fn entry_closed_form_check(prob: &MthRootProblem, n: u64, tolerance_bits: u32) -> Result<EntryCheckReport> {
    let report = entry_closed_form_report(prob, n, tolerance_bits)?;
    if !report.passed {
        let dump = serde_json::to_string(&report).unwrap_or_default();
        return Err(Error::Verification(format!("eigen-sum mismatch: {dump}")));
    }
    Ok(report)
}

pub fn entry_closed_form_report(prob: &MthRootProblem, n: u64, tolerance_bits: u32) -> Result<EntryCheckReport> {
    if n == 0 {
        return Err(Error::domain("entry check needs n >= 1"));
    }
    let m = prob.m as usize;
    let bits = tolerance_bits + 64 + 2 * (64 - n.leading_zeros());
    let theta = theta_interval(prob, bits)?;
    let beta_pows: Vec<ComplexInterval> = eigenvalues(prob, bits)?.iter().map(|b| b.pow(n)).collect();
    let exact = mat_pow(&build_matrix(prob), n);
    let mm = BigInt::from(m);
    let tol = BigRational::new(BigInt::one(), pow2(tolerance_bits));

    let w = unit_roots(prob.m, bits);
    let mut worst: Option<f64> = None;
    let mut passed = true;
    for i in 1..=m {
        for j in 1..=m {
            let mut sum = ComplexInterval::real(Interval::from_i64(0, bits));
            let shift = (i as i64 - j as i64).rem_euclid(m as i64);
            for (k, bp) in beta_pows.iter().enumerate() {
                let e = ((m - k) as i64 * shift).rem_euclid(m as i64);
                sum = sum.add(&w[e as usize].mul(bp));
            }
            let scale = if j >= i {
                theta.pow((j - i) as u32)
            } else {
                Interval::from_i64(1, bits)
                    .div(&theta.pow((i - j) as u32))
                    .ok_or(Error::UnresolvedComparison { cap_bits: bits })?
            };
            let closed = sum.scale(&scale.div_int(&mm));
            let want = &exact[(i - 1, j - 1)];
            let re_err = closed.re.sub(&Interval::from_int(want, bits)).abs();
            let im_err = closed.im.abs();
            let mag = BigRational::from_integer(want.abs().max(BigInt::one()));
            let bound = &tol * &mag;
            let err_hi = re_err.hi().max(im_err.hi());
            if err_hi > bound {
                passed = false;
            }
            if !err_hi.is_zero() {
                let rel = crate::exactnum::log2_abs_rational(&(err_hi / mag));
                worst = Some(worst.map_or(rel, |w: f64| w.max(rel)));
            }
        }
    }

    let (mat, inv) = diagonalizer(prob, bits)?;
    let mut inverse_ok = true;
    for i in 0..m {
        for j in 0..m {
            let mut acc = ComplexInterval::real(Interval::from_i64(0, bits));
            for k in 0..m {
                acc = acc.add(&mat[i * m + k].mul(&inv[k * m + j]));
            }
            let target = Interval::from_i64((i == j) as i64, bits);
            let err = acc.re.sub(&target).abs().hi().max(acc.im.abs().hi());
            if err > tol {
                inverse_ok = false;
            }
        }
    }
    Ok(EntryCheckReport {
        n,
        tolerance_bits,
        entries_checked: m * m,
        worst_relative_error_log2: worst,
        inverse_ok,
        passed: passed && inverse_ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RootApproximation {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: BigRational,
    pub status: Status,
    /// Bits on which the last two approximants agree (an estimate of the
    /// achieved precision, not a certificate).
    pub agreement_bits: Option<u32>,
    pub report: ConvergenceReport,
}

/// Double `n` from 1 until consecutive approximants agree to `target_bits`
/// or `n` passes the cap. Perfect powers are returned exactly.
pub fn approximate_root(prob: &MthRootProblem, target_bits: u32) -> Result<RootApproximation> {
    approximate_root_with_cap(prob, target_bits, DEFAULT_N_CAP)
}

pub fn approximate_root_with_cap(prob: &MthRootProblem, target_bits: u32, cap: u64) -> Result<RootApproximation> {
    approximate_root_with(prob, target_bits, cap, target_bits)
}

/// As [`approximate_root_with_cap`], tabulating errors at `report_bits`.
pub fn approximate_root_with(
    prob: &MthRootProblem,
    target_bits: u32,
    cap: u64,
    report_bits: u32,
) -> Result<RootApproximation> {
    let oracle = oracle::nth_root(&prob.alpha, prob.m, report_bits + 32)?.to_interval();
    if let Some(k) = exact_root(&prob.alpha, prob.m) {
        let value = BigRational::from_integer(k);
        let report = ConvergenceReport::build(&[(0, value.clone())], Some(&oracle), report_bits, None);
        return Ok(RootApproximation {
            value,
            status: Status::Exact,
            agreement_bits: None,
            report,
        });
    }
    let (ij, uv) = default_pair(prob.m);
    let mut power = build_matrix(prob);
    let mut n = 1u64;
    let mut rows: Vec<(u64, BigRational)> = Vec::new();
    let tol = BigRational::new(BigInt::one(), pow2(target_bits));
    let mut status = Status::Unconverged;
    let mut agreement_bits = None;
    loop {
        if let Some(r) = ratio_from_power(&power, ij, uv) {
            if let Some((_, prev)) = rows.last() {
                let diff: BigRational = (&r - prev).abs();
                agreement_bits = Some(if diff.is_zero() {
                    u32::MAX
                } else {
                    (-crate::exactnum::log2_abs_rational(&diff)).floor().max(0.0) as u32
                });
                if diff < tol {
                    status = Status::Converged;
                }
            }
            rows.push((n, r));
        }
        if status == Status::Converged || n >= cap {
            break;
        }
        power = &power * &power;
        n *= 2;
    }
    let predicted = diagonalize(prob, 32)?.subdominant_ratio;
    let report = ConvergenceReport::build(&rows, Some(&oracle), report_bits, Some(predicted));
    let value = rows
        .last()
        .map(|(_, r)| r.clone())
        .ok_or_else(|| Error::Verification("no defined approximant".into()))?;
    Ok(RootApproximation {
        value,
        status,
        agreement_bits,
        report,
    })
}
