//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every threshold is pinned below; reference values
//! come from the bisection oracle and from quantities recomputed here.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use khovanskii::cubic::{cardano_reference, cubic_power_matrix, CubicProblem};
use khovanskii::cuberoot::{gamma_delta_rho, optimal_a, CubeRootProblem};
use khovanskii::exactnum::log2_abs_rational;
use khovanskii::matpow::{
    a_seq_closed_form, general_a_n, mat_pow, power_via_cayley, CharPoly3, CharPolyK, CoefficientSequence,
    SquareMatrix,
};
use khovanskii::mthroot::{self, MthRootProblem};
use khovanskii::oracle::{self, RootQuery};
use khovanskii::polyroot::{self, Outcome, ScanBudget};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_611;

// 1
const C1_MATRICES: usize = 200;
const C1_ENTRY_RANGE: i64 = 5;
const C1_N: (u64, u64) = (3, 12);
const C1_BUDGET: Duration = Duration::from_secs(10);
// 2
const C2_RANGE: i64 = 5;
const C2_MAX_N: u64 = 40;
const C2_BUDGET: Duration = Duration::from_secs(60);
// 3
const C3_ORDERS: [usize; 3] = [2, 3, 4];
const C3_VECTORS_PER_ORDER: usize = 60;
const C3_RANGE: i64 = 4;
const C3_MAX_N: u64 = 25;
// 4
const CUBE_ALPHAS: [i64; 6] = [2, 3, 5, 10, 100, 1000];
const C4_ORACLE_BITS: u32 = 256;
const C4_N: u64 = 80;
const C4_TOL: (i64, i64) = (1, 100_000_000);
const C4_RATE_STEP: u64 = 6;
const C4_RATE_WINDOW: (u64, u64) = (24, 60);
const C4_RATE_REL_TOL: f64 = 0.10;
const C4_BUDGET: Duration = Duration::from_secs(120);
// 5
const C5_N: (u64, u64) = (3, 40);
const C5_ORACLE_BITS: u32 = 320;
const C5_SLACK_BITS: u32 = 300;
// 6
const C6_N: (u64, u64) = (3, 8);
const C6_ORACLE_BITS: u32 = 320;
const C6_K_BOUND: i64 = 61;
// 7
const C7_GRID: [(i64, i64); 4] = [(1, 1), (2, 3), (5, 7), (9, 27)];
const C7_N: u64 = 80;
const C7_TOL: (i64, i64) = (1, 1_000_000);
const C7_CARDANO_BITS: u32 = 128;
const C7_CARDANO_TOL_BITS: u32 = 100;
const C7_POWER_MAX_N: u64 = 25;
// 8
const C8_MS: [u32; 5] = [2, 3, 4, 5, 6];
const C8_ALPHAS: [i64; 3] = [2, 10, 50];
const C8_TOL: (i64, i64) = (1, 10_000);
const C8_MAX_N: u64 = 1024;
const C8_ENTRY_MAX_N: u64 = 64;
const C8_ENTRY_TOL_BITS: u32 = 128;
// 9
const C9_K: (i64, i64) = (1, 8);
const C9_L: (i64, i64) = (1, 2);
const C9_RESIDUAL: (i64, i64) = (1, 1_000_000);
const C9_AGREE_BITS: u32 = 48;
// 10
const C10_ARGS: [&str; 5] = ["verify", "--suite", "all", "--seed", "7"];

type Check = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn two_pow_neg(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cube_matrix(alpha: &BigInt, a: &BigInt) -> SquareMatrix {
    SquareMatrix::from_fn(3, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => a.clone(),
        std::cmp::Ordering::Less => alpha.clone(),
        std::cmp::Ordering::Greater => BigInt::one(),
    })
}

fn entry_ratio(m: &SquareMatrix, num: (usize, usize), den: (usize, usize)) -> Option<BigRational> {
    let d = &m[den];
    (!d.is_zero()).then(|| BigRational::new(m[num].clone(), d.clone()))
}

fn horner(coeffs: &[i64], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, &c| acc * x + BigRational::from_integer(c.into()))
}

/// `-3`, `0`, `+3` by `n mod 6` as printed with the remark.
fn printed_signature(n: u64) -> i64 {
    match n % 6 {
        1 | 2 => -3,
        4 | 5 => 3,
        _ => 0,
    }
}

fn c1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mats: Vec<SquareMatrix> = (0..C1_MATRICES)
        .map(|_| SquareMatrix::from_fn(3, |_, _| rng.gen_range(-C1_ENTRY_RANGE..=C1_ENTRY_RANGE).into()))
        .collect();
    let bad: usize = mats
        .par_iter()
        .map(|a| (C1_N.0..=C1_N.1).filter(|&n| power_via_cayley(a, n) != mat_pow(a, n)).count())
        .sum();
    let total = C1_MATRICES as u64 * (C1_N.1 - C1_N.0 + 1);
    ensure(bad == 0, || format!("{bad} of {total} powers differ"))?;
    Ok(format!("{total} matrix powers identical"))
}

fn c2() -> Check {
    let r = C2_RANGE;
    let triples: Vec<(i64, i64, i64)> = (-r..=r)
        .flat_map(|t| (-r..=r).flat_map(move |s| (-r..=r).map(move |d| (t, s, d))))
        .collect();
    let bad: Vec<String> = triples
        .par_iter()
        .flat_map_iter(|&(t, s, d)| {
            let cp = CharPoly3::new(t, s, d);
            let seq = CoefficientSequence::from_cubic(&cp).extended(C2_MAX_N as usize);
            (0..=C2_MAX_N)
                .filter(move |&n| a_seq_closed_form(&cp, n) != seq.get(n as i64))
                .map(move |n| format!("(t,s,d)=({t},{s},{d}) n={n}"))
                .collect::<Vec<_>>()
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} mismatches, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} sequence values identical", triples.len() as u64 * (C2_MAX_N + 1)))
}

/// `a(n) = s_1 a(n-1) - s_2 a(n-2) + s_3 a(n-3) - ...`, `a(0) = 1`, `a(j < 0) = 0`.
fn order_k_recurrence(s: &[i64], upto: u64) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=upto as usize {
        let mut next = BigInt::zero();
        for (j, &sj) in s.iter().enumerate() {
            let j = j + 1;
            if j <= n {
                let term = BigInt::from(sj) * &a[n - j];
                if j % 2 == 1 {
                    next += term;
                } else {
                    next -= term;
                }
            }
        }
        a.push(next);
    }
    a
}

fn c3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut checked = 0u64;
    for k in C3_ORDERS {
        for _ in 0..C3_VECTORS_PER_ORDER {
            let s: Vec<i64> = (0..k).map(|_| rng.gen_range(-C3_RANGE..=C3_RANGE)).collect();
            let rec = order_k_recurrence(&s, C3_MAX_N);
            let cp = CharPolyK::from_i64(&s);
            for n in 0..=C3_MAX_N {
                let g = general_a_n(&cp, n);
                ensure(g == rec[n as usize], || format!("k={k} s={s:?} n={n}"))?;
                if k == 3 {
                    let c = a_seq_closed_form(&CharPoly3::new(s[0], s[1], s[2]), n);
                    ensure(g == c, || format!("k=3 closed form disagrees, s={s:?} n={n}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} values match the recurrence"))
}

fn c4() -> Check {
    let results: Vec<Check> = CUBE_ALPHAS
        .par_iter()
        .map(|&alpha| {
            let al = BigInt::from(alpha);
            let a = optimal_a(&al).map_err(|e| e.to_string())?.chosen;
            let prob = CubeRootProblem::new(alpha, a.clone()).map_err(|e| e.to_string())?;
            let theta = oracle::nth_root(&al, 3, C4_ORACLE_BITS).map_err(|e| e.to_string())?.to_rational();
            let rows = prob.iter().run_to(C4_N);
            let (n_last, r_last) = rows.last().ok_or("no approximants")?;
            let err = (r_last - &theta).abs();
            ensure(*n_last == C4_N && err < q(C4_TOL.0, C4_TOL.1), || {
                format!("alpha={alpha}: |r_{n_last} - alpha^(1/3)| = {:.3e}", 2f64.powf(log2_abs_rational(&err)))
            })?;

            // geometric mean of (|e_{n+6}| / |e_n|)^(1/6) over the window
            let log_err = |n: u64| -> Option<f64> {
                rows.iter()
                    .find(|(m, _)| *m == n)
                    .map(|(_, r)| log2_abs_rational(&(r - &theta)))
            };
            let (from, to) = C4_RATE_WINDOW;
            let mut acc = 0.0;
            let mut count = 0;
            for n in from..=to - C4_RATE_STEP {
                let (x, y) = (log_err(n).ok_or("missing row")?, log_err(n + C4_RATE_STEP).ok_or("missing row")?);
                acc += (y - x) / C4_RATE_STEP as f64;
                count += 1;
            }
            let fitted = 2f64.powf(acc / count as f64);

            // sqrt(h(a)) from the oracle value of theta
            let (af, alf, t) = (a.to_string().parse::<f64>().unwrap(), alpha as f64, theta_f64(&theta));
            let num = (af * af - alf) + (alf - af) * t + (1.0 - af) * t * t;
            let den = (af + t + t * t).powi(2);
            let predicted = (num / den).sqrt();
            let rel = fitted / predicted - 1.0;
            ensure(rel.abs() <= C4_RATE_REL_TOL, || {
                format!("alpha={alpha} a={a}: fitted rate {fitted:.5} vs sqrt(h) {predicted:.5}")
            })?;
            Ok(format!("{alpha}:{rel:+.3}"))
        })
        .collect();
    let parts = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("errors < 1e-8 at n={C4_N}; rate gaps {}", parts.join(" ")))
}

fn theta_f64(t: &BigRational) -> f64 {
    2f64.powf(log2_abs_rational(t))
}

fn c5() -> Check {
    let cells: Vec<(i64, u64)> = CUBE_ALPHAS
        .iter()
        .flat_map(|&a| (C5_N.0..=C5_N.1).map(move |n| (a, n)))
        .collect();
    let opt: Vec<BigInt> = CUBE_ALPHAS
        .iter()
        .map(|&a| optimal_a(&BigInt::from(a)).map(|r| r.chosen))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let thetas: Vec<BigRational> = CUBE_ALPHAS
        .iter()
        .map(|&a| oracle::nth_root(&BigInt::from(a), 3, C5_ORACLE_BITS).map(|t| t.to_rational()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let slack = two_pow_neg(C5_SLACK_BITS);
    let failures: Vec<String> = cells
        .par_iter()
        .filter_map(|&(alpha, n)| {
            let idx = CUBE_ALPHAS.iter().position(|&x| x == alpha).unwrap();
            let (a, theta) = (&opt[idx], &thetas[idx]);
            let p = mat_pow(&cube_matrix(&BigInt::from(alpha), a), n);
            let Some(ratio) = entry_ratio(&p, (1, 0), (2, 0)) else {
                return Some(format!("alpha={alpha} n={n}: A_(n,3,1) = 0"));
            };
            let two_n = BigRational::from_integer(BigInt::one() << n as usize);
            let lhs = ratio - theta;
            let main = theta * q(printed_signature(n), 1) / &two_n;
            let bound = q(8 * n as i64, 1) / &two_n + q(48, 1) * theta / (&two_n * &two_n);
            let resid = (lhs - main).abs();
            (resid + &slack >= bound - &slack).then(|| format!("alpha={alpha} n={n}"))
        })
        .collect();
    ensure(failures.is_empty(), || format!("bound fails at {}", failures.join(", ")))?;
    Ok(format!("{} (alpha, n) points within 8n/2^n + 48 alpha^(1/3)/4^n", cells.len()))
}

fn c6() -> Check {
    let mut worst = 0f64;
    for n in C6_N.0..=C6_N.1 {
        let alpha = (BigInt::one() << (4 * n) as usize) + 1;
        let a = optimal_a(&alpha).map_err(|e| e.to_string())?.chosen;
        let theta = oracle::nth_root(&alpha, 3, C6_ORACLE_BITS).map_err(|e| e.to_string())?.to_rational();
        let p = mat_pow(&cube_matrix(&alpha, &a), n);
        let ratio = entry_ratio(&p, (1, 0), (2, 0)).ok_or("A_(n,3,1) = 0")?;
        let two_n = BigRational::from_integer(BigInt::one() << n as usize);
        let x = &two_n * (ratio / &theta - BigRational::one());
        let dev = (x - q(printed_signature(n), 1)).abs();
        // the theta error is below 2^-300 after scaling; keep a 2^-200 margin
        let limit = q(C6_K_BOUND, 1) / &two_n;
        ensure(dev.clone() + two_pow_neg(200) < limit, || {
            format!("n={n}: |2^n(ratio - 1) - ({})| = {:.4}", printed_signature(n), theta_f64(&dev))
        })?;
        worst = worst.max(theta_f64(&(dev * &two_n)));
    }
    Ok(format!("largest |K_n| = {worst:.3} < {C6_K_BOUND}"))
}

fn c7() -> Check {
    for (p, qq) in C7_GRID {
        let prob = CubicProblem::new(p, qq).map_err(|e| e.to_string())?;
        let coeffs: Vec<BigInt> = [-qq, -p, 0, 1].iter().map(|&c| c.into()).collect();
        // f(0) = -q < 0 and f(1 + p + q) > 0
        let hi = 1 + p + qq;
        let root = |bits| oracle::bisect_root(&RootQuery::new(coeffs.clone(), q(0, 1), q(hi, 1), bits));
        let o = root(C7_CARDANO_BITS + 64).map_err(|e| e.to_string())?.to_rational();
        let r = prob.iter().run_to(C7_N).pop().ok_or("no approximant")?;
        ensure(r.0 == C7_N && (&r.1 - &o).abs() < q(C7_TOL.0, C7_TOL.1), || {
            format!("(p,q)=({p},{qq}): recurrence off at n={}", r.0)
        })?;
        let c = cardano_reference(&prob, C7_CARDANO_BITS).map_err(|e| e.to_string())?.to_rational();
        ensure((c - &o).abs() < two_pow_neg(C7_CARDANO_TOL_BITS), || {
            format!("(p,q)=({p},{qq}): Cardano reference off")
        })?;
        let a = prob.matrix();
        for n in 1..=C7_POWER_MAX_N {
            let closed = cubic_power_matrix(&prob, n).map_err(|e| e.to_string())?;
            ensure(closed == mat_pow(&a, n), || format!("(p,q)=({p},{qq}): power form differs at n={n}"))?;
        }
    }
    Ok(format!("{} cubics: recurrence, Cardano and power form agree", C7_GRID.len()))
}

fn c8() -> Check {
    let mut cases = Vec::new();
    for m in C8_MS {
        for alpha in C8_ALPHAS {
            let ceil = mthroot::heuristic_a(&BigInt::from(alpha), m).map_err(|e| e.to_string())?;
            cases.push((m, alpha, BigInt::one()));
            if !ceil.is_one() {
                cases.push((m, alpha, ceil));
            }
        }
    }
    let results: Vec<Result<(), String>> = cases
        .par_iter()
        .map(|(m, alpha, a)| {
            let label = format!("m={m} alpha={alpha} a={a}");
            let prob = MthRootProblem::new(*alpha, *m, a.clone()).map_err(|e| format!("{label}: {e}"))?;
            let diag = mthroot::diagonalize(&prob, 64).map_err(|e| format!("{label}: {e}"))?;
            ensure(diag.dominance_margin.is_certainly_positive(), || format!("{label}: margin not positive"))?;

            let target = oracle::nth_root(&BigInt::from(*alpha), *m, 64).map_err(|e| e.to_string())?.to_rational();
            let (num, den) = mthroot::default_pair(*m);
            let mat = mthroot::build_matrix(&prob);
            let mut power = mat.clone();
            let mut n = 1u64;
            let mut hit = None;
            while n <= C8_MAX_N {
                if let Some(r) = entry_ratio(&power, (num.0 - 1, num.1 - 1), (den.0 - 1, den.1 - 1)) {
                    if (r - &target).abs() < q(C8_TOL.0, C8_TOL.1) {
                        hit = Some(n);
                        break;
                    }
                }
                power = &power * &power;
                n *= 2;
            }
            ensure(hit.is_some(), || format!("{label}: no ratio within 1e-4 by n={C8_MAX_N}"))?;

            for n in 1..=C8_ENTRY_MAX_N {
                mthroot::entry_closed_form_check(&prob, n, C8_ENTRY_TOL_BITS).map_err(|e| format!("{label} n={n}: {e}"))?;
            }
            if *m == 3 {
                let c = CubeRootProblem::new(*alpha, a.clone()).map_err(|e| format!("{label}: {e}"))?;
                for n in 1..=C8_ENTRY_MAX_N {
                    let (_, d, r) = gamma_delta_rho(&c, n);
                    let want = (!r.is_zero()).then(|| BigRational::new(d, r));
                    let got = mthroot::ratio(&prob, (2, 1), (3, 1), n).map_err(|e| e.to_string())?;
                    ensure(got == want, || format!("{label}: cube-root ratio differs at n={n}"))?;
                }
            }
            Ok(())
        })
        .collect();
    for r in results {
        r?;
    }
    Ok(format!("{} (m, alpha, a) cases", cases.len()))
}

fn c9() -> Check {
    let budget = ScanBudget {
        max_n: polyroot::DEFAULT_MAX_N,
        agree_bits: C9_AGREE_BITS,
    };
    let f: [i64; 4] = [-1, -1, 0, 1];
    let coeffs: Vec<BigInt> = f.iter().map(|&c| c.into()).collect();
    let cells = polyroot::parameter_scan(&coeffs, C9_K.0..=C9_K.1, C9_L.0..=C9_L.1, budget).map_err(|e| e.to_string())?;
    let o = oracle::bisect_root(&RootQuery::from_i64(&f, 1, 2, 96)).map_err(|e| e.to_string())?.to_rational();
    let tol = two_pow_neg(C9_AGREE_BITS);
    let good: Vec<(i64, i64)> = cells
        .iter()
        .filter(|c| c.outcome == Outcome::Converged)
        .filter(|c| {
            let b = &c.limit.betas;
            b.len() == 3
                && horner(&f, &b[1]).abs() < q(C9_RESIDUAL.0, C9_RESIDUAL.1)
                && (&b[1] * &b[0] - BigRational::one()).abs() < tol
                && b[2].is_one()
                && (&b[1] - &o).abs() < q(C9_RESIDUAL.0, C9_RESIDUAL.1)
        })
        .map(|c| (c.k, c.l))
        .collect();
    ensure(!good.is_empty(), || "no converged cell for x^3 - x - 1".into())?;

    let plus: Vec<BigInt> = [1i64, 0, 1].iter().map(|&c| c.into()).collect();
    let cells2 = polyroot::parameter_scan(&plus, C9_K.0..=C9_K.1, C9_L.0..=C9_L.1, budget).map_err(|e| e.to_string())?;
    let converged = cells2.iter().filter(|c| c.converged()).count();
    ensure(converged == 0, || format!("x^2 + 1 reported {converged} converged cells"))?;
    Ok(format!(
        "x^3 - x - 1: {} of {} cells converged to the root; x^2 + 1: 0 of {} converged",
        good.len(),
        cells.len(),
        cells2.len()
    ))
}

trait Converged {
    fn converged(&self) -> bool;
}

impl Converged for polyroot::ScanCell {
    fn converged(&self) -> bool {
        self.outcome == Outcome::Converged || self.limit.converged
    }
}

fn c10() -> Check {
    let bin = env!("CARGO_BIN_EXE_khovanskii");
    let once = || Command::new(bin).args(C10_ARGS).output().map_err(|e| e.to_string());
    let (a, b) = (once()?, once()?);
    ensure(!a.stdout.is_empty(), || "empty output".into())?;
    ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), || "outputs differ".into())?;
    Ok(format!("{} identical bytes, exit {:?}", a.stdout.len(), a.status.code()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Check); 10] = [
        (1, "Cayley-Hamilton powers", Some(C1_BUDGET), c1),
        (2, "closed form vs recurrence", Some(C2_BUDGET), c2),
        (3, "order-k closed form", None, c3),
        (4, "cube-root convergence and rate", Some(C4_BUDGET), c4),
        (5, "error model bound", None, c5),
        (6, "mod-6 signature", None, c6),
        (7, "cubic real root", None, c7),
        (8, "m-th roots", None, c8),
        (9, "general polynomial construction", None, c9),
        (10, "determinism", None, c10),
    ];
    let mut all = true;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = match (res, budget) {
            (Ok(msg), Some(b)) if took > b => Err(format!("{msg}; took {took:.1?}, budget {b:?}")),
            (r, _) => r,
        };
        match res {
            Ok(msg) => println!("PASS criterion {id:>2} ({name}): {msg} [{took:.1?}]"),
            Err(msg) => {
                all = false;
                println!("FAIL criterion {id:>2} ({name}): {msg} [{took:.1?}]");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
