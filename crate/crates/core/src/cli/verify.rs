//! Seeded verification suites. Each suite checks a method against an
//! independent computation and counts identities checked and failed.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Format;
use crate::cubic::{self, cubic_power_matrix, CubicProblem};
use crate::cuberoot::{self, gamma_delta_rho, optimal_a, CubeRootProblem};
use crate::error::Result;
use crate::exactnum::pow2;
use crate::matpow::{
    a_seq_closed_form, general_a_n, mat_pow, power_via_cayley, power_via_cayley_general, CharPoly3, CharPolyK,
    CoefficientSequence, SquareMatrix,
};
use crate::mthroot::{self, MthRootProblem};
use crate::oracle;
use crate::polyroot::{self, Outcome, ScanBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Cayley,
    Cuberoot,
    Cubic,
    Mthroot,
    Polyroot,
    All,
}

impl Suite {
    const EACH: [Suite; 5] = [Suite::Cayley, Suite::Cuberoot, Suite::Cubic, Suite::Mthroot, Suite::Polyroot];

    fn name(self) -> &'static str {
        match self {
            Suite::Cayley => "cayley",
            Suite::Cuberoot => "cuberoot",
            Suite::Cubic => "cubic",
            Suite::Mthroot => "mthroot",
            Suite::Polyroot => "polyroot",
            Suite::All => "all",
        }
    }

    fn salt(self) -> u64 {
        Suite::EACH.iter().position(|s| *s == self).unwrap_or(0) as u64
    }
}

/// Failure messages kept per suite; the count is always exact.
const MAX_LISTED: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub seed: u64,
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

#[derive(Default)]
struct Tally {
    checks: u64,
    failed: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    /// A check whose computation may itself fail; an error counts as a failure.
    fn check_res(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED {
                self.failures.push(f);
            }
        }
    }
}

/// Run in parallel, merge in input order.
fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T) -> Tally + Sync + Send) -> Tally {
    let parts: Vec<Tally> = items.par_iter().map(f).collect();
    let mut t = Tally::default();
    for p in parts {
        t.merge(p);
    }
    t
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<SuiteResult>> {
    let list: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    list.into_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ s.salt());
            let t = match s {
                Suite::Cayley => cayley(&mut rng),
                Suite::Cuberoot => cube_roots(&mut rng),
                Suite::Cubic => cubics(&mut rng),
                Suite::Mthroot => mth_roots(&mut rng),
                Suite::Polyroot => poly_roots(&mut rng),
                Suite::All => unreachable!(),
            };
            Ok(SuiteResult {
                suite: s.name(),
                seed,
                checks: t.checks,
                failed: t.failed,
                failures: t.failures,
            })
        })
        .collect()
}

pub fn render(results: &[SuiteResult], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            s = serde_json::to_string_pretty(results).expect("suite results serialize");
            s.push('\n');
        }
        Format::Csv => {
            writeln!(s, "suite,seed,checks,failed").unwrap();
            for r in results {
                writeln!(s, "{},{},{},{}", r.suite, r.seed, r.checks, r.failed).unwrap();
            }
        }
        Format::Text => {
            for r in results {
                writeln!(s, "suite {} (seed {}): {} checks, {} failed", r.suite, r.seed, r.checks, r.failed).unwrap();
                for f in &r.failures {
                    writeln!(s, "  FAIL {f}").unwrap();
                }
            }
        }
    }
    s
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, r: i64) -> SquareMatrix {
    SquareMatrix::from_fn(dim, |_, _| BigInt::from(rng.gen_range(-r..=r)))
}

fn cayley(rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::default();
    let mats: Vec<SquareMatrix> = (0..200).map(|_| random_matrix(rng, 3, 5)).collect();
    t.merge(par_tally(&mats, |a| {
        let mut t = Tally::default();
        for n in 3..=12 {
            t.check(power_via_cayley(a, n) == mat_pow(a, n), || format!("cayley 3x3 n={n} a={a:?}"));
        }
        t
    }));
    let mats4: Vec<SquareMatrix> = (0..40).map(|_| random_matrix(rng, 4, 3)).collect();
    t.merge(par_tally(&mats4, |a| {
        let mut t = Tally::default();
        for n in 4..=10 {
            t.check(power_via_cayley_general(a, n) == mat_pow(a, n), || format!("cayley 4x4 n={n}"));
        }
        t
    }));
    for _ in 0..40 {
        let (a, b, c) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let cp = CharPoly3::new(a, b, c);
        let seq = CoefficientSequence::from_cubic(&cp).extended(40);
        for n in 0..=40u64 {
            t.check(a_seq_closed_form(&cp, n) == seq.get(n as i64), || {
                format!("closed form t={a} s={b} d={c} n={n}")
            });
        }
    }
    for k in 2..=4usize {
        for _ in 0..10 {
            let s: Vec<i64> = (0..k).map(|_| rng.gen_range(-4..=4)).collect();
            let cp = CharPolyK::from_i64(&s);
            let seq = CoefficientSequence::new(cp.clone()).extended(25);
            for n in 0..=25u64 {
                t.check(general_a_n(&cp, n) == seq.get(n as i64), || format!("general k={k} s={s:?} n={n}"));
            }
        }
    }
    t
}

fn within(x: &BigRational, y: &BigRational, tol: &BigRational) -> bool {
    (x - y).abs() < *tol
}

fn cube_roots(rng: &mut ChaCha8Rng) -> Tally {
    let mut alphas: Vec<i64> = vec![2, 3, 5, 10, 100, 1000];
    alphas.push(rng.gen_range(2..=1_000_000));
    alphas.push(rng.gen_range(2..=1_000_000));
    let tol = BigRational::new(BigInt::one(), BigInt::from(100_000_000));
    let mut t = par_tally(&alphas, |&alpha| {
        let mut t = Tally::default();
        let al = BigInt::from(alpha);
        let conv = (|| -> Result<bool> {
            let a = optimal_a(&al)?.chosen;
            let prob = CubeRootProblem::new(al.clone(), a)?;
            let r = prob.iter().run_to(80).pop().map(|p| p.1);
            let o = oracle::nth_root(&al, 3, 256)?.to_rational();
            Ok(r.is_some_and(|r| within(&r, &o, &tol)))
        })();
        t.check_res(conv, || format!("cube root of {alpha} by n=80"));
        for n in 3..=40 {
            t.check_res(cuberoot::error_model_report(&al, n, 192).map(|r| r.holds), || {
                format!("error model alpha={alpha} n={n}")
            });
        }
        t
    });
    let ns: Vec<u64> = (3..=8).collect();
    t.merge(par_tally(&ns, |&n| {
        let mut t = Tally::default();
        let al = (BigInt::one() << (4 * n) as usize) + 1;
        t.check_res(cuberoot::error_model_report(&al, n, 192).map(|r| r.k_n_within_61), || {
            format!("mod-6 signature n={n}")
        });
        t
    }));
    t
}

fn cubics(rng: &mut ChaCha8Rng) -> Tally {
    let mut grid: Vec<(i64, i64)> = vec![(1, 1), (2, 3), (5, 7), (9, 27)];
    while grid.len() < 7 {
        let (p, q) = (rng.gen_range(1..=20i64), rng.gen_range(1..=60i64));
        if 27 * q * q > 4 * p * p * p {
            grid.push((p, q));
        }
    }
    let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
    par_tally(&grid, |&(p, q)| {
        let mut t = Tally::default();
        let prob = match CubicProblem::new(p, q) {
            Ok(x) => x,
            Err(e) => {
                t.check(false, || format!("cubic p={p} q={q}: {e}"));
                return t;
            }
        };
        let root = oracle::real_root(&prob.coefficients(), 192);
        let conv = root.clone().and_then(|o| {
            let o = o.ok_or_else(|| crate::Error::Verification("no bracket".into()))?;
            let r = prob.iter().run_to(80).pop().map(|p| p.1);
            Ok(r.is_some_and(|r| within(&r, &o.to_rational(), &tol)))
        });
        t.check_res(conv, || format!("cubic p={p} q={q} recurrence by n=80"));
        let card = root.and_then(|o| {
            let o = o.ok_or_else(|| crate::Error::Verification("no bracket".into()))?;
            let c = cubic::cardano_reference(&prob, 128)?;
            let tol = BigRational::new(BigInt::one(), pow2(100));
            Ok(within(&c.to_rational(), &o.to_rational(), &tol))
        });
        t.check_res(card, || format!("cubic p={p} q={q} cardano"));
        let a = prob.matrix();
        for n in 1..=25 {
            t.check_res(cubic_power_matrix(&prob, n).map(|m| m == mat_pow(&a, n)), || {
                format!("cubic p={p} q={q} power matrix n={n}")
            });
        }
        t
    })
}

fn mth_roots(rng: &mut ChaCha8Rng) -> Tally {
    let mut cases = Vec::new();
    for m in 2..=6u32 {
        for alpha in [2i64, 10, 50] {
            let heur = mthroot::heuristic_a(&BigInt::from(alpha), m).expect("alpha >= 1");
            let mut shifts = vec![BigInt::one(), heur];
            shifts.dedup();
            for a in shifts {
                let ns = [rng.gen_range(1..=64u64), rng.gen_range(1..=64u64), 64];
                cases.push((alpha, m, a, ns));
            }
        }
    }
    let tol = BigRational::new(BigInt::one(), BigInt::from(10_000));
    par_tally(&cases, |(alpha, m, a, ns)| {
        let mut t = Tally::default();
        let label = format!("alpha={alpha} m={m} a={a}");
        let prob = match MthRootProblem::new(*alpha, *m, a.clone()) {
            Ok(p) => p,
            Err(e) => {
                t.check(false, || format!("{label}: {e}"));
                return t;
            }
        };
        t.check_res(mthroot::diagonalize(&prob, 64).map(|d| d.dominant), || format!("{label} dominance"));
        let conv = (|| -> Result<bool> {
            let r = mthroot::approximate_root_with_cap(&prob, 14, 1024)?;
            let o = oracle::nth_root(prob.alpha(), *m, 64)?.to_rational();
            Ok(within(&r.value, &o, &tol))
        })();
        t.check_res(conv, || format!("{label} ratio within 1e-4 by n=1024"));
        for &n in ns {
            t.check_res(mthroot::entry_closed_form_report(&prob, n, 96).map(|r| r.passed), || {
                format!("{label} eigen-sum n={n}")
            });
        }
        if *m == 3 {
            if let Ok(c) = CubeRootProblem::new(*alpha, a.clone()) {
                for n in 1..=20 {
                    let (_, d, r) = gamma_delta_rho(&c, n);
                    let want = (!r.is_zero()).then(|| BigRational::new(d, r));
                    t.check_res(mthroot::ratio(&prob, (2, 1), (3, 1), n).map(|x| x == want), || {
                        format!("{label} cube case n={n}")
                    });
                }
            }
        }
        t
    })
}

fn poly_roots(rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::default();
    let budget = ScanBudget::default();
    let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let micro = BigRational::new(BigInt::one(), BigInt::from(1_000_000));

    let consistent = |t: &mut Tally, cells: &[polyroot::ScanCell], label: &str| {
        for c in cells.iter().filter(|c| c.outcome == Outcome::Converged) {
            let res_ok = c.limit.residual.as_ref().is_some_and(|r| r.to_rational() < micro);
            let id_ok = c.limit.identity_error_log2.as_ref().map_or(true, |e| e.to_f64() < -48.0);
            t.check(res_ok && id_ok, || format!("{label} k={} l={} converged cell inconsistent", c.k, c.l));
        }
    };

    match polyroot::parameter_scan(&ints(&[-1, -1, 0, 1]), 1..=8, 1..=2, budget) {
        Ok(cells) => {
            let any = cells.iter().any(|c| c.outcome == Outcome::Converged);
            t.check(any, || "x^3 - x - 1: no converged cell".into());
            consistent(&mut t, &cells, "x^3 - x - 1");
        }
        Err(e) => t.check(false, || format!("x^3 - x - 1 scan: {e}")),
    }
    match polyroot::parameter_scan(&ints(&[1, 0, 1]), 1..=8, 1..=2, budget) {
        Ok(cells) => {
            for c in &cells {
                t.check(c.outcome != Outcome::Converged, || format!("x^2 + 1 k={} l={} converged", c.k, c.l));
            }
        }
        Err(e) => t.check(false, || format!("x^2 + 1 scan: {e}")),
    }
    // (x - r)(x^2 + 1) for a seeded r: only one real root, any convergence must be to it
    let r = rng.gen_range(2..=5i64);
    let f = ints(&[-r, 1, -r, 1]);
    match polyroot::parameter_scan(&f, 1..=6, 1..=2, budget) {
        Ok(cells) => consistent(&mut t, &cells, &format!("(x - {r})(x^2 + 1)")),
        Err(e) => t.check(false, || format!("(x - {r})(x^2 + 1) scan: {e}")),
    }
    t
}
