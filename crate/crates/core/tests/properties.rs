//! Invariants of every module, as property tests against independent
//! computations.

use std::cmp::Ordering;

use khovanskii::cubic::{
    cubic_power_matrix, depress, subdominant_ratio, CubicProblem, GeneralCubic,
};
use khovanskii::cuberoot::{
    gamma_delta_rho, optimal_a, power_matrix_form, CubeRootProblem,
};
use khovanskii::exactnum::{
    adaptive_compare, fixed_nth_root, integer_root_floor, Expr, PrecisionPolicy,
};
use khovanskii::matpow::{adjugate_3, char_poly_3, mat_pow, power_via_cayley, SquareMatrix};
use khovanskii::mthroot::{self, MthRootProblem};
use khovanskii::oracle::{self, eval_poly};
use khovanskii::polyroot::{
    build_general_matrix, column_ratios, identity_error, iterate_general, GeneralPolyProblem, Outcome,
};
use khovanskii::report::{least_squares_rate, interval_log2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn two_pow_neg(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

fn ratio21(m: &SquareMatrix) -> Option<BigRational> {
    (!m[(2, 0)].is_zero()).then(|| BigRational::new(m[(1, 0)].clone(), m[(2, 0)].clone()))
}

// exactnum

#[test]
fn integer_root_floor_exhaustive() {
    for m in 2..=5u32 {
        let mut r = 0u64;
        for x in 0..=1_000_000u64 {
            // walk the expected root upward alongside x
            while (r + 1).pow(m) <= x {
                r += 1;
            }
            let got = integer_root_floor(&BigInt::from(x), m).unwrap();
            assert_eq!(got, BigInt::from(r), "x={x} m={m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixed_root_is_stable_under_extra_bits(alpha in 2i64..100_000, m in 2u32..=7, bits in 16u32..200) {
        let al = BigInt::from(alpha);
        let lo = fixed_nth_root(&al, m, bits).unwrap().to_rational();
        let hi = fixed_nth_root(&al, m, bits + 64).unwrap().to_rational();
        prop_assert!((lo - hi).abs() <= two_pow_neg(bits));
    }
}

fn radical_expr(alpha: i64, k: u32, m: u32, shift: i64) -> Expr {
    Expr::radical(&BigInt::from(alpha), k, m) + Expr::int(shift)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn adaptive_compare_is_antisymmetric_and_matches_direct_evaluation(
        a1 in 2i64..500, k1 in 1u32..3, m1 in 2u32..6, s1 in -5i64..5,
        a2 in 2i64..500, k2 in 1u32..3, m2 in 2u32..6, s2 in -5i64..5,
    ) {
        let policy = PrecisionPolicy::default();
        let x = radical_expr(a1, k1, m1, s1);
        let y = radical_expr(a2, k2, m2, s2);
        let xy = adaptive_compare(&x, &y, &policy);
        let yx = adaptive_compare(&y, &x, &policy);
        match (xy, yx) {
            (Ok(p), Ok(r)) => {
                prop_assert_eq!(p, r.reverse());
                let d = (x.clone() - y.clone()).eval(512).unwrap();
                if !d.contains_zero() {
                    let direct = if d.lo_scaled().is_positive() { Ordering::Greater } else { Ordering::Less };
                    prop_assert_eq!(p, direct);
                }
            }
            // only a true tie may stay unresolved, and then in both directions
            (Err(_), Err(_)) => prop_assert!((x - y).eval(512).unwrap().contains_zero()),
            _ => prop_assert!(false, "asymmetric resolution"),
        }
    }
}

// matpow

fn matrix3() -> impl Strategy<Value = SquareMatrix> {
    proptest::collection::vec(-5i64..=5, 9).prop_map(|v| {
        SquareMatrix::from_rows(&[v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cayley_power_matches_repeated_squaring(a in matrix3(), n in 3u64..=12) {
        prop_assert_eq!(power_via_cayley(&a, n), mat_pow(&a, n));
    }

    #[test]
    fn adjugate_times_matrix_is_determinant(a in matrix3()) {
        let adj = adjugate_3(&a).unwrap();
        let det = a.determinant();
        let want = SquareMatrix::identity(3).scale(&det);
        prop_assert_eq!(&a * &adj, want.clone());
        prop_assert_eq!(&adj * &a, want);
    }
}

// cuberoot

fn cube_problem() -> impl Strategy<Value = CubeRootProblem> {
    (2i64..300, -6i64..40).prop_filter_map("acond", |(alpha, a)| CubeRootProblem::new(alpha, a).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_form_matches_matrix_power(p in cube_problem(), n in 3u64..=30) {
        prop_assert_eq!(power_matrix_form(&p, n), mat_pow(&p.matrix(), n));
    }

    #[test]
    fn approximant_identities(p in cube_problem()) {
        // a_n from the characteristic polynomial computed here, not by the module
        let cp = char_poly_3(&p.matrix()).unwrap();
        let mut a = vec![BigInt::one(), cp.t.clone()];
        for k in 2..=40 {
            let next = &cp.t * &a[k - 1] - &cp.s * &a[k - 2]
                + if k >= 3 { &cp.d * &a[k - 3] } else { BigInt::zero() };
            a.push(next);
        }
        let al = BigInt::from(p.alpha().clone());
        let mat = p.matrix();
        for (n, r) in p.iter().run_to(38) {
            let n = n as usize;
            let den = &a[n] - (p.a() - BigInt::one()) * &a[n - 1];
            let want = BigRational::one() + BigRational::new((&al - BigInt::one()) * &a[n - 1], den);
            prop_assert_eq!(&r, &want);
            prop_assert_eq!(Some(r), ratio21(&mat_pow(&mat, n as u64 + 1)));
        }
    }
}

#[test]
fn limit_is_independent_of_the_shift() {
    let o = oracle::nth_root(&BigInt::from(5), 3, 256).unwrap().to_rational();
    for a in [1, 2, 3, 5] {
        let p = CubeRootProblem::new(5, a).unwrap();
        let r = p.iter().run_to(80).pop().unwrap().1;
        assert!((r - &o).abs() < q(1, 100_000_000), "a={a}");
    }
}

#[test]
fn perfect_cubes_report_exactness() {
    for k in [2i64, 3, 5] {
        let alpha = k * k * k;
        let a = optimal_a(&BigInt::from(alpha)).unwrap().chosen;
        let p = CubeRootProblem::new(alpha, a).unwrap();
        let rows = p.iter().run_to(80);
        let last = &rows.last().unwrap().1;
        assert!((last - q(k, 1)).abs() < q(1, 100_000_000));
        for (_, r) in &rows {
            assert_eq!(p.is_exact(r), *r == q(k, 1), "alpha={alpha}");
        }
    }
}

// cubic

fn cubic_problem() -> impl Strategy<Value = CubicProblem> {
    (1i64..30, 1i64..80).prop_filter_map("one real root", |(p, q)| CubicProblem::new(p, q).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_power_form_matches(p in cubic_problem(), n in 3u64..=25) {
        prop_assert_eq!(cubic_power_matrix(&p, n).unwrap(), mat_pow(&p.matrix(), n));
    }

    #[test]
    fn cubic_iteration_reads_matrix_ratios(p in cubic_problem()) {
        let mat = p.matrix();
        for (n, r) in p.iter().run_to(30) {
            prop_assert_eq!(Some(r), ratio21(&mat_pow(&mat, n + 1)));
        }
    }

    #[test]
    fn depressed_limit_solves_the_original(
        a in prop_oneof![-4i64..=-1, 1i64..=4], b in -6i64..=6, c in -12i64..=12, d in -20i64..=20,
    ) {
        let g = GeneralCubic::new(a, b, c, d);
        let dep = depress(&g).unwrap();
        let Ok(prob) = dep.problem() else { return Ok(()) };
        let rho = subdominant_ratio(&prob, 32).unwrap().to_f64();
        prop_assume!(rho < 0.9);
        let steps = (200.0 / -rho.log2()).ceil() as u64;
        let y = prob.iter().run_to(steps).pop().unwrap().1;
        let x = dep.back_map.apply(&y);
        let res = eval_poly(&g.coefficients(), &x).abs();
        prop_assert!(res < two_pow_neg(64), "residual {}", res);
    }
}

#[test]
fn cubic_rate_matches_subdominant_ratio() {
    for (p, qq) in [(1, 1), (2, 3), (5, 7), (9, 27)] {
        let prob = CubicProblem::new(p, qq).unwrap();
        let root = oracle::real_root(&prob.coefficients(), 400).unwrap().unwrap().to_interval();
        let pts: Vec<(u64, f64)> = prob
            .iter()
            .run_to(80)
            .into_iter()
            .filter(|(n, _)| (30..=80).contains(n))
            .filter_map(|(n, r)| interval_log2(&khovanskii::exactnum::abs_error(&r, &root)).map(|l| (n, l)))
            .collect();
        let fitted = least_squares_rate(&pts).unwrap();
        let predicted = subdominant_ratio(&prob, 32).unwrap().to_f64();
        assert!((fitted / predicted - 1.0).abs() < 0.10, "p={p} q={qq}: {fitted} vs {predicted}");
    }
}

// mthroot

#[test]
fn ratios_with_equal_exponent_share_a_limit() {
    for (alpha, m) in [(2i64, 4u32), (10, 4), (10, 5), (50, 3)] {
        let p = MthRootProblem::with_default_a(alpha, m).unwrap();
        let power = mat_pow(&mthroot::build_matrix(&p), 512);
        let mut by_exp: std::collections::BTreeMap<i64, Vec<BigRational>> = Default::default();
        let mu = m as usize;
        for i in 1..=mu {
            for j in 1..=mu {
                for u in 1..=mu {
                    for v in 1..=mu {
                        let e = mthroot::limit_exponent((i, j), (u, v));
                        if let Some(r) = mthroot::ratio_from_power(&power, (i, j), (u, v)) {
                            by_exp.entry(e).or_default().push(r);
                        }
                    }
                }
            }
        }
        for (e, rs) in by_exp {
            // oracle: alpha^(e/m) = (alpha^|e|)^(1/m), inverted for e < 0
            let base = BigInt::from(alpha).pow(e.unsigned_abs() as u32);
            let mut want = oracle::nth_root(&base, m, 64).unwrap().to_rational();
            if e < 0 {
                want = want.recip();
            }
            let tol = q(1, 10_000) * (BigRational::one() + want.abs());
            for r in rs {
                assert!((r - &want).abs() < tol, "alpha={alpha} m={m} e={e}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cube_case_agrees_with_cube_root_module(p in cube_problem(), n in 1u64..=40) {
        prop_assume!(p.a().is_positive());
        let mp = MthRootProblem::new(p.alpha().clone(), 3, p.a().clone()).unwrap();
        let (_, d, r) = gamma_delta_rho(&p, n);
        let want = (!r.is_zero()).then(|| BigRational::new(d, r));
        prop_assert_eq!(mthroot::ratio(&mp, (2, 1), (3, 1), n).unwrap(), want);
    }

    #[test]
    fn eigen_sum_reproduces_entries(alpha in 2i64..60, m in 2u32..=6, a in 1i64..5, n in 1u64..=64) {
        let p = MthRootProblem::new(alpha, m, a).unwrap();
        let r = mthroot::entry_closed_form_report(&p, n, 128).unwrap();
        prop_assert!(r.passed, "{:?}", r);
    }
}

#[test]
fn dominance_on_the_grid() {
    for m in 2..=6u32 {
        for alpha in [2i64, 10, 50] {
            let heur = mthroot::heuristic_a(&BigInt::from(alpha), m).unwrap();
            for a in [BigInt::one(), heur] {
                let d = mthroot::diagonalize(&MthRootProblem::new(alpha, m, a.clone()).unwrap(), 64).unwrap();
                assert!(d.dominant && d.dominance_margin.is_certainly_positive(), "alpha={alpha} m={m} a={a}");
            }
        }
    }
}

// polyroot

/// The displayed fixed-point system, evaluated at an arbitrary vector.
fn displayed_system(coeffs: &[BigRational], k: &BigRational, l: &BigRational, beta: &[BigRational]) -> Vec<BigRational> {
    let m = coeffs.len() - 1;
    let am = &coeffs[m];
    let b = |i: usize| beta[i - 1].clone();
    let den = l * am * b(m - 1) + k;
    let mut out = Vec::new();
    for i in 1..=m.saturating_sub(3) {
        out.push((k * b(i) + l * am * b(i + 1)) / &den);
    }
    if m >= 3 {
        out.push((k * b(m - 2) + l * am) / &den);
    }
    let mut num = (k - l * &coeffs[m - 1]) * b(m - 1) - l * &coeffs[m - 2];
    for i in 1..=m - 2 {
        num -= l * &coeffs[i - 1] * b(i);
    }
    out.push(num / &den);
    out
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrix_action_reproduces_displayed_system(
        m in 2usize..=5,
        coeffs in proptest::collection::vec(-9i64..=9, 6),
        lead in prop_oneof![-5i64..=-1, 1i64..=5],
        k in prop_oneof![-6i64..=-1, 1i64..=6],
        l in prop_oneof![-3i64..=-1, 1i64..=3],
        beta in proptest::collection::vec(small_rational(), 4),
    ) {
        let mut c: Vec<i64> = coeffs[..m].to_vec();
        c.push(lead);
        let prob = GeneralPolyProblem::from_i64(&c, k, l).unwrap();
        let mat = build_general_matrix(&prob);
        let mut v: Vec<BigRational> = beta[..m - 1].to_vec();
        v.push(BigRational::one());
        let av: Vec<BigRational> = (0..m)
            .map(|i| (0..m).map(|j| BigRational::from_integer(mat[(i, j)].clone()) * &v[j]).sum())
            .collect();
        prop_assume!(!av[m - 1].is_zero());
        let from_matrix: Vec<BigRational> = av[..m - 1].iter().map(|x| x / &av[m - 1]).collect();
        let cr: Vec<BigRational> = c.iter().map(|&x| q(x, 1)).collect();
        let displayed = displayed_system(&cr, &q(k, 1), &q(l, 1), &v[..m - 1]);
        prop_assert_eq!(from_matrix, displayed);
    }

    #[test]
    fn ratios_are_homogeneous_in_k_and_l(
        coeffs in proptest::collection::vec(-6i64..=6, 3..=5),
        lead in prop_oneof![-3i64..=-1, 1i64..=3],
        k in prop_oneof![-6i64..=-1, 1i64..=6],
        l in prop_oneof![-3i64..=-1, 1i64..=3],
        c in prop_oneof![-4i64..=-1, 2i64..=4],
    ) {
        let mut co = coeffs.clone();
        co.push(lead);
        let base = build_general_matrix(&GeneralPolyProblem::from_i64(&co, k, l).unwrap());
        let scaled = build_general_matrix(&GeneralPolyProblem::from_i64(&co, c * k, c * l).unwrap());
        prop_assert_eq!(scaled.clone(), base.scale(&BigInt::from(c)));
        for n in 1..=16 {
            prop_assert_eq!(column_ratios(&mat_pow(&base, n)), column_ratios(&mat_pow(&scaled, n)));
        }
    }

    #[test]
    fn converged_limits_satisfy_the_identities(
        roots in proptest::collection::vec(-4i64..=4, 1..=2),
        k in 1i64..=8,
        l in prop_oneof![-2i64..=-1, 1i64..=2],
    ) {
        // (x - r_1)...(x - r_j)(x^2 + x + 1): known real roots plus a complex pair
        let mut poly = vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)];
        for r in &roots {
            let mut next = vec![BigInt::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            poly = next;
        }
        let agree = 48u32;
        let prob = GeneralPolyProblem::new(poly.clone(), k, l).unwrap();
        let lim = iterate_general(&prob, 1024, agree).unwrap();
        if lim.outcome == Outcome::Converged {
            prop_assert_eq!(lim.betas.last().unwrap(), &BigRational::one());
            prop_assert!(identity_error(&lim.betas) < two_pow_neg(agree));
            let res = eval_poly(&poly, lim.root().unwrap()).abs();
            prop_assert!(res < two_pow_neg(agree / 2));
        }
    }
}

// oracle

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_is_stable_under_extra_bits(alpha in 2i64..1_000_000, m in 2u32..=6, bits in 16u32..160) {
        let al = BigInt::from(alpha);
        let lo = oracle::nth_root(&al, m, bits).unwrap().to_rational();
        let hi = oracle::nth_root(&al, m, bits + 64).unwrap().to_rational();
        prop_assert!((lo - hi).abs() <= two_pow_neg(bits));
    }

    #[test]
    fn oracle_is_exact_on_perfect_powers(k in 1i64..200, m in 2u32..=5, bits in 8u32..128) {
        let x = BigInt::from(k).pow(m);
        let r = oracle::nth_root(&x, m, bits).unwrap().to_rational();
        prop_assert_eq!(r, BigRational::from_integer(integer_root_floor(&x, m).unwrap()));
    }
}
