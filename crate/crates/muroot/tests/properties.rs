mod common;

use common::{sample_instance, sample_start, MAX_RATE};
use muroot::mu::{
    empirical_rate, mu_step, rate_at_root, run_sequence, solve_bracket, BracketLimit, Direction,
    SolveConfig, TraceStatus,
};
use muroot::oracle::{bracket_index, durand_kerner_roots};
use muroot::poly::{esym, esym_excluding, Polynomial};
use muroot::split::{check_alternating, pad_split, split_signs, verify_assumption};
use muroot::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs() + b.abs())
}

fn close_c(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm() + b.norm())
}

fn arbitrary_roots() -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im)),
        1..8,
    )
}

/// Conjugate-closed sets in the right half plane, with one strictly
/// positive real root guaranteed so the sign split never degenerates.
fn paired_roots() -> impl Strategy<Value = Vec<Complex64>> {
    let atom = prop_oneof![
        (0.05f64..3.0).prop_map(|r| vec![Complex64::new(r, 0.0)]),
        (0.0f64..2.5, 0.1f64..2.0)
            .prop_map(|(re, im)| vec![Complex64::new(re, im), Complex64::new(re, -im)]),
    ];
    (0.05f64..3.0, proptest::collection::vec(atom, 0..4)).prop_map(|(r, atoms)| {
        let mut roots = vec![Complex64::new(r, 0.0)];
        roots.extend(atoms.concat());
        roots
    })
}

/// As `paired_roots`, but spaced out enough for root finding to recover
/// every root cleanly. Conjugate twins are at least 0.2 apart already since
/// the pair atoms keep the imaginary part above 0.1.
fn separated_paired_roots() -> impl Strategy<Value = Vec<Complex64>> {
    paired_roots().prop_filter("roots too close", |roots| {
        roots
            .iter()
            .enumerate()
            .all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() >= 0.1))
    })
}

proptest! {
    #[test]
    fn excluded_sums_satisfy_the_removal_recurrence(roots in arbitrary_roots()) {
        let n = roots.len();
        for k in 0..n {
            for j in 0..=n as i64 {
                let lhs = esym_excluding(&roots, j, k).unwrap();
                let full = esym(&roots, j as usize).unwrap();
                let below = esym_excluding(&roots, j - 1, k).unwrap();
                let rhs = full - roots[k] * below;
                prop_assert!(close_c(lhs, rhs, 1e-9), "k={k} j={j}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn removing_one_root_links_adjacent_orders(roots in arbitrary_roots()) {
        let n = roots.len();
        for k in 0..n {
            for j in 0..n as i64 {
                let lhs = esym(&roots, (j + 1) as usize).unwrap() - roots[k] * esym(&roots, j as usize).unwrap();
                let rhs = esym_excluding(&roots, j + 1, k).unwrap()
                    - roots[k] * roots[k] * esym_excluding(&roots, j - 1, k).unwrap();
                prop_assert!(close_c(lhs, rhs, 1e-9), "k={k} j={j}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn paired_right_half_plane_roots_give_nonnegative_sums(roots in paired_roots()) {
        for j in 0..=roots.len() {
            let e = esym(&roots, j).unwrap();
            let scale = 1.0 + e.norm();
            prop_assert!(e.im.abs() <= 1e-9 * scale, "j={j}: imaginary part {}", e.im);
            prop_assert!(e.re >= -1e-9 * scale, "j={j}: negative sum {}", e.re);
        }
    }

    #[test]
    fn coefficients_are_signed_elementary_sums(roots in paired_roots()) {
        let n = roots.len();
        let f = Polynomial::from_roots(&roots).unwrap();
        prop_assert_eq!(f.degree(), n);
        for j in 0..=n {
            let expected = esym(&roots, j).unwrap().re * if j % 2 == 0 { 1.0 } else { -1.0 };
            let got = f.coeffs()[n - j];
            prop_assert!(close(got, expected, 1e-8), "x^{}: {got} vs {expected}", n - j);
        }
    }

    #[test]
    fn shifting_back_restores_coefficients(
        coeffs in proptest::collection::vec(-5.0f64..5.0, 1..8),
        s in -3.0f64..3.0,
    ) {
        let f = Polynomial::new(coeffs);
        let back = f.taylor_shift(s).taylor_shift(-s);
        prop_assert_eq!(back.degree(), f.degree());
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            prop_assert!(close(*a, *b, 1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn shifted_polynomial_evaluates_at_offset_points(
        coeffs in proptest::collection::vec(-5.0f64..5.0, 1..8),
        s in -3.0f64..3.0,
        x in -2.0f64..2.0,
    ) {
        let f = Polynomial::new(coeffs);
        let a = f.taylor_shift(s).eval(x);
        let b = f.eval(x + s);
        prop_assert!(close(a, b, 1e-8), "{a} vs {b}");
    }

    #[test]
    fn sign_split_partitions_and_reassembles_exactly(roots in paired_roots()) {
        let f = Polynomial::from_roots(&roots).unwrap();
        prop_assert!(check_alternating(&f));
        let s = split_signs(&f).unwrap();
        for (j, (&pc, &qc)) in s.p().coeffs().iter().zip(s.q().coeffs()).enumerate() {
            prop_assert!(pc >= 0.0 && qc >= 0.0, "x^{j}: p={pc} q={qc}");
            prop_assert!(pc == 0.0 || qc == 0.0, "x^{j} lands on both sides");
        }
        let diff = s.difference();
        prop_assert_eq!(diff.coeffs(), f.coeffs());
    }

    #[test]
    fn assumption_report_separates_half_planes(roots in paired_roots(), bad_re in -3.0f64..-0.1) {
        let f = Polynomial::from_roots(&roots).unwrap();
        let good = verify_assumption(&f, &roots, 1e-8);
        prop_assert!(good.satisfied);
        prop_assert!(good.max_real_part > 0.0);

        let mut shifted = roots.clone();
        shifted.push(Complex64::new(bad_re, 0.0));
        let g = Polynomial::from_roots(&shifted).unwrap();
        let report = verify_assumption(&g, &shifted, 1e-8);
        prop_assert!(!report.satisfied);
        prop_assert!(report.min_real_part <= bad_re + 1e-12);
    }

    #[test]
    fn padding_keeps_the_difference_and_raises_both_sides(
        roots in paired_roots(),
        d_coeffs in proptest::collection::vec(0.0f64..4.0, 0..5),
    ) {
        let f = Polynomial::from_roots(&roots).unwrap();
        let s = split_signs(&f).unwrap();
        let d = Polynomial::new(d_coeffs);
        let padded = pad_split(&s, &d).unwrap();

        let before = s.difference();
        let after = padded.difference();
        prop_assert_eq!(after.degree(), before.degree());
        for (a, b) in after.coeffs().iter().zip(before.coeffs()) {
            prop_assert!(close(*a, *b, 1e-12), "{a} vs {b}");
        }
        for &x in &[0.3, 1.0, 2.7] {
            prop_assert!(padded.p().eval(x) >= s.p().eval(x) * (1.0 - 1e-12));
            prop_assert!(padded.q().eval(x) >= s.q().eval(x) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn computed_roots_recover_the_construction(roots in separated_paired_roots()) {
        let f = Polynomial::from_roots(&roots).unwrap();
        let report = durand_kerner_roots(&f, 500, 1e-12).unwrap();
        prop_assert_eq!(report.all_roots.len(), roots.len());
        for r in &roots {
            let nearest = report
                .all_roots
                .iter()
                .map(|z| (z - r).norm())
                .fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-6, "no computed root near {r}: best {nearest}");
        }
        let expected_reals = roots.iter().filter(|r| r.im == 0.0).count();
        prop_assert_eq!(report.real_roots_sorted.len(), expected_reals);
    }
}

#[test]
fn starting_points_index_by_count_of_smaller_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let m = rng.gen_range(1..6);
        let mut roots: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..5.0)).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-3);

        let x0 = rng.gen_range(0.05..5.5);
        if roots.iter().any(|&r| (r - x0).abs() < 1e-6) {
            continue;
        }
        let expected = roots.iter().filter(|&&r| r < x0).count();
        assert_eq!(bracket_index(&roots, x0).unwrap(), expected);

        let j = rng.gen_range(0..roots.len());
        assert_eq!(bracket_index(&roots, roots[j]).unwrap(), j + 1);
    }
}

#[test]
fn real_roots_are_fixed_points_of_both_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..40 {
        let inst = sample_instance(&mut rng);
        for &r in &inst.real_roots {
            for dir in [Direction::Up, Direction::Down] {
                let next = mu_step(&inst.split, r, dir).unwrap();
                assert!(
                    close(next, r, 1e-10),
                    "step moved off the root: {r} -> {next} for {}",
                    inst.poly
                );
            }
        }
    }
}

fn bracket_cfg() -> SolveConfig {
    SolveConfig {
        x_tol: 1e-12,
        max_iters: (40.0 / (1.0 - MAX_RATE)) as usize,
        ..SolveConfig::default()
    }
}

#[test]
fn sequences_are_monotone_and_confined_to_their_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let cfg = bracket_cfg();
    for _ in 0..60 {
        let inst = sample_instance(&mut rng);
        let m = inst.real_roots.len();
        let (x0, k) = sample_start(&mut rng, &inst.real_roots);
        let result = solve_bracket(&inst.split, x0, &cfg).unwrap();

        for (trace, up) in [(&result.trace_down, false), (&result.trace_up, true)] {
            assert_eq!(trace.iterates[0], x0);
            let mut prev = x0;
            for &x in &trace.iterates {
                assert!(x >= 0.0, "iterate went negative: {x}");
                if up {
                    assert!(x >= prev, "up sequence fell: {prev} -> {x}");
                } else {
                    assert!(x <= prev, "down sequence rose: {prev} -> {x}");
                }
                prev = x;
            }
            if k > 0 {
                let lo = inst.real_roots[k - 1];
                assert!(trace.iterates.iter().all(|&x| x >= lo - 1e-9));
            }
            if k < m {
                let hi = inst.real_roots[k];
                assert!(trace.iterates.iter().all(|&x| x <= hi + 1e-9));
            }
        }

        match result.lower_limit {
            BracketLimit::Root(r) => {
                assert!(k > 0, "sentinel expected below the smallest root");
                assert!((r - inst.real_roots[k - 1]).abs() <= 1e-6);
            }
            BracketLimit::Zero => assert_eq!(k, 0),
            ref other => panic!("unexpected lower limit {other:?} for {}", inst.poly),
        }
        match result.upper_limit {
            BracketLimit::Root(r) => {
                assert!(k < m, "sentinel expected above the largest root");
                assert!((r - inst.real_roots[k]).abs() <= 1e-6);
            }
            BracketLimit::Infinity => assert_eq!(k, m),
            ref other => panic!("unexpected upper limit {other:?} for {}", inst.poly),
        }

        for (limit, est) in [
            (&result.lower_limit, &result.rate_lower),
            (&result.upper_limit, &result.rate_upper),
        ] {
            if limit.is_sentinel() {
                assert!(est.is_none());
            } else if let Some(est) = est {
                assert!((0.0..=1.0).contains(&est.rate));
                assert!(!est.multiple_root_suspected);
            }
        }
    }
}

#[test]
fn tail_error_ratios_follow_the_local_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let cfg = SolveConfig {
        x_tol: 1e-8,
        ..SolveConfig::default()
    };
    let mut checked = 0;
    for _ in 0..30 {
        let inst = loop {
            let inst = sample_instance(&mut rng);
            if inst.real_roots.len() >= 2 {
                break inst;
            }
        };
        let m = inst.real_roots.len();
        let (x0, k) = loop {
            let (x0, k) = sample_start(&mut rng, &inst.real_roots);
            if k >= 1 && k < m {
                break (x0, k);
            }
        };
        let result = solve_bracket(&inst.split, x0, &cfg).unwrap();
        for (trace, root) in [
            (&result.trace_down, inst.real_roots[k - 1]),
            (&result.trace_up, inst.real_roots[k]),
        ] {
            if trace.status != TraceStatus::Converged {
                continue;
            }
            let rate = rate_at_root(&inst.split, root).unwrap();
            let errors: Vec<f64> = trace.iterates.iter().map(|x| (x - root).abs()).collect();
            let tail = errors.len().saturating_sub(12);
            for w in errors[tail..].windows(2) {
                if w[0] >= 1e-9 && w[0] <= 1e-3 && w[1] >= 1e-12 {
                    let ratio = w[1] / w[0];
                    assert!(
                        ratio >= rate / 2.0 && ratio <= 1.0 + 1e-12,
                        "ratio {ratio} vs rate {rate} for {}",
                        inst.poly
                    );
                    checked += 1;
                }
            }
            if rate >= 0.3 {
                let emp = empirical_rate(trace, root).unwrap();
                assert!(
                    (emp - rate).abs() <= 0.05,
                    "empirical {emp} vs predicted {rate} for {}",
                    inst.poly
                );
            }
        }
    }
    assert!(checked > 50, "only {checked} ratio windows were exercised");
}

#[test]
fn degree_one_collapse_and_jump_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let cfg = SolveConfig::default();
    for _ in 0..50 {
        let b = rng.gen_range(0.5..10.0);
        let x0 = b * rng.gen_range(0.1..0.9);
        let s = split_signs(&Polynomial::new(vec![-b, 1.0])).unwrap();

        let up = run_sequence(&s, x0, Direction::Up, &cfg).unwrap();
        assert_eq!(up.status, TraceStatus::Converged);
        assert_eq!(up.iterates.len(), 2, "one multiplicative jump suffices");
        assert!(
            close(up.iterates[1], b, 1e-14),
            "jump missed the root: {} vs {b}",
            up.iterates[1]
        );

        let down = run_sequence(&s, x0, Direction::Down, &cfg).unwrap();
        assert_eq!(down.status, TraceStatus::HitZero);
        let u = x0 / b;
        for (t, &x) in down.iterates.iter().take(7).enumerate() {
            let expected = x0 * u.powi((1 << t) - 1);
            assert!(
                close(x, expected, 1e-9),
                "t={t}: {x} vs {expected} (b={b}, x0={x0})"
            );
        }
    }
}

#[test]
fn padding_raises_the_rate_at_every_real_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    for _ in 0..30 {
        let inst = sample_instance(&mut rng);
        let d = Polynomial::new(vec![
            rng.gen_range(0.0..3.0f64).round(),
            rng.gen_range(0.0..3.0f64).round(),
            rng.gen_range(1.0..4.0f64).round(),
        ]);
        let padded = pad_split(&inst.split, &d).unwrap();
        for &r in &inst.real_roots {
            let base = rate_at_root(&inst.split, r).unwrap();
            let raised = rate_at_root(&padded, r).unwrap();
            assert!(raised >= base);
            if base > 0.0 {
                assert!(raised > base, "rate stayed at {base} for {}", inst.poly);
            }
        }
    }
}

#[test]
fn bracket_counts_agree_with_computed_root_lists() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..25 {
        let inst = sample_instance(&mut rng);
        let report = durand_kerner_roots(&inst.poly, 500, 1e-12).unwrap();
        assert_eq!(report.real_roots_sorted.len(), inst.real_roots.len());
        for r in &inst.roots {
            let nearest = report
                .all_roots
                .iter()
                .map(|z| (z - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-6, "no computed root near {r} for {}", inst.poly);
        }
        let (x0, k) = sample_start(&mut rng, &inst.real_roots);
        assert_eq!(bracket_index(&report.real_roots_sorted, x0).unwrap(), k);
    }
}
