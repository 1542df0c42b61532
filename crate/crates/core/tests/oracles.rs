mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use opcalc::numerics::{
    apply_operator_numeric, bei_classical, ber_classical, classical_kelvin_coefficients, eval_basis,
    oracle_bessel, oracle_coefficients, residual, BesselFamily, SeriesEvaluator,
};
use opcalc::poly::Poly;
use opcalc::rational::{partial_fractions, PoleTerm, RationalExpr};
use opcalc::scalar::Scalar;
use opcalc::sequence::Sequence;
use opcalc::solver::{solve_difference, solve_ivp, verify_solution, DifferenceProblem, IVProblem, Rhs};
use opcalc::transforms::{builtin_table, z_bridge, Family, NamedFunction, Realization, ZDirection};
use rand::{Rng, SeedableRng};

use common::{plum_expected_terms, plum_problem, rel_err};

fn family_of(f: Family) -> BesselFamily {
    match f {
        Family::BesselJ => BesselFamily::J,
        Family::BesselI => BesselFamily::I,
        Family::Ber => BesselFamily::Ber,
        Family::Bei => BesselFamily::Bei,
        other => panic!("not a Bessel-realization family: {other:?}"),
    }
}

#[test]
fn table_rules_match_ascending_series() {
    for nu in [0.0, 1.0, 2.0, 0.5] {
        for entry in builtin_table(Realization::Bessel { nu }) {
            let fam = family_of(entry.function.family);
            let rule = entry.rule.sequence(16);
            // the quotient term/basis is independent of the probe point
            for probe in [0.7, 1.3] {
                let oracle = oracle_coefficients(fam, nu, 16, probe);
                for (n, want) in oracle.iter().enumerate() {
                    let got = rule.coeffs()[n].to_c64();
                    assert!(got.im == 0.0);
                    assert!(
                        (got.re - want).abs() < 1e-12,
                        "{fam:?} nu={nu} n={n}: rule {} oracle {want}",
                        got.re
                    );
                }
            }
            // and the closed-form transform expands to the same rule
            let expanded = entry.transform.to_sequence(16).unwrap();
            assert!(expanded.approx_eq(&rule, 1e-14, 1e-14), "{fam:?} nu={nu}");
        }
    }
}

#[test]
fn table_series_reproduce_function_values() {
    for nu in [0.0, 1.0, 2.0] {
        for entry in builtin_table(Realization::Bessel { nu }) {
            let fam = family_of(entry.function.family);
            let ev = SeriesEvaluator::new(entry.rule.sequence(40), Realization::Bessel { nu });
            for i in 1..=20 {
                let t = 0.25 * i as f64;
                let want = oracle_bessel(fam, nu, t);
                let got = ev.eval(t).value;
                assert!(
                    (got.re - want).abs() <= 1e-10 * want.abs().max(1.0),
                    "{fam:?} nu={nu} t={t}: {} vs {want}",
                    got.re
                );
                let named = entry.function.eval(Realization::Bessel { nu }, t);
                assert!((named.re - want).abs() <= 1e-10 * want.abs().max(1.0));
            }
        }
    }
}

#[test]
fn sign_adjudication() {
    let r = Realization::Bessel { nu: 0.0 };
    let j = NamedFunction::bessel_j(Scalar::from_i64(1), Scalar::from_i64(1), 0.0);
    let i = NamedFunction::bessel_i(Scalar::from_i64(1), Scalar::from_i64(1), 0.0);
    // J_0 pairs with 1/(1 + s), I_0 with 1/(1 - s)
    assert_eq!(j.transform(r).unwrap(), RationalExpr::pole(Scalar::from_i64(1), &Scalar::from_i64(-1), 1));
    assert_eq!(i.transform(r).unwrap(), RationalExpr::pole(Scalar::from_i64(1), &Scalar::from_i64(1), 1));
    let oracle_j = oracle_coefficients(BesselFamily::J, 0.0, 4, 1.0);
    assert!(oracle_j[1] < 0.0 && oracle_j[2] > 0.0);

    // Bei_0 = {0, 1, 0, -1, ...}
    let bei = oracle_coefficients(BesselFamily::Bei, 0.0, 4, 1.0);
    for (got, want) in bei.iter().zip([0.0, 1.0, 0.0, -1.0]) {
        assert!((got - want).abs() < 1e-14);
    }
}

#[test]
fn kelvin_rule_matches_classical_series() {
    let (ber, bei) = classical_kelvin_coefficients(24);
    let table = builtin_table(Realization::Bessel { nu: 0.0 });
    let rule = |fam: Family| table.iter().find(|e| e.function.family == fam).unwrap().rule.sequence(24);
    let (ber_rule, bei_rule) = (rule(Family::Ber), rule(Family::Bei));
    for n in 0..24 {
        assert!((ber_rule.coeffs()[n].re_f64() - ber[n]).abs() < 1e-12);
        assert!((bei_rule.coeffs()[n].re_f64() - bei[n]).abs() < 1e-12);
    }
    for i in 0..=20 {
        let x = 0.25 * i as f64;
        let tol = 1e-12 * ber_classical(x).abs().max(1.0);
        assert!((oracle_bessel(BesselFamily::Ber, 0.0, x) - ber_classical(x)).abs() < tol);
        assert!((oracle_bessel(BesselFamily::Bei, 0.0, x) - bei_classical(x)).abs() < tol);
    }
}

#[test]
fn half_order_i_is_hyperbolic_sine() {
    for t in [0.5, 1.0, 2.0] {
        let want = (2.0 / (PI * t)).sqrt() * t.sinh();
        assert!((oracle_bessel(BesselFamily::I, 0.5, t) - want).abs() < 1e-12);
        let ev = SeriesEvaluator::new(Sequence::from_fn(40, |_| Scalar::from_i64(1)), Realization::Bessel { nu: 0.5 });
        assert!((ev.eval(t).value.re - want).abs() < 1e-12);
    }
}

#[test]
fn bessel_recurrence_identities() {
    for u in [0.5, 1.0, 3.0] {
        let j = |nu| oracle_bessel(BesselFamily::J, nu, u);
        let i = |nu| oracle_bessel(BesselFamily::I, nu, u);
        assert!((j(2.0) + j(0.0) - 2.0 / u * j(1.0)).abs() < 1e-14);
        assert!((i(2.0) - i(0.0) + 2.0 / u * i(1.0)).abs() < 1e-13);
    }
}

#[test]
fn basis_shift_law_converges() {
    for nu in [0.0, 0.5, 1.0, 2.0] {
        let r = Realization::Bessel { nu };
        for n in 0..=8usize {
            for t in [0.5, 1.0, 2.0] {
                let f = |x: f64| eval_basis(n, nu, x);
                let want = if n == 0 { 0.0 } else { eval_basis(n - 1, nu, t) };
                // steps below the t/4 cap of the Bessel operator
                let err = |h: f64| (apply_operator_numeric(&f, r, t, h).unwrap() - want).abs();
                let (coarse, fine) = (err(t / 8.0), err(t / 16.0));
                let floor = 1e-9 * want.abs().max(1.0);
                if coarse > floor {
                    let order = (coarse / fine).log2();
                    assert!(order >= 2.0, "nu={nu} n={n} t={t}: order {order}");
                }
                assert!(fine <= coarse.max(floor), "nu={nu} n={n} t={t}");
            }
        }
    }
}

#[test]
fn compensated_exponential_sum() {
    let ev = SeriesEvaluator::new(Sequence::from_fn(60, |_| Scalar::real(1.0)), Realization::Maclaurin);
    let got = ev.eval(5.0).value.re;
    assert!((got - 5f64.exp()).abs() <= 1e-12 * 5f64.exp());
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn ode_problem() -> IVProblem {
    IVProblem::new(
        Realization::Maclaurin,
        vec![q(2, 1), q(-3, 1), q(1, 1)],
        Rhs::Named(NamedFunction::exp(q(1, 1), q(3, 1))),
        vec![q(1, 1), q(0, 1)],
    )
    .unwrap()
}

#[test]
fn ode_example_terms_and_values() {
    let p = ode_problem();
    let sol = solve_ivp(&p, 64).unwrap();
    let mut terms = sol.decomposition.as_ref().unwrap().terms.clone();
    terms.sort_by(|a, b| a.rate.cmp_lex(&b.rate));
    assert_eq!(
        terms,
        vec![
            PoleTerm::new(q(1, 1), 1, q(5, 2)),
            PoleTerm::new(q(2, 1), 1, q(-2, 1)),
            PoleTerm::new(q(3, 1), 1, q(1, 2)),
        ]
    );
    for t in [0.5f64, 1.0, 2.0] {
        let want = 0.5 * (3.0 * t).exp() + 2.5 * t.exp() - 2.0 * (2.0 * t).exp();
        assert!((sol.eval_named(t).unwrap().re - want).abs() < 1e-10 * want.abs().max(1.0));
        assert!((sol.evaluator().eval(t).value.re - want).abs() < 1e-10 * want.abs().max(1.0));
    }
}

#[test]
fn ode_residual_at_one() {
    let p = ode_problem();
    for n in [30, 40, 64] {
        let sol = solve_ivp(&p, n).unwrap();
        let r = residual(&p, &sol.evaluator(), 1.0);
        assert!(r < 1e-10, "N={n}: {r}");
    }
}

#[test]
fn homogeneous_zero_solution_has_zero_residual() {
    let p = IVProblem::new(Realization::Maclaurin, vec![q(1, 1), q(0, 1), q(1, 1)], Rhs::Zero, vec![q(0, 1), q(0, 1)]).unwrap();
    let sol = solve_ivp(&p, 16).unwrap();
    assert!(sol.coeff_seq.is_zero());
    assert_eq!(residual(&p, &sol.evaluator(), 1.0), 0.0);
}

#[test]
fn plum_unit_parameters() {
    let p = plum_problem(1.0, 1.0, 1.0, 0.0);
    for n in [25, 30, 40] {
        let sol = solve_ivp(&p, n).unwrap();
        let r = residual(&p, &sol.evaluator(), 1.0);
        assert!(r < 1e-8, "N={n}: {r}");
    }
    // exact mode: 9/10 J_2(t) + 1/90 I_2(3t)
    let exact = IVProblem::new(
        Realization::Bessel { nu: 2.0 },
        vec![q(-9, 1), q(-8, 1), q(1, 1)],
        Rhs::Zero,
        vec![q(1, 1), q(0, 1)],
    )
    .unwrap();
    let sol = solve_ivp(&exact, 40).unwrap();
    assert_eq!(
        sol.named,
        vec![
            NamedFunction::bessel_j(q(9, 10), q(1, 1), 2.0),
            NamedFunction::bessel_i(q(1, 90), q(3, 1), 2.0),
        ]
    );
    for u in [0.5, 1.0, 3.0] {
        let j = |nu| oracle_bessel(BesselFamily::J, nu, u);
        let i = |nu| oracle_bessel(BesselFamily::I, nu, 3.0 * u);
        let rewritten = 0.9 * (-j(0.0) + 2.0 / u * j(1.0)) + (i(0.0) - 2.0 / (3.0 * u) * i(1.0)) / 90.0;
        let direct = sol.evaluator().eval(u).value.re;
        assert!((rewritten - direct).abs() < 1e-9, "u={u}");
    }
}

#[test]
fn plum_parametric_closed_forms() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    for _ in 0..10 {
        let (lambda, mu) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let (y0, y1) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let p = plum_problem(lambda, mu, y0, y1);
        let sol = solve_ivp(&p, 40).unwrap();
        let dec = sol.decomposition.as_ref().unwrap();
        assert_eq!(dec.terms.len(), 2);
        for (rate, coeff) in plum_expected_terms(lambda, mu, y0, y1) {
            let term = dec
                .terms
                .iter()
                .find(|t| rel_err(t.rate.re_f64(), rate) < 1e-10)
                .unwrap_or_else(|| panic!("no term with rate {rate}"));
            assert_eq!(term.multiplicity, 1);
            assert!(rel_err(term.coeff.re_f64(), coeff) < 1e-10);
            assert!(term.coeff.im_f64().abs() < 1e-12);
        }
        for t in [0.5, 1.0] {
            assert!(residual(&p, &sol.evaluator(), t) < 1e-8);
        }
        assert!(verify_solution(&p, &sol).passed());
    }
}

#[test]
fn difference_example() {
    let p = DifferenceProblem {
        coeffs: vec![q(-3, 1), q(1, 1)],
        rhs: Rhs::Rational(RationalExpr::pole(q(4, 1), &q(1, 1), 1)),
        init: vec![q(1, 1)],
    };
    let sol = solve_difference(&p, 64).unwrap();
    assert_eq!(sol.closed_form().unwrap(), "-2 + 3^(k+1)");
    assert_eq!(sol.coeff_seq.coeffs()[..4], Sequence::from_i64s(&[1, 7, 25, 79]).coeffs()[..]);
}

#[test]
fn z_bridge_example() {
    // -2z/(z-1) + 3z/(z-3) = (z² + 3z)/(z² - 4z + 3)
    let z_form = RationalExpr::new(Poly::from_i64s(&[0, 3, 1]), Poly::from_i64s(&[3, -4, 1])).unwrap();
    let s_form = z_bridge(ZDirection::FromZ, &z_form);
    let want = &RationalExpr::pole(q(-2, 1), &q(1, 1), 1) + &RationalExpr::pole(q(3, 1), &q(3, 1), 1);
    assert_eq!(s_form, want);
    let dec = partial_fractions(&s_form).unwrap();
    assert_eq!(dec.terms, vec![PoleTerm::new(q(1, 1), 1, q(-2, 1)), PoleTerm::new(q(3, 1), 1, q(3, 1))]);
    assert_eq!(z_bridge(ZDirection::ToZ, &s_form), z_form);
}

#[test]
fn kelvin_pair_transforms_at_half_order() {
    // Ber_{1/2} and Bei_{1/2} have no exact angle; the float transform
    // still expands to the oracle's coefficients.
    let r = Realization::Bessel { nu: 0.5 };
    for (fam, named) in [
        (BesselFamily::Ber, NamedFunction::ber(Scalar::from_i64(1), Scalar::from_i64(1), 0.5)),
        (BesselFamily::Bei, NamedFunction::bei(Scalar::from_i64(1), Scalar::from_i64(1), 0.5)),
    ] {
        let seq = named.transform(r).unwrap().to_sequence(16).unwrap();
        let oracle = oracle_coefficients(fam, 0.5, 16, 1.0);
        for n in 0..16 {
            assert!((seq.coeffs()[n].to_c64() - Complex64::new(oracle[n], 0.0)).norm() < 1e-12);
        }
    }
}
