//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use opcalc::numerics::{oracle_bessel, oracle_coefficients, residual, BesselFamily, SeriesEvaluator};
use opcalc::poly::Poly;
use opcalc::rational::{partial_fractions, PoleTerm, RationalExpr};
use opcalc::scalar::{Mode, Scalar};
use opcalc::sequence::{cauchy_product, invert, shift_identity_rhs, shift_left, shift_right, Sequence};
use opcalc::solver::{solve_difference, solve_ivp, DifferenceProblem, IVProblem, Rhs};
use opcalc::transforms::{builtin_table, z_bridge, Family, NamedFunction, Realization, ZDirection};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{plum_expected_terms, plum_problem, rel_err};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ode_pipeline() -> Outcome {
    let start = Instant::now();
    let p = IVProblem::new(
        Realization::Maclaurin,
        vec![q(2, 1), q(-3, 1), q(1, 1)],
        Rhs::Named(NamedFunction::exp(q(1, 1), q(3, 1))),
        vec![q(1, 1), q(0, 1)],
    )
    .map_err(|e| e.to_string())?;
    let sol = solve_ivp(&p, 64).map_err(|e| e.to_string())?;
    let dec = sol.decomposition.as_ref().ok_or("no decomposition")?;
    let mut terms = dec.terms.clone();
    terms.sort_by(|a, b| a.rate.cmp_lex(&b.rate));
    let want = vec![
        PoleTerm::new(q(1, 1), 1, q(5, 2)),
        PoleTerm::new(q(2, 1), 1, q(-2, 1)),
        PoleTerm::new(q(3, 1), 1, q(1, 2)),
    ];
    ensure(terms == want, || format!("pole terms {terms:?}"))?;
    let mut worst = 0.0f64;
    for t in [0.5f64, 1.0, 2.0] {
        let exact = 0.5 * (3.0 * t).exp() + 2.5 * t.exp() - 2.0 * (2.0 * t).exp();
        let named = sol.eval_named(t).ok_or("no closed form")?.re;
        let series = sol.evaluator().eval(t).value.re;
        worst = worst.max(rel_err(named, exact)).max(rel_err(series, exact));
    }
    let elapsed = start.elapsed();
    ensure(worst < 1e-10, || format!("sample relative error {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("exact pole terms; max sample rel err {worst:.1e}; {elapsed:.2?}"))
}

fn plum_equation() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut worst_coeff, mut worst_res) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let (lambda, mu) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let (y0, y1) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let p = plum_problem(lambda, mu, y0, y1);
        let sol = solve_ivp(&p, 40).map_err(|e| e.to_string())?;
        let dec = sol.decomposition.as_ref().ok_or("no decomposition")?;
        ensure(dec.terms.len() == 2, || format!("{} pole terms", dec.terms.len()))?;
        for (rate, coeff) in plum_expected_terms(lambda, mu, y0, y1) {
            let term = dec
                .terms
                .iter()
                .find(|t| rel_err(t.rate.re_f64(), rate) < 1e-10 && t.rate.im_f64().abs() < 1e-12)
                .ok_or_else(|| format!("no pole at rate {rate} for (λ, μ) = ({lambda}, {mu})"))?;
            worst_coeff = worst_coeff.max(rel_err(term.coeff.re_f64(), coeff));
        }
        for t in [0.5, 1.0] {
            worst_res = worst_res.max(residual(&p, &sol.evaluator(), t));
        }
    }
    let elapsed = start.elapsed();
    ensure(worst_coeff < 1e-10, || format!("coefficient rel err {worst_coeff:e}"))?;
    ensure(worst_res < 1e-8, || format!("residual {worst_res:e}"))?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "10 tuples; max coeff rel err {worst_coeff:.1e}; max residual {worst_res:.1e}; {elapsed:.2?}"
    ))
}

fn difference_equation() -> Outcome {
    let p = DifferenceProblem {
        coeffs: vec![q(-3, 1), q(1, 1)],
        rhs: Rhs::Rational(RationalExpr::pole(q(4, 1), &q(1, 1), 1)),
        init: vec![q(1, 1)],
    };
    let sol = solve_difference(&p, 64).map_err(|e| e.to_string())?;
    let form = sol.closed_form().ok_or("no closed form")?;
    ensure(form == "-2 + 3^(k+1)", || format!("closed form {form}"))?;
    let mut y = q(1, 1);
    for k in 0..64 {
        ensure(sol.coeff_seq.coeffs()[k] == y, || format!("mismatch at k = {k}"))?;
        y = &(&y * &q(3, 1)) + &q(4, 1);
    }
    Ok(format!("{form}; 64 terms match iteration exactly"))
}

fn bessel_family(f: Family) -> BesselFamily {
    match f {
        Family::BesselJ => BesselFamily::J,
        Family::BesselI => BesselFamily::I,
        Family::Ber => BesselFamily::Ber,
        _ => BesselFamily::Bei,
    }
}

fn table_oracle_suite() -> Outcome {
    let (mut worst_coeff, mut worst_value) = (0.0f64, 0.0f64);
    for nu in [0.0, 1.0, 2.0] {
        let r = Realization::Bessel { nu };
        for entry in builtin_table(r) {
            let fam = bessel_family(entry.function.family);
            let rule = entry.rule.sequence(40);
            let oracle = oracle_coefficients(fam, nu, 16, 1.0);
            for (n, want) in oracle.iter().enumerate() {
                worst_coeff = worst_coeff.max((rule.coeffs()[n].re_f64() - want).abs());
            }
            let ev = SeriesEvaluator::new(rule, r);
            for i in 1..=50 {
                let t = 0.1 * i as f64;
                let want = oracle_bessel(fam, nu, t);
                let got = ev.eval(t).value.re;
                worst_value = worst_value.max((got - want).abs() / want.abs().max(1.0));
            }
        }
    }
    let mut worst_half = 0.0f64;
    let ones = SeriesEvaluator::new(Sequence::from_fn(40, |_| q(1, 1)), Realization::Bessel { nu: 0.5 });
    for t in [0.5f64, 1.0, 2.0] {
        let want = (2.0 / (std::f64::consts::PI * t)).sqrt() * t.sinh();
        worst_half = worst_half
            .max((oracle_bessel(BesselFamily::I, 0.5, t) - want).abs())
            .max((ones.eval(t).value.re - want).abs());
    }
    ensure(worst_coeff < 1e-12, || format!("coefficient err {worst_coeff:e}"))?;
    ensure(worst_value < 1e-10, || format!("value err {worst_value:e}"))?;
    ensure(worst_half < 1e-12, || format!("I_1/2 err {worst_half:e}"))?;

    // Adjudications: J pairs with the alternating sequence (rate -1), I
    // with the all-ones sequence, and Bei_0 starts {0, 1, 0, -1}.
    let j = oracle_coefficients(BesselFamily::J, 0.0, 3, 1.0);
    let i = oracle_coefficients(BesselFamily::I, 0.0, 3, 1.0);
    let bei = oracle_coefficients(BesselFamily::Bei, 0.0, 4, 1.0);
    let j_alt = (j[0] - 1.0).abs() < 1e-14 && (j[1] + 1.0).abs() < 1e-14 && (j[2] - 1.0).abs() < 1e-14;
    let i_ones = i.iter().all(|c| (c - 1.0).abs() < 1e-14);
    let bei_sign = bei.iter().zip([0.0, 1.0, 0.0, -1.0]).all(|(a, b)| (a - b).abs() < 1e-14);
    ensure(j_alt && i_ones, || "J/I sign convention".into())?;
    ensure(bei_sign, || format!("Bei_0 prefix {bei:?}"))?;
    Ok(format!(
        "J,I,Ber,Bei x nu in {{0,1,2}}: coeff err {worst_coeff:.1e}, value err {worst_value:.1e}, I_1/2 err {worst_half:.1e}; \
         adjudicated J <-> 1/(1+s) (alternating), I <-> 1/(1-s) (ones), Bei_0 = {{0,1,0,-1,...}}"
    ))
}

fn random_exact_seq(rng: &mut StdRng, n: usize, invertible: bool) -> Sequence {
    Sequence::from_fn(n, |k| {
        let re = rng.gen_range(-9..=9);
        let im = if rng.gen_bool(0.3) { rng.gen_range(-9..=9) } else { 0 };
        let re = if k == 0 && invertible && re == 0 && im == 0 { 1 } else { re };
        &Scalar::ratio(re, rng.gen_range(1..=7)) + &(&Scalar::ratio(im, rng.gen_range(1..=7)) * &Scalar::i(Mode::Exact))
    })
}

fn algebra_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let cases = 500;
    for case in 0..cases {
        let n = rng.gen_range(1..=14);
        let a = random_exact_seq(&mut rng, n, true);
        let b = random_exact_seq(&mut rng, n, false);
        let c = random_exact_seq(&mut rng, n, false);
        let mul = |x: &Sequence, y: &Sequence| cauchy_product(x, y).map_err(|e| e.to_string());
        let add = |x: &Sequence, y: &Sequence| x.try_add(y).map_err(|e| e.to_string());
        let fail = |what: &str| format!("case {case}: {what}");
        ensure(mul(&a, &b)? == mul(&b, &a)?, || fail("commutativity"))?;
        ensure(mul(&mul(&a, &b)?, &c)? == mul(&a, &mul(&b, &c)?)?, || fail("associativity"))?;
        ensure(mul(&a, &add(&b, &c)?)? == add(&mul(&a, &b)?, &mul(&a, &c)?)?, || fail("distributivity"))?;
        ensure(mul(&a, &Sequence::identity(n, Mode::Exact))? == a, || fail("identity"))?;
        let inv = invert(&a).map_err(|e| e.to_string())?;
        ensure(mul(&a, &inv)? == Sequence::identity(n, Mode::Exact), || fail("invert"))?;
        ensure(invert(&inv).map_err(|e| e.to_string())? == a, || fail("double invert"))?;
        let m = rng.gen_range(0..=n);
        let lhs = shift_right(&shift_left(&b, m), m);
        let mut rhs = b.clone();
        for k in 0..m {
            rhs = rhs.try_sub(&Sequence::s_power(k, n, Mode::Exact).scale(&b.coeffs()[k])).map_err(|e| e.to_string())?;
        }
        ensure(lhs == rhs && lhs == shift_identity_rhs(&b, m), || fail("shift identity"))?;
    }
    Ok(format!("{cases} exact cases: ring laws, invert round trip, shift identity"))
}

fn bessel_identity_cross_check() -> Outcome {
    let p = IVProblem::new(
        Realization::Bessel { nu: 2.0 },
        vec![q(-9, 1), q(-8, 1), q(1, 1)],
        Rhs::Zero,
        vec![q(1, 1), q(0, 1)],
    )
    .map_err(|e| e.to_string())?;
    let sol = solve_ivp(&p, 40).map_err(|e| e.to_string())?;
    let want_named = vec![
        NamedFunction::bessel_j(q(9, 10), q(1, 1), 2.0),
        NamedFunction::bessel_i(q(1, 90), q(3, 1), 2.0),
    ];
    ensure(sol.named == want_named, || format!("named terms {:?}", sol.named))?;
    let mut worst = 0.0f64;
    for u in [0.5, 1.0, 3.0] {
        let j = |nu| oracle_bessel(BesselFamily::J, nu, u);
        let i = |nu| oracle_bessel(BesselFamily::I, nu, 3.0 * u);
        let rewritten = 0.9 * (-j(0.0) + 2.0 / u * j(1.0)) + (i(0.0) - 2.0 / (3.0 * u) * i(1.0)) / 90.0;
        let direct = sol.evaluator().eval(u).value.re;
        let named = sol.eval_named(u).ok_or("no closed form")?.re;
        worst = worst.max((rewritten - direct).abs()).max((rewritten - named).abs());
    }
    ensure(worst < 1e-9, || format!("difference {worst:e}"))?;
    Ok(format!("9/10 J_2(u) + 1/90 I_2(3u) via J_0,J_1,I_0,I_1; max diff {worst:.1e}"))
}

fn z_bridge_correspondence() -> Outcome {
    // -2z/(z-1) + 3z/(z-3) = (z² + 3z)/(z² - 4z + 3)
    let z_form = RationalExpr::new(Poly::from_i64s(&[0, 3, 1]), Poly::from_i64s(&[3, -4, 1])).map_err(|e| e.to_string())?;
    let s_form = z_bridge(ZDirection::FromZ, &z_form);
    let want = &RationalExpr::pole(q(-2, 1), &q(1, 1), 1) + &RationalExpr::pole(q(3, 1), &q(3, 1), 1);
    ensure(s_form == want, || format!("got {s_form:?}"))?;
    let dec = partial_fractions(&s_form).map_err(|e| e.to_string())?;
    let terms = vec![PoleTerm::new(q(1, 1), 1, q(-2, 1)), PoleTerm::new(q(3, 1), 1, q(3, 1))];
    ensure(dec.terms == terms, || format!("terms {:?}", dec.terms))?;
    ensure(z_bridge(ZDirection::ToZ, &s_form) == z_form, || "not an involution".into())?;
    Ok("-2/(1-s) + 3/(1-3s) exactly; involution holds".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 ode pipeline", ode_pipeline),
        ("2 plum equation", plum_equation),
        ("3 difference equation", difference_equation),
        ("4 transform-table oracle suite", table_oracle_suite),
        ("5 algebra property suite", algebra_properties),
        ("6 bessel identity cross-check", bessel_identity_cross_check),
        ("7 z-bridge correspondence", z_bridge_correspondence),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
