//! Initial-value problems `Σ c_k L^k y = g` solved by transform, partial
//! fractions and inverse transform.
//!
//! Initial data are the limits `Y_k = lim_{t→0} (L^k y)(t)`. Under the
//! Maclaurin realization these are the derivatives `y^{(k)}(0)`; under the
//! Bessel realization they are *not* derivatives but limits of powers of
//! the Bessel operator; under the Z bridge they are `y_k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{residual, SeriesEvaluator};
use crate::poly::Poly;
use crate::rational::{partial_fractions, PFDecomposition, RationalExpr};
use crate::roots::FactorMode;
use crate::scalar::{Mode, Scalar};
use crate::sequence::{shift_left, Sequence};
use crate::transforms::{inverse_transform, Family, NamedFunction, Realization};

/// Right-hand side `g` of an equation.
#[derive(Clone, Debug, PartialEq)]
pub enum Rhs {
    Zero,
    /// `G(s)` given directly.
    Rational(RationalExpr),
    /// A named function, transformed through its closed form.
    Named(NamedFunction),
}

impl Rhs {
    /// `G(s)` under `realization`.
    pub fn transform(&self, realization: Realization) -> Result<RationalExpr> {
        let g = match self {
            Rhs::Zero => RationalExpr::zero(),
            Rhs::Rational(expr) => expr.clone(),
            Rhs::Named(f) => f.transform(realization)?,
        };
        if g.has_pole_at_zero() {
            return Err(Error::IncompatibleRhs("G(s) has a pole at s = 0".into()));
        }
        Ok(g)
    }
}

/// `Σ_{k=0}^{m} c_k L^k y = g` with `Y_k = lim_{t→0} L^k y` for `k < m`.
#[derive(Clone, Debug, PartialEq)]
pub struct IVProblem {
    pub realization: Realization,
    /// `c_0 … c_m`, `c_m ≠ 0`.
    pub op_poly: Vec<Scalar>,
    pub rhs: Rhs,
    /// `Y_0 … Y_{m-1}`.
    pub init: Vec<Scalar>,
}

impl IVProblem {
    pub fn new(realization: Realization, op_poly: Vec<Scalar>, rhs: Rhs, init: Vec<Scalar>) -> Result<IVProblem> {
        let p = IVProblem {
            realization,
            op_poly,
            rhs,
            init,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(lead) = self.op_poly.last() else {
            return Err(Error::InvalidProblem("the operator polynomial is empty".into()));
        };
        if lead.is_zero() {
            return Err(Error::InvalidProblem(
                "the leading operator coefficient c_m is zero".into(),
            ));
        }
        if self.init.len() != self.order() {
            return Err(Error::InvalidProblem(format!(
                "an order-{} equation needs {} initial values, got {}",
                self.order(),
                self.order(),
                self.init.len()
            )));
        }
        if let Some(nu) = self.realization.nu() {
            Realization::bessel(nu)?;
        }
        Ok(())
    }

    /// `m`, the degree of the operator polynomial.
    pub fn order(&self) -> usize {
        self.op_poly.len().saturating_sub(1)
    }

    /// `Σ_k c_k s^{m-k}`, the denominator of the solved transform.
    pub fn reversed_operator(&self) -> Poly {
        let m = self.order();
        Poly::new(self.op_poly.clone()).reversed(m)
    }
}

/// `Σ_{k=0}^{m} c_k y_{n+k} = g_n` with `y_0 … y_{m-1}` given.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceProblem {
    pub coeffs: Vec<Scalar>,
    /// Generating function of `g_n` in `s`, or a named sequence.
    pub rhs: Rhs,
    pub init: Vec<Scalar>,
}

impl DifferenceProblem {
    /// The same problem under the Z-bridge realization.
    pub fn to_ivp(&self) -> Result<IVProblem> {
        IVProblem::new(Realization::ZBridge, self.coeffs.clone(), self.rhs.clone(), self.init.clone())
    }
}

/// `Y(s)` from the transformed equation.
///
/// Multiplying `Σ c_k l^k Y = G` by `s^m` and using
/// `s^k l^k Y = Y - Σ_{j<k} Y_j s^j` gives
///
/// `Y = (s^m G + Σ_{k=1}^{m} c_k s^{m-k} Σ_{j<k} Y_j s^j) / Σ_{k=0}^{m} c_k s^{m-k}`.
///
/// The denominator is normalized to constant term one (`c_m ≠ 0`).
pub fn transform_equation(p: &IVProblem) -> Result<RationalExpr> {
    p.validate()?;
    let g = p.rhs.transform(p.realization)?;
    let m = p.order();
    if m == 0 {
        return Ok(g.scale(&p.op_poly[0].recip()));
    }
    let mut init_part = Poly::zero();
    for k in 1..=m {
        let prefix = Poly::new(p.init[..k].to_vec());
        init_part = &init_part + &prefix.scale(&p.op_poly[k]).shift_up(m - k);
    }
    let num = &g.num().shift_up(m) + &(&init_part * g.den());
    let den = &p.reversed_operator() * g.den();
    RationalExpr::new(num, den)
}

/// Diagnostics attached to a solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// How the denominator was factored; `None` when factoring failed.
    pub factor_mode: Option<FactorMode>,
    pub truncation: usize,
    pub mode: Mode,
    /// Factoring or naming failures. The coefficient sequence is still
    /// valid when these are present.
    pub errors: Vec<Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub realization: Realization,
    /// `Y(s)`.
    pub transform: RationalExpr,
    pub decomposition: Option<PFDecomposition>,
    /// Closed form, empty when naming failed.
    pub named: Vec<NamedFunction>,
    /// `Y_0 … Y_{N-1}`.
    pub coeff_seq: Sequence,
    pub diagnostics: Diagnostics,
}

impl Solution {
    pub fn evaluator(&self) -> SeriesEvaluator {
        SeriesEvaluator::new(self.coeff_seq.clone(), self.realization)
    }

    /// Sum of the named terms at `t`; `None` without a closed form.
    pub fn eval_named(&self, t: f64) -> Option<Complex64> {
        if self.named.is_empty() && !self.transform.is_zero() {
            return None;
        }
        Some(self.named.iter().map(|f| f.eval(self.realization, t)).sum())
    }

    /// Human-readable closed form, e.g. `-2 + 3^(k+1)`.
    pub fn closed_form(&self) -> Option<String> {
        if self.transform.is_zero() {
            return Some("0".into());
        }
        if self.named.is_empty() {
            return None;
        }
        let mut out = String::new();
        for (i, f) in self.named.iter().enumerate() {
            let text = render_term(f);
            if i == 0 {
                out.push_str(&text);
            } else if let Some(rest) = text.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&text);
            }
        }
        Some(out)
    }
}

fn needs_parens(s: &Scalar) -> bool {
    let text = s.to_string();
    text.contains(['/', '+', 'i']) || text[1..].contains('-') || text.starts_with('-')
}

fn wrap(s: &Scalar) -> String {
    if needs_parens(s) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn with_prefactor(c: &Scalar, body: String) -> String {
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else if c.is_real() {
        format!("{c}*{body}")
    } else {
        format!("({c})*{body}")
    }
}

fn render_term(f: &NamedFunction) -> String {
    let c = &f.prefactor;
    let r = &f.param;
    match f.family {
        Family::Geometric => {
            if r.is_one() {
                c.to_string()
            } else if c == r {
                format!("{}^(k+1)", wrap(r))
            } else {
                with_prefactor(c, format!("{}^k", wrap(r)))
            }
        }
        Family::Exp => {
            let arg = if r.is_one() { "t".to_string() } else { format!("{}*t", wrap(r)) };
            with_prefactor(c, format!("exp({arg})"))
        }
        _ => {
            let text = f.to_string();
            match text.split_once('*') {
                Some((_, body)) => with_prefactor(c, body.to_string()),
                None => text,
            }
        }
    }
}

/// Solve with truncation `n`.
///
/// Factoring and naming failures do not fail the solve: they are recorded
/// in the diagnostics and the coefficient sequence is still returned.
pub fn solve_ivp(p: &IVProblem, n: usize) -> Result<Solution> {
    let transform = transform_equation(p)?;
    let coeff_seq = transform.to_sequence(n)?;
    let mut errors = Vec::new();
    let (decomposition, named) = match partial_fractions(&transform) {
        Ok(dec) => {
            let named = match inverse_transform(&dec, p.realization, 1).named {
                Ok(named) => named,
                Err(e) => {
                    errors.push(e);
                    Vec::new()
                }
            };
            (Some(dec), named)
        }
        Err(e) => {
            errors.push(e);
            (None, Vec::new())
        }
    };
    Ok(Solution {
        realization: p.realization,
        diagnostics: Diagnostics {
            factor_mode: decomposition.as_ref().map(|d| d.factor_mode),
            truncation: n,
            mode: transform.mode(),
            errors,
        },
        transform,
        decomposition,
        named,
        coeff_seq,
    })
}

/// `y_0 … y_{k-1}` and, when the poles are nameable, the closed form.
pub fn solve_difference(p: &DifferenceProblem, k: usize) -> Result<Solution> {
    solve_ivp(&p.to_ivp()?, k)
}

/// One check of a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest (relative) residual seen.
    pub max_residual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Default sample points: `t = 0.1, 0.2, …, 2.0`, or `k = 0 … 19` for the
/// Z bridge.
pub fn default_sample_points(realization: Realization) -> Vec<f64> {
    match realization {
        Realization::ZBridge => (0..20).map(f64::from).collect(),
        _ => (1..=20).map(|i| f64::from(i) / 10.0).collect(),
    }
}

pub fn verify_solution(p: &IVProblem, sol: &Solution) -> VerificationReport {
    verify_solution_at(p, sol, &default_sample_points(p.realization))
}

/// Check (a) the coefficient recurrence `Σ c_k Y_{n+k} = g_n` for
/// `n < N - m`, (b) the initial data, and, when a closed form exists,
/// (c) the operator residual of the series and its agreement with the
/// closed form at `points`.
pub fn verify_solution_at(p: &IVProblem, sol: &Solution, points: &[f64]) -> VerificationReport {
    let mut checks = vec![recurrence_check(p, sol), initial_data_check(p, sol)];
    if !sol.named.is_empty() {
        checks.extend(sample_checks(p, sol, points));
    }
    VerificationReport { checks }
}

fn recurrence_check(p: &IVProblem, sol: &Solution) -> Check {
    let n = sol.coeff_seq.truncation();
    let m = p.order();
    let name = "recurrence";
    let g = match p.rhs.transform(p.realization).and_then(|g| g.to_sequence(n)) {
        Ok(g) => g,
        Err(e) => {
            return Check {
                name,
                passed: false,
                max_residual: f64::INFINITY,
                detail: format!("right-hand side has no series: {e}"),
            }
        }
    };
    let shifted: Vec<Sequence> = (0..=m).map(|k| shift_left(&sol.coeff_seq, k)).collect();
    let mut worst = 0.0f64;
    let mut exact_ok = true;
    let mut first_bad = None;
    for i in 0..n.saturating_sub(m) {
        let mut acc = -&g.coeffs()[i];
        let mut scale = g.coeffs()[i].abs();
        for (k, c) in p.op_poly.iter().enumerate() {
            let term = c * &shifted[k].coeffs()[i];
            scale = scale.max(term.abs());
            acc += &term;
        }
        let rel = acc.abs() / scale.max(f64::MIN_POSITIVE);
        let bad = if acc.is_exact() { !acc.is_zero() } else { rel > 1e-9 };
        if acc.is_exact() && !acc.is_zero() {
            exact_ok = false;
        }
        if bad && first_bad.is_none() {
            first_bad = Some(i);
        }
        if !acc.is_zero() {
            worst = worst.max(rel);
        }
    }
    let passed = first_bad.is_none() && exact_ok;
    Check {
        name,
        passed,
        max_residual: worst,
        detail: match first_bad {
            Some(i) => format!("recurrence fails at n = {i}"),
            None => format!("holds for n < {}", n.saturating_sub(m)),
        },
    }
}

fn initial_data_check(p: &IVProblem, sol: &Solution) -> Check {
    let mut worst = 0.0f64;
    let mut passed = true;
    for (k, y) in p.init.iter().enumerate() {
        let Some(got) = sol.coeff_seq.get(k) else {
            passed = false;
            continue;
        };
        let diff = got - y;
        worst = worst.max(diff.abs());
        let ok = if diff.is_exact() {
            diff.is_zero()
        } else {
            got.approx_eq(y, 1e-12, 1e-12)
        };
        passed &= ok;
    }
    Check {
        name: "initial_data",
        passed,
        max_residual: worst,
        detail: format!("{} initial values", p.init.len()),
    }
}

fn sample_checks(p: &IVProblem, sol: &Solution, points: &[f64]) -> Vec<Check> {
    let y = sol.evaluator();
    let m = p.order();
    let mut worst_res = 0.0f64;
    let mut worst_named = 0.0f64;
    for &t in points {
        if p.realization == Realization::ZBridge && t + m as f64 >= y.truncation() as f64 {
            continue;
        }
        let res = residual(p, &y, t);
        let scale = p
            .op_poly
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * y.apply_shift(k).eval(t).value.norm())
            .sum::<f64>()
            .max(1.0);
        worst_res = worst_res.max(res / scale);
        let series = y.eval(t).value;
        let named = sol.eval_named(t).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        worst_named = worst_named.max((series - named).norm() / series.norm().max(1.0));
    }
    let res_ok = worst_res.is_finite() && worst_res <= 1e-6;
    let named_ok = worst_named.is_finite() && worst_named <= 1e-6;
    vec![
        Check {
            name: "numeric_residual",
            passed: res_ok,
            max_residual: worst_res,
            detail: format!("operator residual at {} sample points", points.len()),
        },
        Check {
            name: "named_vs_series",
            passed: named_ok,
            max_residual: worst_named,
            detail: "closed form against the truncated series".into(),
        },
    ]
}
