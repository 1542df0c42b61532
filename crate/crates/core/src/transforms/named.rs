//! Closed-form functions that transforms map to and from.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Realization;
use crate::error::{Error, Result};
use crate::json::scalar_to_json;
use crate::numerics::{bessel_i, bessel_j, eval_basis, eval_maclaurin_basis, kelvin};
use crate::poly::Poly;
use crate::rational::RationalExpr;
use crate::scalar::{Mode, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `c·e^{r t}`
    Exp,
    /// `c·cos(ω t)`
    Cos,
    /// `c·sin(ω t)`
    Sin,
    /// `c·J_ν(α t)`
    BesselJ,
    /// `c·I_ν(α t)`
    BesselI,
    /// `c·Ber_ν(ω t)`
    Ber,
    /// `c·Bei_ν(ω t)`
    Bei,
    /// `c·basis_j(t)` of the realization in force
    BasisMonomial,
    /// `c·t^j·e^{r t}`
    PolyExp,
    /// `c·r^k` (sequences)
    Geometric,
    /// `c·C(k+j, j)·r^k` (sequences)
    BinomialGeometric,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Exp => "exp",
            Family::Cos => "cos",
            Family::Sin => "sin",
            Family::BesselJ => "bessel_j",
            Family::BesselI => "bessel_i",
            Family::Ber => "ber",
            Family::Bei => "bei",
            Family::BasisMonomial => "basis_monomial",
            Family::PolyExp => "poly_exp",
            Family::Geometric => "geometric",
            Family::BinomialGeometric => "binomial_geometric",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Some(match name {
            "exp" => Family::Exp,
            "cos" => Family::Cos,
            "sin" => Family::Sin,
            "bessel_j" | "J" => Family::BesselJ,
            "bessel_i" | "I" => Family::BesselI,
            "ber" => Family::Ber,
            "bei" => Family::Bei,
            "basis_monomial" | "basis" => Family::BasisMonomial,
            "poly_exp" => Family::PolyExp,
            "geometric" => Family::Geometric,
            "binomial_geometric" => Family::BinomialGeometric,
            _ => return None,
        })
    }
}

/// One named term `prefactor · family(param, ν, degree)(t)`.
///
/// `param` is the rate `r` for `Exp`, `PolyExp`, `Geometric` and
/// `BinomialGeometric`, the angular frequency `ω` for `Cos`, `Sin`, `Ber`
/// and `Bei`, and the argument scale `α` for `BesselJ`/`BesselI`. It is
/// unused for `BasisMonomial`. `degree` is the `j` of `PolyExp`,
/// `BasisMonomial` and `BinomialGeometric`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedFunction {
    pub family: Family,
    pub prefactor: Scalar,
    pub param: Scalar,
    pub nu: f64,
    pub degree: usize,
}

impl NamedFunction {
    fn build(family: Family, prefactor: Scalar, param: Scalar, nu: f64, degree: usize) -> NamedFunction {
        NamedFunction {
            family,
            prefactor,
            param,
            nu,
            degree,
        }
    }

    pub fn exp(prefactor: Scalar, rate: Scalar) -> NamedFunction {
        Self::build(Family::Exp, prefactor, rate, 0.0, 0)
    }

    pub fn poly_exp(prefactor: Scalar, rate: Scalar, degree: usize) -> NamedFunction {
        Self::build(Family::PolyExp, prefactor, rate, 0.0, degree)
    }

    pub fn cos(prefactor: Scalar, omega: Scalar) -> NamedFunction {
        Self::build(Family::Cos, prefactor, omega, 0.0, 0)
    }

    pub fn sin(prefactor: Scalar, omega: Scalar) -> NamedFunction {
        Self::build(Family::Sin, prefactor, omega, 0.0, 0)
    }

    pub fn bessel_j(prefactor: Scalar, scale: Scalar, nu: f64) -> NamedFunction {
        Self::build(Family::BesselJ, prefactor, scale, nu, 0)
    }

    pub fn bessel_i(prefactor: Scalar, scale: Scalar, nu: f64) -> NamedFunction {
        Self::build(Family::BesselI, prefactor, scale, nu, 0)
    }

    pub fn ber(prefactor: Scalar, omega: Scalar, nu: f64) -> NamedFunction {
        Self::build(Family::Ber, prefactor, omega, nu, 0)
    }

    pub fn bei(prefactor: Scalar, omega: Scalar, nu: f64) -> NamedFunction {
        Self::build(Family::Bei, prefactor, omega, nu, 0)
    }

    pub fn basis(prefactor: Scalar, degree: usize, nu: f64) -> NamedFunction {
        Self::build(Family::BasisMonomial, prefactor, Scalar::zero(Mode::Exact), nu, degree)
    }

    pub fn geometric(prefactor: Scalar, rate: Scalar) -> NamedFunction {
        Self::build(Family::Geometric, prefactor, rate, 0.0, 0)
    }

    pub fn binomial_geometric(prefactor: Scalar, rate: Scalar, degree: usize) -> NamedFunction {
        Self::build(Family::BinomialGeometric, prefactor, rate, 0.0, degree)
    }

    /// Name of `param` for this family: `rate`, `omega` or `scale`.
    pub fn param_name(family: Family) -> Option<&'static str> {
        match family {
            Family::Exp | Family::PolyExp | Family::Geometric | Family::BinomialGeometric => Some("rate"),
            Family::Cos | Family::Sin | Family::Ber | Family::Bei => Some("omega"),
            Family::BesselJ | Family::BesselI => Some("scale"),
            Family::BasisMonomial => None,
        }
    }

    /// Parameters as a JSON object, keyed as [`NamedFunction::param_name`]
    /// plus `nu` and `degree` where they apply.
    pub fn params_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        if let Some(name) = Self::param_name(self.family) {
            map.insert(name.into(), scalar_to_json(&self.param));
        }
        if matches!(
            self.family,
            Family::BesselJ | Family::BesselI | Family::Ber | Family::Bei | Family::BasisMonomial
        ) {
            map.insert("nu".into(), serde_json::json!(self.nu));
        }
        if matches!(
            self.family,
            Family::PolyExp | Family::BasisMonomial | Family::BinomialGeometric
        ) {
            map.insert("degree".into(), serde_json::json!(self.degree));
        }
        serde_json::Value::Object(map)
    }

    /// Value at `t` (an integer index `k` for the sequence families).
    pub fn eval(&self, realization: Realization, t: f64) -> Complex64 {
        let c = self.prefactor.to_c64();
        let p = self.param.to_c64();
        let value = match self.family {
            Family::Exp => (p * t).exp(),
            Family::PolyExp => (p * t).exp() * t.powi(self.degree as i32),
            Family::Cos => (p * t).cos(),
            Family::Sin => (p * t).sin(),
            Family::BesselJ => bessel_j(self.nu, p * t),
            Family::BesselI => bessel_i(self.nu, p * t),
            Family::Ber => Complex64::new(kelvin(self.nu, p.re * t).re, 0.0),
            Family::Bei => Complex64::new(kelvin(self.nu, p.re * t).im, 0.0),
            Family::BasisMonomial => Complex64::new(
                match realization {
                    Realization::Maclaurin => eval_maclaurin_basis(self.degree, t),
                    Realization::Bessel { nu } => eval_basis(self.degree, nu, t),
                    Realization::ZBridge => {
                        if (t - self.degree as f64).abs() < 1e-9 {
                            1.0
                        } else {
                            0.0
                        }
                    }
                },
                0.0,
            ),
            Family::Geometric => integer_power(p, t),
            Family::BinomialGeometric => {
                let k = t.round() as u64;
                let binom = Scalar::binomial(k + self.degree as u64, self.degree as u64).re_f64();
                integer_power(p, t) * binom
            }
        };
        c * value
    }

    /// Closed-form transform under `realization`.
    pub fn transform(&self, realization: Realization) -> Result<RationalExpr> {
        let c = &self.prefactor;
        let p = &self.param;
        let mode = c.mode().join(p.mode());
        let one = Scalar::one(mode);
        let incompatible = || {
            Error::IncompatibleRhs(format!(
                "{} has no transform under the {} realization",
                self.family.name(),
                realization.name()
            ))
        };
        let check_nu = |nu: f64| -> Result<()> {
            if (nu - self.nu).abs() > 1e-12 {
                return Err(Error::IncompatibleRhs(format!(
                    "{} of order {} under the Bessel({nu}) realization",
                    self.family.name(),
                    self.nu
                )));
            }
            Ok(())
        };
        let ratio = |num: Vec<Scalar>, den: Vec<Scalar>| RationalExpr::new(Poly::new(num), Poly::new(den));

        match (self.family, realization) {
            (Family::BasisMonomial, r) => {
                if let Some(nu) = r.nu() {
                    check_nu(nu)?;
                }
                Ok(RationalExpr::from_poly(Poly::monomial(self.degree, c.clone())))
            }
            (Family::Exp, Realization::Maclaurin) | (Family::Geometric, Realization::ZBridge) => {
                Ok(RationalExpr::pole(c.clone(), p, 1))
            }
            (Family::PolyExp, Realization::Maclaurin) => {
                // t^j e^{rt} ↔ j! s^j / (1 - r s)^{j+1}
                let fact = (1..=self.degree as i64).fold(Scalar::one(mode), |a, k| a * Scalar::from_i64(k));
                Ok(RationalExpr::pole(c * &fact, p, self.degree + 1).shift_up(self.degree))
            }
            (Family::BinomialGeometric, Realization::ZBridge) => {
                Ok(RationalExpr::pole(c.clone(), p, self.degree + 1))
            }
            (Family::Cos, Realization::Maclaurin) => {
                let w2 = p * p;
                ratio(vec![c.clone()], vec![one, Scalar::zero(mode), w2])
            }
            (Family::Sin, Realization::Maclaurin) => {
                let w2 = p * p;
                ratio(vec![Scalar::zero(mode), c * p], vec![one, Scalar::zero(mode), w2])
            }
            (Family::BesselJ, Realization::Bessel { nu }) | (Family::BesselI, Realization::Bessel { nu }) => {
                check_nu(nu)?;
                // J_ν(α t) = α^ν Σ (-α²)^n f_{n,ν}(t); I_ν flips the sign.
                let a2 = p * p;
                let rate = if self.family == Family::BesselJ { -a2 } else { a2 };
                Ok(RationalExpr::pole(c * &p.pow_real(nu), &rate, 1))
            }
            (Family::Ber, Realization::Bessel { nu }) | (Family::Bei, Realization::Bessel { nu }) => {
                check_nu(nu)?;
                // Ber_ν(ω t) + i Bei_ν(ω t) ↔ ω^ν e^{iθ} / (1 - i ω² s), θ = 3νπ/4.
                let (cos_t, sin_t) = quarter_turn_trig(3.0 * nu);
                let w2 = p * p;
                let scale = c * &p.pow_real(nu);
                let num = if self.family == Family::Ber {
                    vec![&scale * &cos_t, -(&(&scale * &sin_t) * &w2)]
                } else {
                    vec![&scale * &sin_t, &(&scale * &cos_t) * &w2]
                };
                ratio(num, vec![one, Scalar::zero(mode), &w2 * &w2])
            }
            _ => Err(incompatible()),
        }
    }
}

fn integer_power(p: Complex64, t: f64) -> Complex64 {
    if t.fract() == 0.0 && t.abs() < i32::MAX as f64 {
        p.powi(t as i32)
    } else {
        p.powf(t)
    }
}

/// `(cos(qπ/4), sin(qπ/4))`, exact when `q` is an even integer.
pub(crate) fn quarter_turn_trig(q: f64) -> (Scalar, Scalar) {
    let rounded = q.round();
    if (q - rounded).abs() < 1e-12 && (rounded as i64) % 2 == 0 {
        let quarter = ((rounded as i64 / 2) % 4 + 4) % 4;
        let (c, s) = [(1, 0), (0, 1), (-1, 0), (0, -1)][quarter as usize];
        return (Scalar::from_i64(c), Scalar::from_i64(s));
    }
    let angle = q * PI / 4.0;
    (Scalar::real(angle.cos()), Scalar::real(angle.sin()))
}

fn fmt_scalar(s: &Scalar) -> String {
    let text = s.to_string();
    if text.contains(['+', '/']) || text[1..].contains('-') {
        format!("({text})")
    } else {
        text
    }
}

impl fmt::Display for NamedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = fmt_scalar(&self.prefactor);
        let p = fmt_scalar(&self.param);
        let nu = self.nu;
        match self.family {
            Family::Exp => write!(f, "{c}*exp({p}*t)"),
            Family::PolyExp => write!(f, "{c}*t^{}*exp({p}*t)", self.degree),
            Family::Cos => write!(f, "{c}*cos({p}*t)"),
            Family::Sin => write!(f, "{c}*sin({p}*t)"),
            Family::BesselJ => write!(f, "{c}*J_{nu}({p}*t)"),
            Family::BesselI => write!(f, "{c}*I_{nu}({p}*t)"),
            Family::Ber => write!(f, "{c}*Ber_{nu}({p}*t)"),
            Family::Bei => write!(f, "{c}*Bei_{nu}({p}*t)"),
            Family::BasisMonomial => write!(f, "{c}*basis_{}(t)", self.degree),
            Family::Geometric => write!(f, "{c}*{p}^k"),
            Family::BinomialGeometric => write!(f, "{c}*C(k+{0},{0})*{p}^k", self.degree),
        }
    }
}
