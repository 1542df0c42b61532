//! Rational functions in `s`, their coefficient sequences, and partial
//! fractions over `(1 - r s)^k` factors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{find_rates_with, FactorMode, RootOptions};
use crate::scalar::{Mode, Scalar};
use crate::sequence::{invert, product_truncating, Sequence};

/// `num(s) / den(s)`.
///
/// Normalized on construction: common powers of `s` cancel, and the lowest
/// nonzero coefficient of `den` is one. In particular `den(0) = 1` whenever
/// the expression has no pole at `s = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    pub fn new(num: Poly, den: Poly) -> Result<RationalExpr> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalExpr::zero());
        }
        let v = num.s_valuation().min(den.s_valuation());
        let num = num.shift_down(v);
        let den = den.shift_down(v);
        let lowest = den.coeff(den.s_valuation());
        let inv = lowest.recip();
        Ok(RationalExpr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> RationalExpr {
        RationalExpr {
            num: Poly::zero(),
            den: Poly::one(Mode::Exact),
        }
    }

    pub fn from_poly(p: Poly) -> RationalExpr {
        RationalExpr {
            num: p,
            den: Poly::one(Mode::Exact),
        }
    }

    pub fn constant(c: Scalar) -> RationalExpr {
        RationalExpr::from_poly(Poly::constant(c))
    }

    /// `c / (1 - r s)^k`.
    pub fn pole(coeff: Scalar, rate: &Scalar, k: usize) -> RationalExpr {
        RationalExpr::new(Poly::constant(coeff), Poly::linear_factor(rate).pow(k))
            .expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mode(&self) -> Mode {
        self.num.mode().join(self.den.mode())
    }

    pub fn to_mode(&self, mode: Mode) -> RationalExpr {
        RationalExpr {
            num: self.num.to_mode(mode),
            den: self.den.to_mode(mode),
        }
    }

    /// True when the denominator vanishes at `s = 0`.
    pub fn has_pole_at_zero(&self) -> bool {
        self.den.coeff(0).is_zero()
    }

    /// Value at `s`; `None` at a pole.
    pub fn eval(&self, s: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(s);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(s) / d)
    }

    pub fn scale(&self, c: &Scalar) -> RationalExpr {
        RationalExpr::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Multiply by `s^k`.
    pub fn shift_up(&self, k: usize) -> RationalExpr {
        RationalExpr::new(self.num.shift_up(k), self.den.clone()).expect("nonzero denominator")
    }

    /// Cancel the exact greatest common divisor of numerator and
    /// denominator. Float expressions are returned unchanged.
    pub fn reduced(&self) -> RationalExpr {
        if self.mode() != Mode::Exact || self.is_zero() {
            return self.clone();
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        RationalExpr::new(self.num.div_rem(&g).0, self.den.div_rem(&g).0)
            .expect("nonzero denominator")
    }

    /// Same function: `a.num·b.den == b.num·a.den`, exactly for exact
    /// operands, else to `1e-12` relative on the coefficients.
    pub fn equivalent(&self, other: &RationalExpr) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        if lhs.mode() == Mode::Exact && rhs.mode() == Mode::Exact {
            return lhs == rhs;
        }
        let scale = lhs.max_abs().max(rhs.max_abs()).max(f64::MIN_POSITIVE);
        (&lhs - &rhs).max_abs() <= 1e-12 * scale
    }

    /// First `n` coefficients of the Cauchy series.
    pub fn to_sequence(&self, n: usize) -> Result<Sequence> {
        rational_to_sequence(self, n)
    }
}

impl Default for RationalExpr {
    fn default() -> Self {
        RationalExpr::zero()
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.den == rhs.den {
            return RationalExpr::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        RationalExpr::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominator")
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

/// First `n` Cauchy-series coefficients of `num · den⁻¹`.
pub fn rational_to_sequence(f: &RationalExpr, n: usize) -> Result<Sequence> {
    if f.has_pole_at_zero() {
        return Err(Error::DenominatorVanishesAtZero);
    }
    let inv = invert(&f.den.to_sequence(n))?;
    Ok(product_truncating(&f.num.to_sequence(n), &inv))
}

/// One partial-fraction summand `coeff / (1 - rate·s)^multiplicity`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm {
    pub rate: Scalar,
    pub multiplicity: usize,
    pub coeff: Scalar,
}

impl PoleTerm {
    pub fn new(rate: Scalar, multiplicity: usize, coeff: Scalar) -> PoleTerm {
        assert!(multiplicity >= 1, "pole multiplicity starts at one");
        PoleTerm {
            rate,
            multiplicity,
            coeff,
        }
    }

    pub fn to_rational(&self) -> RationalExpr {
        RationalExpr::pole(self.coeff.clone(), &self.rate, self.multiplicity)
    }

    /// Coefficients `c · C(n+k-1, k-1) · r^n`.
    pub fn sequence(&self, n: usize) -> Sequence {
        pole_term_sequence(self, n)
    }
}

/// Coefficient sequence of a pole term: `c · C(n+k-1, k-1) · r^n`.
pub fn pole_term_sequence(t: &PoleTerm, n: usize) -> Sequence {
    let k = t.multiplicity as u64;
    let mut power = Scalar::one(t.rate.mode().join(t.coeff.mode()));
    Sequence::from_fn(n, |i| {
        let value = &(&t.coeff * &Scalar::binomial(i as u64 + k - 1, k - 1)) * &power;
        power = &power * &t.rate;
        value
    })
}

/// `poly_part + Σ terms`.
#[derive(Clone, Debug, PartialEq)]
pub struct PFDecomposition {
    pub terms: Vec<PoleTerm>,
    pub poly_part: Poly,
    pub factor_mode: FactorMode,
}

impl PFDecomposition {
    /// Recombine into a single rational function.
    pub fn to_rational(&self) -> RationalExpr {
        self.terms
            .iter()
            .fold(RationalExpr::from_poly(self.poly_part.clone()), |acc, t| {
                &acc + &t.to_rational()
            })
    }

    /// Coefficient sequence assembled term by term.
    pub fn sequence(&self, n: usize) -> Sequence {
        let mode = self.poly_part.mode();
        self.terms
            .iter()
            .fold(self.poly_part.to_sequence(n).to_mode(mode), |acc, t| {
                &acc + &pole_term_sequence(t, n)
            })
    }

    /// Value of the decomposition at `s`; `None` at a pole.
    pub fn eval(&self, s: &Scalar) -> Option<Scalar> {
        let mut acc = self.poly_part.eval(s);
        for t in &self.terms {
            let base = &Scalar::one(s.mode()) - &(&t.rate * s);
            if base.is_zero() {
                return None;
            }
            acc = &acc + &(&t.coeff / &base.powi(t.multiplicity as u32));
        }
        Some(acc)
    }

    pub fn has_repeated_poles(&self) -> bool {
        self.terms.iter().any(|t| t.multiplicity > 1)
    }
}

pub fn partial_fractions(f: &RationalExpr) -> Result<PFDecomposition> {
    partial_fractions_with(f, RootOptions::default())
}

/// Partial fractions by local expansion at each pole.
///
/// Around the rate `r` with multiplicity `k`, put `u = 1 - r s` and expand
/// `h = rem / Π_{m≠r}(1 - r_m s)^{k_m}` as a series in `u`. The first `k`
/// coefficients `h_0 … h_{k-1}` are the numerators of
/// `1/u^k, …, 1/u`. For `k = 1` this is `rem(1/r) / Π_{m≠r}(1 - r_m/r)`.
pub fn partial_fractions_with(f: &RationalExpr, opts: RootOptions) -> Result<PFDecomposition> {
    if f.has_pole_at_zero() {
        return Err(Error::DenominatorVanishesAtZero);
    }
    let factorization = find_rates_with(&f.den, opts)?;
    let mode = f.mode();
    let (poly_part, rem) = f.num.div_rem(&f.den);

    let mut terms = Vec::new();
    if !rem.is_zero() {
        for (i, (rate, k)) in factorization.rates.iter().enumerate() {
            let inv_r = rate.recip();
            let a = inv_r.clone();
            let b = -&inv_r;
            let num_u = rem.compose_linear(&a, &b);
            let mut other_u = Poly::one(mode);
            for (j, (rj, kj)) in factorization.rates.iter().enumerate() {
                if i != j {
                    let fac = Poly::linear_factor(rj).compose_linear(&a, &b);
                    other_u = &other_u * &fac.pow(*kj);
                }
            }
            let h = product_truncating(&num_u.to_sequence(*k), &invert(&other_u.to_sequence(*k))?);
            for q in 0..*k {
                let c = h.coeffs()[q].clone();
                if !c.is_zero() {
                    terms.push(PoleTerm::new(rate.clone(), k - q, c));
                }
            }
        }
    }
    terms.sort_by(|x, y| {
        x.rate
            .cmp_lex(&y.rate)
            .then(x.multiplicity.cmp(&y.multiplicity))
    });
    Ok(PFDecomposition {
        terms,
        poly_part,
        factor_mode: factorization.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn geometric_sequences() {
        let ones = RationalExpr::pole(q(1, 1), &q(1, 1), 1).to_sequence(6).unwrap();
        assert_eq!(ones, Sequence::from_i64s(&[1; 6]));
        let threes = RationalExpr::pole(q(1, 1), &q(3, 1), 1).to_sequence(5).unwrap();
        assert_eq!(threes, Sequence::from_i64s(&[1, 3, 9, 27, 81]));
    }

    #[test]
    fn quarter_period_patterns() {
        let cos_like = RationalExpr::new(Poly::from_i64s(&[1]), Poly::from_i64s(&[1, 0, 1])).unwrap();
        assert_eq!(cos_like.to_sequence(8).unwrap(), Sequence::from_i64s(&[1, 0, -1, 0, 1, 0, -1, 0]));
        let sin_like = RationalExpr::new(Poly::from_i64s(&[0, 1]), Poly::from_i64s(&[1, 0, 1])).unwrap();
        assert_eq!(sin_like.to_sequence(8).unwrap(), Sequence::from_i64s(&[0, 1, 0, -1, 0, 1, 0, -1]));
    }

    #[test]
    fn pole_at_zero_is_rejected() {
        let f = RationalExpr::new(Poly::from_i64s(&[1]), Poly::from_i64s(&[0, 1])).unwrap();
        assert_eq!(f.to_sequence(4), Err(Error::DenominatorVanishesAtZero));
    }

    #[test]
    fn normalization_cancels_s_powers() {
        let f = RationalExpr::new(Poly::from_i64s(&[0, 2]), Poly::from_i64s(&[0, 4, 4])).unwrap();
        assert_eq!(f.num(), &Poly::from_i64s(&[1]).scale(&q(1, 2)));
        assert_eq!(f.den(), &Poly::from_i64s(&[1, 1]));
    }

    #[test]
    fn ode_example_decomposition() {
        let den = &Poly::from_i64s(&[1, -3]) * &Poly::from_i64s(&[1, -3, 2]);
        let f = RationalExpr::new(Poly::from_i64s(&[1, -6, 10]), den).unwrap();
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(pf.factor_mode, FactorMode::Exact);
        assert!(pf.poly_part.is_zero());
        assert_eq!(
            pf.terms,
            vec![
                PoleTerm::new(q(1, 1), 1, q(5, 2)),
                PoleTerm::new(q(2, 1), 1, q(-2, 1)),
                PoleTerm::new(q(3, 1), 1, q(1, 2)),
            ]
        );
        assert!(pf.to_rational().equivalent(&f));
    }

    #[test]
    fn single_term_is_unchanged() {
        let f = RationalExpr::pole(q(7, 3), &q(-4, 1), 1);
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(pf.terms, vec![PoleTerm::new(q(-4, 1), 1, q(7, 3))]);
    }

    #[test]
    fn repeated_pole_decomposition() {
        // (1 + s) / (1 - 2s)^2 = -1/2/(1-2s) + 3/2/(1-2s)^2
        let f = RationalExpr::new(Poly::from_i64s(&[1, 1]), Poly::from_i64s(&[1, -4, 4])).unwrap();
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(
            pf.terms,
            vec![PoleTerm::new(q(2, 1), 1, q(-1, 2)), PoleTerm::new(q(2, 1), 2, q(3, 2))]
        );
        assert_eq!(pf.sequence(12), f.to_sequence(12).unwrap());
    }

    #[test]
    fn polynomial_part() {
        // (1 + s^2) / (1 - s) = -1 - s + 2/(1-s)
        let f = RationalExpr::new(Poly::from_i64s(&[1, 0, 1]), Poly::from_i64s(&[1, -1])).unwrap();
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(pf.poly_part, Poly::from_i64s(&[-1, -1]));
        assert_eq!(pf.terms, vec![PoleTerm::new(q(1, 1), 1, q(2, 1))]);
        assert_eq!(pf.sequence(10), f.to_sequence(10).unwrap());
    }

    #[test]
    fn binomial_weighted_sequence() {
        let t = PoleTerm::new(q(2, 1), 2, q(1, 1));
        // Brute force: {2^n} convolved with itself.
        let g: Vec<i64> = (0..6).map(|n| 1 << n).collect();
        let brute: Vec<i64> = (0..6).map(|n| (0..=n).map(|j| g[j] * g[n - j]).sum()).collect();
        assert_eq!(brute[..4], [1, 4, 12, 32]);
        assert_eq!(pole_term_sequence(&t, 6), Sequence::from_i64s(&brute));
        assert_eq!(
            pole_term_sequence(&PoleTerm::new(q(0, 1), 1, q(5, 1)), 4),
            Sequence::from_i64s(&[5, 0, 0, 0])
        );
    }
}
