//! The coefficient field: exact complex rationals or complex doubles.
//!
//! Arithmetic between two exact values stays exact. Any operation that
//! touches a float operand produces a float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A complex number with arbitrary-precision rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Arithmetic mode of a [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    /// The mode that results from combining values of `self` and `other`.
    pub fn join(self, other: Mode) -> Mode {
        if self == Mode::Exact && other == Mode::Exact {
            Mode::Exact
        } else {
            Mode::Float
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// An element of the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(Complex64),
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator pairs overflow a direct conversion.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn exact_to_c64(z: &ExactComplex) -> Complex64 {
    Complex64::new(ratio_to_f64(&z.re), ratio_to_f64(&z.im))
}

impl Scalar {
    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(ExactComplex::zero()),
            Mode::Float => Scalar::Float(Complex64::zero()),
        }
    }

    pub fn one(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(ExactComplex::one()),
            Mode::Float => Scalar::Float(Complex64::one()),
        }
    }

    pub fn from_i64(n: i64) -> Scalar {
        Scalar::Exact(Complex::new(BigRational::from_integer(n.into()), BigRational::zero()))
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::Exact(Complex::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        ))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::Exact(Complex::new(r, BigRational::zero()))
    }

    pub fn exact_complex(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Exact(Complex::new(re, im))
    }

    pub fn real(x: f64) -> Scalar {
        Scalar::Float(Complex64::new(x, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Scalar {
        Scalar::Float(Complex64::new(re, im))
    }

    /// Imaginary unit in the requested mode.
    pub fn i(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::exact_complex(BigRational::zero(), BigRational::one()),
            Mode::Float => Scalar::complex(0.0, 1.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Float(z) => z.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_one(),
            Scalar::Float(z) => *z == Complex64::one(),
        }
    }

    /// True when the imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero(),
            Scalar::Float(z) => z.im == 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactComplex> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Float(_) => None,
        }
    }

    /// The real rational value, if this is an exact real number.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(z) if z.im.is_zero() => Some(&z.re),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => exact_to_c64(z),
            Scalar::Float(z) => *z,
        }
    }

    /// Real part as a double.
    pub fn re_f64(&self) -> f64 {
        self.to_c64().re
    }

    pub fn im_f64(&self) -> f64 {
        self.to_c64().im
    }

    /// Modulus as a double.
    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Convert to the requested mode. Float to exact uses the exact binary
    /// value of each double.
    pub fn to_mode(&self, mode: Mode) -> Scalar {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Float(_), Mode::Float) => self.clone(),
            (Scalar::Exact(z), Mode::Float) => Scalar::Float(exact_to_c64(z)),
            (Scalar::Float(z), Mode::Exact) => Scalar::Exact(Complex::new(
                BigRational::from_float(z.re).unwrap_or_else(BigRational::zero),
                BigRational::from_float(z.im).unwrap_or_else(BigRational::zero),
            )),
        }
    }

    pub fn to_float(&self) -> Scalar {
        self.to_mode(Mode::Float)
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(z.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// Multiplicative inverse. Panics on exact zero.
    pub fn recip(&self) -> Scalar {
        Scalar::one(self.mode()) / self
    }

    pub fn powi(&self, exp: u32) -> Scalar {
        let mut result = Scalar::one(self.mode());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Integer power allowing negative exponents. Panics on exact zero base
    /// with a negative exponent.
    pub fn pow_signed(&self, exp: i64) -> Scalar {
        if exp >= 0 {
            self.powi(exp as u32)
        } else {
            self.powi((-exp) as u32).recip()
        }
    }

    /// `|self - other| <= atol + rtol * max(|self|, |other|)`.
    pub fn approx_eq(&self, other: &Scalar, rtol: f64, atol: f64) -> bool {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            if a == b {
                return true;
            }
        }
        let a = self.to_c64();
        let b = other.to_c64();
        (a - b).norm() <= atol + rtol * a.norm().max(b.norm())
    }

    /// Total order on (re, im) used to sort outputs deterministically.
    pub fn cmp_lex(&self, other: &Scalar) -> Ordering {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im));
        }
        let a = self.to_c64();
        let b = other.to_c64();
        a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
    }

    /// Sign of the real part for real scalars; `None` for non-real values.
    pub fn real_sign(&self, tol: f64) -> Option<Ordering> {
        match self {
            Scalar::Exact(z) => {
                if !z.im.is_zero() {
                    return None;
                }
                Some(if z.re.is_positive() {
                    Ordering::Greater
                } else if z.re.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                })
            }
            Scalar::Float(z) => {
                if z.im.abs() > tol * z.norm().max(1.0) {
                    return None;
                }
                Some(z.re.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
            }
        }
    }

    /// Exact square root of a non-negative real rational that is a perfect
    /// square; `None` otherwise.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        let r = self.as_rational()?;
        if r.is_negative() {
            return None;
        }
        let n = r.numer().sqrt();
        let d = r.denom().sqrt();
        if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
            Some(Scalar::from_rational(BigRational::new(n, d)))
        } else {
            None
        }
    }

    /// Principal square root; exact when [`Scalar::sqrt_exact`] succeeds.
    pub fn sqrt(&self) -> Scalar {
        self.sqrt_exact()
            .unwrap_or_else(|| Scalar::Float(self.to_c64().sqrt()))
    }

    /// Principal power `self^nu`; exact for exact bases and integer `nu`.
    pub fn pow_real(&self, nu: f64) -> Scalar {
        if self.is_exact() && nu.fract() == 0.0 && nu.abs() < 1e6 {
            if self.is_zero() && nu < 0.0 {
                return Scalar::real(f64::INFINITY);
            }
            return self.pow_signed(nu as i64);
        }
        let z = self.to_c64();
        if nu == 0.0 {
            return Scalar::real(1.0);
        }
        if z == Complex64::zero() {
            return Scalar::real(if nu > 0.0 { 0.0 } else { f64::INFINITY });
        }
        Scalar::Float((z.ln() * nu).exp())
    }

    /// Binomial coefficient C(n, k) as an exact scalar.
    pub fn binomial(n: u64, k: u64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(binomial_int(n, k)))
    }
}

pub(crate) fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero(Mode::Exact)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::real(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => {
                if z.im.is_zero() {
                    write!(f, "{}", fmt_ratio(&z.re))
                } else if z.re.is_zero() {
                    write!(f, "{}i", fmt_ratio(&z.im))
                } else if z.im.is_negative() {
                    write!(f, "{}-{}i", fmt_ratio(&z.re), fmt_ratio(&-z.im.clone()))
                } else {
                    write!(f, "{}+{}i", fmt_ratio(&z.re), fmt_ratio(&z.im))
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.im < 0.0 {
                    write!(f, "{}-{}i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_c64() $op rhs.to_c64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}
