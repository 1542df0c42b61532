//! Dense univariate polynomials in the formal variable `s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Mode, Scalar};
use crate::sequence::Sequence;

/// Polynomial with coefficients in ascending powers of `s`.
///
/// Normalized: no trailing zero coefficients; the zero polynomial has an
/// empty coefficient list.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(mode: Mode) -> Poly {
        Poly::constant(Scalar::one(mode))
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(vec![c])
    }

    /// `c · s^k`.
    pub fn monomial(k: usize, c: Scalar) -> Poly {
        let mut coeffs = vec![Scalar::zero(c.mode()); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn from_i64s(values: &[i64]) -> Poly {
        Poly::new(values.iter().map(|&v| Scalar::from_i64(v)).collect())
    }

    pub fn from_f64s(values: &[f64]) -> Poly {
        Poly::new(values.iter().map(|&v| Scalar::real(v)).collect())
    }

    /// The factor `(1 - r s)`.
    pub fn linear_factor(rate: &Scalar) -> Poly {
        Poly::new(vec![Scalar::one(rate.mode()), -rate])
    }

    /// `Π (1 - r_i s)^{k_i}`.
    pub fn from_rates(rates: &[(Scalar, usize)]) -> Poly {
        let mode = rates.iter().fold(Mode::Exact, |m, (r, _)| m.join(r.mode()));
        let mut acc = Poly::one(mode);
        for (r, k) in rates {
            let f = Poly::linear_factor(r);
            for _ in 0..*k {
                acc = &acc * &f;
            }
        }
        acc
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `s^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.mode()))
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn mode(&self) -> Mode {
        self.coeffs
            .iter()
            .fold(Mode::Exact, |m, c| m.join(c.mode()))
    }

    pub fn to_mode(&self, mode: Mode) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.to_mode(mode)).collect())
    }

    /// Largest power of `s` dividing the polynomial (0 for the zero poly).
    pub fn s_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Multiply by `s^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(self.mode()); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs)
    }

    /// Divide by `s^k`, discarding the low coefficients.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Keep the terms of degree below `k`.
    pub fn truncated(&self, k: usize) -> Poly {
        Poly::new(self.coeffs.iter().take(k).cloned().collect())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.mode().join(x.mode()));
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_i64(k as i64))
                .collect(),
        )
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    /// Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mode = self.mode().join(d.mode());
        let mut quot = vec![Scalar::zero(mode); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] * &lead_inv;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&q * dc);
                }
            }
            rem[k + dd] = Scalar::zero(mode);
            quot[k] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Coefficients reversed as a polynomial of nominal degree `deg`:
    /// `s^deg · p(1/s)`.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mode = self.mode();
        Poly::new((0..=deg).map(|i| {
            self.coeffs
                .get(deg - i)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(mode))
        })
        .collect())
    }

    /// Substitute `s = a + b·u`, returning a polynomial in `u`.
    pub fn compose_linear(&self, a: &Scalar, b: &Scalar) -> Poly {
        let lin = Poly::new(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Monic greatest common divisor (exact arithmetic expected).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// First `n` coefficients as a sequence (zero padded).
    pub fn to_sequence(&self, n: usize) -> Sequence {
        let mode = self.mode();
        Sequence::from_fn(n, |i| {
            self.coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(mode))
        })
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one(self.mode());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})s")?,
                _ => write!(f, "({c})s^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mode = self.mode().join(rhs.mode());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.to_mode(mode),
                    (None, Some(b)) => b.to_mode(mode),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mode = self.mode().join(rhs.mode());
        let mut out = vec![Scalar::zero(mode); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

macro_rules! owned_poly_op {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
owned_poly_op!(Add, add);
owned_poly_op!(Sub, sub);
owned_poly_op!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let a = Poly::from_i64s(&[1, -1]);
        let b = Poly::from_i64s(&[1, -2]);
        assert_eq!(&a * &b, Poly::from_i64s(&[1, -3, 2]));
        // (s-1)(2s-1) is the same polynomial.
        assert_eq!(&Poly::from_i64s(&[-1, 1]) * &Poly::from_i64s(&[-1, 2]), Poly::from_i64s(&[1, -3, 2]));
        assert!((&a * &Poly::zero()).is_zero());
        assert_eq!(&Poly::from_i64s(&[1, 1]) * &a, Poly::from_i64s(&[1, 0, -1]));
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        let p = Poly::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::from_i64s(&[0, 0]).coeffs().len(), 0);
    }

    #[test]
    fn division() {
        let n = Poly::from_i64s(&[1, -6, 10]);
        let d = Poly::from_i64s(&[1, -3]);
        let (q, r) = n.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, n);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_finds_common_factor() {
        let a = Poly::from_rates(&[(Scalar::from_i64(2), 2), (Scalar::from_i64(3), 1)]);
        let b = Poly::from_rates(&[(Scalar::from_i64(2), 1), (Scalar::from_i64(5), 1)]);
        let g = a.gcd(&b);
        assert_eq!(g, Poly::linear_factor(&Scalar::from_i64(2)).monic());
    }

    #[test]
    fn compose_and_reverse() {
        let p = Poly::from_i64s(&[1, -3, 2]);
        // p(1 + u) = 2u^2 + u
        let q = p.compose_linear(&Scalar::from_i64(1), &Scalar::from_i64(1));
        assert_eq!(q, Poly::from_i64s(&[0, 1, 2]));
        assert_eq!(p.reversed(2), Poly::from_i64s(&[2, -3, 1]));
    }
}
