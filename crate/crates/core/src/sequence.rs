//! Truncated sequences under the Cauchy product.
//!
//! A [`Sequence`] holds the first `N` coefficients `a_0 … a_{N-1}` of a
//! formal series `a_0 + a_1 s + a_2 s² + …`. Products, inverses and shifts
//! are computed on that prefix only; nothing here depends on convergence.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Default number of retained coefficients.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Float-mode threshold below which `a_0` counts as zero for inversion.
pub const DEFAULT_INVERT_EPS: f64 = 1e-12;

/// A truncated coefficient sequence `{a_0, …, a_{N-1}}`.
///
/// `degraded` counts trailing slots that hold padding rather than true
/// coefficients (produced by [`shift_left`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    coeffs: Vec<Scalar>,
    degraded: usize,
}

/// Index of the first nonzero coefficient; a sequence is Cauchy-invertible
/// exactly when this is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvertibilityWitness {
    /// Equal to the truncation for the zero sequence.
    pub first_nonzero_index: usize,
}

impl InvertibilityWitness {
    pub fn is_invertible(&self) -> bool {
        self.first_nonzero_index == 0
    }
}

impl Sequence {
    /// Wrap a coefficient vector. Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Scalar>) -> Sequence {
        assert!(!coeffs.is_empty(), "a sequence needs at least one coefficient");
        Sequence { coeffs, degraded: 0 }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Scalar) -> Sequence {
        Sequence::new((0..n).map(f).collect())
    }

    pub fn from_i64s(values: &[i64]) -> Sequence {
        Sequence::new(values.iter().map(|&v| Scalar::from_i64(v)).collect())
    }

    pub fn from_f64s(values: &[f64]) -> Sequence {
        Sequence::new(values.iter().map(|&v| Scalar::real(v)).collect())
    }

    pub fn zeros(n: usize, mode: Mode) -> Sequence {
        Sequence::new(vec![Scalar::zero(mode); n])
    }

    /// The multiplicative identity `{1, 0, 0, …}`.
    pub fn identity(n: usize, mode: Mode) -> Sequence {
        Sequence::constant(Scalar::one(mode), n)
    }

    /// The constant `c = {c, 0, 0, …}`.
    pub fn constant(c: Scalar, n: usize) -> Sequence {
        let mode = c.mode();
        let mut seq = Sequence::zeros(n, mode);
        seq.coeffs[0] = c;
        seq
    }

    /// `s^m = {0, …, 0, 1, 0, …}` with the one at index `m`.
    pub fn s_power(m: usize, n: usize, mode: Mode) -> Sequence {
        let mut seq = Sequence::zeros(n, mode);
        if m < n {
            seq.coeffs[m] = Scalar::one(mode);
        }
        seq
    }

    /// Truncation order `N`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn get(&self, n: usize) -> Option<&Scalar> {
        self.coeffs.get(n)
    }

    /// Number of trailing padded slots after a left shift.
    pub fn degraded_tail(&self) -> usize {
        self.degraded
    }

    pub fn is_degraded(&self) -> bool {
        self.degraded > 0
    }

    /// Exact when every coefficient is exact.
    pub fn mode(&self) -> Mode {
        self.coeffs
            .iter()
            .fold(Mode::Exact, |m, c| m.join(c.mode()))
    }

    pub fn to_mode(&self, mode: Mode) -> Sequence {
        Sequence {
            coeffs: self.coeffs.iter().map(|c| c.to_mode(mode)).collect(),
            degraded: self.degraded,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn witness(&self) -> InvertibilityWitness {
        InvertibilityWitness {
            first_nonzero_index: self
                .coeffs
                .iter()
                .position(|c| !c.is_zero())
                .unwrap_or(self.coeffs.len()),
        }
    }

    /// Keep the first `n` coefficients, zero-padding if `n` exceeds the
    /// current truncation.
    pub fn truncate(&self, n: usize) -> Sequence {
        let mode = self.mode();
        let mut coeffs: Vec<Scalar> = self.coeffs.iter().take(n).cloned().collect();
        let padded = n.saturating_sub(coeffs.len());
        coeffs.resize(n, Scalar::zero(mode));
        let kept_degraded = self.degraded.saturating_sub(self.coeffs.len().saturating_sub(n));
        Sequence::new(coeffs).with_degraded(kept_degraded + padded)
    }

    fn with_degraded(mut self, degraded: usize) -> Sequence {
        self.degraded = degraded.min(self.coeffs.len());
        self
    }

    pub fn scale(&self, c: &Scalar) -> Sequence {
        Sequence {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            degraded: self.degraded,
        }
    }

    /// Componentwise sum; fails when the truncations differ.
    pub fn try_add(&self, other: &Sequence) -> Result<Sequence> {
        check_same(self, other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Sequence) -> Result<Sequence> {
        check_same(self, other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Sequence, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Sequence {
        Sequence {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
            degraded: self.degraded.max(other.degraded),
        }
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Sequence) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Componentwise comparison within `atol + rtol·max(|a|,|b|)`.
    pub fn approx_eq(&self, other: &Sequence, rtol: f64, atol: f64) -> bool {
        self.truncation() == other.truncation()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.approx_eq(b, rtol, atol))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.coeffs.iter()
    }
}

fn check_same(a: &Sequence, b: &Sequence) -> Result<()> {
    if a.truncation() != b.truncation() {
        return Err(Error::TruncationMismatch {
            left: a.truncation(),
            right: b.truncation(),
        });
    }
    Ok(())
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a Sequence {
    type Item = &'a Scalar;
    type IntoIter = std::slice::Iter<'a, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.coeffs.iter()
    }
}

// Operator forms truncate to the shorter operand.
impl Add for &Sequence {
    type Output = Sequence;
    fn add(self, rhs: &Sequence) -> Sequence {
        let n = self.truncation().min(rhs.truncation());
        self.truncate(n).zip_with(&rhs.truncate(n), |a, b| a + b)
    }
}

impl Sub for &Sequence {
    type Output = Sequence;
    fn sub(self, rhs: &Sequence) -> Sequence {
        let n = self.truncation().min(rhs.truncation());
        self.truncate(n).zip_with(&rhs.truncate(n), |a, b| a - b)
    }
}

impl Neg for &Sequence {
    type Output = Sequence;
    fn neg(self) -> Sequence {
        Sequence {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
            degraded: self.degraded,
        }
    }
}

fn convolve(a: &[Scalar], b: &[Scalar], n: usize) -> Vec<Scalar> {
    let mode = a.iter().chain(b).fold(Mode::Exact, |m, c| m.join(c.mode()));
    (0..n)
        .map(|k| {
            let mut acc = Scalar::zero(mode);
            for tau in 0..=k {
                if a[tau].is_zero() || b[k - tau].is_zero() {
                    continue;
                }
                acc += &(&a[tau] * &b[k - tau]);
            }
            acc
        })
        .collect()
}

/// Cauchy product `(a·b)_n = Σ_{τ≤n} a_τ b_{n-τ}`. Truncations must agree.
pub fn cauchy_product(a: &Sequence, b: &Sequence) -> Result<Sequence> {
    check_same(a, b)?;
    Ok(product_truncating(a, b))
}

/// Cauchy product at the smaller of the two truncations.
pub fn product_truncating(a: &Sequence, b: &Sequence) -> Sequence {
    let n = a.truncation().min(b.truncation());
    Sequence::new(convolve(&a.coeffs, &b.coeffs, n)).with_degraded(a.degraded.max(b.degraded))
}

/// Cauchy inverse with the default float threshold.
pub fn invert(a: &Sequence) -> Result<Sequence> {
    invert_with_eps(a, DEFAULT_INVERT_EPS)
}

/// Cauchy inverse by the recursion `b_0 = 1/a_0`,
/// `b_n = -(a_1 b_{n-1} + … + a_n b_0)/a_0`.
///
/// Exact `a_0` must be nonzero; float `a_0` must exceed `eps` in modulus.
pub fn invert_with_eps(a: &Sequence, eps: f64) -> Result<Sequence> {
    let a0 = &a.coeffs[0];
    let singular = match a0 {
        Scalar::Exact(_) => a0.is_zero(),
        Scalar::Float(z) => z.norm() <= eps,
    };
    if singular {
        return Err(Error::NotInvertible);
    }
    let n = a.truncation();
    let inv_a0 = a0.recip();
    let mut b: Vec<Scalar> = Vec::with_capacity(n);
    b.push(inv_a0.clone());
    for k in 1..n {
        let mut acc = Scalar::zero(a.mode());
        for j in 1..=k {
            if a.coeffs[j].is_zero() {
                continue;
            }
            acc += &(&a.coeffs[j] * &b[k - j]);
        }
        b.push(-(&acc * &inv_a0));
    }
    Ok(Sequence::new(b).with_degraded(a.degraded))
}

/// Right shift `s^m · a`: `m` leading zeros, then `a_0, …, a_{N-m-1}`.
pub fn shift_right(a: &Sequence, m: usize) -> Sequence {
    let n = a.truncation();
    let mode = a.mode();
    let coeffs = (0..n)
        .map(|i| {
            if i < m {
                Scalar::zero(mode)
            } else {
                a.coeffs[i - m].clone()
            }
        })
        .collect();
    Sequence::new(coeffs).with_degraded(a.degraded.saturating_sub(m))
}

/// Left shift `l^m a = {a_m, a_{m+1}, …}`; the last `m` slots are zero
/// padding and are recorded as degraded.
pub fn shift_left(a: &Sequence, m: usize) -> Sequence {
    let n = a.truncation();
    let mode = a.mode();
    let coeffs = (0..n)
        .map(|i| a.coeffs.get(i + m).cloned().unwrap_or_else(|| Scalar::zero(mode)))
        .collect();
    Sequence::new(coeffs).with_degraded(a.degraded + m)
}

/// `a - a_0 - a_1 s - … - a_{m-1} s^{m-1}`: `a` with its first `m`
/// coefficients zeroed. Equals `s^m (l^m a)`.
pub fn shift_identity_rhs(a: &Sequence, m: usize) -> Sequence {
    let mode = a.mode();
    let coeffs = a
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i < m { Scalar::zero(mode) } else { c.clone() })
        .collect();
    Sequence::new(coeffs).with_degraded(a.degraded)
}
