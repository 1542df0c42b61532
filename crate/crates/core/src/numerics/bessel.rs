//! Independent ascending-series oracles for `J_ν`, `I_ν` and the Kelvin
//! functions `Ber_ν`, `Bei_ν`.
//!
//! These evaluate the classical power series directly in complex
//! arithmetic and never consult the transform table, so they can be used
//! to check it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{eval_basis, gamma_nu_plus_one};
use super::evaluator::NeumaierSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselFamily {
    J,
    I,
    Ber,
    Bei,
}

const MAX_TERMS: usize = 400;

/// `(z/2)^ν / Γ(ν+1) · Σ_k (sign·z²/4)^k / (k! (ν+1)_k)` with the principal
/// branch of `(z/2)^ν`. `sign = -1` gives `J_ν`, `+1` gives `I_ν`.
/// With `terms = None`, summation stops once a term drops below `1e-17`
/// of the running sum.
fn ascending(nu: f64, z: Complex64, sign: f64, terms: Option<usize>) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(if nu == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    let half = z / 2.0;
    let prefactor = if nu == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        (half.ln() * nu).exp()
    } / gamma_nu_plus_one(nu);
    let q = half * half * sign;
    let mut sum = NeumaierSum::default();
    let mut term = Complex64::new(1.0, 0.0);
    let limit = terms.unwrap_or(MAX_TERMS);
    for k in 0..limit {
        if k > 0 {
            term = term * q / (k as f64 * (nu + k as f64));
        }
        sum.add(term);
        if terms.is_none() && k > 2 && term.norm() <= 1e-17 * sum.value().norm() {
            break;
        }
    }
    prefactor * sum.value()
}

/// `J_ν(z)` for complex `z`.
pub fn bessel_j(nu: f64, z: Complex64) -> Complex64 {
    ascending(nu, z, -1.0, None)
}

/// `I_ν(z)` for complex `z`.
pub fn bessel_i(nu: f64, z: Complex64) -> Complex64 {
    ascending(nu, z, 1.0, None)
}

/// `Ber_ν(x) + i·Bei_ν(x) = J_ν(x·e^{3πi/4})`.
pub fn kelvin(nu: f64, x: f64) -> Complex64 {
    bessel_j(nu, Complex64::from_polar(x, 0.75 * PI))
}

/// Reference value of a first-kind Bessel or Kelvin function at `t ≥ 0`.
pub fn oracle_bessel(family: BesselFamily, nu: f64, t: f64) -> f64 {
    oracle_eval(family, nu, t, None)
}

/// As [`oracle_bessel`] with a fixed number of series terms.
pub fn oracle_bessel_terms(family: BesselFamily, nu: f64, t: f64, terms: usize) -> f64 {
    oracle_eval(family, nu, t, Some(terms))
}

fn oracle_eval(family: BesselFamily, nu: f64, t: f64, terms: Option<usize>) -> f64 {
    let rotated = Complex64::from_polar(t, 0.75 * PI);
    match family {
        BesselFamily::J => ascending(nu, Complex64::new(t, 0.0), -1.0, terms).re,
        BesselFamily::I => ascending(nu, Complex64::new(t, 0.0), 1.0, terms).re,
        BesselFamily::Ber => ascending(nu, rotated, -1.0, terms).re,
        BesselFamily::Bei => ascending(nu, rotated, -1.0, terms).im,
    }
}

/// Classical `ber(x) = Σ (-1)^k (x/2)^{4k} / ((2k)!)²`.
pub fn ber_classical(x: f64) -> f64 {
    let q = (x / 2.0).powi(4);
    let mut sum = NeumaierSum::default();
    let mut term = 1.0;
    for k in 0..MAX_TERMS {
        if k > 0 {
            let a = (2 * k - 1) as f64;
            let b = (2 * k) as f64;
            term *= -q / (a * a * b * b);
        }
        sum.add(Complex64::new(term, 0.0));
        if k > 1 && term.abs() <= 1e-17 * sum.value().norm() {
            break;
        }
    }
    sum.value().re
}

/// Classical `bei(x) = Σ (-1)^k (x/2)^{4k+2} / ((2k+1)!)²`.
pub fn bei_classical(x: f64) -> f64 {
    let q = (x / 2.0).powi(4);
    let mut sum = NeumaierSum::default();
    let mut term = (x / 2.0).powi(2);
    for k in 0..MAX_TERMS {
        if k > 0 {
            let a = (2 * k) as f64;
            let b = (2 * k + 1) as f64;
            term *= -q / (a * a * b * b);
        }
        sum.add(Complex64::new(term, 0.0));
        if k > 1 && term.abs() <= 1e-17 * sum.value().norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum.value().re
}

/// Coefficients `a_0 … a_{n-1}` of a family in the `f_{k,ν}` basis, read
/// off the k-th term of the standard ascending series at the probe point
/// `t` (each term divided by `f_{k,ν}(t)`).
///
/// The term for `J_ν(z)` is `(-1)^k (z/2)^{2k+ν} / (k!·Γ(k+ν+1))`, taken
/// at `z = t` for `J`, at `z = i·t` for `I` (with the `i^{-ν}` normalizer)
/// and at `z = t·e^{3πi/4}` for the Kelvin pair.
pub fn oracle_coefficients(family: BesselFamily, nu: f64, n: usize, t: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let z = match family {
                BesselFamily::J => Complex64::new(t, 0.0),
                BesselFamily::I => Complex64::new(0.0, t),
                BesselFamily::Ber | BesselFamily::Bei => Complex64::from_polar(t, 0.75 * PI),
            };
            let power = ((z / 2.0).ln() * (2.0 * k as f64 + nu)).exp();
            let denom = factorial(k) * gamma_nu_plus_one(nu + k as f64);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut term = power * sign / denom;
            if family == BesselFamily::I {
                // I_ν(t) = i^{-ν} J_ν(i t)
                term *= Complex64::from_polar(1.0, -0.5 * PI * nu);
            }
            let value = match family {
                BesselFamily::Bei => term.im,
                _ => term.re,
            };
            value / eval_basis(k, nu, t)
        })
        .collect()
}

/// Coefficients of the classical `ber`/`bei` series in the `f_{k,0}` basis:
/// `ber` carries `(-1)^j` at `k = 2j`, `bei` carries `(-1)^j` at `k = 2j+1`.
pub fn classical_kelvin_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let t: f64 = 1.0;
    let mut ber = vec![0.0; n];
    let mut bei = vec![0.0; n];
    for k in 0..n {
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * (t / 2.0).powi(2 * k as i32) / (factorial(k) * factorial(k));
        let coeff = term / eval_basis(k, 0.0, t);
        if k % 2 == 0 {
            ber[k] = coeff;
        } else {
            bei[k] = coeff;
        }
    }
    (ber, bei)
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}
