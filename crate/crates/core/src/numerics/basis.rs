//! Basis monomials of the realizations.

use statrs::function::gamma::ln_gamma;

/// `Γ(ν + 1)`: exact factorial for integer `ν`, log-gamma otherwise.
pub fn gamma_nu_plus_one(nu: f64) -> f64 {
    if nu.fract() == 0.0 && nu <= 170.0 {
        (1..=nu as u64).fold(1.0, |acc, k| acc * k as f64)
    } else {
        ln_gamma(nu + 1.0).exp()
    }
}

/// Bessel basis monomial `f_{n,ν}(t) = (t/2)^{2n+ν} / (Γ(ν+n+1)·n!)`.
///
/// Built by the ratio `f_{k,ν} = f_{k-1,ν}·(t/2)² / ((ν+k)·k)` starting
/// from `(t/2)^ν/Γ(ν+1)`, so no large intermediate powers or factorials
/// appear. At `t = 0` the value is `1` for `n = ν = 0` and `0` otherwise.
pub fn eval_basis(n: usize, nu: f64, t: f64) -> f64 {
    assert!(t >= 0.0, "basis monomials are defined for t >= 0");
    if t == 0.0 {
        return if n == 0 && nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = t / 2.0;
    let x = half * half;
    let mut value = half.powf(nu) / gamma_nu_plus_one(nu);
    for k in 1..=n {
        value *= x / ((nu + k as f64) * k as f64);
    }
    value
}

/// Maclaurin basis monomial `t^n / n!`.
pub fn eval_maclaurin_basis(n: usize, t: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * t / k as f64)
}
