//! Numeric evaluation: basis monomials, the Bessel/Kelvin series oracles,
//! finite-difference operator application, series reconstruction and
//! equation residuals.

mod basis;
mod bessel;
mod evaluator;
mod operator;

pub use basis::{eval_basis, eval_maclaurin_basis, gamma_nu_plus_one};
pub use bessel::{
    bei_classical, ber_classical, bessel_i, bessel_j, classical_kelvin_coefficients, kelvin,
    oracle_bessel, oracle_bessel_terms, oracle_coefficients, BesselFamily,
};
pub use evaluator::{NeumaierSum, SeriesEvaluator, SeriesValue};
pub use operator::{
    apply_operator_central, apply_operator_numeric, derivatives_at_origin,
    derivatives_at_origin_with_error,
};

use num_complex::Complex64;

use crate::solver::{IVProblem, Rhs};

/// `|Σ c_k (L^k y)(t) - g(t)|`, with `L^k` applied by shifting the
/// coefficients of `y` (exact on the basis series).
///
/// A named right-hand side is evaluated directly; a rational one through
/// its own coefficient series at the same truncation.
pub fn residual(p: &IVProblem, y: &SeriesEvaluator, t: f64) -> f64 {
    let mut lhs = NeumaierSum::default();
    for (k, c) in p.op_poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        lhs.add(c.to_c64() * y.apply_shift(k).eval(t).value);
    }
    let g = match &p.rhs {
        Rhs::Zero => Complex64::new(0.0, 0.0),
        Rhs::Named(f) => f.eval(p.realization, t),
        Rhs::Rational(expr) => match expr.to_sequence(y.truncation()) {
            Ok(seq) => SeriesEvaluator::new(seq, p.realization).eval(t).value,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        },
    };
    (lhs.value() - g).norm()
}
