#![allow(dead_code)]

use opcalc::scalar::Scalar;
use opcalc::solver::{IVProblem, Rhs};
use opcalc::transforms::Realization;

/// `[L_2² - (8/μ)L_2 - (λ² + 8/μ)λ²] y = 0` with `y ~ Y_0 f_0 + Y_1 f_1`.
pub fn plum_problem(lambda: f64, mu: f64, y0: f64, y1: f64) -> IVProblem {
    let l2 = lambda * lambda;
    IVProblem::new(
        Realization::Bessel { nu: 2.0 },
        vec![
            Scalar::real(-(l2 + 8.0 / mu) * l2),
            Scalar::real(-8.0 / mu),
            Scalar::real(1.0),
        ],
        Rhs::Zero,
        vec![Scalar::real(y0), Scalar::real(y1)],
    )
    .unwrap()
}

/// Expected `(rate, coefficient)` pairs of the Plum decomposition,
/// written out by hand from `(Y_0 + s(Y_1 - 8Y_0/μ)) / ((1 + λ²s)(1 - (8/μ + λ²)s))`.
pub fn plum_expected_terms(lambda: f64, mu: f64, y0: f64, y1: f64) -> [(f64, f64); 2] {
    let l2 = lambda * lambda;
    let d = 2.0 * (4.0 + l2 * mu);
    [
        (-l2, (8.0 * y0 - mu * y1 + y0 * l2 * mu) / d),
        (8.0 / mu + l2, (y1 * mu + y0 * l2 * mu) / d),
    ]
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}
