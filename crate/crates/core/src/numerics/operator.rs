//! Numeric application of the realization operators to black-box functions.

use crate::error::{Error, Result};
use crate::transforms::Realization;

const RICHARDSON_LEVELS: usize = 3;

/// One central-difference evaluation of the realization operator at `t`
/// with step `h` (no extrapolation): `f'(t)` for Maclaurin,
/// `f'' + f'/t - ν²f/t²` for Bessel, `f(t+1)` for the Z bridge.
pub fn apply_operator_central(f: &dyn Fn(f64) -> f64, realization: Realization, t: f64, h: f64) -> f64 {
    match realization {
        Realization::Maclaurin => (f(t + h) - f(t - h)) / (2.0 * h),
        Realization::Bessel { nu } => {
            let (fp, f0, fm) = (f(t + h), f(t), f(t - h));
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            let d1 = (fp - fm) / (2.0 * h);
            d2 + d1 / t - nu * nu * f0 / (t * t)
        }
        Realization::ZBridge => f(t + 1.0),
    }
}

/// The operator at `t` by central differences, Richardson-extrapolated over
/// the steps `h, h/2, h/4`.
pub fn apply_operator_numeric(
    f: &dyn Fn(f64) -> f64,
    realization: Realization,
    t: f64,
    h: f64,
) -> Result<f64> {
    if let Realization::ZBridge = realization {
        return Ok(f(t + 1.0));
    }
    if matches!(realization, Realization::Bessel { .. }) && t <= 0.0 {
        return Err(Error::InvalidProblem(
            "the Bessel operator is applied at t > 0 only".into(),
        ));
    }
    let smallest = h / (1 << (RICHARDSON_LEVELS - 1)) as f64;
    if smallest < 1e3 * f64::EPSILON * t.abs().max(1.0) {
        return Err(Error::StepUnderflow { h, t });
    }
    let h = if matches!(realization, Realization::Bessel { .. }) {
        h.min(t / 4.0)
    } else {
        h
    };
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(RICHARDSON_LEVELS);
    for i in 0..RICHARDSON_LEVELS {
        let step = h / (1 << i) as f64;
        let mut row = vec![apply_operator_central(f, realization, t, step)];
        for j in 1..=i {
            let factor = 4f64.powi(j as i32);
            let prev = table[i - 1][j - 1];
            row.push(row[j - 1] + (row[j - 1] - prev) / (factor - 1.0));
        }
        table.push(row);
    }
    Ok(table[RICHARDSON_LEVELS - 1][RICHARDSON_LEVELS - 1])
}

/// Derivatives `g^{(m)}(0)` for `m ≤ m_max`, from a Chebyshev interpolant
/// of `g` on `(0, x_max]`. The nodes are interior, so `g` is never
/// evaluated at the origin itself.
pub fn derivatives_at_origin(g: &dyn Fn(f64) -> f64, x_max: f64, m_max: usize) -> Vec<f64> {
    derivatives_at_origin_with_error(g, x_max, m_max)
        .into_iter()
        .map(|(d, _)| d)
        .collect()
}

/// As [`derivatives_at_origin`], paired with an error estimate.
///
/// Differentiating a Chebyshev series `m` times at an endpoint multiplies
/// the `k`-th coefficient by `|T_k^{(m)}(-1)| ~ k^{2m}`, so rounding noise
/// in the high coefficients is amplified. For each order the series is cut
/// at the degree `K` minimizing
/// `Σ_{k>K} |c_k| |T_k^{(m)}| + ε Σ_{k≤K} |T_k^{(m)}|`, with `ε` the noise
/// level of the samples; that minimum is the returned estimate.
pub fn derivatives_at_origin_with_error(g: &dyn Fn(f64) -> f64, x_max: f64, m_max: usize) -> Vec<(f64, f64)> {
    const NODES: usize = 32;
    let m = NODES as f64;
    let values: Vec<f64> = (0..NODES)
        .map(|j| {
            let y = (std::f64::consts::PI * (j as f64 + 0.5) / m).cos();
            g(0.5 * x_max * (y + 1.0))
        })
        .collect();
    let mut cheb: Vec<f64> = (0..NODES)
        .map(|k| {
            let s: f64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / m).cos())
                .sum();
            2.0 * s / m
        })
        .collect();
    cheb[0] /= 2.0;
    let noise = 4.0 * f64::EPSILON * values.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    (0..=m_max)
        .map(|order| {
            let weights: Vec<f64> = (0..NODES).map(|k| chebyshev_derivative_at_minus_one(k, order)).collect();
            // Coefficients at the noise level carry no signal.
            let signal = |k: usize| (cheb[k].abs() - noise).max(0.0) * weights[k].abs();
            let mut tail: f64 = (0..NODES).map(signal).sum();
            let mut head = 0.0;
            let mut best = (f64::INFINITY, 0);
            for k in 0..NODES {
                tail -= signal(k);
                head += noise * weights[k].abs();
                let err = tail.max(0.0) + head;
                if err < best.0 {
                    best = (err, k);
                }
            }
            if best.1 == NODES - 1 {
                // The interpolant itself has not resolved g.
                best.0 = f64::INFINITY;
            }
            let scale = (2.0 / x_max).powi(order as i32);
            let sum: f64 = cheb[..=best.1].iter().zip(&weights).map(|(c, w)| c * w).sum();
            (scale * sum, scale * best.0)
        })
        .collect()
}

/// `T_k^{(m)}(-1) = (-1)^{k+m} Π_{j<m} (k² - j²)/(2j + 1)`.
fn chebyshev_derivative_at_minus_one(k: usize, m: usize) -> f64 {
    let sign = if (k + m) % 2 == 0 { 1.0 } else { -1.0 };
    let k2 = (k * k) as f64;
    sign * (0..m).fold(1.0, |acc, j| acc * (k2 - (j * j) as f64) / (2 * j + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::basis::eval_basis;

    #[test]
    fn derivative_of_exp() {
        let d = apply_operator_numeric(&f64::exp, Realization::Maclaurin, 1.0, 1e-2).unwrap();
        assert!((d - std::f64::consts::E).abs() < 1e-10);
    }

    #[test]
    fn bessel_operator_lowers_basis_index() {
        let (n, nu, t) = (3, 2.0, 1.5);
        let f = move |x: f64| eval_basis(n, nu, x);
        let got = apply_operator_numeric(&f, Realization::Bessel { nu }, t, 1e-3).unwrap();
        assert!((got - eval_basis(n - 1, nu, t)).abs() < 1e-6);
    }

    #[test]
    fn bessel_operator_annihilates_first_basis_function() {
        for nu in [0.0, 0.5, 2.0] {
            let f = move |x: f64| eval_basis(0, nu, x);
            let got = apply_operator_numeric(&f, Realization::Bessel { nu }, 0.8, 1e-3).unwrap();
            assert!(got.abs() < 1e-6, "{nu}: {got}");
        }
    }

    #[test]
    fn step_underflow() {
        let err = apply_operator_numeric(&f64::sin, Realization::Maclaurin, 1.0, 1e-15).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. }));
    }

    #[test]
    fn chebyshev_derivatives_of_cos() {
        let d = derivatives_at_origin(&f64::cos, 1.0, 4);
        let want = [1.0, 0.0, -1.0, 0.0, 1.0];
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() < 1e-6, "{d:?}");
        }
    }

    #[test]
    fn chebyshev_endpoint_derivative_formula() {
        // T_3(y) = 4y^3 - 3y: T_3'(-1) = 9, T_3''(-1) = -24, T_3'''(-1) = 24.
        assert_eq!(chebyshev_derivative_at_minus_one(3, 0), -1.0);
        assert_eq!(chebyshev_derivative_at_minus_one(3, 1), 9.0);
        assert_eq!(chebyshev_derivative_at_minus_one(3, 2), -24.0);
        assert_eq!(chebyshev_derivative_at_minus_one(3, 3), 24.0);
    }
}
