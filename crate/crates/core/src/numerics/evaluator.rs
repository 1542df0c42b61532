//! Reconstruction of a function from its coefficient sequence.

use num_complex::Complex64;

use super::basis::{eval_basis, eval_maclaurin_basis};
use crate::sequence::{shift_left, Sequence};
use crate::transforms::Realization;

/// Neumaier (improved Kahan) compensated summation over complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: Complex64,
    comp: Complex64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: Complex64) {
        let t = self.sum + x;
        self.comp += Complex64::new(compensate(self.sum.re, x.re, t.re), compensate(self.sum.im, x.im, t.im));
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn compensate(sum: f64, x: f64, t: f64) -> f64 {
    if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    }
}

/// Result of evaluating a truncated basis series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Modulus of the last retained term `a_{N-1}·basis_{N-1}(t)`.
    pub last_term: f64,
}

/// `Σ_{n<N} a_n·basis_n(t)` in the basis of a realization: `t^n/n!`
/// (Maclaurin), `f_{n,ν}(t)` (Bessel), or the unit impulse at `k = n`
/// (Z bridge, evaluated at integer `t`).
#[derive(Clone, Debug)]
pub struct SeriesEvaluator {
    coeffs: Sequence,
    realization: Realization,
}

impl SeriesEvaluator {
    pub fn new(coeffs: Sequence, realization: Realization) -> SeriesEvaluator {
        SeriesEvaluator {
            coeffs,
            realization,
        }
    }

    pub fn coeffs(&self) -> &Sequence {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.truncation()
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// The evaluator of `L^k y`, i.e. the coefficients shifted left by `k`.
    pub fn apply_shift(&self, k: usize) -> SeriesEvaluator {
        SeriesEvaluator {
            coeffs: shift_left(&self.coeffs, k),
            realization: self.realization,
        }
    }

    pub fn eval(&self, t: f64) -> SeriesValue {
        if let Realization::ZBridge = self.realization {
            let k = t.round();
            let value = if k >= 0.0 && (k as usize) < self.truncation() && (t - k).abs() < 1e-9 {
                self.coeffs.coeffs()[k as usize].to_c64()
            } else {
                Complex64::new(f64::NAN, f64::NAN)
            };
            return SeriesValue {
                value,
                last_term: 0.0,
            };
        }
        let mut sum = NeumaierSum::default();
        let mut last_term = 0.0;
        for (n, a) in self.coeffs.iter().enumerate() {
            let basis = match self.realization {
                Realization::Maclaurin => eval_maclaurin_basis(n, t),
                Realization::Bessel { nu } => eval_basis(n, nu, t),
                Realization::ZBridge => unreachable!(),
            };
            let term = a.to_c64() * basis;
            last_term = term.norm();
            sum.add(term);
        }
        SeriesValue {
            value: sum.value(),
            last_term,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn exponential_series() {
        let ev = SeriesEvaluator::new(
            Sequence::from_fn(60, |_| Scalar::from_i64(1)),
            Realization::Maclaurin,
        );
        let v = ev.eval(5.0);
        assert!((v.value.re - 5f64.exp()).abs() <= 1e-12 * 5f64.exp());
        assert!(v.last_term < 1e-30);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = NeumaierSum::default();
        s.add(Complex64::new(1.0, 0.0));
        s.add(Complex64::new(1e100, 0.0));
        s.add(Complex64::new(1.0, 0.0));
        s.add(Complex64::new(-1e100, 0.0));
        assert_eq!(s.value().re, 2.0);
    }

    #[test]
    fn z_bridge_reads_coefficients() {
        let ev = SeriesEvaluator::new(Sequence::from_i64s(&[1, 7, 25]), Realization::ZBridge);
        assert_eq!(ev.eval(1.0).value.re, 7.0);
        assert!(ev.eval(5.0).value.re.is_nan());
    }
}
