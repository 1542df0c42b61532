//! Forward transforms: coefficient series or black-box functions to
//! sequences, rational functions and named forms.

use num_complex::Complex64;

use super::inverse::inverse_transform;
use super::named::NamedFunction;
use super::table::{table_lookup, LookupKey, TableEntry};
use super::Realization;
use crate::error::{Error, Result};
use crate::numerics::{derivatives_at_origin_with_error, gamma_nu_plus_one};
use crate::poly::Poly;
use crate::rational::{partial_fractions, RationalExpr};
use crate::scalar::{Mode, Scalar};
use crate::sequence::{shift_left, Sequence};

/// Largest recurrence order tried by [`forward_from_series`].
pub const MAX_FIT_ORDER: usize = 8;

const FLOAT_FIT_TOL: f64 = 1e-9;
const LIMIT_TOL: f64 = 1e-6;

/// Output of a forward transform.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardResult {
    pub sequence: Sequence,
    /// Closed form, when the sequence satisfies a short linear recurrence.
    pub rational: Option<RationalExpr>,
    /// Named functions of the closed form (empty when there is none or it
    /// has no named inverse).
    pub named: Vec<NamedFunction>,
    /// Matching table row, if any.
    pub entry: Option<TableEntry>,
}

/// Transform of a function given by its basis coefficients.
///
/// The sequence is returned as is. When it satisfies a linear recurrence
/// of order at most [`MAX_FIT_ORDER`] over the available prefix, the
/// rational generating function is recovered and named.
pub fn forward_from_series(coeffs: &Sequence, realization: Realization) -> ForwardResult {
    let rational = fit_rational(coeffs, MAX_FIT_ORDER);
    let named = rational
        .as_ref()
        .filter(|r| !r.is_zero())
        .and_then(|r| partial_fractions(r).ok())
        .and_then(|dec| inverse_transform(&dec, realization, 1).named.ok())
        .unwrap_or_default();
    ForwardResult {
        sequence: coeffs.clone(),
        rational,
        named,
        entry: table_lookup(realization, LookupKey::Sequence(coeffs)),
    }
}

/// Fit `num/den` with `den(0) = 1`, `deg den ≤ max_order`, to the whole
/// prefix of `seq`.
///
/// Exact sequences go through Berlekamp–Massey and must be reproduced
/// exactly, with at least two spare terms beyond the `2L` the algorithm
/// needs. Float sequences are fitted by solving the recurrence on the
/// first equations and checking it on all the others to `1e-9` relative.
pub fn fit_rational(seq: &Sequence, max_order: usize) -> Option<RationalExpr> {
    if seq.is_zero() {
        return Some(RationalExpr::zero());
    }
    let fit = match seq.mode() {
        Mode::Exact => fit_exact(seq, max_order),
        Mode::Float => fit_float(seq, max_order),
    }?;
    let back = fit.to_sequence(seq.truncation()).ok()?;
    let ok = match seq.mode() {
        Mode::Exact => back == *seq,
        Mode::Float => back.approx_eq(seq, FLOAT_FIT_TOL, FLOAT_FIT_TOL * seq_scale(seq)),
    };
    ok.then_some(fit)
}

fn seq_scale(seq: &Sequence) -> f64 {
    seq.iter().fold(0.0f64, |m, a| m.max(a.abs())).max(f64::MIN_POSITIVE)
}

fn fit_exact(seq: &Sequence, max_order: usize) -> Option<RationalExpr> {
    let a = seq.coeffs();
    let n_terms = a.len();
    let mut c = vec![Scalar::one(Mode::Exact)];
    let mut b = vec![Scalar::one(Mode::Exact)];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = Scalar::one(Mode::Exact);
    for n in 0..n_terms {
        let mut d = a[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &(&c[i] * &a[n - i]);
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let factor = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, Scalar::zero(Mode::Exact));
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &(&factor * bi);
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            last = d;
            m = 1;
        } else {
            c = next;
            m += 1;
        }
        if l > max_order {
            return None;
        }
    }
    if n_terms < 2 * l + 2 {
        return None;
    }
    let den = Poly::new(c);
    let num = (&Poly::new(a[..l].to_vec()) * &den).truncated(l);
    RationalExpr::new(num, den).ok()
}

fn fit_float(seq: &Sequence, max_order: usize) -> Option<RationalExpr> {
    let a: Vec<Complex64> = seq.iter().map(Scalar::to_c64).collect();
    let n_terms = a.len();
    if let Some(last) = a.iter().rposition(|x| x.norm() > 1e-300) {
        if n_terms >= last + 5
            && a[last + 1..].iter().all(|x| x.norm() <= FLOAT_FIT_TOL * seq_scale(seq))
        {
            return RationalExpr::new(Poly::new(seq.coeffs()[..=last].to_vec()), Poly::one(Mode::Float)).ok();
        }
    }
    for l in 1..=max_order {
        for extra in 0..=2 {
            let d = l - 1 + extra;
            let start = d + 1;
            if n_terms < start + l + 3 {
                continue;
            }
            let Some(q) = solve_recurrence(&a, l, start) else {
                continue;
            };
            let holds = (start..n_terms).all(|n| {
                let mut pred = Complex64::new(0.0, 0.0);
                let mut mag = a[n].norm();
                for (j, qj) in q.iter().enumerate() {
                    let term = qj * a[n - j - 1];
                    mag = mag.max(term.norm());
                    pred += term;
                }
                (a[n] + pred).norm() <= FLOAT_FIT_TOL * mag.max(1e-300)
            });
            if !holds {
                continue;
            }
            let mut den = vec![Scalar::one(Mode::Float)];
            den.extend(q.iter().map(|z| Scalar::Float(*z)));
            let den = Poly::new(den);
            let num = (&Poly::new(seq.coeffs()[..=d].to_vec()) * &den).truncated(d + 1);
            if let Ok(fit) = RationalExpr::new(num, den) {
                return Some(fit);
            }
        }
    }
    None
}

/// Solve `Σ_{j=1}^{l} q_j a_{n-j} = -a_n` for `n = start … start+l-1`.
fn solve_recurrence(a: &[Complex64], l: usize, start: usize) -> Option<Vec<Complex64>> {
    let mut m: Vec<Vec<Complex64>> = (0..l)
        .map(|row| {
            let n = start + row;
            let mut r: Vec<Complex64> = (1..=l).map(|j| a[n - j]).collect();
            r.push(-a[n]);
            r
        })
        .collect();
    let scale = m.iter().flatten().fold(0.0f64, |s, z| s.max(z.norm()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..l {
        let pivot = (col..l).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[pivot][col].norm() <= 1e-13 * scale {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..l {
            let f = m[row][col] / m[col][col];
            for k in col..=l {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
        }
    }
    let mut q = vec![Complex64::new(0.0, 0.0); l];
    for row in (0..l).rev() {
        let mut acc = m[row][l];
        for k in row + 1..l {
            acc -= m[row][k] * q[k];
        }
        q[row] = acc / m[row][row];
    }
    Some(q)
}

/// Coefficients `a_m = lim_{t→0} (L^m f)(t)` for `m ≤ m_max` of a
/// black-box function, estimated numerically.
///
/// The limits are read off a Chebyshev interpolant near the origin:
/// `a_m = f^{(m)}(0)` for Maclaurin, and for Bessel(ν)
/// `a_m = Γ(ν+m+1)·g^{(m)}(0)` with `g(x) = f(2√x)/x^{ν/2}`. The
/// estimate is repeated on a half-width interval and must agree to `1e-6`
/// relative (or within the estimated differentiation error when that is
/// larger), else `LimitDidNotConverge`. For the Z bridge `a_m = f(m)`.
pub fn forward_by_operator(f: &dyn Fn(f64) -> f64, realization: Realization, m_max: usize) -> Result<Sequence> {
    let values = match realization {
        Realization::ZBridge => (0..=m_max).map(|m| f(m as f64)).collect(),
        Realization::Maclaurin => converged(f, 2.0, m_max)?,
        Realization::Bessel { nu } => {
            let g = |x: f64| f(2.0 * x.sqrt()) / x.powf(nu / 2.0);
            converged(&g, 2.0, m_max)?
                .into_iter()
                .enumerate()
                .map(|(m, d)| d * gamma_nu_plus_one(nu + m as f64))
                .collect()
        }
    };
    Ok(Sequence::from_f64s(&values))
}

fn converged(g: &dyn Fn(f64) -> f64, x_max: f64, m_max: usize) -> Result<Vec<f64>> {
    let wide = derivatives_at_origin_with_error(g, x_max, m_max);
    let narrow = derivatives_at_origin_with_error(g, x_max / 2.0, m_max);
    let mut out = Vec::with_capacity(m_max + 1);
    for (order, ((w, w_err), (n, n_err))) in wide.into_iter().zip(narrow).enumerate() {
        let spread = (w - n).abs();
        let scale = w.abs().max(1.0);
        let allowed = (LIMIT_TOL * scale).max(4.0 * (w_err + n_err));
        if !spread.is_finite() || spread > allowed || w_err.min(n_err) > 1e-4 * scale {
            return Err(Error::LimitDidNotConverge { order, spread });
        }
        out.push(if w_err <= n_err { w } else { n });
    }
    Ok(out)
}

/// The same limits for a function given by its basis coefficients:
/// `L^m` is the left shift, so `a_m` is the leading coefficient of
/// `shift_left(series, m)`.
pub fn forward_by_operator_series(series: &Sequence, m_max: usize) -> Sequence {
    let count = (m_max + 1).min(series.truncation());
    Sequence::from_fn(count, |m| shift_left(series, m).coeffs()[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::Family;

    #[test]
    fn exponential_series() {
        let ones = Sequence::from_i64s(&[1; 16]);
        let out = forward_from_series(&ones, Realization::Maclaurin);
        assert_eq!(
            out.rational.unwrap(),
            RationalExpr::pole(Scalar::from_i64(1), &Scalar::from_i64(1), 1)
        );
        assert_eq!(out.named, vec![NamedFunction::exp(Scalar::from_i64(1), Scalar::from_i64(1))]);
        assert_eq!(out.entry.unwrap().function.family, Family::Exp);
    }

    #[test]
    fn alternating_series_is_bessel_j() {
        let alt = Sequence::from_fn(16, |n| Scalar::from_i64(if n % 2 == 0 { 1 } else { -1 }));
        for nu in [0.0, 1.0, 2.5] {
            let out = forward_from_series(&alt, Realization::Bessel { nu });
            assert_eq!(out.named.len(), 1);
            assert_eq!(out.named[0].family, Family::BesselJ);
            assert!(out.named[0].prefactor.approx_eq(&Scalar::from_i64(1), 1e-15, 0.0));
        }
    }

    #[test]
    fn zero_series() {
        let out = forward_from_series(&Sequence::zeros(8, Mode::Exact), Realization::Maclaurin);
        assert!(out.rational.unwrap().is_zero());
        assert!(out.named.is_empty());
    }

    #[test]
    fn polynomial_part_is_recovered() {
        // 4 + 1/(1 - s)
        let seq = Sequence::from_i64s(&[5, 1, 1, 1, 1, 1, 1, 1]);
        let fit = fit_rational(&seq, 8).unwrap();
        assert_eq!(fit.num(), &Poly::from_i64s(&[5, -4]));
        assert_eq!(fit.den(), &Poly::from_i64s(&[1, -1]));
        let float = fit_rational(&seq.to_mode(Mode::Float), 8).unwrap();
        assert!(float.equivalent(&fit));
    }

    #[test]
    fn float_fit_of_two_geometrics() {
        let seq = Sequence::from_fn(40, |n| Scalar::real(0.5 * 3f64.powi(n as i32) - 2.0 * (-0.5f64).powi(n as i32)));
        let fit = fit_rational(&seq, 8).unwrap();
        assert_eq!(fit.den().degree(), Some(2));
    }

    #[test]
    fn too_short_for_a_fit() {
        let seq = Sequence::from_i64s(&[1, 2, 5]);
        assert!(fit_rational(&seq, 8).is_none());
    }

    #[test]
    fn cosine_by_operator() {
        let got = forward_by_operator(&f64::cos, Realization::Maclaurin, 4).unwrap();
        assert!(got.approx_eq(&Sequence::from_i64s(&[1, 0, -1, 0, 1]), 0.0, 1e-6), "{got:?}");
    }

    #[test]
    fn half_order_bessel_by_operator() {
        let f = |t: f64| (2.0 / (std::f64::consts::PI * t)).sqrt() * t.sinh();
        let got = forward_by_operator(&f, Realization::Bessel { nu: 0.5 }, 5).unwrap();
        assert!(got.approx_eq(&Sequence::from_i64s(&[1; 6]), 0.0, 1e-5), "{got:?}");
    }

    #[test]
    fn first_basis_function_by_operator() {
        for nu in [0.0, 1.0, 2.0] {
            let f = move |t: f64| crate::numerics::eval_basis(0, nu, t);
            let got = forward_by_operator(&f, Realization::Bessel { nu }, 3).unwrap();
            assert!(got.approx_eq(&Sequence::from_i64s(&[1, 0, 0, 0]), 0.0, 1e-8), "{nu}: {got:?}");
        }
    }

    #[test]
    fn series_bookkeeping() {
        let s = Sequence::from_i64s(&[3, 1, 4, 1, 5]);
        assert_eq!(forward_by_operator_series(&s, 3), Sequence::from_i64s(&[3, 1, 4, 1]));
    }

    #[test]
    fn rough_function_does_not_converge() {
        let f = |t: f64| t.sqrt();
        assert!(matches!(
            forward_by_operator(&f, Realization::Maclaurin, 3),
            Err(Error::LimitDidNotConverge { .. })
        ));
    }
}
