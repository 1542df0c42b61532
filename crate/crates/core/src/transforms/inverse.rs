//! From partial fractions back to named functions.

use super::named::{quarter_turn_trig, NamedFunction};
use super::Realization;
use crate::error::{Error, Result};
use crate::rational::{PFDecomposition, PoleTerm};
use crate::scalar::{Mode, Scalar};
use crate::sequence::Sequence;

/// Named form (when one exists) and coefficient sequence of a
/// decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseTransform {
    pub named: Result<Vec<NamedFunction>>,
    pub sequence: Sequence,
}

/// Map every pole term to named functions of `realization`.
///
/// Maclaurin: `c/(1 - r s) ↔ c e^{rt}`; a conjugate pair of rates `±iω`
/// becomes a cosine and a sine; `1/(1 - r s)^k` becomes `Σ_j b_j t^j e^{rt}`
/// with the weights of [`maclaurin_repeated_pole_weights`].
///
/// Bessel(ν): `c/(1 - r s) ↔ c α^{-ν} J_ν(α t)` with `α² = -r`. A negative
/// rate gives `c |r|^{-ν/2} J_ν(√|r| t)`, a positive one
/// `c r^{-ν/2} I_ν(√r t)`, and a pair `±iω²` gives `Ber_ν(ωt)` and
/// `Bei_ν(ωt)`. Repeated poles have no named form here.
///
/// Z bridge: `c/(1 - r s)^k ↔ c C(k+j-1, k-1) r^k`.
///
/// Polynomial parts map to basis monomials in every realization.
pub fn inverse_transform(dec: &PFDecomposition, realization: Realization, n: usize) -> InverseTransform {
    InverseTransform {
        named: name_decomposition(dec, realization),
        sequence: dec.sequence(n),
    }
}

fn name_decomposition(dec: &PFDecomposition, realization: Realization) -> Result<Vec<NamedFunction>> {
    let nu = realization.nu().unwrap_or(0.0);
    let mut named: Vec<NamedFunction> = dec
        .poly_part
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| NamedFunction::basis(c.clone(), j, nu))
        .collect();

    let mut used = vec![false; dec.terms.len()];
    for i in 0..dec.terms.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let term = &dec.terms[i];
        if term.multiplicity == 1 && realization != Realization::ZBridge {
            if let Some(j) = conjugate_partner(&dec.terms, &used, i) {
                used[j] = true;
                let other = &dec.terms[j];
                let (up, down) = if term.rate.im_f64() > 0.0 { (term, other) } else { (other, term) };
                named.extend(name_pair(up, down, realization));
                continue;
            }
        }
        match realization {
            Realization::Maclaurin => {
                let weights = maclaurin_repeated_pole_weights(&term.rate, term.multiplicity);
                for (j, b) in weights.into_iter().enumerate() {
                    let c = &term.coeff * &b;
                    if c.is_zero() {
                        continue;
                    }
                    named.push(if j == 0 {
                        NamedFunction::exp(c, term.rate.clone())
                    } else {
                        NamedFunction::poly_exp(c, term.rate.clone(), j)
                    });
                }
            }
            Realization::Bessel { .. } => {
                if term.multiplicity > 1 {
                    return Err(Error::UnnamedInverse(format!(
                        "pole of multiplicity {} at rate {} under the Bessel realization",
                        term.multiplicity, term.rate
                    )));
                }
                named.push(name_single_pole(&term.coeff, &term.rate, realization).expect("bessel names every simple pole"));
            }
            Realization::ZBridge => named.push(if term.multiplicity == 1 {
                NamedFunction::geometric(term.coeff.clone(), term.rate.clone())
            } else {
                NamedFunction::binomial_geometric(term.coeff.clone(), term.rate.clone(), term.multiplicity - 1)
            }),
        }
    }
    Ok(merge_like_terms(named))
}

/// Named function for the single pole `c/(1 - r s)`.
pub(crate) fn name_single_pole(c: &Scalar, r: &Scalar, realization: Realization) -> Option<NamedFunction> {
    match realization {
        Realization::Maclaurin => Some(NamedFunction::exp(c.clone(), r.clone())),
        Realization::ZBridge => Some(NamedFunction::geometric(c.clone(), r.clone())),
        Realization::Bessel { nu } => {
            if r.is_zero() {
                return Some(NamedFunction::basis(c.clone(), 0, nu));
            }
            if r.is_real() {
                let abs = if r.real_sign(0.0) == Some(std::cmp::Ordering::Less) { -r } else { r.clone() };
                let prefactor = c * &abs.pow_real(-nu / 2.0);
                let scale = abs.sqrt();
                return Some(if abs == *r {
                    NamedFunction::bessel_i(prefactor, scale, nu)
                } else {
                    NamedFunction::bessel_j(prefactor, scale, nu)
                });
            }
            // Complex rate: principal branch of α = √(-r).
            let alpha = (-r).sqrt();
            Some(NamedFunction::bessel_j(c * &alpha.pow_real(-nu), alpha, nu))
        }
    }
}

fn is_pure_imaginary(r: &Scalar) -> bool {
    match r {
        Scalar::Exact(z) => num_traits::Zero::is_zero(&z.re) && !num_traits::Zero::is_zero(&z.im),
        Scalar::Float(z) => z.im != 0.0 && z.re.abs() <= 1e-12 * z.im.abs(),
    }
}

/// Index of an unused simple pole at the conjugate of a pure-imaginary
/// rate.
fn conjugate_partner(terms: &[PoleTerm], used: &[bool], i: usize) -> Option<usize> {
    let r = &terms[i].rate;
    if !is_pure_imaginary(r) {
        return None;
    }
    let target = r.conj();
    (0..terms.len()).find(|&j| {
        !used[j]
            && terms[j].multiplicity == 1
            && is_pure_imaginary(&terms[j].rate)
            && terms[j].rate.approx_eq(&target, 1e-10, 0.0)
    })
}

/// `c/(1 - iκ s) + d/(1 + iκ s)` with `κ > 0`.
fn name_pair(up: &PoleTerm, down: &PoleTerm, realization: Realization) -> Vec<NamedFunction> {
    let mode = up.rate.mode();
    let kappa = &up.rate * &-Scalar::i(mode);
    let (c, d) = (&up.coeff, &down.coeff);
    let i = Scalar::i(c.mode().join(d.mode()));
    let (p, q, first, second): (Scalar, Scalar, fn(Scalar, Scalar, f64) -> NamedFunction, fn(Scalar, Scalar, f64) -> NamedFunction) =
        match realization {
            Realization::Maclaurin => {
                // (c + d) cos κt + i(c - d) sin κt
                (c + d, &i * &(c - d), |p, w, _| NamedFunction::cos(p, w), |p, w, _| NamedFunction::sin(p, w))
            }
            Realization::Bessel { nu } => {
                // α = ω e^{3πi/4}, ω = √κ; A = α^{-ν} = ω^{-ν} e^{-3νπi/4}
                let (cos_t, sin_t) = quarter_turn_trig(3.0 * nu);
                let mag = kappa.pow_real(-nu / 2.0);
                let a = &mag * &(&cos_t - &(&sin_t * &Scalar::i(mode)));
                let ca = c * &a;
                let da = d * &a.conj();
                (&ca + &da, &i * &(&ca - &da), NamedFunction::ber, NamedFunction::bei)
            }
            Realization::ZBridge => unreachable!("pairs are not formed for sequences"),
        };
    let scale = match realization {
        Realization::Maclaurin => kappa.clone(),
        _ => kappa.sqrt(),
    };
    let nu = realization.nu().unwrap_or(0.0);
    let mut out = Vec::new();
    if !p.is_zero() {
        out.push(first(real_if_exact_real(p), scale.clone(), nu));
    }
    if !q.is_zero() {
        out.push(second(real_if_exact_real(q), scale, nu));
    }
    out
}

/// Drop a float imaginary part that is rounding noise.
fn real_if_exact_real(x: Scalar) -> Scalar {
    match x {
        Scalar::Float(z) if z.im.abs() <= 1e-14 * z.re.abs() => Scalar::real(z.re),
        other => other,
    }
}

/// Weights `b_0 … b_{k-1}` with `1/(1 - r s)^k ↔ Σ_j b_j t^j e^{rt}` under
/// the Maclaurin realization.
///
/// Matching the derivatives at `t = 0` of both sides for orders `n < k`
/// gives the lower-triangular system
/// `Σ_{j≤n} b_j · n!/(n-j)! · r^{n-j} = C(n+k-1, k-1) r^n`.
pub fn maclaurin_repeated_pole_weights(rate: &Scalar, k: usize) -> Vec<Scalar> {
    let mode = rate.mode();
    let mut b: Vec<Scalar> = Vec::with_capacity(k);
    for n in 0..k {
        let target = &Scalar::binomial((n + k - 1) as u64, (k - 1) as u64) * &rate.powi(n as u32);
        let mut acc = target.to_mode(mode);
        for (j, bj) in b.iter().enumerate() {
            let falling = falling_factorial(n, j);
            acc -= &(&(bj * &falling) * &rate.powi((n - j) as u32));
        }
        b.push(&acc / &falling_factorial(n, n));
    }
    b
}

/// `n!/(n-j)!`
fn falling_factorial(n: usize, j: usize) -> Scalar {
    ((n - j + 1)..=n).fold(Scalar::one(Mode::Exact), |acc, m| &acc * &Scalar::from_i64(m as i64))
}

/// Sum prefactors of terms that differ only in the prefactor.
fn merge_like_terms(terms: Vec<NamedFunction>) -> Vec<NamedFunction> {
    let mut out: Vec<NamedFunction> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| {
            o.family == t.family && o.param == t.param && o.nu == t.nu && o.degree == t.degree
        }) {
            Some(o) => o.prefactor = &o.prefactor + &t.prefactor,
            None => out.push(t),
        }
    }
    out.retain(|t| !t.prefactor.is_zero());
    out
}
