//! Factoring a denominator `den(s)` into `Π (1 - r_i s)^{k_i}`.
//!
//! The rates `r_i` are the roots of the reversed polynomial
//! `x^d · den(1/x)`. Exact real-rational denominators go through a
//! square-free decomposition, then each square-free part has its rational
//! and Gaussian-rational roots extracted exactly (candidates come from the
//! float roots and are confirmed by exact evaluation). Anything left over
//! is solved in floating point.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Mode, Scalar};

/// Relative distance under which float roots are treated as one root.
pub const DEFAULT_CLUSTER_EPS: f64 = 1e-8;

/// Largest accepted relative residual of the float reconstruction.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

/// How the rates of a factorization were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorMode {
    /// Every rate is exact.
    Exact,
    /// Exact factorization was attempted but some factors fell back to floats.
    Mixed,
    /// Float denominator; float root finding throughout.
    Float,
}

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    pub cluster_eps: f64,
    pub residual_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            cluster_eps: DEFAULT_CLUSTER_EPS,
            residual_tol: DEFAULT_RESIDUAL_TOL,
        }
    }
}

/// Rates with multiplicities such that `den = Π (1 - r s)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateFactorization {
    pub rates: Vec<(Scalar, usize)>,
    pub mode: FactorMode,
    /// Relative coefficient residual of the reconstruction (zero when exact).
    pub residual: f64,
}

pub fn find_rates(den: &Poly) -> Result<RateFactorization> {
    find_rates_with(den, RootOptions::default())
}

pub fn find_rates_with(den: &Poly, opts: RootOptions) -> Result<RateFactorization> {
    let Some(d) = den.degree() else {
        return Err(Error::ZeroDenominator);
    };
    let c0 = den.coeff(0);
    if c0.is_zero() {
        return Err(Error::DenominatorVanishesAtZero);
    }
    let den = den.scale(&c0.recip());
    if d == 0 {
        return Ok(RateFactorization {
            rates: Vec::new(),
            mode: den.mode().into(),
            residual: 0.0,
        });
    }
    // Monic, since den(0) = 1.
    let reversed = den.reversed(d);

    let all_real_exact = reversed
        .coeffs()
        .iter()
        .all(|c| c.as_rational().is_some());
    let mut out = if all_real_exact {
        exact_rates(&reversed, opts)?
    } else {
        let rates = float_rates(&reversed.to_mode(Mode::Float), opts)?;
        RateFactorization {
            rates,
            mode: FactorMode::Float,
            residual: 0.0,
        }
    };
    out.rates.sort_by(|a, b| a.0.cmp_lex(&b.0));
    out.residual = reconstruction_residual(&den, &out.rates);
    if out.mode != FactorMode::Exact && out.residual > opts.residual_tol {
        return Err(Error::NoFactorization {
            residual: out.residual,
        });
    }
    Ok(out)
}

impl From<Mode> for FactorMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => FactorMode::Exact,
            Mode::Float => FactorMode::Float,
        }
    }
}

fn reconstruction_residual(den: &Poly, rates: &[(Scalar, usize)]) -> f64 {
    let rebuilt = Poly::from_rates(rates);
    let diff = &rebuilt - den;
    diff.max_abs() / den.max_abs().max(f64::MIN_POSITIVE)
}

/// Yun's square-free decomposition: returns `(g_i, i)` with `f = Π g_i^i`.
fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.div_rem(&a0).0;
    let c = fp.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let b_next = b.div_rem(&a).0;
        let c_next = d.div_rem(&a).0;
        d = &c_next - &b_next.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    out
}

fn exact_rates(reversed: &Poly, opts: RootOptions) -> Result<RateFactorization> {
    let mut rates = Vec::new();
    let mut degraded = false;
    for (factor, mult) in square_free(reversed) {
        let (exact, rest) = exact_roots_of_squarefree(&factor);
        rates.extend(exact.into_iter().map(|r| (r, mult)));
        if rest.degree().unwrap_or(0) > 0 {
            degraded = true;
            let floats = float_rates(&rest.to_mode(Mode::Float), opts)?;
            rates.extend(floats.into_iter().map(|(r, k)| (r, k * mult)));
        }
    }
    Ok(RateFactorization {
        rates,
        mode: if degraded {
            FactorMode::Mixed
        } else {
            FactorMode::Exact
        },
        residual: 0.0,
    })
}

/// Extract the exactly representable roots of a square-free polynomial with
/// real rational coefficients. Returns the roots and the undeflated rest.
fn exact_roots_of_squarefree(g: &Poly) -> (Vec<Scalar>, Poly) {
    let mut rest = g.monic();
    let mut roots = Vec::new();
    if rest.degree() == Some(1) {
        roots.push(-rest.coeff(0));
        return (roots, Poly::one(Mode::Exact));
    }
    let guesses = aberth(&to_c64_coeffs(&rest));
    for z in guesses {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let Some(cand) = reconstruct(z) else { continue };
        if !rest.eval(&cand).is_zero() {
            continue;
        }
        if cand.is_real() {
            rest = rest.div_rem(&Poly::new(vec![-&cand, Scalar::one(Mode::Exact)])).0;
            roots.push(cand);
        } else {
            // Real coefficients: the conjugate is a root as well. The
            // quadratic factor keeps the quotient real.
            let conj = cand.conj();
            let quad = &Poly::new(vec![-&cand, Scalar::one(Mode::Exact)])
                * &Poly::new(vec![-&conj, Scalar::one(Mode::Exact)]);
            let (q, r) = rest.div_rem(&quad);
            if !r.is_zero() {
                continue;
            }
            rest = q;
            if !roots.contains(&cand) {
                roots.push(cand);
                roots.push(conj);
            }
        }
    }
    if rest.degree() == Some(1) {
        roots.push(-rest.coeff(0) / rest.coeff(1));
        rest = Poly::one(Mode::Exact);
    } else if rest.degree() == Some(2) {
        if let Some((r1, r2)) = exact_quadratic(&rest) {
            roots.push(r1);
            roots.push(r2);
            rest = Poly::one(Mode::Exact);
        }
    }
    (roots, rest)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Roots of a real-rational quadratic when its discriminant is a rational
/// square of either sign.
fn exact_quadratic(p: &Poly) -> Option<(Scalar, Scalar)> {
    let a = p.coeff(2).as_rational()?.clone();
    let b = p.coeff(1).as_rational()?.clone();
    let c = p.coeff(0).as_rational()?.clone();
    let two_a = &a * BigRational::from_integer(2.into());
    let disc = &b * &b - BigRational::from_integer(4.into()) * &a * &c;
    let re = -&b / &two_a;
    if let Some(root) = rational_sqrt(&disc) {
        let w = root / &two_a;
        Some((
            Scalar::from_rational(&re + &w),
            Scalar::from_rational(&re - &w),
        ))
    } else {
        let root = rational_sqrt(&-disc)?;
        let w = root / &two_a;
        Some((
            Scalar::exact_complex(re.clone(), w.clone()),
            Scalar::exact_complex(re, -w),
        ))
    }
}

/// Best rational approximation of `x` by continued fractions, accepted when
/// within `1e-9` relative.
fn rational_approx(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let tol = 1e-9 * x.abs().max(1.0);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = h1.to_f64()? / k1.to_f64()?;
        if (approx - x).abs() <= tol {
            return Some(BigRational::new(h1, k1));
        }
        let rem = frac - a;
        if rem.abs() < 1e-300 || k1.bits() > 64 {
            return None;
        }
        frac = 1.0 / rem;
    }
    None
}

fn reconstruct(z: Complex64) -> Option<Scalar> {
    let scale = z.norm().max(1.0);
    let re = if z.re.abs() < 1e-10 * scale {
        BigRational::zero()
    } else {
        rational_approx(z.re)?
    };
    let im = if z.im.abs() < 1e-10 * scale {
        BigRational::zero()
    } else {
        rational_approx(z.im)?
    };
    Some(Scalar::exact_complex(re, im))
}

fn to_c64_coeffs(p: &Poly) -> Vec<Complex64> {
    p.coeffs().iter().map(Scalar::to_c64).collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots by the Aberth–Ehrlich simultaneous iteration.
/// `coeffs` are ascending; the leading coefficient must be nonzero.
pub fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    // Cauchy-type radius bound for the initial circle.
    let radius = (0..n)
        .map(|i| monic[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff == Complex64::zero() {
                        Complex64::zero()
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::one() - ratio * repulsion);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() > 1e-15 * z[i].norm().max(1e-300) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
    z
}

/// Float roots of the monic reversed polynomial, clustered into
/// multiplicities and polished.
fn float_rates(reversed: &Poly, opts: RootOptions) -> Result<Vec<(Scalar, usize)>> {
    let coeffs = to_c64_coeffs(reversed);
    let roots = aberth(&coeffs);
    let loose = cluster(&roots, opts.cluster_eps, true);
    let loose = polish(&coeffs, loose);
    let as_rates = |cl: &[(Complex64, usize)]| -> Vec<(Scalar, usize)> {
        cl.iter().map(|&(z, k)| (Scalar::Float(z), k)).collect()
    };
    let den = reversed.reversed(reversed.degree().unwrap_or(0));
    let loose_rates = as_rates(&loose);
    if reconstruction_residual(&den, &loose_rates) <= opts.residual_tol {
        return Ok(loose_rates);
    }
    let strict = polish(&coeffs, cluster(&roots, opts.cluster_eps, false));
    Ok(as_rates(&strict))
}

/// Greedy agglomerative clustering. With `adaptive`, a cluster of `k`
/// roots may spread up to `~eps^{1/k}` relative, which is how far double
/// precision perturbs a `k`-fold root.
fn cluster(roots: &[Complex64], cluster_eps: f64, adaptive: bool) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<Vec<Complex64>> = roots.iter().map(|&z| vec![z]).collect();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let ci = centroid(&clusters[i]);
                let cj = centroid(&clusters[j]);
                let k = clusters[i].len() + clusters[j].len();
                let tol = if adaptive {
                    cluster_eps.max(100.0 * f64::EPSILON.powf(1.0 / k as f64))
                } else {
                    cluster_eps
                };
                let scale = ci.norm().max(cj.norm()).max(1.0);
                let dist = (ci - cj).norm() / scale;
                if dist <= tol && best.is_none_or(|(_, _, d)| dist < d) {
                    best = Some((i, j, dist));
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let merged = clusters.remove(j);
        clusters[i].extend(merged);
    }
    clusters
        .into_iter()
        .map(|c| (centroid(&c), c.len()))
        .collect()
}

fn centroid(zs: &[Complex64]) -> Complex64 {
    zs.iter().sum::<Complex64>() / zs.len() as f64
}

fn derivative_c64(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// Newton on `p^{(k-1)}`, which has a simple root at a `k`-fold root of `p`.
fn polish(coeffs: &[Complex64], clusters: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
    clusters
        .into_iter()
        .map(|(mut z, k)| {
            let mut f = coeffs.to_vec();
            for _ in 1..k {
                f = derivative_c64(&f);
            }
            let mut best = horner(&f, z).0.norm();
            for _ in 0..8 {
                let (p, dp) = horner(&f, z);
                if dp == Complex64::zero() {
                    break;
                }
                let next = z - p / dp;
                let val = horner(&f, next).0.norm();
                if !(val < best) {
                    break;
                }
                best = val;
                z = next;
            }
            // Snap negligible imaginary parts so real rates stay real.
            if z.im.abs() <= 1e-14 * z.norm() {
                z.im = 0.0;
            }
            (z, k)
        })
        .collect()
}
