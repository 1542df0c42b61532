//! JSON forms of scalars.
//!
//! Exact reals are written as strings, `"3"` or `"-5/2"`, so nothing is
//! lost. Floats are JSON numbers. Values with a nonzero imaginary part are
//! `[re, im]` pairs with each part in the form above.
//!
//! On input a JSON number read in exact mode is taken as the decimal it
//! spells, so `0.1` becomes `1/10`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde_json::Value;

use crate::scalar::{Mode, Scalar};

fn ratio_json(r: &BigRational) -> Value {
    if r.is_integer() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(z) if z.im.is_zero() => ratio_json(&z.re),
        Scalar::Exact(z) => Value::Array(vec![ratio_json(&z.re), ratio_json(&z.im)]),
        Scalar::Float(z) if z.im == 0.0 => float_json(z.re),
        Scalar::Float(z) => Value::Array(vec![float_json(z.re), float_json(z.im)]),
    }
}

/// Parse a decimal or rational literal: `"7"`, `"-3/4"`, `"0.25"`,
/// `"1.5e-3"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = if scale >= 0 {
        Pow::pow(&ten, scale as u32)
    } else {
        BigRational::one() / Pow::pow(&ten, (-scale) as u32)
    };
    let value = BigRational::from_integer(all) * factor;
    Some(if negative { -value } else { value })
}

fn real_from_json(v: &Value, mode: Mode) -> Result<Scalar, String> {
    match v {
        Value::Number(n) => match mode {
            Mode::Exact => parse_rational(&n.to_string())
                .map(Scalar::from_rational)
                .ok_or_else(|| format!("cannot read {n} as a rational")),
            Mode::Float => n
                .as_f64()
                .map(Scalar::real)
                .ok_or_else(|| format!("cannot read {n} as a float")),
        },
        Value::String(s) => {
            let r = parse_rational(s).ok_or_else(|| format!("\"{s}\" is not a number or p/q rational"))?;
            Ok(Scalar::from_rational(r).to_mode(mode))
        }
        other => Err(format!("expected a number or \"p/q\" string, found {other}")),
    }
}

/// Read a scalar written as a number, a `"p/q"` string or an `[re, im]`
/// pair, in the given mode.
pub fn scalar_from_json(v: &Value, mode: Mode) -> Result<Scalar, String> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let re = real_from_json(&parts[0], mode)?;
            let im = real_from_json(&parts[1], mode)?;
            Ok(&re + &(&im * &Scalar::i(mode)))
        }
        Value::Array(parts) => Err(format!(
            "a complex number is an [re, im] pair, found {} entries",
            parts.len()
        )),
        _ => real_from_json(v, mode),
    }
}
