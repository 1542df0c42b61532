//! The substitution `s ↔ z^{-1}` between Maclaurin-style transforms in `s`
//! and Z transforms in `z`.

use serde::{Deserialize, Serialize};

use crate::rational::RationalExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZDirection {
    /// Rational function in `s` to one in `z`.
    ToZ,
    /// Rational function in `z` to one in `s`.
    FromZ,
}

/// Substitute `s = 1/z` (or `z = 1/s`).
///
/// With `p = deg num` and `q = deg den`,
/// `num(1/x)/den(1/x) = x^{q-p}·rev(num)(x)/rev(den)(x)`, so both
/// coefficient lists are reversed and the lower-degree side is padded by
/// the power `x^{|q-p|}`. The map is the same in both directions and is an
/// involution up to normalization.
pub fn z_bridge(_direction: ZDirection, x: &RationalExpr) -> RationalExpr {
    if x.is_zero() {
        return RationalExpr::zero();
    }
    let p = x.num().degree().unwrap_or(0);
    let q = x.den().degree().unwrap_or(0);
    let mut num = x.num().reversed(p);
    let mut den = x.den().reversed(q);
    if q >= p {
        num = num.shift_up(q - p);
    } else {
        den = den.shift_up(p - q);
    }
    RationalExpr::new(num, den).expect("reversed denominator is nonzero")
}
