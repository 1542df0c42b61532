//! Built-in transform pairs.

use serde_json::{json, Value};

use super::forward::fit_rational;
use super::named::{quarter_turn_trig, NamedFunction};
use super::Realization;
use crate::json::scalar_to_json;
use crate::poly::Poly;
use crate::rational::{partial_fractions, RationalExpr};
use crate::scalar::{Mode, Scalar};
use crate::sequence::Sequence;

/// Closed-form rule for the coefficient `a_n` of a table entry.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceRule {
    /// `scale · rate^n`
    Geometric { scale: Scalar, rate: Scalar },
    /// `cos(nπ/2)`
    CosQuarter,
    /// `sin(nπ/2)`
    SinQuarter,
    /// `cos((3ν + 2n)π/4)`
    KelvinCos { nu: f64 },
    /// `sin((3ν + 2n)π/4)`
    KelvinSin { nu: f64 },
    /// `1` at `n = 0`, else `0`
    Impulse,
}

impl SequenceRule {
    pub fn coeff(&self, n: usize) -> Scalar {
        match self {
            SequenceRule::Geometric { scale, rate } => scale * &rate.powi(n as u32),
            SequenceRule::CosQuarter => quarter_turn_trig(2.0 * n as f64).0,
            SequenceRule::SinQuarter => quarter_turn_trig(2.0 * n as f64).1,
            SequenceRule::KelvinCos { nu } => quarter_turn_trig(3.0 * nu + 2.0 * n as f64).0,
            SequenceRule::KelvinSin { nu } => quarter_turn_trig(3.0 * nu + 2.0 * n as f64).1,
            SequenceRule::Impulse => Scalar::from_i64(i64::from(n == 0)),
        }
    }

    pub fn sequence(&self, n: usize) -> Sequence {
        Sequence::from_fn(n, |i| self.coeff(i))
    }

    pub fn describe(&self) -> String {
        match self {
            SequenceRule::Geometric { scale, rate } => format!("{scale}*({rate})^n"),
            SequenceRule::CosQuarter => "cos(n*pi/2)".into(),
            SequenceRule::SinQuarter => "sin(n*pi/2)".into(),
            SequenceRule::KelvinCos { nu } => format!("cos(({}+2n)*pi/4)", 3.0 * nu),
            SequenceRule::KelvinSin { nu } => format!("sin(({}+2n)*pi/4)", 3.0 * nu),
            SequenceRule::Impulse => "[n = 0]".into(),
        }
    }
}

/// One transform pair under a realization.
#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub realization: Realization,
    pub function: NamedFunction,
    pub transform: RationalExpr,
    pub rule: SequenceRule,
}

impl TableEntry {
    fn new(realization: Realization, function: NamedFunction, rule: SequenceRule) -> TableEntry {
        let transform = function
            .transform(realization)
            .expect("built-in entries have closed-form transforms");
        TableEntry {
            realization,
            function,
            transform,
            rule,
        }
    }

    /// JSON row: realization, family, parameters, transform coefficients
    /// and the coefficient rule.
    pub fn to_json(&self) -> Value {
        let coeffs = |p: &Poly| Value::Array(p.coeffs().iter().map(scalar_to_json).collect());
        let realization = match self.realization {
            Realization::Bessel { nu } => json!({"kind": "bessel", "nu": nu}),
            r => json!({"kind": r.name()}),
        };
        json!({
            "realization": realization,
            "function": self.function.to_string(),
            "family": self.function.family.name(),
            "params": self.function.params_json(),
            "transform": {"num": coeffs(self.transform.num()), "den": coeffs(self.transform.den())},
            "sequence_rule": self.rule.describe(),
        })
    }
}

/// The built-in rows for `realization`.
///
/// Maclaurin: `e^t`, `cos t`, `sin t`. Bessel(ν): `J_ν`, `I_ν`, `Ber_ν`,
/// `Bei_ν`. Z bridge: unit step, alternating step, unit impulse.
pub fn builtin_table(realization: Realization) -> Vec<TableEntry> {
    let one = || Scalar::from_i64(1);
    match realization {
        Realization::Maclaurin => vec![
            TableEntry::new(
                realization,
                NamedFunction::exp(one(), one()),
                SequenceRule::Geometric { scale: one(), rate: one() },
            ),
            TableEntry::new(realization, NamedFunction::cos(one(), one()), SequenceRule::CosQuarter),
            TableEntry::new(realization, NamedFunction::sin(one(), one()), SequenceRule::SinQuarter),
        ],
        Realization::Bessel { nu } => vec![
            TableEntry::new(
                realization,
                NamedFunction::bessel_j(one(), one(), nu),
                SequenceRule::Geometric { scale: one(), rate: Scalar::from_i64(-1) },
            ),
            TableEntry::new(
                realization,
                NamedFunction::bessel_i(one(), one(), nu),
                SequenceRule::Geometric { scale: one(), rate: one() },
            ),
            TableEntry::new(realization, NamedFunction::ber(one(), one(), nu), SequenceRule::KelvinCos { nu }),
            TableEntry::new(realization, NamedFunction::bei(one(), one(), nu), SequenceRule::KelvinSin { nu }),
        ],
        Realization::ZBridge => vec![
            TableEntry::new(
                realization,
                NamedFunction::geometric(one(), one()),
                SequenceRule::Geometric { scale: one(), rate: one() },
            ),
            TableEntry::new(
                realization,
                NamedFunction::geometric(one(), Scalar::from_i64(-1)),
                SequenceRule::Geometric { scale: one(), rate: Scalar::from_i64(-1) },
            ),
            TableEntry::new(realization, NamedFunction::basis(one(), 0, 0.0), SequenceRule::Impulse),
        ],
    }
}

/// What to look up: a closed-form transform or a coefficient sequence.
#[derive(Clone, Copy, Debug)]
pub enum LookupKey<'a> {
    Rational(&'a RationalExpr),
    Sequence(&'a Sequence),
}

/// Match against the built-in rows, then against the parametric
/// single-pole family `c/(1 - r s)` of the realization.
pub fn table_lookup(realization: Realization, key: LookupKey<'_>) -> Option<TableEntry> {
    let builtins = builtin_table(realization);
    match key {
        LookupKey::Rational(f) => builtins
            .into_iter()
            .find(|e| e.transform.equivalent(f))
            .or_else(|| single_pole_entry(realization, f)),
        LookupKey::Sequence(seq) => {
            let n = seq.truncation().min(32);
            let prefix = seq.truncate(n);
            let hit = builtins.into_iter().find(|e| {
                let rule = e.rule.sequence(n);
                if prefix.mode() == Mode::Exact && rule.mode() == Mode::Exact {
                    rule == prefix
                } else {
                    rule.approx_eq(&prefix, 1e-12, 1e-12)
                }
            });
            hit.or_else(|| {
                let f = fit_rational(seq, 1)?;
                single_pole_entry(realization, &f)
            })
        }
    }
}

fn single_pole_entry(realization: Realization, f: &RationalExpr) -> Option<TableEntry> {
    if f.den().degree() != Some(1) || f.num().degree().unwrap_or(0) != 0 || f.is_zero() {
        return None;
    }
    let dec = partial_fractions(f).ok()?;
    let [term] = dec.terms.as_slice() else {
        return None;
    };
    let rule = SequenceRule::Geometric {
        scale: term.coeff.clone(),
        rate: term.rate.clone(),
    };
    let function = super::inverse::name_single_pole(&term.coeff, &term.rate, realization)?;
    Some(TableEntry {
        realization,
        function,
        transform: f.clone(),
        rule,
    })
}
