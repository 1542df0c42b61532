//! Concrete realizations of the shift and the transforms they induce.
//!
//! A realization is an operator `L` acting as the left shift on a basis
//! `{f_n}`: `L f_n = f_{n-1}`, `L f_0 = 0`. The transform of
//! `g = Σ a_n f_n` is the sequence `{a_n}`, read as the formal series
//! `a_0 + a_1 s + a_2 s² + …`.
//!
//! | realization | operator | basis |
//! |---|---|---|
//! | Maclaurin | `d/dt` | `t^n / n!` |
//! | Bessel(ν) | `L_ν = (1/t) D t D - ν²/t²` | `f_{n,ν}(t) = (t/2)^{2n+ν} / (Γ(ν+n+1) n!)` |
//! | Z bridge | `y_k ↦ y_{k+1}` | unit impulse at `k = n` |

mod forward;
mod inverse;
mod named;
mod table;
mod zbridge;

pub use forward::{fit_rational, forward_by_operator, forward_by_operator_series, forward_from_series, ForwardResult};
pub use inverse::{inverse_transform, maclaurin_repeated_pole_weights, InverseTransform};
pub use named::{Family, NamedFunction};
pub use table::{builtin_table, table_lookup, LookupKey, SequenceRule, TableEntry};
pub use zbridge::{z_bridge, ZDirection};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which operator plays the role of the left shift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Realization {
    /// `D = d/dt` on `t^n/n!`.
    Maclaurin,
    /// `L_ν` on the Bessel monomials `f_{n,ν}`.
    Bessel { nu: f64 },
    /// Sequences `y_k` directly; `s ↔ z^{-1}`.
    #[serde(rename = "zbridge")]
    ZBridge,
}

impl Realization {
    /// Bessel realization; `ν` must be finite and non-negative.
    pub fn bessel(nu: f64) -> Result<Realization> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::InvalidProblem(format!(
                "Bessel order must be finite and >= 0, got {nu}"
            )));
        }
        Ok(Realization::Bessel { nu })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Realization::Maclaurin => "maclaurin",
            Realization::Bessel { .. } => "bessel",
            Realization::ZBridge => "zbridge",
        }
    }

    pub fn nu(&self) -> Option<f64> {
        match self {
            Realization::Bessel { nu } => Some(*nu),
            _ => None,
        }
    }
}
