//! Operational calculus on coefficient sequences.
//!
//! A function is represented by its coefficients in the basis of a
//! [`transforms::Realization`]; the operator of the realization acts as a
//! left shift, so a linear equation with constant coefficients becomes a
//! rational function `Y(s)` that [`solver::solve_ivp`] splits into partial
//! fractions and names.

pub mod error;
pub mod json;
pub mod numerics;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod scalar;
pub mod sequence;
pub mod solver;
pub mod transforms;

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    pub mod sequences {}
    #[doc = include_str!("../../../book/src/rational.md")]
    pub mod rational {}
    #[doc = include_str!("../../../book/src/realizations.md")]
    pub mod realizations {}
    #[doc = include_str!("../../../book/src/solving.md")]
    pub mod solving {}
    #[doc = include_str!("../../../book/src/numerics.md")]
    pub mod numerics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
