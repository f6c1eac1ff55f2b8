//! Exact computer algebra for the 2x2-matrix Vinberg semigroup of `SL2`.
//!
//! Everything is over `Q` with arbitrary precision: polynomials and quotient
//! rings ([`exactalg`]), the Weyl algebra of differential operators
//! ([`weyl`]), Lie algebras, enveloping algebras and finite-dimensional
//! representations ([`lie`]), infinitesimal actions, moment maps and
//! coinvariants ([`action`]), filtered algebras and the Rees degeneration
//! `SL2 ⇝ Y` ([`rees`]), n-coinvariant exponents ([`asymptotics`]), and the
//! verification suites built on top of them ([`vinberg`]).

pub mod action;
pub mod asymptotics;
pub mod error;
pub mod exactalg;
pub mod lie;
pub mod linalg;
pub mod rees;
pub mod report;
pub mod vinberg;
pub mod weyl;

#[cfg(test)]
mod testkit;

pub use error::{Error, Result};
pub use exactalg::{ExactPoly, LevelValue, QuotientRing, Rational, Vars};
pub use lie::{FinDimBimodule, FinDimRep, LieAlgebraDesc, UEnvElement};
pub use linalg::QMatrix;
pub use weyl::{VectorField, WeylOp};
