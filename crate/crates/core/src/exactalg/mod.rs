//! Exact rationals, sparse polynomials, single-relation quotient rings and
//! the Peter–Weyl level function.

pub mod level;
pub mod poly;
pub mod rational;
pub mod ring;

pub use level::{pw_level, LevelValue};
pub use poly::{ExactPoly, Exponents, TermJson, Vars};
pub use rational::{parse_rational, rat, ratio, Rational};
pub use ring::{det_poly, vanishing_order, QuotientRing, VanishingOrder};
