//! Lie algebras by structure constants, their enveloping algebras in PBW
//! normal form, and finite-dimensional representations of `sl2`.

pub mod desc;
pub mod rep;
pub mod uenv;

pub use desc::{sl2_index, LieAlgebraDesc};
pub use rep::{dual_rep, external_tensor, matrix_coefficient_bimodule, sym_power_rep, FinDimBimodule, FinDimRep};
pub use uenv::{casimir_pair, casimir_sl2, UEnvElement};
