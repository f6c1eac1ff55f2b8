//! Shared proptest configuration and strategies. Every property runs from
//! a fixed seed, so failures reproduce exactly.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use crate::exactalg::poly::{monomials_up_to, ExactPoly, Vars};
use crate::exactalg::rational::rat;
use crate::lie::desc::LieAlgebraDesc;
use crate::lie::uenv::UEnvElement;
use crate::weyl::{VectorField, WeylOp};

pub const SEED: u64 = 0x5eed_2a2d;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

/// Polynomials in `a, b, c, d` of degree `≤ max_degree`, small coefficients.
pub fn poly(max_degree: u32, max_terms: usize) -> impl Strategy<Value = ExactPoly> {
    let monos = monomials_up_to(4, max_degree);
    prop::collection::vec((prop::sample::select(monos), -4i64..5), 0..=max_terms).prop_map(|terms| {
        let mut p = ExactPoly::zero(&Vars::abcd());
        for (e, c) in terms {
            p.add_term(e, rat(c));
        }
        p
    })
}

/// Homogeneous polynomials of degree exactly `degree` (possibly zero).
pub fn homogeneous(degree: u32, max_terms: usize) -> impl Strategy<Value = ExactPoly> {
    let monos = crate::exactalg::poly::monomials_of_degree(4, degree);
    prop::collection::vec((prop::sample::select(monos), -4i64..5), 0..=max_terms).prop_map(|terms| {
        let mut p = ExactPoly::zero(&Vars::abcd());
        for (e, c) in terms {
            p.add_term(e, rat(c));
        }
        p
    })
}

/// Operators of order `≤ 2` with coefficients of degree `≤ 2`.
pub fn weyl_op() -> impl Strategy<Value = WeylOp> {
    let coeffs = monomials_up_to(4, 2);
    let partials = monomials_up_to(4, 2);
    prop::collection::vec((prop::sample::select(coeffs), prop::sample::select(partials), -3i64..4), 0..5).prop_map(
        |terms| {
            let mut op = WeylOp::zero(&Vars::abcd());
            for (x, d, c) in terms {
                op.add_term(x, d, rat(c));
            }
            op
        },
    )
}

pub fn vector_field(max_degree: u32) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(max_degree, 3), 4)
        .prop_map(|comps| VectorField::from_components(&comps).expect("four components"))
}

/// Words of length `≤ max_len` in the generators of `sl2 ⊕ sl2`.
pub fn word(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..6, 0..=max_len)
}

pub fn uenv(max_len: usize) -> impl Strategy<Value = UEnvElement> {
    prop::collection::vec((word(max_len), -2i64..3), 1..3).prop_map(|parts| {
        let g = LieAlgebraDesc::sl2_pair();
        let mut u = UEnvElement::zero(&g);
        for (w, c) in parts {
            u = &u + &UEnvElement::from_word(&g, &w, rat(c));
        }
        u
    })
}
