//! Operator identities on `Mat2` and the presentation of `D_{SL2}`.

use serde_json::json;

use crate::action::{builtin_lr_action_mat2, moment_map, InfinitesimalAction};
use crate::exactalg::poly::{ExactPoly, Vars};
use crate::exactalg::rational::{rat, Rational};
use crate::exactalg::ring::{det_poly, QuotientRing};
use crate::lie::desc::LieAlgebraDesc;
use crate::lie::uenv::{casimir_pair, UEnvElement};
use crate::linalg::{dense_to_sparse, sparse_rank};
use crate::rees::det_relative_fields;
use crate::report::Report;
use crate::weyl::WeylOp;

// basis of sl2 ⊕ sl2
const F1: usize = 0;
const H1: usize = 1;
const E1: usize = 2;
const F2: usize = 3;
const H2: usize = 4;
const E2: usize = 5;

fn p(s: &str) -> ExactPoly {
    ExactPoly::parse(&Vars::abcd(), s).expect("literal polynomial")
}

fn op(s: &str) -> WeylOp {
    WeylOp::parse(&Vars::abcd(), s).expect("literal operator")
}

/// The Euler operator `1 + a∂_a + b∂_b + c∂_c + d∂_d`.
pub fn euler_operator() -> WeylOp {
    op("1 + a Da + b Db + c Dc + d Dd")
}

/// `Σ f_i μ(x_i)` for coefficients on the left summand `E⊗1, F⊗1, H⊗1`.
fn left_combination(act: &InfinitesimalAction, e: &str, f: &str, h: &str) -> WeylOp {
    let mu = |i: usize| act.field(i).op().clone();
    &(&mu(E1).left_mul_poly(&p(e)) + &mu(F1).left_mul_poly(&p(f))) + &mu(H1).left_mul_poly(&p(h))
}

/// `Eu² - k(ad - bc)(∂_a∂_d - ∂_b∂_c)`.
pub fn casimir_expression(k: &Rational) -> WeylOp {
    let eu = euler_operator();
    &(&eu * &eu) - &op("a d Da Dd - a d Db Dc - b c Da Dd + b c Db Dc").scale(k)
}

/// Cross relations: `μ(1⊗x)` against its expression through `μ(g⊗1)`, as
/// `(x, e, f, h)` with the coefficients of `μ(E⊗1), μ(F⊗1), μ(H⊗1)`.
pub const CROSS_RELATIONS: [(&str, usize, &str, &str, &str); 3] = [
    ("1⊗E", E2, "-a^2", "c^2", "a c"),
    ("1⊗F", F2, "b^2", "-d^2", "-b d"),
    ("1⊗H", H2, "2 a b", "-2 c d", "-a d - b c"),
];

/// Checks the operator identities on `Mat2`, the span of the relative
/// fields and bracket compatibility of the moment map.
pub fn verify_sl2_identities() -> Report {
    let act = builtin_lr_action_mat2();
    let mut r = Report::new("identities", json!({}));
    let det = det_poly();
    for (name, x, e, f, h) in CROSS_RELATIONS {
        let lhs = act.field(x).op().left_mul_poly(&det);
        let rhs = left_combination(&act, e, f, h);
        r.compare(format!("(ad-bc)μ({name}) - expansion"), "0".to_string(), (&lhs - &rhs).to_string());
    }
    let (d1, d2) = casimir_pair();
    let (m1, m2) = (moment_map(&d1, &act), moment_map(&d2, &act));
    let printed = casimir_expression(&rat(1));
    r.compare("μ(Δ⊗1) - (Eu² - (ad-bc)(∂a∂d - ∂b∂c))", "0".to_string(), (&m1 - &printed).to_string());
    r.compare("μ(1⊗Δ) - (Eu² - (ad-bc)(∂a∂d - ∂b∂c))", "0".to_string(), (&m2 - &printed).to_string());
    r.compare("μ(Δ⊗1) - μ(1⊗Δ)", "0".to_string(), (&m1 - &m2).to_string());
    // Δ acts on the invariant ad - bc by its value 1 on the trivial
    // representation; Eu² - k(ad-bc)(∂a∂d - ∂b∂c) sends it to (9 - 2k)(ad-bc)
    r.compare("μ(Δ⊗1)(ad-bc)", det.to_string(), m1.apply(&det).map(|x| x.to_string()).unwrap_or_default());
    let fitted = casimir_expression(&rat(4));
    r.compare("μ(Δ⊗1) - (Eu² - 4(ad-bc)(∂a∂d - ∂b∂c))", "0".to_string(), (&m1 - &fitted).to_string());
    let one = moment_map(&UEnvElement::one(&LieAlgebraDesc::sl2_pair()), &act);
    r.compare("μ(1) - 1", "0".to_string(), (&one - &WeylOp::one(&Vars::abcd())).to_string());

    // relative fields with linear coefficients
    let mat2 = QuotientRing::mat2();
    let kernel = det_relative_fields(&mat2, &mat2.normal_monomials(1)).expect("mat2 linear algebra");
    r.compare("dim of linear-coefficient fields killing ad-bc", 6, kernel.len());
    let flatten = |comps: &[ExactPoly]| {
        let mut v = Vec::new();
        for c in comps {
            for e in mat2.normal_monomials(1) {
                v.push(c.coefficient(&e));
            }
        }
        dense_to_sparse(&v)
    };
    let table: Vec<_> = act.fields().iter().map(|f| flatten(&f.components())).collect();
    let kern: Vec<_> = kernel.iter().map(|k| flatten(k)).collect();
    let all_relative = act.fields().iter().all(|f| f.apply(&det).map(|g| g.is_zero()).unwrap_or(false));
    r.compare("table fields annihilate ad-bc", true, all_relative);
    r.compare("rank of table fields", 6, sparse_rank(&table));
    r.compare("rank of table fields with kernel", 6, sparse_rank(table.iter().chain(&kern)));

    // bracket compatibility on all 15 pairs
    let g = act.algebra().clone();
    for i in 0..6 {
        for j in i + 1..6 {
            let lhs = act.field(i).op().commutator(act.field(j).op()).expect("same variables");
            let rhs = act.lie_field(&g.bracket(i, j));
            r.compare(
                format!("[μ({}), μ({})] - μ([{}, {}])", g.names()[i], g.names()[j], g.names()[i], g.names()[j]),
                "0".to_string(),
                (&lhs - &rhs).to_string(),
            );
        }
    }
    r
}

/// `Q` with `P = (ad - bc - 1)·Q`, if `P` lies in that left ideal.
pub fn left_cofactor(p: &WeylOp, f: &ExactPoly) -> Option<WeylOp> {
    let vars = p.vars().clone();
    let mut q = WeylOp::zero(&vars);
    for (d, coef) in p.coefficients() {
        let quot = coef.exact_div(f).ok()??;
        for (x, c) in quot.terms() {
            q.add_term(x.clone(), d.clone(), c.clone());
        }
    }
    debug_assert_eq!(&q.left_mul_poly(f), p);
    Some(q)
}

/// For each cross relation, `μ(1⊗x) - expansion` is exhibited as an explicit
/// left multiple of `ad - bc - 1`, with cofactor `-μ(1⊗x)`.
pub fn verify_dsl2_presentation() -> Report {
    let act = builtin_lr_action_mat2();
    let mut r = Report::new("presentation", json!({}));
    let ideal = &det_poly() - &ExactPoly::one(&Vars::abcd());
    let describe = |q: Option<WeylOp>| q.map_or_else(|| "not in the left ideal".to_string(), |q| q.to_string());
    for (name, x, e, f, h) in CROSS_RELATIONS {
        let diff = act.field(x).op() - &left_combination(&act, e, f, h);
        let expected = act.field(x).op().scale(&-rat(1)).to_string();
        r.compare(format!("relation for {name}: cofactor"), expected, describe(left_cofactor(&diff, &ideal)));
    }
    // the F-relation with the opposite sign on bd·H⊗1 differs from the
    // correct one by 2bd·μ(H⊗1), which is not a multiple of ad - bc - 1
    let flipped = act.field(F2).op() - &left_combination(&act, "b^2", "-d^2", "b d");
    r.compare(
        "relation for 1⊗F with +bd·H⊗1: membership",
        "not in the left ideal".to_string(),
        describe(left_cofactor(&flipped, &ideal)),
    );
    let one = moment_map(&UEnvElement::one(&LieAlgebraDesc::sl2_pair()), &act);
    let vacuous = &one - &WeylOp::one(&Vars::abcd());
    let q = left_cofactor(&vacuous, &ideal).filter(|q| q.is_zero());
    r.compare("relation for 1⊗1: cofactor", "0".to_string(), describe(q));
    r
}
