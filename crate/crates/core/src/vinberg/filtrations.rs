//! Filtration comparisons: the Peter–Weyl filtration of `D_{SL2}` against
//! the derivations filtration, and pole order along `{det = 0}` on `PSL2`
//! against the matrix-coefficient level.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::action::{builtin_lr_action_sl2, MomentMap};
use crate::error::{Error, Result};
use crate::exactalg::level::{pw_level, LevelValue};
use crate::exactalg::poly::{monomials_of_degree, ExactPoly, Vars};
use crate::exactalg::rational::Rational;
use crate::exactalg::ring::{det_poly, vanishing_order, QuotientRing, VanishingOrder};
use crate::lie::desc::LieAlgebraDesc;
use crate::lie::uenv::{casimir_pair, UEnvElement};
use crate::rees::{FilteredAlgebra, LatticeOrder};
use crate::report::Report;
use crate::weyl::WeylOp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub element: String,
    pub method_one: LevelValue,
    pub method_two: LevelValue,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationComparisonReport {
    pub records: Vec<LevelRecord>,
}

impl FiltrationComparisonReport {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.equal)
    }

    fn push(&mut self, element: String, one: LevelValue, two: LevelValue) {
        let equal = one == two;
        self.records.push(LevelRecord { element, method_one: one, method_two: two, equal });
    }
}

/// An operator `Σ f_i μ(u_i)` on `SL2`.
#[derive(Clone, Debug)]
pub struct PwSample {
    pub name: String,
    pub terms: Vec<(ExactPoly, UEnvElement)>,
}

impl PwSample {
    pub fn single(f: &str, u: UEnvElement, uname: &str) -> Self {
        let poly = ExactPoly::parse(&Vars::abcd(), f).expect("sample polynomial");
        PwSample { name: format!("({f})·μ({uname})"), terms: vec![(poly, u)] }
    }
}

/// Twenty-three operators: the unit, the six table fields, both Casimirs,
/// and products `f·μ(u)` with `pw_level(f)` from 1 to 3.
pub fn default_pw_samples() -> Vec<PwSample> {
    let g = LieAlgebraDesc::sl2_pair();
    let gen = |i: usize| UEnvElement::generator(&g, i);
    let word = |w: &[usize]| UEnvElement::from_word(&g, w, Rational::from_integer(1.into()));
    let names = g.names().to_vec();
    let mut out = vec![PwSample::single("1", UEnvElement::one(&g), "1")];
    for (i, name) in names.iter().enumerate() {
        out.push(PwSample::single("1", gen(i), name));
    }
    let (d1, d2) = casimir_pair();
    out.push(PwSample::single("1", d1, "Δ⊗1"));
    out.push(PwSample::single("1", d2, "1⊗Δ"));
    let products: [(&str, &[usize], &str); 13] = [
        ("a", &[2], "E1"),
        ("b", &[3], "F2"),
        ("c", &[1], "H1"),
        ("d", &[5, 0], "E2 F1"),
        ("a b", &[4], "H2"),
        ("a d", &[2], "E1"),
        ("c d", &[0, 5], "F1 E2"),
        ("a^2", &[1, 1], "H1 H1"),
        ("b c", &[3], "F2"),
        ("a b c", &[2], "E1"),
        ("a^3", &[5], "E2"),
        ("b^2 c", &[0, 3], "F1 F2"),
        ("b c d", &[4, 1], "H2 H1"),
    ];
    for (f, w, uname) in products {
        out.push(PwSample::single(f, word(w), uname));
    }
    let two = |f1: &str, i1: usize, f2: &str, i2: usize| {
        let v = Vars::abcd();
        PwSample {
            name: format!("({f1})·μ({}) + ({f2})·μ({})", names[i1], names[i2]),
            terms: vec![(ExactPoly::parse(&v, f1).unwrap(), gen(i1)), (ExactPoly::parse(&v, f2).unwrap(), gen(i2))],
        }
    };
    out.push(two("a", 2, "b", 3));
    out
}

/// `max_i pw_level(f_i)`: an upper bound for the Peter–Weyl level of the
/// operator, attained whenever it matches the derivations level.
pub fn pw_side(sample: &PwSample, ring: &QuotientRing) -> Result<LevelValue> {
    let levels = sample.terms.iter().map(|(f, _)| pw_level(f, ring)).collect::<Result<Vec<_>>>()?;
    let points: Vec<Vec<i64>> = levels.iter().filter_map(|l| l.point().map(<[i64]>::to_vec)).collect();
    LatticeOrder::sl2().least_upper_bound(&points)
}

/// Least `n` with `P(O_{≤m}) ⊆ O_{≤m+n}`, tested on normal monomials of
/// degree `≤ bound`.
pub fn operator_level(op: &WeylOp, a: &FilteredAlgebra, bound: u32) -> Result<LevelValue> {
    let mut constraints = Vec::new();
    for e in a.ring().normal_monomials_up_to(bound) {
        let x = ExactPoly::monomial(a.ring().vars(), e.clone(), Rational::from_integer(1.into()));
        if let LevelValue::At(l) = a.level(&op.apply(&x)?)? {
            constraints.push(a.lattice().sub(&l, &a.monomial_level(&e)));
        }
    }
    a.lattice().least_upper_bound(&constraints)
}

pub fn pw_vs_derivations(samples: &[PwSample], bound: u32) -> Result<FiltrationComparisonReport> {
    let act = builtin_lr_action_sl2();
    let mut mu = MomentMap::new(&act);
    let a = FilteredAlgebra::peter_weyl_sl2();
    let mut rep = FiltrationComparisonReport { records: Vec::new() };
    for s in samples {
        let mut op = WeylOp::zero(&Vars::abcd());
        for (f, u) in &s.terms {
            op = &op + &mu.apply(u).left_mul_poly(f);
        }
        let one = pw_side(s, a.ring())?;
        let two = operator_level(&op, &a, bound)?;
        rep.push(s.name.clone(), one, two);
    }
    Ok(rep)
}

pub fn pw_vs_derivations_check(bound: u32) -> Result<Report> {
    let samples = default_pw_samples();
    let cmp = pw_vs_derivations(&samples, bound)?;
    let mut r = Report::new("pwfilt", json!({ "bound": bound, "samples": samples.len() }));
    for rec in &cmp.records {
        r.compare(rec.element.clone(), rec.method_one.clone(), rec.method_two.clone());
    }
    Ok(r)
}

/// Pole order of `f / det^k` along `{det = 0}`: `k - ord_det(f)`, negative
/// meaning a zero.
pub fn pole_order(f: &ExactPoly, k: u32) -> Result<i64> {
    if f.is_zero() || !f.is_homogeneous() || f.degree() != Some(2 * k) {
        return Err(Error::Invalid(format!("{f} is not homogeneous of degree {}", 2 * k)));
    }
    match vanishing_order(f, &det_poly())? {
        VanishingOrder::Finite(v) => Ok(k as i64 - v as i64),
        VanishingOrder::Infinite => unreachable!("nonzero polynomial"),
    }
}

/// Level of the class of `f / det^k` in root-lattice units: the Peter–Weyl
/// level of `f` on `SL2`, halved.
pub fn matrix_coefficient_level(f: &ExactPoly) -> Result<i64> {
    match pw_level(f, &QuotientRing::sl2())? {
        LevelValue::At(l) if l[0] % 2 == 0 => Ok(l[0] / 2),
        other => Err(Error::Invalid(format!("{f} has level {other}, not an even class"))),
    }
}

/// Classes `det^j · m / det^k` for monomials `m` of degree `2(k - j)`, for
/// all `2k ≤ bound`.
pub fn vfiltration_table(bound: u32) -> Result<FiltrationComparisonReport> {
    let mut rep = FiltrationComparisonReport { records: Vec::new() };
    for k in 0..=bound / 2 {
        rep.records.extend(vfiltration_classes(k)?.records);
    }
    Ok(rep)
}

fn vfiltration_classes(k: u32) -> Result<FiltrationComparisonReport> {
    let vars = Vars::abcd();
    let det = det_poly();
    let mut rep = FiltrationComparisonReport { records: Vec::new() };
    {
        for j in 0..=k {
            for e in monomials_of_degree(4, 2 * (k - j)) {
                let f = &det.pow(j) * &ExactPoly::monomial(&vars, e, Rational::from_integer(1.into()));
                let pole = pole_order(&f, k)?;
                let level = matrix_coefficient_level(&f)?;
                rep.push(format!("({f})/det^{k}"), LevelValue::scalar(pole), LevelValue::scalar(level));
            }
        }
    }
    Ok(rep)
}

pub fn vfiltration_check(bound: u32) -> Result<Report> {
    let mut r = Report::new("vfilt", json!({ "bound": bound }));
    let v = Vars::abcd();
    for (f, k, name) in [("a b", 1, "ab/det"), ("a d - b c", 1, "det/det"), ("a^2 b^2", 2, "a²b²/det²")] {
        let f = ExactPoly::parse(&v, f)?;
        r.compare(format!("{name}: pole order vs level"), matrix_coefficient_level(&f)?, pole_order(&f, k)?);
    }
    for k in 0..=bound / 2 {
        let table = vfiltration_classes(k)?;
        let rows = &table.records;
        let agree = rows.iter().filter(|x| x.equal).count();
        let first_bad = rows.iter().find(|x| !x.equal).map(|x| x.element.clone());
        r.item(
            format!("degree {}: pole order = matrix-coefficient level", 2 * k),
            json!({ "agree": rows.len() }),
            json!({ "agree": agree, "witness": first_bad }),
            agree == rows.len(),
        );
    }
    Ok(r)
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::action::builtin_lr_action_sl2;
    use crate::rees::derivation_level;
    use crate::testkit::config;

    proptest! {
        #![proptest_config(config(36))]

        /// Every table field is relative to `ad - bc` and has derivation level 0.
        #[test]
        fn table_fields_have_level_zero(i in 0usize..6) {
            let act = builtin_lr_action_sl2();
            let a = FilteredAlgebra::peter_weyl_sl2();
            prop_assert!(act.field(i).apply(&det_poly()).unwrap().is_zero());
            prop_assert_eq!(derivation_level(&a, act.field(i)).unwrap(), LevelValue::scalar(0));
        }

        #[test]
        fn pole_order_matches_level(k in 0u32..7, j in 0u32..7, pick in any::<prop::sample::Index>()) {
            let j = j.min(k);
            let monos = monomials_of_degree(4, 2 * (k - j));
            let f = &det_poly().pow(j) * &ExactPoly::monomial(&Vars::abcd(), pick.get(&monos).clone(), Rational::from_integer(1.into()));
            prop_assert_eq!(pole_order(&f, k).unwrap(), matrix_coefficient_level(&f).unwrap());
        }
    }
}
