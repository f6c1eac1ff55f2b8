//! Quotients of a polynomial ring by at most one relation.
//!
//! A single nonzero polynomial is a Gröbner basis of the ideal it generates,
//! so the remainder of division by it is a canonical representative and
//! ideal membership is "remainder is zero". For the determinant relations
//! `ad - bc - κ` the remainder has a closed form: every `a^i d^l` with
//! `m = min(i, l) > 0` becomes `(bc + κ)^m a^{i-m} d^{l-m}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::poly::{divides, monomials_of_degree, monomials_up_to, ExactPoly, Exponents, Vars};
use super::rational::{format_rational, rat, Rational};
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Relation {
    None,
    /// `ad - bc - κ` on the coordinates `a, b, c, d`.
    Det(Rational),
    General(ExactPoly),
}

pub struct QuotientRing {
    name: String,
    vars: Vars,
    relation: Relation,
    normal_form_minimal: OnceLock<bool>,
}

impl Clone for QuotientRing {
    fn clone(&self) -> Self {
        let cell = OnceLock::new();
        if let Some(v) = self.normal_form_minimal.get() {
            let _ = cell.set(*v);
        }
        QuotientRing {
            name: self.name.clone(),
            vars: self.vars.clone(),
            relation: self.relation.clone(),
            normal_form_minimal: cell,
        }
    }
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.relation == other.relation
    }
}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation() {
            Some(r) => write!(f, "{}: Q[{}]/({})", self.name, self.vars.names().join(","), r),
            None => write!(f, "{}: Q[{}]", self.name, self.vars.names().join(",")),
        }
    }
}

/// Degree bound up to which the minimality of normal forms is re-validated
/// by linear algebra.
pub const MINIMALITY_BOUND: u32 = 6;

const AD: [u32; 4] = [1, 0, 0, 1];

impl QuotientRing {
    fn det(name: &str, kappa: Rational) -> Self {
        QuotientRing {
            name: name.into(),
            vars: Vars::abcd(),
            relation: Relation::Det(kappa),
            normal_form_minimal: OnceLock::new(),
        }
    }

    /// `O(SL2) = Q[a,b,c,d]/(ad - bc - 1)`.
    pub fn sl2() -> Self {
        Self::det("O(SL2)", Rational::one())
    }

    /// `O(Y) = Q[a,b,c,d]/(ad - bc)`, functions on rank <= 1 matrices.
    pub fn horocycle() -> Self {
        Self::det("O(Y)", Rational::zero())
    }

    /// `O(Mat2) = Q[a,b,c,d]`.
    pub fn mat2() -> Self {
        QuotientRing {
            name: "O(Mat2)".into(),
            vars: Vars::abcd(),
            relation: Relation::None,
            normal_form_minimal: OnceLock::new(),
        }
    }

    /// The fiber `det = κ` of 2x2 matrices.
    pub fn det_fiber(kappa: Rational) -> Self {
        if kappa.is_zero() {
            Self::horocycle()
        } else if kappa.is_one() {
            Self::sl2()
        } else {
            Self::det(&format!("O(det={})", format_rational(&kappa)), kappa)
        }
    }

    /// Quotient of `Q[vars]` by an arbitrary nonzero relation.
    pub fn with_relation(name: &str, relation: ExactPoly) -> Result<Self> {
        if relation.is_zero() {
            return Err(Error::Invalid("relation must be nonzero".into()));
        }
        Ok(QuotientRing {
            name: name.into(),
            vars: relation.vars().clone(),
            relation: Relation::General(relation),
            normal_form_minimal: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn relation(&self) -> Option<ExactPoly> {
        match &self.relation {
            Relation::None => None,
            Relation::Det(k) => Some(det_minus(&self.vars, k)),
            Relation::General(p) => Some(p.clone()),
        }
    }

    /// The constant `κ` if this is a determinant fiber `ad - bc = κ`.
    pub fn det_value(&self) -> Option<&Rational> {
        match &self.relation {
            Relation::Det(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match &self.relation {
            Relation::None => true,
            Relation::Det(k) => k.is_zero(),
            Relation::General(p) => p.is_homogeneous(),
        }
    }

    /// Leading monomial of the relation; normal forms avoid its multiples.
    pub fn leading_monomial(&self) -> Option<Exponents> {
        match &self.relation {
            Relation::None => None,
            Relation::Det(_) => Some(AD.to_vec()),
            Relation::General(p) => p.leading_term().map(|(e, _)| e.clone()),
        }
    }

    fn check(&self, f: &ExactPoly) -> Result<()> {
        if f.nvars() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), found: f.nvars() });
        }
        Ok(())
    }

    pub fn normal_form(&self, f: &ExactPoly) -> Result<ExactPoly> {
        self.check(f)?;
        Ok(match &self.relation {
            Relation::None => f.clone(),
            Relation::Det(k) => det_normal_form(f, k),
            Relation::General(p) => f.div_rem(p)?.1,
        })
    }

    pub fn is_normal(&self, f: &ExactPoly) -> bool {
        match self.leading_monomial() {
            None => true,
            Some(lm) => f.terms().all(|(e, _)| !divides(&lm, e)),
        }
    }

    /// `f` represents zero in the ring.
    pub fn contains(&self, f: &ExactPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn equal(&self, f: &ExactPoly, g: &ExactPoly) -> Result<bool> {
        self.contains(&(f - g))
    }

    pub fn mul(&self, f: &ExactPoly, g: &ExactPoly) -> Result<ExactPoly> {
        self.check(f)?;
        self.check(g)?;
        self.normal_form(&(f * g))
    }

    /// Normal monomials of total degree exactly `degree`.
    pub fn normal_monomials(&self, degree: u32) -> Vec<Exponents> {
        let lm = self.leading_monomial();
        monomials_of_degree(self.vars.len(), degree)
            .into_iter()
            .filter(|e| lm.as_ref().is_none_or(|lm| !divides(lm, e)))
            .collect()
    }

    pub fn normal_monomials_up_to(&self, degree: u32) -> Vec<Exponents> {
        (0..=degree).flat_map(|d| self.normal_monomials(d)).collect()
    }

    /// Least total degree of a polynomial representative of the class of `f`,
    /// `None` for the zero class.
    ///
    /// Uses the degree of the normal form once
    /// [`validate_minimal_degree`](Self::validate_minimal_degree) has
    /// succeeded, otherwise the linear-algebra oracle.
    pub fn min_degree(&self, f: &ExactPoly) -> Result<Option<u32>> {
        let nf = self.normal_form(f)?;
        if nf.is_zero() {
            return Ok(None);
        }
        if matches!(self.relation, Relation::None) || self.minimal_normal_forms() {
            return Ok(nf.degree());
        }
        self.min_degree_oracle(&nf)
    }

    /// Cached result of [`validate_minimal_degree`](Self::validate_minimal_degree)
    /// at [`MINIMALITY_BOUND`].
    pub fn minimal_normal_forms(&self) -> bool {
        *self.normal_form_minimal.get_or_init(|| self.validate_minimal_degree(MINIMALITY_BOUND))
    }

    /// Checks, for each `k <= bound`, that no nonzero combination of normal
    /// monomials of degree `k` lies in `P_{<=k-1} + rel * P_{<=k-2}`.
    ///
    /// If `f` had normal form of degree `k` and a representative `g` of lower
    /// degree, then `nf - g = rel * h` with `deg h <= k - 2`, and the degree-`k`
    /// part of `nf` would be such a combination.
    pub fn validate_minimal_degree(&self, bound: u32) -> bool {
        let Some(rel) = self.relation() else {
            return true;
        };
        let n = self.vars.len();
        let rel_deg = rel.degree().unwrap_or(0);
        for k in 0..=bound {
            let index = MonomialIndex::new(n, k);
            let mut basis = EchelonBasis::new();
            // lower-degree monomials
            for e in monomials_up_to(n, k.saturating_sub(1)).into_iter().filter(|_| k > 0) {
                basis.insert(&index.unit(&e));
            }
            if k >= rel_deg {
                for m in monomials_up_to(n, k - rel_deg) {
                    basis.insert(&index.vector(&rel.mul_monomial(&m, &Rational::one())));
                }
            }
            let before = basis.rank();
            let top = self.normal_monomials(k);
            for e in &top {
                basis.insert(&index.unit(e));
            }
            if basis.rank() != before + top.len() {
                return false;
            }
        }
        true
    }

    /// Least `k` such that `f ∈ P_{<=k} + rel * P_{<=deg f - deg rel}`,
    /// by exact membership tests. Independent of the normal form.
    pub fn min_degree_oracle(&self, f: &ExactPoly) -> Result<Option<u32>> {
        self.check(f)?;
        let Some(rel) = self.relation() else {
            return Ok(f.degree());
        };
        let Some(top) = f.degree() else {
            return Ok(None);
        };
        let n = self.vars.len();
        let index = MonomialIndex::new(n, top);
        let rel_deg = rel.degree().unwrap_or(0);
        let mut multiples = EchelonBasis::new();
        if top >= rel_deg {
            for m in monomials_up_to(n, top - rel_deg) {
                multiples.insert(&index.vector(&rel.mul_monomial(&m, &Rational::one())));
            }
        }
        if multiples.contains(&index.vector(f)) {
            return Ok(None);
        }
        let mut basis = multiples;
        for k in 0..=top {
            for e in monomials_of_degree(n, k) {
                basis.insert(&index.unit(&e));
            }
            if basis.contains(&index.vector(f)) {
                return Ok(Some(k));
            }
        }
        Ok(Some(top))
    }
}

/// Coordinates of polynomials of degree `<= bound`, with higher-degree
/// monomials first so lower-degree pieces form a suffix.
pub(crate) struct MonomialIndex {
    index: BTreeMap<Exponents, usize>,
}

impl MonomialIndex {
    pub(crate) fn new(nvars: usize, bound: u32) -> Self {
        let index =
            (0..=bound).rev().flat_map(|d| monomials_of_degree(nvars, d)).enumerate().map(|(i, e)| (e, i)).collect();
        MonomialIndex { index }
    }

    pub(crate) fn unit(&self, e: &[u32]) -> SparseVec {
        [(self.index[e], Rational::one())].into_iter().collect()
    }

    pub(crate) fn vector(&self, f: &ExactPoly) -> SparseVec {
        f.terms().map(|(e, c)| (self.index[e], c.clone())).collect()
    }
}

fn det_minus(vars: &Vars, kappa: &Rational) -> ExactPoly {
    let mut p = ExactPoly::zero(vars);
    p.add_term(AD.to_vec(), Rational::one());
    p.add_term(vec![0, 1, 1, 0], -Rational::one());
    p.add_term(vec![0, 0, 0, 0], -kappa.clone());
    p
}

fn det_normal_form(f: &ExactPoly, kappa: &Rational) -> ExactPoly {
    let vars = f.vars();
    // (bc + κ)^m expanded lazily per m
    let mut powers: Vec<Vec<(u32, Rational)>> = Vec::new();
    let mut out: BTreeMap<Exponents, Rational> = BTreeMap::new();
    for (e, c) in f.terms() {
        let m = e[0].min(e[3]);
        if m == 0 {
            *out.entry(e.clone()).or_insert_with(Rational::zero) += c;
            continue;
        }
        while powers.len() <= m as usize {
            powers.push(binomial_expansion(powers.len() as u32, kappa));
        }
        for (j, coef) in &powers[m as usize] {
            let key = vec![e[0] - m, e[1] + j, e[2] + j, e[3] - m];
            *out.entry(key).or_insert_with(Rational::zero) += c * coef;
        }
    }
    ExactPoly::from_terms(vars, out.into_iter().map(|(e, c)| (c, e)))
}

/// `(bc + κ)^m = Σ_j C(m,j) κ^{m-j} (bc)^j`, as pairs `(j, coefficient)`.
fn binomial_expansion(m: u32, kappa: &Rational) -> Vec<(u32, Rational)> {
    let mut out = Vec::new();
    let mut binom = Rational::one();
    for j in 0..=m {
        if j > 0 {
            binom = binom * rat((m - j + 1) as i64) / rat(j as i64);
        }
        let k = num_traits::pow(kappa.clone(), (m - j) as usize);
        let c = &binom * k;
        if !c.is_zero() {
            out.push((j, c));
        }
    }
    out
}

/// Order of vanishing of `f` along `d = 0`: how often `d` divides `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VanishingOrder {
    Finite(u32),
    /// `f = 0`.
    Infinite,
}

impl VanishingOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(n) => Some(n),
            VanishingOrder::Infinite => None,
        }
    }
}

pub fn vanishing_order(f: &ExactPoly, d: &ExactPoly) -> Result<VanishingOrder> {
    f.check_arity(d)?;
    if f.is_zero() {
        return Ok(VanishingOrder::Infinite);
    }
    if d.degree().unwrap_or(0) == 0 {
        return Err(Error::Invalid("divisor must be non-constant".into()));
    }
    let mut g = f.clone();
    let mut n = 0;
    while let Some(q) = g.exact_div(d)? {
        g = q;
        n += 1;
    }
    Ok(VanishingOrder::Finite(n))
}

/// The polynomial `ad - bc`.
pub fn det_poly() -> ExactPoly {
    det_minus(&Vars::abcd(), &Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ExactPoly {
        ExactPoly::parse(&Vars::abcd(), s).unwrap()
    }

    #[test]
    fn defining_relations_rewrite() {
        assert_eq!(QuotientRing::sl2().normal_form(&p("a d")).unwrap(), p("b c + 1"));
        assert_eq!(QuotientRing::horocycle().normal_form(&p("a d")).unwrap(), p("b c"));
        assert_eq!(QuotientRing::mat2().normal_form(&p("a d")).unwrap(), p("a d"));
    }

    #[test]
    fn squared_determinant_monomial() {
        let nf = QuotientRing::sl2().normal_form(&p("a^2 d^2")).unwrap();
        let expected = &p("b c + 1") * &p("b c + 1");
        assert_eq!(nf, expected);
    }

    #[test]
    fn closed_form_matches_division() {
        let rings = [QuotientRing::sl2(), QuotientRing::horocycle(), QuotientRing::det_fiber(rat(-3))];
        let f = p("3 a^3 d^2 b - 1/2 a d c^2 + a^2 d^4 + 7 d - a b c d + 2/3");
        for r in &rings {
            let rel = r.relation().unwrap();
            let (_, rem) = f.div_rem(&rel).unwrap();
            assert_eq!(r.normal_form(&f).unwrap(), rem);
        }
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let f = ExactPoly::parse(&Vars::new(&["x", "y"]), "x y").unwrap();
        assert_eq!(QuotientRing::sl2().normal_form(&f), Err(Error::ArityMismatch { expected: 4, found: 2 }));
    }

    #[test]
    fn normal_forms_are_degree_minimal() {
        assert!(QuotientRing::sl2().validate_minimal_degree(6));
        assert!(QuotientRing::horocycle().validate_minimal_degree(6));
        assert!(QuotientRing::det_fiber(rat(5)).validate_minimal_degree(4));
    }

    #[test]
    fn oracle_sees_no_constant_representative_of_ad() {
        let r = QuotientRing::sl2();
        assert_eq!(r.min_degree_oracle(&p("a d")).unwrap(), Some(2));
        assert_eq!(r.min_degree_oracle(&p("a d - b c")).unwrap(), Some(0));
        assert_eq!(r.min_degree_oracle(&p("a d - b c - 1")).unwrap(), None);
        assert_eq!(r.min_degree(&p("a^2 d^2 - 2 b c a d + b^2 c^2")).unwrap(), Some(0));
    }

    #[test]
    fn normal_monomial_counts() {
        // dim O(Y)_k = (k+1)^2
        let y = QuotientRing::horocycle();
        for k in 0..6 {
            assert_eq!(y.normal_monomials(k).len() as u32, (k + 1) * (k + 1));
        }
    }

    #[test]
    fn vanishing_orders() {
        let det = det_poly();
        assert_eq!(vanishing_order(&det.pow(2), &det).unwrap(), VanishingOrder::Finite(2));
        assert_eq!(vanishing_order(&p("a b"), &det).unwrap(), VanishingOrder::Finite(0));
        assert_eq!(vanishing_order(&(&det * &p("a")), &det).unwrap(), VanishingOrder::Finite(1));
        assert_eq!(vanishing_order(&ExactPoly::zero(&Vars::abcd()), &det).unwrap(), VanishingOrder::Infinite);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::exactalg::level::pw_level;
    use crate::exactalg::rational::ratio;
    use crate::rees::LatticeOrder;
    use crate::testkit::{config, homogeneous, poly};

    fn rings() -> Vec<QuotientRing> {
        vec![
            QuotientRing::sl2(),
            QuotientRing::horocycle(),
            QuotientRing::mat2(),
            QuotientRing::det_fiber(ratio(-2, 3)),
        ]
    }

    fn level_of(f: &ExactPoly) -> Vec<i64> {
        pw_level(f, &QuotientRing::sl2()).unwrap().point().map(<[i64]>::to_vec).unwrap_or_default()
    }

    proptest! {
        #![proptest_config(config(100))]

        #[test]
        fn normal_form_is_idempotent(f in poly(6, 6)) {
            for r in rings() {
                let nf = r.normal_form(&f).unwrap();
                prop_assert_eq!(r.normal_form(&nf).unwrap(), nf.clone());
                prop_assert!(r.is_normal(&nf));
            }
        }

        #[test]
        fn normal_form_is_multiplicative(f in poly(3, 4), g in poly(3, 4)) {
            for r in rings() {
                let lhs = r.normal_form(&(&f * &g)).unwrap();
                let rhs = r.normal_form(&(&r.normal_form(&f).unwrap() * &r.normal_form(&g).unwrap())).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        /// On parity-pure inputs the levels are comparable in the dominance order.
        #[test]
        fn pw_level_is_subadditive(
            (f, g, same) in (0u32..4, 0u32..4, 0u32..2)
                .prop_flat_map(|(df, dg, e)| (homogeneous(df, 4), homogeneous(dg, 4), homogeneous(df + 2 * e, 4))),
        ) {
            let sl2 = QuotientRing::sl2();
            let l = LatticeOrder::sl2();
            let fg = &f * &g;
            if !sl2.normal_form(&fg).unwrap().is_zero() && !sl2.normal_form(&f).unwrap().is_zero() && !sl2.normal_form(&g).unwrap().is_zero() {
                prop_assert!(l.dominance_leq(&level_of(&fg), &l.add(&level_of(&f), &level_of(&g))));
            }
            let sum = &f + &same;
            let (lf, ls) = (pw_level(&f, &sl2).unwrap(), pw_level(&same, &sl2).unwrap());
            if let (Some(a), Some(b), false) = (lf.point(), ls.point(), sl2.normal_form(&sum).unwrap().is_zero()) {
                let top = if l.dominance_leq(a, b) { b.to_vec() } else { a.to_vec() };
                prop_assert!(l.dominance_leq(&level_of(&sum), &top));
            }
        }

        #[test]
        fn vanishing_order_is_additive(f in poly(6, 4), g in poly(6, 4), j in 0u32..3, k in 0u32..3) {
            let d = det_poly();
            let (f, g) = (&f * &d.pow(j), &g * &d.pow(k));
            let of = vanishing_order(&f, &d).unwrap();
            let og = vanishing_order(&g, &d).unwrap();
            let ofg = vanishing_order(&(&f * &g), &d).unwrap();
            match (of.finite(), og.finite()) {
                (Some(x), Some(y)) => prop_assert_eq!(ofg, VanishingOrder::Finite(x + y)),
                _ => prop_assert_eq!(ofg, VanishingOrder::Infinite),
            }
        }
    }
}
