//! The Weyl algebra of polynomial differential operators, in normal order.
//!
//! A [`WeylOp`] is a finite sum `Σ c · x^α ∂^β` with every coordinate factor
//! to the left of every derivative. Products are normal-ordered with the
//! closed form of repeatedly applying `∂x = x∂ + 1`:
//!
//! ```text
//! ∂^β x^γ = Σ_{k ≤ β, k ≤ γ} Π_i C(β_i, k_i) · γ_i!/(γ_i - k_i)! · x^{γ-k} ∂^{β-k}
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::poly::{parse_monomial, split_signed_terms, total_degree, ExactPoly, Exponents, Vars};
use crate::exactalg::rational::{format_rational, parse_rational, rat, Rational};
use crate::exactalg::ring::QuotientRing;

/// Degree bound used by [`preserves_ideal`] for operators of order > 1.
pub const DEFAULT_IDEAL_BOUND: u32 = 6;

/// `(coordinate exponents, derivative exponents)`.
pub type WeylKey = (Exponents, Exponents);

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOp {
    vars: Vars,
    terms: BTreeMap<WeylKey, Rational>,
}

impl WeylOp {
    pub fn zero(vars: &Vars) -> Self {
        WeylOp { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let n = vars.len();
        Self::monomial(vars, vec![0; n], vec![0; n], c)
    }

    pub fn monomial(vars: &Vars, x: Exponents, d: Exponents, c: Rational) -> Self {
        let mut op = Self::zero(vars);
        op.add_term(x, d, c);
        op
    }

    /// Multiplication by the coordinate `x_i`.
    pub fn coord(vars: &Vars, i: usize) -> Self {
        let mut x = vec![0; vars.len()];
        x[i] = 1;
        Self::monomial(vars, x, vec![0; vars.len()], Rational::one())
    }

    /// The partial derivative `∂_i`.
    pub fn partial(vars: &Vars, i: usize) -> Self {
        let mut d = vec![0; vars.len()];
        d[i] = 1;
        Self::monomial(vars, vec![0; vars.len()], d, Rational::one())
    }

    /// Multiplication by a polynomial.
    pub fn from_poly(f: &ExactPoly) -> Self {
        let n = f.nvars();
        let mut op = Self::zero(f.vars());
        for (e, c) in f.terms() {
            op.add_term(e.clone(), vec![0; n], c.clone());
        }
        op
    }

    /// `Σ f_β ∂^β` from coefficient polynomials keyed by derivative exponents.
    pub fn from_coefficients<'a, I>(vars: &Vars, parts: I) -> Self
    where
        I: IntoIterator<Item = (&'a Exponents, &'a ExactPoly)>,
    {
        let mut op = Self::zero(vars);
        for (d, f) in parts {
            for (e, c) in f.terms() {
                op.add_term(e.clone(), d.clone(), c.clone());
            }
        }
        op
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, x: &[u32], d: &[u32]) -> Rational {
        self.terms.get(&(x.to_vec(), d.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, x: Exponents, d: Exponents, c: Rational) {
        debug_assert_eq!(x.len(), self.vars.len());
        debug_assert_eq!(d.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        let key = (x, d);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_arity(&self, other_len: usize) -> Result<()> {
        if self.vars.len() != other_len {
            return Err(Error::ArityMismatch { expected: self.vars.len(), found: other_len });
        }
        Ok(())
    }

    /// Highest derivative order, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(_, d)| total_degree(d)).max()
    }

    /// Scaling weights `deg x - deg ∂` occurring in the operator.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.terms.keys().map(|(x, d)| total_degree(x) as i64 - total_degree(d) as i64).collect();
        w.sort();
        w.dedup();
        w
    }

    /// Coefficient polynomials `f_β` with `self = Σ f_β ∂^β`.
    pub fn coefficients(&self) -> BTreeMap<Exponents, ExactPoly> {
        let mut out: BTreeMap<Exponents, ExactPoly> = BTreeMap::new();
        for ((x, d), c) in &self.terms {
            out.entry(d.clone()).or_insert_with(|| ExactPoly::zero(&self.vars)).add_term(x.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> WeylOp {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        WeylOp { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Normal-ordered product.
    pub fn try_mul(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_arity(other.nvars())?;
        let mut out = WeylOp::zero(&self.vars);
        for ((a, b), c1) in &self.terms {
            for ((g, dl), c2) in &other.terms {
                let coef = c1 * c2;
                reorder_into(&mut out, a, b, g, dl, &coef);
            }
        }
        Ok(out)
    }

    /// `f · P` for a polynomial `f`, cheaper than a full product.
    pub fn left_mul_poly(&self, f: &ExactPoly) -> WeylOp {
        let mut out = WeylOp::zero(&self.vars);
        for (e, c) in f.terms() {
            for ((x, d), v) in &self.terms {
                let xe: Exponents = x.iter().zip(e).map(|(p, q)| p + q).collect();
                out.add_term(xe, d.clone(), c * v);
            }
        }
        out
    }

    pub fn commutator(&self, other: &WeylOp) -> Result<WeylOp> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    pub fn pow(&self, n: u32) -> WeylOp {
        let mut acc = WeylOp::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Action on polynomials.
    pub fn apply(&self, f: &ExactPoly) -> Result<ExactPoly> {
        self.check_arity(f.nvars())?;
        let mut out = ExactPoly::zero(&self.vars);
        // group by derivative so each ∂^β f is computed once
        for (d, coef) in self.coefficients() {
            let df = f.derivative_multi(&d);
            if df.is_zero() {
                continue;
            }
            out = &out + &(&coef * &df);
        }
        Ok(out)
    }

    /// Replaces every coefficient polynomial by its normal form in `ring`.
    pub fn reduce_coefficients(&self, ring: &QuotientRing) -> Result<WeylOp> {
        let mut parts = BTreeMap::new();
        for (d, f) in self.coefficients() {
            let nf = ring.normal_form(&f)?;
            if !nf.is_zero() {
                parts.insert(d, nf);
            }
        }
        Ok(WeylOp::from_coefficients(&self.vars, parts.iter()))
    }

    pub fn is_vector_field(&self) -> bool {
        self.terms.keys().all(|(_, d)| total_degree(d) == 1)
    }

    /// Text form `coef * a^i b^j c^k d^l * Da^p Db^q Dc^r Dd^s + ...`.
    pub fn parse(vars: &Vars, s: &str) -> Result<WeylOp> {
        let mut op = WeylOp::zero(vars);
        for (sign, term) in split_signed_terms(s)? {
            let (c, x, d) = parse_weyl_term(vars, term)?;
            op.add_term(x, d, c * rat(sign));
        }
        Ok(op)
    }

    pub fn to_json_terms(&self) -> Vec<WeylTermJson> {
        self.terms
            .iter()
            .map(|((x, d), c)| WeylTermJson { coef: format_rational(c), x: x.clone(), d: d.clone() })
            .collect()
    }

    pub fn from_json_terms(vars: &Vars, terms: &[WeylTermJson]) -> Result<WeylOp> {
        let mut op = WeylOp::zero(vars);
        for t in terms {
            if t.x.len() != vars.len() || t.d.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), found: t.x.len().max(t.d.len()) });
            }
            op.add_term(t.x.clone(), t.d.clone(), parse_rational(&t.coef)?);
        }
        Ok(op)
    }
}

/// Adds `coef · x^a ∂^b · x^g ∂^dl` to `out`, normal ordered.
fn reorder_into(out: &mut WeylOp, a: &[u32], b: &[u32], g: &[u32], dl: &[u32], coef: &Rational) {
    let n = a.len();
    let limits: Vec<u32> = b.iter().zip(g).map(|(p, q)| *p.min(q)).collect();
    let mut k = vec![0u32; n];
    loop {
        let mut c = coef.clone();
        for i in 0..n {
            if k[i] > 0 {
                c *= rat(binomial(b[i], k[i]) * falling(g[i], k[i]));
            }
        }
        let x: Exponents = (0..n).map(|i| a[i] + g[i] - k[i]).collect();
        let d: Exponents = (0..n).map(|i| b[i] - k[i] + dl[i]).collect();
        out.add_term(x, d, c);
        // odometer over 0..=limits
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if k[i] < limits[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64)
}

fn parse_weyl_term(vars: &Vars, term: &str) -> Result<(Rational, Exponents, Exponents)> {
    let mut coef = Rational::one();
    let mut x = vec![0u32; vars.len()];
    let mut d = vec![0u32; vars.len()];
    let cleaned = term.replace('*', " ");
    let mut tokens = cleaned.split_whitespace().peekable();
    if let Some(first) = tokens.peek() {
        if let Ok(c) = parse_rational(first) {
            coef = c;
            tokens.next();
        }
    }
    for tok in tokens {
        let (name, _) = tok.split_once('^').unwrap_or((tok, ""));
        let is_derivative = name.strip_prefix('D').is_some_and(|rest| vars.index_of(rest).is_some());
        let (target, word) = if is_derivative { (&mut d, &tok[1..]) } else { (&mut x, tok) };
        for (t, s) in target.iter_mut().zip(parse_monomial(vars, word)?) {
            *t += s;
        }
    }
    Ok((coef, x, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylTermJson {
    pub coef: String,
    pub x: Exponents,
    pub d: Exponents,
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((x, d), c)| {
                let xs = ExactPoly::format_monomial(&self.vars, x);
                let ds: Vec<String> = names.iter().zip(d).map(|(n, k)| format!("D{n}^{k}")).collect();
                format!("{} * {} * {}", format_rational(c), xs, ds.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp({self})")
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        assert_eq!(self.nvars(), rhs.nvars(), "arity mismatch");
        let mut out = self.clone();
        for ((x, d), c) in &rhs.terms {
            out.add_term(x.clone(), d.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        self + &(-rhs)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        WeylOp { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    /// Panics on arity mismatch; see [`WeylOp::try_mul`].
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        self.try_mul(rhs).expect("arity mismatch in Weyl product")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for WeylOp {
            type Output = WeylOp;
            fn $m(self, rhs: WeylOp) -> WeylOp {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        -&self
    }
}

/// A derivation `Σ p_i ∂_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField(WeylOp);

impl VectorField {
    pub fn new(op: WeylOp) -> Result<Self> {
        if !op.is_vector_field() {
            return Err(Error::Invalid(format!("not a vector field: {op}")));
        }
        Ok(VectorField(op))
    }

    /// `Σ components[i] ∂_i`.
    pub fn from_components(components: &[ExactPoly]) -> Result<Self> {
        let vars =
            components.first().map(|p| p.vars().clone()).ok_or_else(|| Error::Invalid("empty vector field".into()))?;
        if components.len() != vars.len() {
            return Err(Error::ArityMismatch { expected: vars.len(), found: components.len() });
        }
        let mut op = WeylOp::zero(&vars);
        for (i, p) in components.iter().enumerate() {
            if p.nvars() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), found: p.nvars() });
            }
            let mut d = vec![0; vars.len()];
            d[i] = 1;
            for (e, c) in p.terms() {
                op.add_term(e.clone(), d.clone(), c.clone());
            }
        }
        Ok(VectorField(op))
    }

    pub fn parse(vars: &Vars, s: &str) -> Result<Self> {
        Self::new(WeylOp::parse(vars, s)?)
    }

    pub fn op(&self) -> &WeylOp {
        &self.0
    }

    pub fn into_op(self) -> WeylOp {
        self.0
    }

    pub fn vars(&self) -> &Vars {
        self.0.vars()
    }

    /// The coefficient `θ(x_i)` of each `∂_i`.
    pub fn components(&self) -> Vec<ExactPoly> {
        let n = self.0.nvars();
        let mut out = vec![ExactPoly::zero(self.0.vars()); n];
        for ((x, d), c) in self.0.terms() {
            let i = d.iter().position(|&k| k == 1).expect("vector field term");
            out[i].add_term(x.clone(), c.clone());
        }
        out
    }

    pub fn apply(&self, f: &ExactPoly) -> Result<ExactPoly> {
        self.0.apply(f)
    }

    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        VectorField::new(self.0.commutator(&other.0)?)
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField(self.0.scale(c))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `θ(f) = 0`.
pub fn is_relative(theta: &VectorField, f: &ExactPoly) -> Result<bool> {
    Ok(theta.apply(f)?.is_zero())
}

/// Whether `P` maps the ideal of `ring`'s relation into itself.
///
/// Exact for vector fields (by Leibniz only `P(rel)` matters); for higher
/// order operators `P(g · rel)` is tested for all monomials `g` of degree at
/// most [`DEFAULT_IDEAL_BOUND`].
pub fn preserves_ideal(p: &WeylOp, ring: &QuotientRing) -> Result<bool> {
    preserves_ideal_bounded(p, ring, DEFAULT_IDEAL_BOUND)
}

pub fn preserves_ideal_bounded(p: &WeylOp, ring: &QuotientRing, bound: u32) -> Result<bool> {
    let Some(rel) = ring.relation() else {
        return Ok(true);
    };
    if p.order().unwrap_or(0) == 0 {
        return Ok(true);
    }
    if p.is_vector_field() {
        return ring.contains(&p.apply(&rel)?);
    }
    for g in crate::exactalg::poly::monomials_up_to(rel.nvars(), bound) {
        let gr = rel.mul_monomial(&g, &Rational::one());
        if !ring.contains(&p.apply(&gr)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds `Σ c ∂_i`-style fields on `a, b, c, d` from text; panics on bad
/// input. For built-in tables only.
pub(crate) fn abcd_field(s: &str) -> VectorField {
    VectorField::parse(&Vars::abcd(), s).expect("built-in vector field")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Vars {
        Vars::abcd()
    }

    fn op(s: &str) -> WeylOp {
        WeylOp::parse(&v(), s).unwrap()
    }

    fn poly(s: &str) -> ExactPoly {
        ExactPoly::parse(&v(), s).unwrap()
    }

    /// Word-rewriting oracle: generators are `(var, is_derivative)`; the only
    /// rule is `∂_i x_j -> x_j ∂_i + δ_ij`.
    fn normal_order_word(n: usize, word: &[(usize, bool)]) -> WeylOp {
        let vars = v();
        let mut pending: Vec<(Vec<(usize, bool)>, Rational)> = vec![(word.to_vec(), Rational::one())];
        let mut out = WeylOp::zero(&vars);
        while let Some((w, c)) = pending.pop() {
            match w.windows(2).position(|p| p[0].1 && !p[1].1) {
                Some(i) => {
                    let (di, xj) = (w[i].0, w[i + 1].0);
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    pending.push((swapped, c.clone()));
                    if di == xj {
                        let mut dropped = w.clone();
                        dropped.drain(i..i + 2);
                        pending.push((dropped, c));
                    }
                }
                None => {
                    let mut x = vec![0; n];
                    let mut d = vec![0; n];
                    for (k, is_d) in w {
                        if is_d {
                            d[k] += 1;
                        } else {
                            x[k] += 1;
                        }
                    }
                    out.add_term(x, d, c);
                }
            }
        }
        out
    }

    fn word_of(x: &[u32], d: &[u32]) -> Vec<(usize, bool)> {
        let mut w = Vec::new();
        for (i, &k) in x.iter().enumerate() {
            w.extend(std::iter::repeat_n((i, false), k as usize));
        }
        for (i, &k) in d.iter().enumerate() {
            w.extend(std::iter::repeat_n((i, true), k as usize));
        }
        w
    }

    #[test]
    fn derivative_past_coordinate() {
        assert_eq!(&op("Da") * &op("a"), op("a * Da + 1"));
    }

    #[test]
    fn euler_square_on_one_variable() {
        let e = op("a Da");
        assert_eq!(&e * &e, op("a^2 Da^2 + a Da"));
        for k in 0..5u32 {
            let f = ExactPoly::monomial(&v(), vec![k, 0, 0, 0], Rational::one());
            assert_eq!((&e * &e).apply(&f).unwrap(), f.scale(&rat((k * k) as i64)));
        }
    }

    #[test]
    fn product_matches_rewriting_oracle() {
        let pairs = [
            (vec![1, 0, 2, 0], vec![2, 1, 0, 0], vec![3, 1, 0, 1], vec![0, 0, 1, 2]),
            (vec![0, 0, 0, 0], vec![1, 1, 1, 1], vec![1, 1, 1, 1], vec![0, 0, 0, 0]),
            (vec![2, 0, 0, 0], vec![3, 0, 0, 0], vec![4, 0, 0, 0], vec![1, 0, 0, 0]),
        ];
        for (a, b, g, d) in pairs {
            let lhs = &WeylOp::monomial(&v(), a.clone(), b.clone(), Rational::one())
                * &WeylOp::monomial(&v(), g.clone(), d.clone(), Rational::one());
            let mut word = word_of(&a, &b);
            word.extend(word_of(&g, &d));
            assert_eq!(lhs, normal_order_word(4, &word));
        }
    }

    #[test]
    fn apply_examples() {
        assert_eq!(op("Da").apply(&poly("a^2")).unwrap(), poly("2 a"));
        let eu = op("1 + a Da + b Db + c Dc + d Dd");
        assert_eq!(eu.apply(&poly("1")).unwrap(), poly("1"));
        assert!(op("c Da + d Db").apply(&poly("a d - b c")).unwrap().is_zero());
    }

    #[test]
    fn relative_fields() {
        let det = poly("a d - b c");
        let f = |s: &str| VectorField::parse(&v(), s).unwrap();
        assert!(is_relative(&f("c Da + d Db"), &det).unwrap());
        assert!(!is_relative(&f("a Da"), &det).unwrap());
        assert!(is_relative(&f("a Da - d Dd"), &det).unwrap());
    }

    #[test]
    fn ideal_preservation() {
        assert!(preserves_ideal(&op("c Da + d Db"), &QuotientRing::horocycle()).unwrap());
        assert!(!preserves_ideal(&op("a Da"), &QuotientRing::sl2()).unwrap());
        assert!(preserves_ideal(&op("a"), &QuotientRing::sl2()).unwrap());
        // Euler operator preserves the homogeneous ideal but not the SL2 one
        assert!(preserves_ideal(&op("a Da + b Db + c Dc + d Dd"), &QuotientRing::horocycle()).unwrap());
        assert!(!preserves_ideal(&op("a Da + b Db + c Dc + d Dd"), &QuotientRing::sl2()).unwrap());
        // second order: Da Dd - Db Dc kills det but not det * a
        assert!(!preserves_ideal(&op("Da Dd - Db Dc"), &QuotientRing::horocycle()).unwrap());
    }

    #[test]
    fn text_and_json_round_trip() {
        let p = op("3/2 * a^2 b^0 c^0 d^1 * Da^1 Db^0 Dc^0 Dd^0 - 1/3 * c Dd^2 + 7");
        assert_eq!(WeylOp::parse(&v(), &p.to_string()).unwrap(), p);
        let js = serde_json::to_string(&p.to_json_terms()).unwrap();
        let back: Vec<WeylTermJson> = serde_json::from_str(&js).unwrap();
        assert_eq!(WeylOp::from_json_terms(&v(), &back).unwrap(), p);
    }

    #[test]
    fn vector_field_components() {
        let f = VectorField::parse(&v(), "-a Dc - b Dd").unwrap();
        let comps = f.components();
        assert_eq!(comps[2], poly("-a"));
        assert_eq!(comps[3], poly("-b"));
        assert!(VectorField::new(op("Da Db")).is_err());
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::action::builtin_lr_action_mat2;
    use crate::exactalg::poly::monomials_of_degree;
    use crate::exactalg::rational::rat;
    use crate::exactalg::ring::det_poly;
    use crate::linalg::QMatrix;
    use crate::testkit::{config, poly, vector_field, weyl_op};

    fn linear_coords(theta: &VectorField) -> Vec<Rational> {
        let monos = monomials_of_degree(4, 1);
        theta.components().iter().flat_map(|c| monos.iter().map(|e| c.coefficient(e)).collect::<Vec<_>>()).collect()
    }

    proptest! {
        #![proptest_config(config(100))]

        #[test]
        fn multiplication_is_associative(p in weyl_op(), q in weyl_op(), r in weyl_op()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn apply_intertwines_composition(p in weyl_op(), q in weyl_op(), f in poly(4, 5)) {
            prop_assert_eq!((&p * &q).apply(&f).unwrap(), p.apply(&q.apply(&f).unwrap()).unwrap());
        }

        #[test]
        fn jacobi_identity(x in vector_field(2), y in vector_field(2), z in vector_field(2)) {
            let br = |u: &VectorField, v: &VectorField| u.bracket(v).unwrap();
            let sum = &(br(&x, &br(&y, &z)).op() + br(&y, &br(&z, &x)).op()) + br(&z, &br(&x, &y)).op();
            prop_assert!(sum.is_zero());
        }

        /// `p∂a + q∂b + r∂c + s∂d` with linear coefficients kills `ad - bc`
        /// iff `pd - qc - rb + sa = 0` iff it lies in the span of the six table fields.
        #[test]
        fn linear_relative_fields(
            coeffs in prop::collection::vec(-2i64..3, 16),
            mix in prop::collection::vec(-2i64..3, 6),
            from_table in any::<bool>(),
        ) {
            let act = builtin_lr_action_mat2();
            let theta = if from_table {
                let mut op = WeylOp::zero(&Vars::abcd());
                for (f, c) in act.fields().iter().zip(&mix) {
                    op = &op + &f.op().scale(&rat(*c));
                }
                VectorField::new(op).unwrap()
            } else {
                let monos = monomials_of_degree(4, 1);
                let comps: Vec<ExactPoly> = coeffs
                    .chunks(4)
                    .map(|ch| ExactPoly::from_terms(&Vars::abcd(), ch.iter().map(|&c| rat(c)).zip(monos.iter().cloned())))
                    .collect();
                VectorField::from_components(&comps).unwrap()
            };
            let c = theta.components();
            let v = Vars::abcd();
            let x = |i| ExactPoly::var(&v, i);
            let criterion = &(&(&c[0] * &x(3)) - &(&c[1] * &x(2))) - &(&(&c[2] * &x(1)) - &(&c[3] * &x(0)));
            let relative = is_relative(&theta, &det_poly()).unwrap();
            let mut rows: Vec<Vec<Rational>> = act.fields().iter().map(linear_coords).collect();
            rows.push(linear_coords(&theta));
            let in_span = QMatrix::from_rows(rows).rank() == 6;
            prop_assert_eq!(relative, criterion.is_zero());
            prop_assert_eq!(relative, in_span);
            if from_table {
                prop_assert!(relative);
            }
        }
    }
}
