//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! (and therefore every printed or serialized form) is deterministic. The
//! monomial order used for division is degree-lexicographic with the
//! variables ordered as declared (`a > b > c > d` for the built-in rings).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, rat, Rational};
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

/// Ordered variable names shared between polynomials of the same ring.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// The coordinates `a, b, c, d` of 2x2 matrices.
    pub fn abcd() -> Self {
        static ABCD: OnceLock<Vars> = OnceLock::new();
        ABCD.get_or_init(|| Vars::new(&["a", "b", "c", "d"])).clone()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Degree-lexicographic comparison.
pub fn deglex_cmp(x: &[u32], y: &[u32]) -> Ordering {
    total_degree(x).cmp(&total_degree(y)).then_with(|| x.cmp(y))
}

pub fn divides(small: &[u32], big: &[u32]) -> bool {
    small.iter().zip(big).all(|(s, b)| s <= b)
}

/// All exponent vectors of `nvars` variables with total degree exactly `degree`,
/// in deterministic (lexicographically descending) order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Monomials of total degree at most `degree`, grouped by increasing degree.
pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Exponents> {
    (0..=degree).flat_map(|d| monomials_of_degree(nvars, d)).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExactPoly {
    vars: Vars,
    terms: BTreeMap<Exponents, Rational>,
}

impl ExactPoly {
    pub fn zero(vars: &Vars) -> Self {
        ExactPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn monomial(vars: &Vars, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        ExactPoly { vars: vars.clone(), terms }
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    /// Builds from `(coefficient, exponents)` pairs, merging duplicates.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Exponents)>,
    {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(vars: &Vars, terms: &[(i64, [u32; 4])]) -> Self {
        Self::from_terms(vars, terms.iter().map(|(c, e)| (rat(*c), e.to_vec())))
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, Rational> {
        self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    /// Leading term under degree-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().max_by(|x, y| deglex_cmp(x.0, y.0))
    }

    pub fn check_arity(&self, other: &ExactPoly) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: other.nvars() });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> ExactPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        ExactPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Multiplies by the monomial `c * x^e`.
    pub fn mul_monomial(&self, e: &[u32], c: &Rational) -> ExactPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.iter().zip(e).map(|(x, y)| x + y).collect(), v * c)).collect();
        ExactPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> ExactPoly {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> ExactPoly {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * rat(i64::from(e[i])));
        }
        out
    }

    /// Applies `d^k / dx_i^k` for every `i` at once, i.e. `∂^k`.
    pub fn derivative_multi(&self, k: &[u32]) -> ExactPoly {
        let mut out = Self::zero(&self.vars);
        'terms: for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut f = e.clone();
            for (i, &ki) in k.iter().enumerate() {
                if ki > e[i] {
                    continue 'terms;
                }
                for j in 0..ki {
                    coef *= rat(i64::from(e[i] - j));
                }
                f[i] -= ki;
            }
            out.add_term(f, coef);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; all images share a ring.
    pub fn compose(&self, images: &[ExactPoly]) -> Result<ExactPoly> {
        if images.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        let mut out = ExactPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = ExactPoly::constant(&target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = &t * &img.pow(k);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> ExactPoly {
        ExactPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits by total degree modulo `step`; empty residues are omitted.
    pub fn residue_components(&self, step: u32) -> Vec<(u32, ExactPoly)> {
        let mut parts: BTreeMap<u32, ExactPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(total_degree(e) % step)
                .or_insert_with(|| ExactPoly::zero(&self.vars))
                .add_term(e.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Division with remainder by a single divisor under degree-lex order.
    /// The remainder has no term divisible by the divisor's leading monomial.
    pub fn div_rem(&self, divisor: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
        self.check_arity(divisor)?;
        let (lead_e, lead_c) = divisor
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or_else(|| Error::Invalid("division by zero polynomial".into()))?;
        let mut p = self.clone();
        let mut q = ExactPoly::zero(&self.vars);
        let mut r = ExactPoly::zero(&self.vars);
        while let Some((e, c)) = p.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if divides(&lead_e, &e) {
                let shift: Exponents = e.iter().zip(&lead_e).map(|(x, y)| x - y).collect();
                let coef = &c / &lead_c;
                p = &p - &divisor.mul_monomial(&shift, &coef);
                q.add_term(shift, coef);
            } else {
                p.terms.remove(&e);
                r.add_term(e, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &ExactPoly) -> Result<Option<ExactPoly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(e, c)| TermJson { coef: format_rational(c), exp: e.clone() }).collect()
    }

    pub fn from_json_terms(vars: &Vars, terms: &[TermJson]) -> Result<ExactPoly> {
        let mut p = ExactPoly::zero(vars);
        for t in terms {
            if t.exp.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), found: t.exp.len() });
            }
            p.add_term(t.exp.clone(), parse_rational(&t.coef)?);
        }
        Ok(p)
    }

    /// Parses the text form `coef * a^i b^j c^k d^l + ...`.
    ///
    /// Exponents may be omitted (`a` means `a^1`, absent variables have
    /// exponent zero), and the coefficient with its `*` may be dropped.
    pub fn parse(vars: &Vars, s: &str) -> Result<ExactPoly> {
        let mut p = ExactPoly::zero(vars);
        for (sign, term) in split_signed_terms(s)? {
            let (coef, mono) = parse_term(vars, term)?;
            p.add_term(mono, coef * rat(sign));
        }
        Ok(p)
    }

    /// Writes a monomial as `a^i b^j c^k d^l`, every variable present.
    pub fn format_monomial(vars: &Vars, e: &[u32]) -> String {
        vars.names().iter().zip(e).map(|(n, k)| format!("{n}^{k}")).collect::<Vec<_>>().join(" ")
    }
}

/// Splits `s` on top-level `+`/`-` separators, keeping signs. A `-` that
/// directly follows `/` or `*` belongs to a coefficient and is not a split.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(i64, &str)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut sign = 1i64;
    let mut i = 0;
    // leading sign
    while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-' || bytes[i] == b' ') {
        if bytes[i] == b'-' {
            sign = -sign;
        }
        i += 1;
        start = i;
    }
    let mut prev_sig: Option<u8> = None;
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && !matches!(prev_sig, Some(b'/') | Some(b'*') | Some(b'^')) {
            let term = s[start..i].trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            out.push((sign, term));
            sign = if b == b'-' { -1 } else { 1 };
            i += 1;
            while i < bytes.len() && (bytes[i] == b' ' || bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            start = i;
            prev_sig = None;
            continue;
        }
        if b != b' ' {
            prev_sig = Some(b);
        }
        i += 1;
    }
    let term = s[start..].trim();
    if term.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    out.push((sign, term));
    Ok(out)
}

/// Parses a monomial word such as `a^2 b d^1`; returns exponents.
pub(crate) fn parse_monomial(vars: &Vars, word: &str) -> Result<Exponents> {
    let mut e = vec![0u32; vars.len()];
    for tok in word.split_whitespace() {
        let (name, k) = match tok.split_once('^') {
            Some((n, k)) => (n, k.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
            None => (tok, 1),
        };
        let i = vars.index_of(name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
        e[i] += k;
    }
    Ok(e)
}

fn parse_term(vars: &Vars, term: &str) -> Result<(Rational, Exponents)> {
    let term = term.trim();
    match term.split_once('*') {
        Some((c, m)) => Ok((parse_rational(c)?, parse_monomial(vars, m)?)),
        None => {
            if let Ok(c) = parse_rational(term) {
                return Ok((c, vec![0; vars.len()]));
            }
            // `3/2 a b` with the `*` omitted
            if let Some((c, m)) = term.split_once(char::is_whitespace) {
                if let Ok(c) = parse_rational(c) {
                    return Ok((c, parse_monomial(vars, m)?));
                }
            }
            Ok((Rational::one(), parse_monomial(vars, term)?))
        }
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest deglex term first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|x, y| deglex_cmp(y.0, x.0));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| format!("{} * {}", format_rational(c), Self::format_monomial(&self.vars, e)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPoly({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub exp: Exponents,
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        assert_eq!(self.nvars(), rhs.nvars(), "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        assert_eq!(self.nvars(), rhs.nvars(), "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        assert_eq!(self.nvars(), rhs.nvars(), "arity mismatch");
        let mut out = ExactPoly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactPoly {
            type Output = ExactPoly;
            fn $m(self, rhs: ExactPoly) -> ExactPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::ratio;

    fn p(s: &str) -> ExactPoly {
        ExactPoly::parse(&Vars::abcd(), s).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let f = p("1/2 * a^1 b^0 c^2 d^0 - 3 * a^0 b^1 c^0 d^1 + 7");
        let text = f.to_string();
        assert_eq!(ExactPoly::parse(&Vars::abcd(), &text).unwrap(), f);
        assert_eq!(f.coefficient(&[1, 0, 2, 0]), ratio(1, 2));
        assert_eq!(f.coefficient(&[0, 1, 0, 1]), rat(-3));
    }

    #[test]
    fn parse_shorthand_and_negative_coefficients() {
        assert_eq!(p("a d - b c"), p("1 * a^1 d^1 + -1 * b^1 c^1"));
        assert_eq!(p("-1/2 * a"), ExactPoly::var(&Vars::abcd(), 0).scale(&ratio(-1, 2)));
        assert!(ExactPoly::parse(&Vars::abcd(), "a + x").is_err());
        assert!(ExactPoly::parse(&Vars::abcd(), "a +").is_err());
    }

    #[test]
    fn leading_term_is_deglex() {
        let det = p("a d - b c - 1");
        assert_eq!(det.leading_term().unwrap().0, &vec![1, 0, 0, 1]);
    }

    #[test]
    fn division_by_determinant() {
        let det = p("a d - b c");
        let f = &(&det * &det) * &p("a + 2 b");
        let q = f.exact_div(&det).unwrap().unwrap();
        assert_eq!(q, &det * &p("a + 2 b"));
        assert!(p("a b").exact_div(&det).unwrap().is_none());
    }

    #[test]
    fn derivatives() {
        let f = p("a^3 b");
        assert_eq!(f.derivative(0), p("3 * a^2 b"));
        assert_eq!(f.derivative_multi(&[2, 1, 0, 0]), p("6 * a"));
        assert!(f.derivative_multi(&[0, 2, 0, 0]).is_zero());
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_up_to(4, 6).len(), 210);
    }

    #[test]
    fn json_terms_round_trip() {
        let f = p("2/3 * a b^2 - c");
        let j = f.to_json_terms();
        assert_eq!(ExactPoly::from_json_terms(&Vars::abcd(), &j).unwrap(), f);
    }
}
