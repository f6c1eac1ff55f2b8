//! Universal enveloping algebras in PBW normal form.
//!
//! A PBW monomial `x_0^{e_0} x_1^{e_1} ⋯` is stored as its exponent vector.
//! Products are normalized by right multiplication with single generators:
//! if the last letter `x_i` of `M = M' x_i` exceeds the new letter `x_j`,
//! `M' x_i x_j = (M' x_j) x_i + M' [x_i, x_j]`.
//!
//! For `g ⊕ g` with the left summand's basis first, a PBW monomial is exactly
//! a left monomial times a right one, so `U(g ⊕ g) = U(g) ⊗ U(g)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::desc::LieAlgebraDesc;
use crate::exactalg::poly::Exponents;
use crate::exactalg::rational::{format_rational, rat, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct UEnvElement {
    algebra: Arc<LieAlgebraDesc>,
    terms: BTreeMap<Exponents, Rational>,
}

type Terms = BTreeMap<Exponents, Rational>;

fn add_into(out: &mut Terms, e: Exponents, c: Rational) {
    if c.is_zero() {
        return;
    }
    match out.get_mut(&e) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                out.remove(&e);
            }
        }
        None => {
            out.insert(e, c);
        }
    }
}

impl UEnvElement {
    pub fn zero(algebra: &Arc<LieAlgebraDesc>) -> Self {
        UEnvElement { algebra: algebra.clone(), terms: Terms::new() }
    }

    pub fn one(algebra: &Arc<LieAlgebraDesc>) -> Self {
        Self::scalar(algebra, Rational::one())
    }

    pub fn scalar(algebra: &Arc<LieAlgebraDesc>, c: Rational) -> Self {
        let mut u = Self::zero(algebra);
        add_into(&mut u.terms, vec![0; algebra.dim()], c);
        u
    }

    pub fn generator(algebra: &Arc<LieAlgebraDesc>, i: usize) -> Self {
        let mut e = vec![0; algebra.dim()];
        e[i] = 1;
        Self::monomial(algebra, e, Rational::one())
    }

    /// A PBW monomial, given by its exponent vector.
    pub fn monomial(algebra: &Arc<LieAlgebraDesc>, e: Exponents, c: Rational) -> Self {
        assert_eq!(e.len(), algebra.dim());
        let mut u = Self::zero(algebra);
        add_into(&mut u.terms, e, c);
        u
    }

    /// An element of the Lie algebra, by coordinates.
    pub fn from_lie(algebra: &Arc<LieAlgebraDesc>, coords: &[Rational]) -> Self {
        let mut u = Self::zero(algebra);
        for (i, c) in coords.iter().enumerate() {
            let mut e = vec![0; algebra.dim()];
            e[i] = 1;
            add_into(&mut u.terms, e, c.clone());
        }
        u
    }

    /// Normal form of `c · x_{w_0} x_{w_1} ⋯` for an arbitrary word.
    pub fn from_word(algebra: &Arc<LieAlgebraDesc>, word: &[usize], c: Rational) -> Self {
        let mut terms = Terms::new();
        add_into(&mut terms, vec![0; algebra.dim()], c);
        for &j in word {
            terms = rmul_generator_terms(algebra, &terms, j);
        }
        UEnvElement { algebra: algebra.clone(), terms }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraDesc> {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// PBW degree (length of the longest monomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut u = Self::zero(&self.algebra);
        for (e, v) in &self.terms {
            add_into(&mut u.terms, e.clone(), v * c);
        }
        u
    }

    pub fn mul_generator(&self, j: usize) -> Self {
        UEnvElement { algebra: self.algebra.clone(), terms: rmul_generator_terms(&self.algebra, &self.terms, j) }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_central(&self) -> bool {
        (0..self.algebra.dim()).all(|i| {
            let x = Self::generator(&self.algebra, i);
            self.commutator(&x).is_zero()
        })
    }

    /// Image in `U(self ⊕ other)` under `u ↦ u ⊗ 1`, `target` having this
    /// algebra's basis first at `offset`.
    pub fn embed(&self, target: &Arc<LieAlgebraDesc>, offset: usize) -> Self {
        let mut u = Self::zero(target);
        for (e, c) in &self.terms {
            let mut big = vec![0; target.dim()];
            big[offset..offset + e.len()].copy_from_slice(e);
            add_into(&mut u.terms, big, c.clone());
        }
        u
    }
}

/// `terms · x_j` in normal form.
fn rmul_generator_terms(algebra: &LieAlgebraDesc, terms: &Terms, j: usize) -> Terms {
    let mut out = Terms::new();
    for (e, c) in terms {
        rmul_monomial(algebra, e, j, c, &mut out);
    }
    out
}

fn rmul_monomial(algebra: &LieAlgebraDesc, e: &[u32], j: usize, c: &Rational, out: &mut Terms) {
    let last = e.iter().rposition(|&k| k > 0);
    match last {
        Some(i) if i > j => {
            let mut prefix = e.to_vec();
            prefix[i] -= 1;
            // (M' x_j) x_i
            let mut head = Terms::new();
            rmul_monomial(algebra, &prefix, j, &Rational::one(), &mut head);
            for (m, v) in &head {
                rmul_monomial(algebra, m, i, &(c * v), out);
            }
            // M' [x_i, x_j]
            for k in 0..algebra.dim() {
                let s = algebra.constant(i, j, k);
                if !s.is_zero() {
                    rmul_monomial(algebra, &prefix, k, &(c * s), out);
                }
            }
        }
        _ => {
            let mut m = e.to_vec();
            m[j] += 1;
            add_into(out, m, c.clone());
        }
    }
}

/// Expands a PBW monomial into its ordered word of generator indices.
pub fn pbw_word(e: &[u32]) -> Vec<usize> {
    e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect()
}

/// All PBW monomials in `n` generators of total degree at most `degree`.
pub fn pbw_monomials_up_to(n: usize, degree: u32) -> Vec<Exponents> {
    crate::exactalg::poly::monomials_up_to(n, degree)
}

/// The Casimir `Δ = 1 + H² + 2EF + 2FE` of `U(sl2)`.
pub fn casimir_sl2() -> UEnvElement {
    use super::desc::sl2_index::{E, F, H};
    let g = LieAlgebraDesc::sl2();
    let one = UEnvElement::one(&g);
    let h2 = UEnvElement::from_word(&g, &[H, H], rat(1));
    let ef = UEnvElement::from_word(&g, &[E, F], rat(2));
    let fe = UEnvElement::from_word(&g, &[F, E], rat(2));
    &(&(&one + &h2) + &ef) + &fe
}

/// `Δ ⊗ 1` and `1 ⊗ Δ` in `U(sl2 ⊕ sl2)`.
pub fn casimir_pair() -> (UEnvElement, UEnvElement) {
    let pair = LieAlgebraDesc::sl2_pair();
    let d = casimir_sl2();
    (d.embed(&pair, 0), d.embed(&pair, 3))
}

impl fmt::Display for UEnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.algebra.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let word: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                    .collect();
                if word.is_empty() {
                    format_rational(c)
                } else {
                    format!("{} * {}", format_rational(c), word.join(" "))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UEnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UEnvElement({self})")
    }
}

impl Add for &UEnvElement {
    type Output = UEnvElement;
    fn add(self, rhs: &UEnvElement) -> UEnvElement {
        assert_eq!(self.algebra, rhs.algebra, "different enveloping algebras");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            add_into(&mut out.terms, e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &UEnvElement {
    type Output = UEnvElement;
    fn sub(self, rhs: &UEnvElement) -> UEnvElement {
        self + &(-rhs)
    }
}

impl Neg for &UEnvElement {
    type Output = UEnvElement;
    fn neg(self) -> UEnvElement {
        self.scale(&-Rational::one())
    }
}

impl Mul for &UEnvElement {
    type Output = UEnvElement;
    fn mul(self, rhs: &UEnvElement) -> UEnvElement {
        assert_eq!(self.algebra, rhs.algebra, "different enveloping algebras");
        let mut out = Terms::new();
        for (e, c) in &rhs.terms {
            let mut partial = self.terms.clone();
            for j in pbw_word(e) {
                partial = rmul_generator_terms(&self.algebra, &partial, j);
            }
            for (m, v) in partial {
                add_into(&mut out, m, v * c);
            }
        }
        UEnvElement { algebra: self.algebra.clone(), terms: out }
    }
}

#[cfg(test)]
mod tests {
    use super::super::desc::sl2_index::{E, F, H};
    use super::*;

    fn g() -> Arc<LieAlgebraDesc> {
        LieAlgebraDesc::sl2()
    }

    #[test]
    fn ef_rewrites_to_fe_plus_h() {
        let ef = UEnvElement::from_word(&g(), &[E, F], rat(1));
        let expected = &UEnvElement::from_word(&g(), &[F, E], rat(1)) + &UEnvElement::generator(&g(), H);
        assert_eq!(ef, expected);
    }

    #[test]
    fn eh_rewrites() {
        // H < E, so H·E is already normal; E·H = H·E - 2E
        let he = UEnvElement::from_word(&g(), &[H, E], rat(1));
        assert_eq!(he, UEnvElement::monomial(&g(), vec![0, 1, 1], rat(1)));
        let eh = UEnvElement::from_word(&g(), &[E, H], rat(1));
        let expected = &UEnvElement::from_word(&g(), &[H, E], rat(1)) - &UEnvElement::generator(&g(), E).scale(&rat(2));
        assert_eq!(eh, expected);
    }

    #[test]
    fn casimir_pbw_form_and_centrality() {
        let d = casimir_sl2();
        let expected = &(&(&UEnvElement::one(&g()) + &UEnvElement::from_word(&g(), &[H, H], rat(1)))
            + &UEnvElement::from_word(&g(), &[F, E], rat(4)))
            + &UEnvElement::generator(&g(), H).scale(&rat(2));
        assert_eq!(d, expected);
        assert!(d.is_central());
        assert!(!UEnvElement::generator(&g(), E).is_central());
        assert!(UEnvElement::one(&g()).is_central());
        let e = UEnvElement::generator(&g(), E);
        assert!((&(&d * &e) - &(&e * &d)).is_zero());
    }

    #[test]
    fn pair_casimirs_are_central_and_factors_commute() {
        let (d1, d2) = casimir_pair();
        assert!(d1.is_central() && d2.is_central());
        let pair = LieAlgebraDesc::sl2_pair();
        let e1 = UEnvElement::generator(&pair, 2);
        let f2 = UEnvElement::generator(&pair, 3);
        assert!(e1.commutator(&f2).is_zero());
    }

    #[test]
    fn associativity_on_fixed_words() {
        let a = UEnvElement::from_word(&g(), &[E, E, F], rat(1));
        let b = UEnvElement::from_word(&g(), &[H, F, E], rat(2));
        let c = UEnvElement::from_word(&g(), &[E, F, H, F], rat(-1));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::testkit::{config, uenv, word};

    /// Independent rewriting on words: repeatedly pick a random descent
    /// `x_i x_j` (`i > j`) and replace it by `x_j x_i + [x_i, x_j]`.
    fn rewrite_randomly(g: &LieAlgebraDesc, w: &[usize], rng: &mut ChaCha8Rng) -> BTreeMap<Vec<usize>, Rational> {
        let mut pending: Vec<(Vec<usize>, Rational)> = vec![(w.to_vec(), Rational::one())];
        let mut done: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        while let Some((w, c)) = pending.pop() {
            let descents: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&k| w[k] > w[k + 1]).collect();
            if descents.is_empty() {
                *done.entry(w).or_insert_with(Rational::zero) += c;
                continue;
            }
            let k = descents[rng.gen_range(0..descents.len())];
            let mut swapped = w.clone();
            swapped.swap(k, k + 1);
            pending.push((swapped, c.clone()));
            for (l, s) in g.bracket(w[k], w[k + 1]).iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                let mut shorter = w[..k].to_vec();
                shorter.push(l);
                shorter.extend_from_slice(&w[k + 2..]);
                pending.push((shorter, &c * s));
            }
        }
        done.retain(|_, c| !c.is_zero());
        done
    }

    proptest! {
        #![proptest_config(config(100))]

        #[test]
        fn pbw_rewriting_is_confluent(w in word(5), seed in any::<u64>()) {
            let g = LieAlgebraDesc::sl2_pair();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let first = rewrite_randomly(&g, &w, &mut rng);
            let second = rewrite_randomly(&g, &w, &mut rng);
            prop_assert_eq!(&first, &second);
            let normal = UEnvElement::from_word(&g, &w, Rational::one());
            let expected: BTreeMap<Vec<usize>, Rational> = normal.terms().map(|(e, c)| (pbw_word(e), c.clone())).collect();
            prop_assert_eq!(first, expected);
        }

        #[test]
        fn multiplication_is_associative(x in uenv(3), y in uenv(3), z in uenv(3)) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }
    }
}
