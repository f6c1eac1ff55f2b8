//! Asymptotic exponents of matrix coefficients on the negative chamber.
//!
//! With `n = span(E)`, `a = span(H)` and `a_t = diag(e^t, e^{-t})`, the
//! exponents of a finite-dimensional representation are read off the
//! `H`-action on `V / E·V`. The oracle evaluates `Sym^m` at `diag(s, 1/s)`
//! directly, expanding `(p x + r y)^{m-i} (q x + t y)^i` with Laurent
//! polynomial entries.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::rational::{rat, to_i64, Rational};
use crate::lie::desc::{sl2_index, LieAlgebraDesc};
use crate::lie::rep::{external_tensor, sym_power_rep, FinDimRep};
use crate::linalg::{jordan_data, QMatrix};
use crate::report::Report;

/// Iwasawa data inside `sl2`, as coordinates in the basis `F, H, E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFormData {
    #[serde(with = "crate::exactalg::rational::serde_vec")]
    pub n: Vec<Rational>,
    #[serde(with = "crate::exactalg::rational::serde_vec")]
    pub a: Vec<Rational>,
    /// `-1`: the chamber is `t → -∞` for `a_t = diag(e^t, e^{-t})`.
    pub chamber_sign: i8,
}

impl RealFormData {
    pub fn iwasawa() -> Self {
        RealFormData { n: vec![rat(0), rat(0), rat(1)], a: vec![rat(0), rat(1), rat(0)], chamber_sign: -1 }
    }

    /// `[a, n] ⊆ n`.
    pub fn is_valid(&self) -> bool {
        let g = LieAlgebraDesc::sl2();
        let br = g.bracket_vec(&self.a, &self.n);
        let m = QMatrix::from_rows(vec![self.n.clone(), br]);
        self.n.iter().any(|x| !x.is_zero()) && m.rank() == 1
    }
}

/// Pairs `(λ, k)`: generalized eigenvalue and Jordan block size minus one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSet(pub Vec<(String, u32)>);

impl ExponentSet {
    pub fn values(&self) -> Vec<Rational> {
        self.0.iter().map(|(l, _)| crate::exactalg::rational::parse_rational(l).expect("stored rational")).collect()
    }

    pub fn is_semisimple(&self) -> bool {
        self.0.iter().all(|(_, k)| *k == 0)
    }
}

/// Exponents of an endomorphism: one entry per Jordan block.
pub fn exponents_of(h: &QMatrix) -> Result<ExponentSet> {
    let mut out = Vec::new();
    for b in jordan_data(h)? {
        for s in &b.block_sizes {
            out.push((crate::exactalg::rational::format_rational(&b.value), (*s - 1) as u32));
        }
    }
    Ok(ExponentSet(out))
}

/// `V / n·V` with the induced action of `a`.
pub fn n_coinvariants(v: &FinDimRep, rf: &RealFormData) -> (QMatrix, QMatrix) {
    let image = v.lie_matrix(&rf.n);
    let p = QMatrix::from_rows_with_cols(image.left_kernel(), v.dim());
    if p.nrows() == 0 {
        return (p, QMatrix::zeros(0, 0));
    }
    let pt = p.transpose();
    let r = pt.mul(&p.mul(&pt).inverse().expect("full row rank"));
    let h = p.mul(&v.lie_matrix(&rf.a)).mul(&r);
    (p, h)
}

pub fn exponents_from_coinvariants(v: &FinDimRep, rf: &RealFormData) -> Result<ExponentSet> {
    if v.algebra() != &LieAlgebraDesc::sl2() {
        return Err(Error::Unsupported("exponents of non-sl2 representations".into()));
    }
    exponents_of(&n_coinvariants(v, rf).1)
}

type Laurent = BTreeMap<i64, Rational>;

fn laurent_mul(x: &Laurent, y: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, a) in x {
        for (j, b) in y {
            *out.entry(i + j).or_insert_with(Rational::zero) += a * b;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Polynomials in `x, y` with Laurent coefficients, keyed by the power of `y`.
type Binary = BTreeMap<u32, Laurent>;

fn binary_mul(u: &Binary, v: &Binary) -> Binary {
    let mut out = Binary::new();
    for (i, a) in u {
        for (j, b) in v {
            let e = out.entry(i + j).or_default();
            for (k, c) in laurent_mul(a, b) {
                *e.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
    }
    for l in out.values_mut() {
        l.retain(|_, c| !c.is_zero());
    }
    out.retain(|_, l| !l.is_empty());
    out
}

/// Matrix of `Sym^m(g)` for `g = [[p, q], [r, t]]` on the basis
/// `x^{m-i} y^i`, where `g` sends `x ↦ p x + r y` and `y ↦ q x + t y`.
pub fn sym_power_group_matrix(m: u32, g: [&Laurent; 4]) -> Vec<Vec<Laurent>> {
    let [p, q, r, t] = g;
    let gx: Binary = [(0, p.clone()), (1, r.clone())].into_iter().filter(|(_, l)| !l.is_empty()).collect();
    let gy: Binary = [(0, q.clone()), (1, t.clone())].into_iter().filter(|(_, l)| !l.is_empty()).collect();
    let one: Binary = [(0u32, Laurent::from([(0, Rational::one())]))].into_iter().collect();
    let n = m as usize + 1;
    let mut cols = Vec::with_capacity(n);
    for i in 0..=m {
        let mut img = one.clone();
        for _ in 0..(m - i) {
            img = binary_mul(&img, &gx);
        }
        for _ in 0..i {
            img = binary_mul(&img, &gy);
        }
        cols.push(img);
    }
    (0..n).map(|row| (0..n).map(|col| cols[col].get(&(row as u32)).cloned().unwrap_or_default()).collect()).collect()
}

/// Laurent exponents of `s` across all entries of `Sym^m(diag(s, 1/s))`.
pub fn matrix_coefficient_exponents(m: u32) -> BTreeSet<i64> {
    let s = Laurent::from([(1, Rational::one())]);
    let sinv = Laurent::from([(-1, Rational::one())]);
    let zero = Laurent::new();
    sym_power_group_matrix(m, [&s, &zero, &zero, &sinv]).iter().flatten().flat_map(|l| l.keys().copied()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub m: u32,
    pub coinvariant_exponents: Vec<(String, u32)>,
    pub oracle_exponents: Vec<i64>,
    pub leading: i64,
    pub pass: bool,
}

pub fn exponent_report(m: u32) -> Result<ExponentReport> {
    let ex = exponents_from_coinvariants(&sym_power_rep(m as usize), &RealFormData::iwasawa())?;
    let oracle = matrix_coefficient_exponents(m);
    let leading = *oracle.iter().next().expect("nonempty oracle");
    let values: Vec<i64> = ex.values().iter().filter_map(to_i64).collect();
    let pass = values.len() == ex.0.len()
        && values.contains(&leading)
        && values.iter().all(|v| oracle.contains(v))
        && ex.is_semisimple()
        && ex.0.len() == 1;
    Ok(ExponentReport { m, coinvariant_exponents: ex.0, oracle_exponents: oracle.into_iter().collect(), leading, pass })
}

/// The leading oracle exponent is a coinvariant exponent, every coinvariant
/// exponent occurs in the oracle, the coinvariants are one-dimensional and
/// the Cartan action on them is semisimple.
pub fn leading_exponent_check(m: u32) -> Result<Report> {
    let rep = exponent_report(m)?;
    let mut r = Report::new("exponents", json!({ "m": m }));
    let values: Vec<i64> = rep.coinvariant_exponents.iter().filter_map(|(l, _)| l.parse().ok()).collect();
    r.compare(format!("m={m}: coinvariant dimension"), 1, rep.coinvariant_exponents.len());
    r.compare(
        format!("m={m}: log powers"),
        vec![0u32; values.len()],
        rep.coinvariant_exponents.iter().map(|x| x.1).collect(),
    );
    r.compare(
        format!("m={m}: leading exponent {} is a coinvariant exponent", rep.leading),
        true,
        values.contains(&rep.leading),
    );
    r.compare(
        format!("m={m}: coinvariant exponents within oracle"),
        true,
        values.iter().all(|v| rep.oracle_exponents.contains(v)),
    );
    // the bimodule form: V ⊠ V* by E⊗1 and 1⊗F, eigenvalue of H⊗1
    let v = sym_power_rep(m as usize);
    let b = external_tensor(&v, &v.dual());
    let pair = b.algebra().clone();
    let mut e1 = vec![rat(0); 6];
    e1[sl2_index::E] = rat(1);
    let mut f2 = vec![rat(0); 6];
    f2[3 + sl2_index::F] = rat(1);
    let image = b.lie_matrix(&e1).hstack(&b.lie_matrix(&f2));
    let p = QMatrix::from_rows_with_cols(image.left_kernel(), b.dim());
    let mut h1 = vec![rat(0); pair.dim()];
    h1[sl2_index::H] = rat(1);
    let pt = p.transpose();
    let induced = p.mul(&b.lie_matrix(&h1)).mul(&pt.mul(&p.mul(&pt).inverse().expect("full row rank")));
    r.compare(
        format!("m={m}: bimodule form exponents"),
        ExponentSet(rep.coinvariant_exponents.clone()),
        exponents_of(&induced)?,
    );
    Ok(r)
}

pub fn exponents_suite(max_m: u32) -> Result<Report> {
    let mut r = Report::new("exponents", json!({ "max_m": max_m }));
    for m in 0..=max_m {
        for it in leading_exponent_check(m)?.items {
            r.item(it.name, it.expected, it.got, it.pass);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(matrix_coefficient_exponents(0), set(&[0]));
        assert_eq!(matrix_coefficient_exponents(1), set(&[-1, 1]));
        assert_eq!(matrix_coefficient_exponents(2), set(&[-2, 0, 2]));
    }

    #[test]
    fn oracle_group_law() {
        // Sym^2 of a unipotent matrix: (x, y) ↦ (x, x + y)
        let one = Laurent::from([(0, Rational::one())]);
        let zero = Laurent::new();
        let mat = sym_power_group_matrix(2, [&one, &one, &zero, &one]);
        let entry = |i: usize, j: usize| mat[i][j].get(&0).cloned().unwrap_or_default();
        // y^2 ↦ (x + y)^2 = x^2 + 2xy + y^2
        assert_eq!((entry(0, 2), entry(1, 2), entry(2, 2)), (rat(1), rat(2), rat(1)));
    }

    #[test]
    fn coinvariant_exponents() {
        let rf = RealFormData::iwasawa();
        assert!(rf.is_valid());
        let ex = |m| exponents_from_coinvariants(&sym_power_rep(m), &rf).unwrap();
        assert_eq!(ex(0), ExponentSet(vec![("0".into(), 0)]));
        assert_eq!(ex(1), ExponentSet(vec![("-1".into(), 0)]));
        assert_eq!(ex(2), ExponentSet(vec![("-2".into(), 0)]));
    }

    #[test]
    fn leading_checks() {
        for m in [0, 1, 4] {
            assert!(leading_exponent_check(m).unwrap().pass, "m={m}");
        }
        assert_eq!(exponent_report(4).unwrap().leading, -4);
    }

    /// Synthetic: a non-semisimple Cartan action has a log power.
    #[test]
    fn synthetic_jordan_block() {
        let h = QMatrix::from_i64(&[&[-2, 1], &[0, -2]]);
        let ex = exponents_of(&h).unwrap();
        assert_eq!(ex, ExponentSet(vec![("-2".into(), 1)]));
        assert!(!ex.is_semisimple());
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::testkit::config;

    proptest! {
        #![proptest_config(config(18))]

        #[test]
        fn coinvariant_exponents_within_oracle(m in 0u32..9) {
            let rep = exponent_report(m).unwrap();
            prop_assert!(rep.pass);
            prop_assert_eq!(rep.coinvariant_exponents.len(), 1);
            prop_assert!(rep.coinvariant_exponents.iter().all(|(_, k)| *k == 0));
            prop_assert_eq!(rep.leading, -(m as i64));
        }
    }
}
