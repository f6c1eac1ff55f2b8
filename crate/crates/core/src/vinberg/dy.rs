//! The relation `Δ⊗1 - 1⊗Δ` of `D_Y`.
//!
//! Elements of `O(Y) ⊗ U(g ⊕ g)` are realized as operators `f·μ(u)` on
//! `O(Y)`. The algebra structure is the smash product, `x·f = f·x + x(f)`
//! for `x ∈ g`. With `D = Δ₁ - Δ₂` central in `U`, the two-sided ideal it
//! generates is spanned by `f·D·g·v = f·g·D·v + f·[D, g]·v`.
//!
//! Within a bound on PBW degree and polynomial degree, the ideal elements
//! that fit give a lower bound for the kernel of the realization map, and
//! the kernel of the realization evaluated on test functions of bounded
//! degree gives an upper bound. Equal dimensions certify both.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::action::{builtin_lr_action_horocycle, builtin_lr_action_mat2, moment_map, InfinitesimalAction};
use crate::error::{Error, Result};
use crate::exactalg::poly::{ExactPoly, Exponents};
use crate::exactalg::rational::Rational;
use crate::exactalg::ring::QuotientRing;
use crate::lie::desc::LieAlgebraDesc;
use crate::lie::uenv::{casimir_pair, pbw_monomials_up_to, UEnvElement};
use crate::linalg::{EchelonBasis, SparseVec};
use crate::report::Report;

/// `Σ c · f ⊗ u` keyed by (normal monomial of `f`, PBW monomial of `u`).
pub type SmashTerms = BTreeMap<(Exponents, Exponents), Rational>;

fn add_into(out: &mut SmashTerms, key: (Exponents, Exponents), c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&key);
    }
}

/// `O(Y) # U(sl2 ⊕ sl2)` with memoized products.
pub struct SmashProduct {
    act: InfinitesimalAction,
    pair: Arc<LieAlgebraDesc>,
    /// `u · x^e` in normal form, for PBW monomials `u` and normal monomials.
    left_cache: HashMap<(Exponents, Exponents), SmashTerms>,
}

impl SmashProduct {
    pub fn horocycle() -> Self {
        SmashProduct {
            act: builtin_lr_action_horocycle(),
            pair: LieAlgebraDesc::sl2_pair(),
            left_cache: HashMap::new(),
        }
    }

    pub fn ring(&self) -> &QuotientRing {
        self.act.ring()
    }

    pub fn from_uenv(u: &UEnvElement) -> SmashTerms {
        let zero = vec![0; 4];
        let mut out = SmashTerms::new();
        for (e, c) in u.terms() {
            add_into(&mut out, (zero.clone(), e.clone()), c.clone());
        }
        out
    }

    pub fn from_function(&self, f: &ExactPoly) -> Result<SmashTerms> {
        let zero = vec![0; self.pair.dim()];
        let mut out = SmashTerms::new();
        for (e, c) in self.ring().normal_form(f)?.terms() {
            add_into(&mut out, (e.clone(), zero.clone()), c.clone());
        }
        Ok(out)
    }

    /// `u · x^e` for a PBW monomial `u` and a normal monomial `x^e`.
    fn uenv_times_monomial(&mut self, u: &Exponents, e: &Exponents) -> Result<SmashTerms> {
        if let Some(t) = self.left_cache.get(&(u.clone(), e.clone())) {
            return Ok(t.clone());
        }
        let out = match u.iter().position(|&k| k > 0) {
            None => {
                let mut t = SmashTerms::new();
                add_into(&mut t, (e.clone(), u.clone()), Rational::one());
                t
            }
            Some(i) => {
                // x_i u' with u' still in PBW order
                let mut rest = u.clone();
                rest[i] -= 1;
                let inner = self.uenv_times_monomial(&rest, e)?;
                let gen = UEnvElement::generator(&self.pair, i);
                let vars = self.ring().vars().clone();
                let mut t = SmashTerms::new();
                for ((h, w), c) in inner {
                    // x_i · h w = h · (x_i w) + x_i(h) · w
                    let xw = &gen * &UEnvElement::monomial(&self.pair, w.clone(), Rational::one());
                    for (w2, c2) in xw.terms() {
                        add_into(&mut t, (h.clone(), w2.clone()), &c * c2);
                    }
                    let hp = ExactPoly::monomial(&vars, h.clone(), Rational::one());
                    let dh = self.ring().normal_form(&self.act.field(i).apply(&hp)?)?;
                    for (h2, c2) in dh.terms() {
                        add_into(&mut t, (h2.clone(), w.clone()), &c * c2);
                    }
                }
                t
            }
        };
        self.left_cache.insert((u.clone(), e.clone()), out.clone());
        Ok(out)
    }

    pub fn mul(&mut self, x: &SmashTerms, y: &SmashTerms) -> Result<SmashTerms> {
        let vars = self.ring().vars().clone();
        let mut out = SmashTerms::new();
        for ((f, u), c) in x {
            let fp = ExactPoly::monomial(&vars, f.clone(), Rational::one());
            for ((g, v), d) in y {
                let ug = self.uenv_times_monomial(u, g)?;
                let vv = UEnvElement::monomial(&self.pair, v.clone(), Rational::one());
                for ((h, w), c2) in ug {
                    let fh = self.ring().normal_form(&fp.mul_monomial(&h, &Rational::one()))?;
                    let wv = &UEnvElement::monomial(&self.pair, w, Rational::one()) * &vv;
                    for (k, c3) in fh.terms() {
                        for (w2, c4) in wv.terms() {
                            add_into(&mut out, (k.clone(), w2.clone()), c * d * &c2 * c3 * c4);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn pbw_degree(u: &[u32]) -> u32 {
    u.iter().sum()
}

/// Dimensions of the kernel of the realization map within
/// `PBW ≤ pbw, polynomial degree = degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyRow {
    pub pbw: u32,
    pub degree: u32,
    /// Elements `f ⊗ u` in the bounded piece.
    pub elements: usize,
    /// Dimension of the ideal generated by `Δ⊗1 - 1⊗Δ` inside the piece.
    pub ideal_dim: usize,
    /// Dimension of the kernel of the realization on test functions.
    pub kernel_dim: usize,
    /// Largest test-function degree used.
    pub test_degree: u32,
}

/// Lower bound: per polynomial degree, an echelon basis of ideal elements
/// over coordinates ordered with high PBW degree first.
type CoordinateIndex = HashMap<(Exponents, Exponents), usize>;

fn ideal_bases(bound: u32) -> Result<(Vec<EchelonBasis>, Vec<CoordinateIndex>)> {
    let mut sp = SmashProduct::horocycle();
    let ring = sp.ring().clone();
    let pair = LieAlgebraDesc::sl2_pair();
    let (d1, d2) = casimir_pair();
    let rel = SmashProduct::from_uenv(&(&d1 - &d2));
    let pbw = pbw_monomials_up_to(6, bound);

    // coordinate index per polynomial degree: PBW-degree descending
    let mut index: Vec<HashMap<(Exponents, Exponents), usize>> = Vec::new();
    for q in 0..=bound {
        let mut keys: Vec<(Exponents, Exponents)> = ring
            .normal_monomials(q)
            .into_iter()
            .flat_map(|f| pbw.iter().map(move |u| (f.clone(), u.clone())))
            .collect();
        keys.sort_by(|x, y| pbw_degree(&y.1).cmp(&pbw_degree(&x.1)).then(x.cmp(y)));
        index.push(keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect());
    }
    let mut bases = vec![EchelonBasis::new(); bound as usize + 1];
    let insert = |terms: &SmashTerms, bases: &mut Vec<EchelonBasis>| {
        let Some(((f, _), _)) = terms.iter().next() else {
            return;
        };
        let q = f.iter().sum::<u32>() as usize;
        let mut v = SparseVec::new();
        for (key, c) in terms {
            match index.get(q).and_then(|m| m.get(key)) {
                Some(&i) => {
                    v.insert(i, c.clone());
                }
                None => return, // outside the bounded piece
            }
        }
        bases[q].insert(&v);
    };
    let unit = |e: &Exponents| -> SmashTerms {
        let mut t = SmashTerms::new();
        add_into(&mut t, (e.clone(), vec![0; 6]), Rational::one());
        t
    };
    let umono = |v: &Exponents| SmashProduct::from_uenv(&UEnvElement::monomial(&pair, v.clone(), Rational::one()));

    // f · D · v
    for v in pbw.iter().filter(|v| pbw_degree(v) + 2 <= bound) {
        let dv = sp.mul(&rel, &umono(v))?;
        for q in 0..=bound {
            for f in ring.normal_monomials(q) {
                let t = sp.mul(&unit(&f), &dv)?;
                insert(&t, &mut bases);
            }
        }
    }
    // f · [D, g] · v
    for dg in 1..=bound {
        for g in ring.normal_monomials(dg) {
            let gu = unit(&g);
            let comm: SmashTerms = {
                let mut t = sp.mul(&rel, &gu)?;
                for (k, c) in sp.mul(&gu, &rel)? {
                    add_into(&mut t, k, -c);
                }
                t
            };
            let deg_comm = comm.keys().map(|(_, u)| pbw_degree(u)).max().unwrap_or(0);
            for v in pbw.iter().filter(|v| pbw_degree(v) + deg_comm <= bound) {
                let cv = sp.mul(&comm, &umono(v))?;
                for q in 0..=(bound - dg) {
                    for f in ring.normal_monomials(q) {
                        let t = sp.mul(&unit(&f), &cv)?;
                        insert(&t, &mut bases);
                    }
                }
            }
        }
    }
    Ok((bases, index))
}

/// Realization of `f ⊗ u` on normal monomials of degree `≤ test_degree`.
struct Realizer {
    act: InfinitesimalAction,
    tests: Vec<Exponents>,
    cache: HashMap<(Exponents, usize), ExactPoly>,
}

impl Realizer {
    fn new(test_degree: u32) -> Self {
        let act = builtin_lr_action_horocycle();
        let tests = act.ring().normal_monomials_up_to(test_degree);
        Realizer { act, tests, cache: HashMap::new() }
    }

    /// `μ(u)(x^e)` for the `t`-th test monomial.
    fn apply(&mut self, u: &Exponents, t: usize) -> Result<ExactPoly> {
        if let Some(p) = self.cache.get(&(u.clone(), t)) {
            return Ok(p.clone());
        }
        let out = match u.iter().position(|&k| k > 0) {
            None => ExactPoly::monomial(self.act.ring().vars(), self.tests[t].clone(), Rational::one()),
            Some(i) => {
                let mut rest = u.clone();
                rest[i] -= 1;
                let inner = self.apply(&rest, t)?;
                self.act.ring().normal_form(&self.act.field(i).apply(&inner)?)?
            }
        };
        self.cache.insert((u.clone(), t), out.clone());
        Ok(out)
    }

    fn vector(
        &mut self,
        f: &Exponents,
        u: &Exponents,
        out_index: &mut HashMap<(usize, Exponents), usize>,
    ) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for t in 0..self.tests.len() {
            let h = self.apply(u, t)?;
            if h.is_zero() {
                continue;
            }
            let fh = self.act.ring().normal_form(&h.mul_monomial(f, &Rational::one()))?;
            for (e, c) in fh.terms() {
                let n = out_index.len();
                let i = *out_index.entry((t, e.clone())).or_insert(n);
                v.insert(i, c.clone());
            }
        }
        Ok(v)
    }
}

/// Kernel dimensions of the realization for polynomial degree `q`, per PBW
/// bound `0..=bound`.
fn kernel_dims(q: u32, bound: u32, test_degree: u32) -> Result<Vec<(usize, usize)>> {
    let ring = QuotientRing::horocycle();
    let mut realizer = Realizer::new(test_degree);
    let mut out_index = HashMap::new();
    let mut basis = EchelonBasis::new();
    let fs = ring.normal_monomials(q);
    let mut count = 0;
    let mut dims = Vec::new();
    for p in 0..=bound {
        for u in pbw_monomials_up_to(6, p).into_iter().filter(|u| pbw_degree(u) == p) {
            for f in &fs {
                let v = realizer.vector(f, &u, &mut out_index)?;
                basis.insert(&v);
                count += 1;
            }
        }
        dims.push((count, count - basis.rank()));
    }
    Ok(dims)
}

/// Largest test degree tried before declaring a mismatch.
pub const MAX_TEST_DEGREE: u32 = 10;

pub fn dy_table(bound: u32) -> Result<Vec<DyRow>> {
    if bound < 2 {
        return Err(Error::BoundTooSmall { bound: bound as usize, reason: "Δ⊗1 - 1⊗Δ has PBW degree 2".into() });
    }
    let (bases, index) = ideal_bases(bound)?;
    let mut rows = Vec::new();
    for q in 0..=bound {
        let total = index[q as usize].len();
        // coordinates of PBW degree ≤ p form a suffix
        let suffix = |p: u32| index[q as usize].iter().filter(|(k, _)| pbw_degree(&k.1) > p).count();
        let ideal: Vec<usize> = (0..=bound).map(|p| bases[q as usize].rank_from(suffix(p))).collect();
        let mut test_degree = q.max(2);
        let mut dims = kernel_dims(q, bound, test_degree)?;
        while test_degree < MAX_TEST_DEGREE && dims.iter().zip(&ideal).any(|((_, k), i)| k != i) {
            test_degree += 1;
            dims = kernel_dims(q, bound, test_degree)?;
        }
        for p in 0..=bound {
            let (elements, kernel_dim) = dims[p as usize];
            rows.push(DyRow { pbw: p, degree: q, elements, ideal_dim: ideal[p as usize], kernel_dim, test_degree });
        }
        debug_assert_eq!(dims[bound as usize].0, total);
    }
    Ok(rows)
}

pub fn verify_dy_relation(bound: u32) -> Result<Report> {
    let mut r = Report::new("dy", json!({ "bound": bound }));
    let mat2 = builtin_lr_action_mat2();
    let (d1, d2) = casimir_pair();
    let diff = &moment_map(&d1, &mat2) - &moment_map(&d2, &mat2);
    r.compare("μ(Δ⊗1) - μ(1⊗Δ) on Mat2", "0".to_string(), diff.to_string());
    let rows = dy_table(bound)?;
    for row in &rows {
        r.compare(
            format!("PBW ≤ {}, degree {}: kernel vs ideal (of {} elements)", row.pbw, row.degree, row.elements),
            row.ideal_dim,
            row.kernel_dim,
        );
    }
    let at = |p: u32, q: u32| rows.iter().find(|x| x.pbw == p && x.degree == q).expect("row in table");
    r.compare("bidegree (0,0): kernel", 0, at(0, 0).kernel_dim);
    r.compare("bidegree (2,0): kernel contains Δ⊗1 - 1⊗Δ", true, at(2, 0).kernel_dim >= 1 && at(2, 0).ideal_dim >= 1);
    Ok(r)
}
