//! Lattice-filtered algebras, the derivation filtration, and the Rees
//! degeneration of `O(SL2)` to `O(Y)` through 2x2 matrices.
//!
//! Filtered pieces are spanned by normal monomials: a monomial `x^e` has
//! level `Σ e_i g_i` where `g_i` are the generator levels, and `f` lies in
//! `A_{≤λ}` iff every monomial of its normal form has level `≤ λ` in the
//! dominance order. For `O(SL2)` with `g_i = 1` and `α = 2` this is the
//! Peter–Weyl filtration: `O_{≤λ}` is spanned by normal monomials of degree
//! `d ≤ λ` with `d ≡ λ (mod 2)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::level::LevelValue;
use crate::exactalg::poly::{monomials_of_degree, ExactPoly, Exponents, Vars};
use crate::exactalg::rational::{is_integer, rat, to_i64, Rational};
use crate::exactalg::ring::QuotientRing;
use crate::linalg::QMatrix;
use crate::weyl::{preserves_ideal, VectorField};

/// `μ ≤ λ` iff `λ - μ` is a non-negative integer combination of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeOrder {
    rank: usize,
    generators: Vec<Vec<i64>>,
}

impl LatticeOrder {
    /// Generators must be linearly independent over `Q`.
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self> {
        let rank = generators.first().map_or(0, Vec::len);
        if generators.is_empty() || generators.iter().any(|g| g.len() != rank) {
            return Err(Error::Invalid("generators must be nonempty and of equal arity".into()));
        }
        let m = QMatrix::from_rows(generators.iter().map(|g| g.iter().map(|&x| rat(x)).collect()).collect());
        if m.rank() != generators.len() {
            return Err(Error::Invalid("generators are linearly dependent".into()));
        }
        Ok(LatticeOrder { rank, generators })
    }

    pub fn rank1(alpha: i64) -> Self {
        Self::new(vec![vec![alpha]]).expect("nonzero generator")
    }

    /// Weights of `SL2` with the positive root `α = 2`.
    pub fn sl2() -> Self {
        Self::rank1(2)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Rational coordinates of `v` in the generators, if `v` is in their span.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.rank);
        // columns are generators
        let cols: Vec<Vec<Rational>> =
            (0..self.rank).map(|i| self.generators.iter().map(|g| rat(g[i])).collect()).collect();
        let m = QMatrix::from_rows_with_cols(cols, self.generators.len());
        m.solve(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    pub fn dominance_leq(&self, mu: &[i64], lambda: &[i64]) -> bool {
        let diff: Vec<i64> = lambda.iter().zip(mu).map(|(l, m)| l - m).collect();
        match self.coordinates(&diff) {
            Some(c) => c.iter().all(|x| is_integer(x) && *x >= Rational::zero()),
            None => false,
        }
    }

    /// Least `ν` dominating every point, if one exists.
    ///
    /// With independent generators the upper bounds of `p` form the cone
    /// `p + N·α`, so upper bounds of several points exist only when all points
    /// agree modulo the integer span of the generators, and then the least
    /// one takes the coordinatewise maximum.
    pub fn least_upper_bound(&self, points: &[Vec<i64>]) -> Result<LevelValue> {
        let Some(p0) = points.first() else {
            return Ok(LevelValue::Bottom);
        };
        let mut best: Vec<i64> = vec![0; self.generators.len()];
        for p in points {
            let diff: Vec<i64> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
            let coords = self
                .coordinates(&diff)
                .filter(|c| c.iter().all(is_integer))
                .ok_or_else(|| Error::NoDominatingLevel(points.to_vec()))?;
            for (b, c) in best.iter_mut().zip(coords) {
                *b = (*b).max(to_i64(&c).expect("small coordinate"));
            }
        }
        let mut nu = p0.clone();
        for (k, g) in best.iter().zip(&self.generators) {
            for (n, gi) in nu.iter_mut().zip(g) {
                *n += k * gi;
            }
        }
        Ok(LevelValue::At(nu))
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }
}

/// A quotient ring filtered by monomial levels.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredAlgebra {
    ring: QuotientRing,
    lattice: LatticeOrder,
    generator_levels: Vec<Vec<i64>>,
}

impl FilteredAlgebra {
    pub fn new(ring: QuotientRing, lattice: LatticeOrder, generator_levels: Vec<Vec<i64>>) -> Result<Self> {
        if generator_levels.len() != ring.vars().len() || generator_levels.iter().any(|g| g.len() != lattice.rank()) {
            return Err(Error::Invalid("one level of lattice arity per generator required".into()));
        }
        Ok(FilteredAlgebra { ring, lattice, generator_levels })
    }

    fn abcd(ring: QuotientRing) -> Self {
        Self::new(ring, LatticeOrder::sl2(), vec![vec![1]; 4]).expect("built-in filtration")
    }

    /// `O(SL2)` with the Peter–Weyl filtration.
    pub fn peter_weyl_sl2() -> Self {
        Self::abcd(QuotientRing::sl2())
    }

    /// `O(Y)` graded by degree.
    pub fn graded_horocycle() -> Self {
        Self::abcd(QuotientRing::horocycle())
    }

    pub fn mat2() -> Self {
        Self::abcd(QuotientRing::mat2())
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn lattice(&self) -> &LatticeOrder {
        &self.lattice
    }

    pub fn generator_levels(&self) -> &[Vec<i64>] {
        &self.generator_levels
    }

    pub fn monomial_level(&self, e: &[u32]) -> Vec<i64> {
        let mut out = vec![0; self.lattice.rank()];
        for (k, g) in e.iter().zip(&self.generator_levels) {
            for (o, gi) in out.iter_mut().zip(g) {
                *o += *k as i64 * gi;
            }
        }
        out
    }

    /// Least `λ` with `f ∈ A_{≤λ}`.
    pub fn level(&self, f: &ExactPoly) -> Result<LevelValue> {
        let nf = self.ring.normal_form(f)?;
        let points: Vec<Vec<i64>> = nf.terms().map(|(e, _)| self.monomial_level(e)).collect();
        self.lattice.least_upper_bound(&points)
    }

    pub fn piece_contains(&self, f: &ExactPoly, lambda: &[i64]) -> Result<bool> {
        let nf = self.ring.normal_form(f)?;
        let inside = nf.terms().all(|(e, _)| self.lattice.dominance_leq(&self.monomial_level(e), lambda));
        Ok(inside)
    }

    /// Normal monomials spanning `A_{≤λ}` (rank one, positive generator
    /// levels).
    pub fn piece_basis(&self, lambda: i64) -> Vec<Exponents> {
        if lambda < 0 {
            return Vec::new();
        }
        (0..=lambda as u32)
            .flat_map(|d| self.ring.normal_monomials(d))
            .filter(|e| self.lattice.dominance_leq(&self.monomial_level(e), &[lambda]))
            .collect()
    }

    /// Normal monomials of level exactly `λ` (a basis of `gr_λ A`).
    pub fn graded_basis(&self, lambda: i64) -> Vec<Exponents> {
        self.piece_basis(lambda).into_iter().filter(|e| self.monomial_level(e) == [lambda]).collect()
    }
}

/// The least `n` with `θ(a_i) ∈ A_{≤ g_i + n}` for all generators.
pub fn derivation_level(a: &FilteredAlgebra, theta: &VectorField) -> Result<LevelValue> {
    if !preserves_ideal(theta.op(), a.ring())? {
        return Err(Error::Invalid(format!("{theta} does not preserve the relation ideal")));
    }
    let mut constraints = Vec::new();
    for (i, comp) in theta.components().iter().enumerate() {
        let nf = a.ring().normal_form(comp)?;
        for (e, _) in nf.terms() {
            constraints.push(a.lattice().sub(&a.monomial_level(e), &a.generator_levels()[i]));
        }
    }
    a.lattice().least_upper_bound(&constraints)
}

/// A vector field with a certified filtration level.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredDerivation {
    pub field: VectorField,
    pub level: LevelValue,
}

/// Outcome of testing `θ(A_{≤μ}) ⊆ A_{≤μ+λ}` on normal monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub holds: bool,
    /// The inclusion fails at `λ - α_j` for every generator `α_j`.
    pub tight: bool,
}

impl FilteredDerivation {
    pub fn new(a: &FilteredAlgebra, field: VectorField) -> Result<Self> {
        let level = derivation_level(a, &field)?;
        Ok(FilteredDerivation { field, level })
    }

    fn shifts_within(&self, a: &FilteredAlgebra, lambda: &[i64], bound: u32) -> Result<bool> {
        for e in a.ring().normal_monomials_up_to(bound) {
            let m = ExactPoly::monomial(a.ring().vars(), e.clone(), Rational::one());
            let image = self.field.apply(&m)?;
            if !a.piece_contains(&image, &a.lattice().add(&a.monomial_level(&e), lambda))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn certify(&self, a: &FilteredAlgebra, bound: u32) -> Result<LevelCertificate> {
        let Some(lambda) = self.level.point() else {
            let zero = self.field.components().iter().all(ExactPoly::is_zero);
            return Ok(LevelCertificate { holds: zero, tight: zero });
        };
        let holds = self.shifts_within(a, lambda, bound)?;
        let mut tight = true;
        for g in a.lattice().generators() {
            if self.shifts_within(a, &a.lattice().sub(lambda, g), bound)? {
                tight = false;
            }
        }
        Ok(LevelCertificate { holds, tight })
    }
}

/// `Rees(A) = Q[A,B,C,D,z]/(AD - BC - κz)` for the determinant fiber
/// `A = O(det = κ)` with the Peter–Weyl filtration, `z = t^α`.
#[derive(Clone, Debug)]
pub struct ReesPresentation {
    source: FilteredAlgebra,
    ring: QuotientRing,
    var_levels: Vec<i64>,
    kappa: Rational,
}

pub fn rees_vars() -> Vars {
    Vars::new(&["A", "B", "C", "D", "z"])
}

pub fn rees_build(a: &FilteredAlgebra) -> Result<ReesPresentation> {
    let kappa = a
        .ring()
        .det_value()
        .filter(|k| !k.is_zero())
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("Rees presentation of {}", a.ring().name())))?;
    if a.lattice() != &LatticeOrder::sl2() || a.generator_levels().iter().any(|g| g != &[1]) {
        return Err(Error::Unsupported("only the Peter–Weyl filtration is supported".into()));
    }
    let vars = rees_vars();
    let mut rel = ExactPoly::zero(&vars);
    rel.add_term(vec![1, 0, 0, 1, 0], Rational::one());
    rel.add_term(vec![0, 1, 1, 0, 0], -Rational::one());
    rel.add_term(vec![0, 0, 0, 0, 1], -kappa.clone());
    let ring = QuotientRing::with_relation("Rees(O(SL2))", rel)?;
    Ok(ReesPresentation { source: a.clone(), ring, var_levels: vec![1, 1, 1, 1, 2], kappa })
}

impl ReesPresentation {
    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn source(&self) -> &FilteredAlgebra {
        &self.source
    }

    pub fn relation(&self) -> ExactPoly {
        self.ring.relation().expect("Rees relation")
    }

    pub fn weighted_degree(&self, e: &[u32]) -> i64 {
        e.iter().zip(&self.var_levels).map(|(k, w)| *k as i64 * w).sum()
    }

    /// Normal monomials of weighted degree `λ`: a basis of `Rees_λ`.
    pub fn graded_basis(&self, lambda: i64) -> Vec<Exponents> {
        if lambda < 0 {
            return Vec::new();
        }
        let lm = self.ring.leading_monomial().expect("relation");
        let mut out = Vec::new();
        for k in 0..=(lambda / 2) {
            for mut e in monomials_of_degree(4, (lambda - 2 * k) as u32) {
                if e[0] >= lm[0] && e[3] >= lm[3] {
                    continue;
                }
                e.push(k as u32);
                out.push(e);
            }
        }
        out
    }

    /// `f ∈ A_{≤λ}` as the element `f t^λ` of `Rees_λ`.
    pub fn homogenize(&self, f: &ExactPoly, lambda: i64) -> Result<ExactPoly> {
        let nf = self.source.ring().normal_form(f)?;
        let vars = rees_vars();
        let mut out = ExactPoly::zero(&vars);
        for (e, c) in nf.terms() {
            let d = e.iter().sum::<u32>() as i64;
            if d > lambda || (lambda - d) % 2 != 0 {
                return Err(Error::Invalid(format!("element not in the filtered piece of level {lambda}")));
            }
            let mut big = e.clone();
            big.push(((lambda - d) / 2) as u32);
            out.add_term(big, c.clone());
        }
        Ok(out)
    }

    /// Substitutes `z = p` and renames `A,B,C,D` to `a,b,c,d`.
    pub fn specialize(&self, f: &ExactPoly, p: &Rational) -> ExactPoly {
        let vars = Vars::abcd();
        let mut out = ExactPoly::zero(&vars);
        for (e, c) in f.terms() {
            let zpow = num_traits::pow(p.clone(), e[4] as usize);
            out.add_term(e[..4].to_vec(), c * zpow);
        }
        out
    }

    /// The fiber ring `Rees(A) / (z - p)`.
    pub fn fiber(&self, p: &Rational) -> QuotientRing {
        QuotientRing::det_fiber(&self.kappa * p)
    }
}

pub fn rees_fiber(r: &ReesPresentation, p: &[Rational]) -> Result<QuotientRing> {
    if p.len() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: p.len() });
    }
    Ok(r.fiber(&p[0]))
}

/// Coordinates of a polynomial in a monomial basis; errors if a monomial is
/// missing from the basis.
fn coords(index: &BTreeMap<Exponents, usize>, f: &ExactPoly) -> Option<Vec<Rational>> {
    let mut v = vec![Rational::zero(); index.len()];
    for (e, c) in f.terms() {
        v[*index.get(e)?] = c.clone();
    }
    Some(v)
}

/// Matrix whose columns are images of basis vectors under a linear map into
/// polynomials, expressed in the monomials that actually occur.
fn image_matrix(images: &[ExactPoly]) -> QMatrix {
    let mut index: BTreeMap<Exponents, usize> = BTreeMap::new();
    for f in images {
        for (e, _) in f.terms() {
            let n = index.len();
            index.entry(e.clone()).or_insert(n);
        }
    }
    let cols: Vec<Vec<Rational>> = images.iter().map(|f| coords(&index, f).expect("indexed")).collect();
    QMatrix::from_rows_with_cols(cols, index.len()).transpose()
}

/// Derivations `(p_1, …, p_4)` with `p_i` in a given monomial basis and
/// `Σ p_i ∂_i(ad - bc) = 0` in `ring`; returns a basis of component tuples.
pub fn det_relative_fields(ring: &QuotientRing, basis: &[Exponents]) -> Result<Vec<Vec<ExactPoly>>> {
    let vars = ring.vars().clone();
    let partials = [
        ExactPoly::parse(&vars, "d")?,
        ExactPoly::parse(&vars, "-c")?,
        ExactPoly::parse(&vars, "-b")?,
        ExactPoly::parse(&vars, "a")?,
    ];
    let n = basis.len();
    let mut images = Vec::with_capacity(4 * n);
    for dp in &partials {
        for e in basis {
            images.push(ring.normal_form(&dp.mul_monomial(e, &Rational::one()))?);
        }
    }
    if images.is_empty() {
        return Ok(Vec::new());
    }
    let m = image_matrix(&images);
    let m = if m.nrows() == 0 { QMatrix::zeros(1, 4 * n) } else { m };
    Ok(m.kernel()
        .into_iter()
        .map(|v| {
            (0..4)
                .map(|i| {
                    ExactPoly::from_terms(
                        &vars,
                        basis.iter().enumerate().map(|(j, e)| (v[i * n + j].clone(), e.clone())),
                    )
                })
                .collect()
        })
        .collect())
}

/// `Derv(O(SL2))_{≤λ}` as component tuples.
pub fn filtered_derivations(a: &FilteredAlgebra, lambda: i64) -> Result<Vec<Vec<ExactPoly>>> {
    det_relative_fields(a.ring(), &a.piece_basis(1 + lambda))
}

/// `Derv(gr A)_λ` for a graded determinant ring.
pub fn graded_derivations(ring: &QuotientRing, lambda: i64) -> Result<Vec<Vec<ExactPoly>>> {
    if 1 + lambda < 0 {
        return Ok(Vec::new());
    }
    det_relative_fields(ring, &ring.normal_monomials((1 + lambda) as u32))
}

impl ReesPresentation {
    /// Relative derivations of degree `λ`: `(q_A, q_B, q_C, q_D)` in
    /// `Rees_{1+λ}` annihilating the relation, with `∂_z` coefficient zero.
    pub fn relative_derivations(&self, lambda: i64) -> Result<Vec<Vec<ExactPoly>>> {
        let basis = self.graded_basis(1 + lambda);
        let vars = rees_vars();
        let partials = [
            ExactPoly::parse(&vars, "D")?,
            ExactPoly::parse(&vars, "-C")?,
            ExactPoly::parse(&vars, "-B")?,
            ExactPoly::parse(&vars, "A")?,
        ];
        let n = basis.len();
        let mut images = Vec::new();
        for dp in &partials {
            for e in &basis {
                images.push(self.ring.normal_form(&dp.mul_monomial(e, &Rational::one()))?);
            }
        }
        if images.is_empty() {
            return Ok(Vec::new());
        }
        let m = image_matrix(&images);
        let m = if m.nrows() == 0 { QMatrix::zeros(1, 4 * n) } else { m };
        Ok(m.kernel()
            .into_iter()
            .map(|v| {
                (0..4)
                    .map(|i| {
                        ExactPoly::from_terms(
                            &vars,
                            basis.iter().enumerate().map(|(j, e)| (v[i * n + j].clone(), e.clone())),
                        )
                    })
                    .collect()
            })
            .collect())
    }

    /// `τ(θ t^λ) = Σ hom_{1+λ}(θ(a_i)) ∂_{A_i}`, with no `∂_z` term.
    pub fn tau_map(&self, theta: &VectorField, lambda: i64) -> Result<VectorField> {
        let mut comps =
            theta.components().iter().map(|p| self.homogenize(p, 1 + lambda)).collect::<Result<Vec<_>>>()?;
        comps.push(ExactPoly::zero(&rees_vars()));
        VectorField::from_components(&comps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRow {
    pub level: i64,
    pub filtered_dim: usize,
    pub relative_dim: usize,
    pub image_rank: usize,
    pub images_relative: bool,
}

impl TauRow {
    pub fn pass(&self) -> bool {
        self.images_relative && self.image_rank == self.filtered_dim && self.filtered_dim == self.relative_dim
    }
}

/// For each level `λ` in `[-bound, bound]`: `τ` maps `Derv_{≤λ}` injectively
/// into relative derivations of `Rees_λ`, images are relative, and the two
/// dimensions agree.
pub fn tau_check(r: &ReesPresentation, bound: i64) -> Result<Vec<TauRow>> {
    let mut rows = Vec::new();
    for lambda in -bound..=bound {
        let derv = filtered_derivations(r.source(), lambda)?;
        let rel = r.relative_derivations(lambda)?;
        let rel_field = |comps: &[ExactPoly]| -> Result<bool> {
            let f = VectorField::from_components(comps)?;
            Ok(f.apply(&ExactPoly::var(&rees_vars(), 4))?.is_zero() && r.ring().contains(&f.apply(&r.relation())?)?)
        };
        let mut images = Vec::new();
        let mut all_rel = true;
        for comps in &derv {
            let theta = VectorField::from_components(comps)?;
            let t = r.tau_map(&theta, lambda)?;
            let tc = t.components();
            all_rel &= rel_field(&tc)?;
            images.push(tc);
        }
        let image_rank = if images.is_empty() {
            0
        } else {
            let flat: Vec<ExactPoly> = images.iter().map(|c| stack_components(c)).collect();
            image_matrix(&flat).rank()
        };
        rows.push(TauRow {
            level: lambda,
            filtered_dim: derv.len(),
            relative_dim: rel.len(),
            image_rank,
            images_relative: all_rel,
        });
    }
    Ok(rows)
}

/// Encodes a tuple of polynomials as one polynomial in an extra variable,
/// so that spans of tuples can be compared with [`image_matrix`].
fn stack_components(comps: &[ExactPoly]) -> ExactPoly {
    let n = comps[0].nvars();
    let vars = Vars::new(&(0..=n).map(|i| format!("v{i}")).collect::<Vec<_>>());
    let mut out = ExactPoly::zero(&vars);
    for (i, p) in comps.iter().enumerate() {
        for (e, c) in p.terms() {
            let mut big = e.clone();
            big.push(i as u32);
            out.add_term(big, c.clone());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrDervRow {
    pub level: i64,
    /// `dim Derv_{≤λ} - dim Derv_{≤λ-α}` on `O(SL2)`.
    pub graded_filtered_dim: usize,
    /// `dim Derv(O(Y))_λ`.
    pub horocycle_dim: usize,
    /// `dim (RelDer(Rees) ⊗ O(Y))_λ = dim RelDer_λ - dim RelDer_{λ-α}`.
    pub base_changed_dim: usize,
    /// Rank of the specialization `RelDer_λ → Derv(O(Y))_λ` at `z = 0`.
    pub specialization_rank: usize,
}

impl GrDervRow {
    pub fn pass(&self) -> bool {
        self.graded_filtered_dim == self.horocycle_dim
    }
}

/// Compares `gr Derv(O(SL2))` with `Derv(O(Y))` level by level.
pub fn gr_derivations_check(r: &ReesPresentation, bound: i64) -> Result<Vec<GrDervRow>> {
    let y = r.fiber(&Rational::zero());
    let mut rows = Vec::new();
    for lambda in -bound..=bound {
        let f_hi = filtered_derivations(r.source(), lambda)?.len();
        let f_lo = filtered_derivations(r.source(), lambda - 2)?.len();
        let y_dim = graded_derivations(&y, lambda)?.len();
        let rel = r.relative_derivations(lambda)?;
        let rel_lo = r.relative_derivations(lambda - 2)?.len();
        let specialized: Vec<ExactPoly> = rel
            .iter()
            .map(|comps| {
                let c: Vec<ExactPoly> =
                    comps.iter().map(|p| y.normal_form(&r.specialize(p, &Rational::zero()))).collect::<Result<_>>()?;
                Ok(stack_components(&c))
            })
            .collect::<Result<_>>()?;
        let specialization_rank =
            if specialized.iter().all(ExactPoly::is_zero) { 0 } else { image_matrix(&specialized).rank() };
        rows.push(GrDervRow {
            level: lambda,
            graded_filtered_dim: f_hi - f_lo,
            horocycle_dim: y_dim,
            base_changed_dim: rel.len() - rel_lo,
            specialization_rank,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRow {
    pub level: i64,
    pub rees_dim: usize,
    /// `dim A_{≤λ}` counted in `O(SL2)`.
    pub filtered_dim: usize,
    /// Rank of `Rees_λ → O(SL2)` at `z = 1`.
    pub rank_at_one: usize,
    /// `dim O(Y)_λ`.
    pub graded_dim: usize,
    /// Rank of `Rees_λ → O(Y)` at `z = 0`.
    pub rank_at_zero: usize,
    /// `Σ_{μ ≤ λ} (μ + 1)^2`, the Peter–Weyl count.
    pub peter_weyl_dim: usize,
}

impl FiberRow {
    pub fn pass(&self) -> bool {
        self.rees_dim == self.filtered_dim
            && self.rank_at_one == self.filtered_dim
            && self.filtered_dim == self.peter_weyl_dim
            && self.rank_at_zero == self.graded_dim
            && self.graded_dim == ((self.level + 1) * (self.level + 1)) as usize
    }
}

/// Dimension tables of the two fibers of the Rees algebra.
pub fn fiber_tables(r: &ReesPresentation, bound: i64) -> Result<Vec<FiberRow>> {
    let one = r.fiber(&Rational::one());
    let zero = r.fiber(&Rational::zero());
    let filtered = FilteredAlgebra::new(one.clone(), LatticeOrder::sl2(), vec![vec![1]; 4])?;
    let mut rows = Vec::new();
    for lambda in 0..=bound {
        let basis = r.graded_basis(lambda);
        let rees = rees_vars();
        let mono = |e: &Exponents| ExactPoly::monomial(&rees, e.clone(), Rational::one());
        let at = |p: &Rational, ring: &QuotientRing| -> Result<Vec<ExactPoly>> {
            basis.iter().map(|e| ring.normal_form(&r.specialize(&mono(e), p))).collect()
        };
        let rank =
            |polys: Vec<ExactPoly>| if polys.iter().all(ExactPoly::is_zero) { 0 } else { image_matrix(&polys).rank() };
        let rank_at_one = rank(at(&Rational::one(), &one)?);
        let rank_at_zero = rank(at(&Rational::zero(), &zero)?);
        let peter_weyl_dim = (0..=lambda).filter(|m| (lambda - m) % 2 == 0).map(|m| ((m + 1) * (m + 1)) as usize).sum();
        rows.push(FiberRow {
            level: lambda,
            rees_dim: basis.len(),
            filtered_dim: filtered.piece_basis(lambda).len(),
            rank_at_one,
            graded_dim: zero.normal_monomials(lambda as u32).len(),
            rank_at_zero,
            peter_weyl_dim,
        });
    }
    Ok(rows)
}
