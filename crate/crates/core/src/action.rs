//! Infinitesimal actions by vector fields, the quantum moment map, stabilizer
//! subalgebras at rational points, and coinvariants of finite-dimensional
//! bimodules.
//!
//! The fiber at `p` of the localization of a `g ⊕ g`-module `M` on a
//! homogeneous space is `M / s_p · M`, where `s_p` is the stabilizer of `p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::poly::Exponents;
use crate::exactalg::rational::{format_rational, parse_rational, Rational};
use crate::exactalg::ring::QuotientRing;
use crate::lie::desc::LieAlgebraDesc;
use crate::lie::rep::FinDimBimodule;
use crate::lie::uenv::UEnvElement;
use crate::linalg::QMatrix;
use crate::weyl::{abcd_field, preserves_ideal, VectorField, WeylOp};

/// A Lie algebra map `g → Vect(X)`.
#[derive(Clone, Debug)]
pub struct InfinitesimalAction {
    algebra: Arc<LieAlgebraDesc>,
    ring: QuotientRing,
    fields: Vec<VectorField>,
}

impl InfinitesimalAction {
    /// Validates the bracket relations and that every field descends to `ring`.
    pub fn new(algebra: Arc<LieAlgebraDesc>, ring: QuotientRing, fields: Vec<VectorField>) -> Result<Self> {
        if fields.len() != algebra.dim() {
            return Err(Error::Invalid("one vector field per basis element required".into()));
        }
        let act = InfinitesimalAction { algebra, ring, fields };
        if let Some((i, j)) = act.bracket_defects()?.first() {
            return Err(Error::Invalid(format!("fields violate the bracket [{i},{j}]")));
        }
        for f in &act.fields {
            if !preserves_ideal(f.op(), &act.ring)? {
                return Err(Error::Invalid(format!("{f} does not preserve the relation ideal")));
            }
        }
        Ok(act)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraDesc> {
        &self.algebra
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    /// The same fields acting on another quotient of the same coordinates.
    pub fn restrict_to(&self, ring: QuotientRing) -> Result<Self> {
        Self::new(self.algebra.clone(), ring, self.fields.clone())
    }

    /// Pairs `i < j` with `[θ_i, θ_j] ≠ θ_{[x_i, x_j]}` as Weyl operators.
    pub fn bracket_defects(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.algebra.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.fields[i].op().commutator(self.fields[j].op())?;
                if lhs != self.lie_field(&self.algebra.bracket(i, j)) {
                    bad.push((i, j));
                }
            }
        }
        Ok(bad)
    }

    /// The field of a Lie algebra element given by coordinates.
    pub fn lie_field(&self, coords: &[Rational]) -> WeylOp {
        let mut out = WeylOp::zero(self.fields[0].vars());
        for (c, f) in coords.iter().zip(&self.fields) {
            if !c.is_zero() {
                out = &out + &f.op().scale(c);
            }
        }
        out
    }

    /// Matrix of the evaluation map `g → T_p`: row `i` holds the components
    /// of `θ_i` at `p`.
    pub fn evaluation_matrix(&self, p: &RationalPoint) -> QMatrix {
        let rows = self.fields.iter().map(|f| f.components().iter().map(|c| c.eval(p.coords())).collect()).collect();
        QMatrix::from_rows(rows)
    }
}

/// Rows of the left-right table: `E⊗1, F⊗1, H⊗1, 1⊗E, 1⊗F, 1⊗H`
/// (indices follow the basis `F1, H1, E1, F2, H2, E2`).
fn lr_fields() -> Vec<VectorField> {
    vec![
        abcd_field("-a Dc - b Dd"),
        abcd_field("-a Da - b Db + c Dc + d Dd"),
        abcd_field("-c Da - d Db"),
        abcd_field("b Da + d Dc"),
        abcd_field("a Da - b Db + c Dc - d Dd"),
        abcd_field("a Db + c Dd"),
    ]
}

/// The left-right action of `sl2 ⊕ sl2` on `ring` (any quotient of
/// `Q[a,b,c,d]` by a function of the determinant).
pub fn lr_action(ring: QuotientRing) -> Result<InfinitesimalAction> {
    InfinitesimalAction::new(LieAlgebraDesc::sl2_pair(), ring, lr_fields())
}

pub fn builtin_lr_action_sl2() -> InfinitesimalAction {
    lr_action(QuotientRing::sl2()).expect("built-in action on SL2")
}

pub fn builtin_lr_action_mat2() -> InfinitesimalAction {
    lr_action(QuotientRing::mat2()).expect("built-in action on Mat2")
}

pub fn builtin_lr_action_horocycle() -> InfinitesimalAction {
    lr_action(QuotientRing::horocycle()).expect("built-in action on Y")
}

/// Multiplicative extension `U(g) → D` of an action, with a cache of PBW
/// monomial images. Not shared between threads; create one per computation.
pub struct MomentMap<'a> {
    act: &'a InfinitesimalAction,
    cache: HashMap<Exponents, WeylOp>,
}

impl<'a> MomentMap<'a> {
    pub fn new(act: &'a InfinitesimalAction) -> Self {
        MomentMap { act, cache: HashMap::new() }
    }

    pub fn monomial(&mut self, e: &[u32]) -> WeylOp {
        if let Some(op) = self.cache.get(e) {
            return op.clone();
        }
        let op = match e.iter().rposition(|&k| k > 0) {
            None => WeylOp::one(self.act.fields[0].vars()),
            Some(j) => {
                let mut prefix = e.to_vec();
                prefix[j] -= 1;
                let head = self.monomial(&prefix);
                &head * self.act.fields[j].op()
            }
        };
        self.cache.insert(e.to_vec(), op.clone());
        op
    }

    pub fn apply(&mut self, u: &UEnvElement) -> WeylOp {
        assert_eq!(u.algebra(), &self.act.algebra, "element of a different enveloping algebra");
        let mut out = WeylOp::zero(self.act.fields[0].vars());
        for (e, c) in u.terms() {
            out = &out + &self.monomial(e).scale(c);
        }
        out
    }
}

/// `μ(u)` for `u` in the enveloping algebra of the acting Lie algebra.
pub fn moment_map(u: &UEnvElement, act: &InfinitesimalAction) -> WeylOp {
    MomentMap::new(act).apply(u)
}

/// A point `(a, b, c, d)` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// Parses `a,b,c,d` with `p/q` entries.
    pub fn parse(s: &str) -> Result<Self> {
        let coords = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
        if coords.len() != 4 {
            return Err(Error::Parse(format!("expected 4 coordinates, got {}", coords.len())));
        }
        Ok(RationalPoint(coords))
    }

    pub fn det(&self) -> Rational {
        let c = &self.0;
        &c[0] * &c[3] - &c[1] * &c[2]
    }

    /// As a 2x2 matrix `[[a, b], [c, d]]`.
    pub fn matrix(&self) -> QMatrix {
        QMatrix::from_rows(vec![self.0[..2].to_vec(), self.0[2..].to_vec()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Whether the point lies on the variety of `ring` (nonzero on the
    /// rank-one locus, whose origin is not part of the horocycle chart).
    pub fn lies_on(&self, ring: &QuotientRing) -> bool {
        if self.0.len() != ring.vars().len() {
            return false;
        }
        let on = ring.relation().is_none_or(|r| r.eval(&self.0).is_zero());
        on && !(ring.is_homogeneous() && ring.relation().is_some() && self.is_zero())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::exactalg::rational::serde_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::exactalg::rational::serde_vec::deserialize(d).map(RationalPoint)
    }
}

/// A Lie subalgebra, by a basis of coordinate vectors in the ambient algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieSubalgebra {
    ambient: Arc<LieAlgebraDesc>,
    basis: Vec<Vec<Rational>>,
}

impl LieSubalgebra {
    /// Validates linear independence and closure under the bracket.
    pub fn new(ambient: Arc<LieAlgebraDesc>, basis: Vec<Vec<Rational>>) -> Result<Self> {
        let n = ambient.dim();
        if basis.iter().any(|v| v.len() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                found: basis.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
            });
        }
        let m = QMatrix::from_rows_with_cols(basis.clone(), n);
        if m.rank() != basis.len() {
            return Err(Error::Invalid("subalgebra basis is linearly dependent".into()));
        }
        let sub = LieSubalgebra { ambient, basis };
        for x in &sub.basis {
            for y in &sub.basis {
                if !sub.contains(&sub.ambient.bracket_vec(x, y)) {
                    return Err(Error::Invalid("subspace is not closed under the bracket".into()));
                }
            }
        }
        Ok(sub)
    }

    /// Span of the given basis elements of the ambient algebra.
    pub fn spanned_by_generators(ambient: Arc<LieAlgebraDesc>, indices: &[usize]) -> Result<Self> {
        let n = ambient.dim();
        let basis = indices.iter().map(|&i| crate::lie::desc::unit(n, i)).collect();
        Self::new(ambient, basis)
    }

    pub fn ambient(&self) -> &Arc<LieAlgebraDesc> {
        &self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let n = self.ambient.dim();
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        QMatrix::from_rows_with_cols(rows, n).rank() == self.basis.len()
    }

    /// `[other, self] ⊆ self`.
    pub fn is_normalized_by(&self, other: &LieSubalgebra) -> bool {
        other.basis.iter().all(|y| self.basis.iter().all(|x| self.contains(&self.ambient.bracket_vec(y, x))))
    }

    pub fn basis_strings(&self) -> Vec<Vec<String>> {
        self.basis.iter().map(|v| v.iter().map(format_rational).collect()).collect()
    }
}

/// Kernel of the evaluation map at `p`.
pub fn stabilizer_subalgebra(act: &InfinitesimalAction, p: &RationalPoint) -> Result<LieSubalgebra> {
    if !p.lies_on(act.ring()) {
        return Err(Error::NotOnVariety { point: p.to_string(), expected: act.ring().name().to_string() });
    }
    let basis = act.evaluation_matrix(p).left_kernel();
    LieSubalgebra::new(act.algebra().clone(), basis)
}

/// `M / s·M`, with the induced action of a normalizing subalgebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvariantsResult {
    pub dim: usize,
    /// Rows span the annihilator of `s·M`; as a map `M → Q^dim` its kernel is `s·M`.
    pub projection: QMatrix,
    /// One matrix per basis element of the commuting subalgebra.
    pub induced: Vec<QMatrix>,
}

/// Matrix whose columns span `s · M`.
pub fn coinvariant_image(m: &FinDimBimodule, s: &LieSubalgebra) -> QMatrix {
    let n = m.dim();
    let mut image = QMatrix::zeros(n, 0);
    for x in s.basis() {
        image = image.hstack(&m.lie_matrix(x));
    }
    image
}

pub fn coinvariants(
    m: &FinDimBimodule,
    s: &LieSubalgebra,
    commuting: Option<&LieSubalgebra>,
) -> Result<CoinvariantsResult> {
    if s.ambient() != m.algebra() {
        return Err(Error::Invalid("subalgebra of a different Lie algebra".into()));
    }
    let n = m.dim();
    let image = coinvariant_image(m, s);
    let projection = QMatrix::from_rows_with_cols(image.left_kernel(), n);
    let dim = projection.nrows();
    let mut induced = Vec::new();
    if let Some(c) = commuting {
        if c.ambient() != m.algebra() || !s.is_normalized_by(c) {
            return Err(Error::NotNormalizing);
        }
        if dim > 0 {
            // right inverse R of the full-row-rank projection: P R = 1
            let pt = projection.transpose();
            let right_inv = pt.mul(&projection.mul(&pt).inverse().expect("projection has full row rank"));
            for y in c.basis() {
                induced.push(projection.mul(&m.lie_matrix(y)).mul(&right_inv));
            }
        } else {
            induced = vec![QMatrix::zeros(0, 0); c.dim()];
        }
    }
    Ok(CoinvariantsResult { dim, projection, induced })
}

/// The fiber at `p` of the localization of `m`.
pub fn localization_fiber(
    m: &FinDimBimodule,
    act: &InfinitesimalAction,
    p: &RationalPoint,
) -> Result<CoinvariantsResult> {
    let s = stabilizer_subalgebra(act, p)?;
    coinvariants(m, &s, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};
    use crate::lie::rep::{external_tensor, matrix_coefficient_bimodule, sym_power_rep};
    use crate::lie::uenv::casimir_pair;

    #[test]
    fn table_entries() {
        let act = builtin_lr_action_sl2();
        assert_eq!(act.field(2).op(), &WeylOp::parse(act.ring().vars(), "-c Da - d Db").unwrap());
        assert_eq!(act.field(4).op(), &WeylOp::parse(act.ring().vars(), "a Da - b Db + c Dc - d Dd").unwrap());
        assert!(act.bracket_defects().unwrap().is_empty());
    }

    #[test]
    fn e1_f1_bracket() {
        let act = builtin_lr_action_mat2();
        let lhs = act.field(2).op().commutator(act.field(0).op()).unwrap();
        assert_eq!(&lhs, act.field(1).op());
    }

    #[test]
    fn moment_map_of_unit_and_casimirs() {
        let act = builtin_lr_action_mat2();
        let pair = LieAlgebraDesc::sl2_pair();
        assert_eq!(moment_map(&UEnvElement::one(&pair), &act), WeylOp::one(act.ring().vars()));
        let (d1, d2) = casimir_pair();
        assert_eq!(moment_map(&d1, &act), moment_map(&d2, &act));
    }

    #[test]
    fn stabilizer_at_identity_is_diagonal() {
        let act = builtin_lr_action_sl2();
        let s = stabilizer_subalgebra(&act, &RationalPoint::from_i64(&[1, 0, 0, 1])).unwrap();
        assert_eq!(s.dim(), 3);
        for i in 0..3 {
            let mut v = vec![rat(0); 6];
            v[i] = rat(1);
            v[i + 3] = rat(1);
            assert!(s.contains(&v));
        }
    }

    #[test]
    fn stabilizer_off_variety_is_an_error() {
        let act = builtin_lr_action_sl2();
        assert!(matches!(
            stabilizer_subalgebra(&act, &RationalPoint::from_i64(&[1, 1, 1, 1])),
            Err(Error::NotOnVariety { .. })
        ));
        let y = builtin_lr_action_horocycle();
        assert!(stabilizer_subalgebra(&y, &RationalPoint::from_i64(&[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn horocycle_base_point_stabilizer() {
        let act = builtin_lr_action_horocycle();
        let s = stabilizer_subalgebra(&act, &RationalPoint::from_i64(&[1, 0, 0, 0])).unwrap();
        assert_eq!(s.dim(), 3);
        let e1 = crate::lie::desc::unit(6, 2);
        let f2 = crate::lie::desc::unit(6, 3);
        let mut h = vec![rat(0); 6];
        h[1] = rat(1);
        h[4] = rat(1);
        assert!(s.contains(&e1) && s.contains(&f2) && s.contains(&h));
    }

    #[test]
    fn coinvariant_examples() {
        let act = builtin_lr_action_sl2();
        let id = RationalPoint::from_i64(&[1, 0, 0, 1]);
        assert_eq!(localization_fiber(&matrix_coefficient_bimodule(1, 1), &act, &id).unwrap().dim, 1);
        assert_eq!(localization_fiber(&matrix_coefficient_bimodule(1, 0), &act, &id).unwrap().dim, 0);
        let p = RationalPoint::new(vec![rat(2), rat(0), rat(0), ratio(1, 2)]);
        let trivial = external_tensor(&sym_power_rep(0), &sym_power_rep(0));
        assert_eq!(localization_fiber(&trivial, &act, &p).unwrap().dim, 1);
    }

    #[test]
    fn projection_annihilates_image() {
        let act = builtin_lr_action_sl2();
        let m = matrix_coefficient_bimodule(2, 2);
        let s = stabilizer_subalgebra(&act, &RationalPoint::from_i64(&[1, 1, 0, 1])).unwrap();
        let c = coinvariants(&m, &s, None).unwrap();
        assert!(c.projection.mul(&coinvariant_image(&m, &s)).is_zero());
        assert_eq!(c.dim, 1);
    }

    #[test]
    fn non_normalizing_is_rejected() {
        let pair = LieAlgebraDesc::sl2_pair();
        let s = LieSubalgebra::spanned_by_generators(pair.clone(), &[2]).unwrap();
        let c = LieSubalgebra::spanned_by_generators(pair, &[0]).unwrap();
        assert_eq!(coinvariants(&matrix_coefficient_bimodule(1, 1), &s, Some(&c)), Err(Error::NotNormalizing));
    }

    #[test]
    fn point_parsing() {
        let p = RationalPoint::parse("2, 0, 0, 1/2").unwrap();
        assert_eq!(p.det(), rat(1));
        assert!(RationalPoint::parse("1,2,3").is_err());
    }
}
