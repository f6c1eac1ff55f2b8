use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::desc::LieAlgebraDesc;
use super::uenv::{pbw_word, UEnvElement};
use crate::error::{Error, Result};
use crate::exactalg::rational::{rat, Rational};
use crate::linalg::QMatrix;

/// A finite-dimensional representation: one matrix per basis element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinDimRep {
    algebra: Arc<LieAlgebraDesc>,
    dim: usize,
    mats: Vec<QMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinDimRepJson {
    pub dim: usize,
    pub matrices: Vec<QMatrix>,
}

impl FinDimRep {
    /// Validates shapes and that the matrices satisfy the bracket relations.
    pub fn new(algebra: Arc<LieAlgebraDesc>, mats: Vec<QMatrix>) -> Result<Self> {
        if mats.len() != algebra.dim() {
            return Err(Error::Invalid(format!(
                "{} matrices for a {}-dimensional Lie algebra",
                mats.len(),
                algebra.dim()
            )));
        }
        let dim = mats.first().map_or(0, QMatrix::nrows);
        if mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::Invalid("representation matrices must be square of equal size".into()));
        }
        let rep = FinDimRep { algebra, dim, mats };
        if let Some((i, j)) = rep.bracket_violation() {
            return Err(Error::Invalid(format!("matrices violate the bracket [{i},{j}]")));
        }
        Ok(rep)
    }

    fn bracket_violation(&self) -> Option<(usize, usize)> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.mats[i].commutator(&self.mats[j]);
                if lhs != self.lie_matrix(&self.algebra.bracket(i, j)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraDesc> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.mats
    }

    pub fn matrix(&self, i: usize) -> &QMatrix {
        &self.mats[i]
    }

    /// Matrix of a Lie algebra element given by coordinates.
    pub fn lie_matrix(&self, coords: &[Rational]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for (c, x) in coords.iter().zip(&self.mats) {
            if !c.is_zero() {
                m = m.add(&x.scale(c));
            }
        }
        m
    }

    /// Matrix of an element of the enveloping algebra.
    pub fn act(&self, u: &UEnvElement) -> QMatrix {
        assert_eq!(u.algebra(), &self.algebra, "element of a different enveloping algebra");
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for (e, c) in u.terms() {
            let mut m = QMatrix::identity(self.dim);
            for i in pbw_word(e) {
                m = m.mul(&self.mats[i]);
            }
            out = out.add(&m.scale(c));
        }
        out
    }

    /// Contragredient: `x ↦ -ρ(x)^T`.
    pub fn dual(&self) -> FinDimRep {
        FinDimRep {
            algebra: self.algebra.clone(),
            dim: self.dim,
            mats: self.mats.iter().map(|m| m.transpose().scale(&rat(-1))).collect(),
        }
    }

    pub fn to_json(&self) -> FinDimRepJson {
        FinDimRepJson { dim: self.dim, matrices: self.mats.clone() }
    }

    pub fn from_json(algebra: Arc<LieAlgebraDesc>, js: &FinDimRepJson) -> Result<Self> {
        let rep = Self::new(algebra, js.matrices.clone())?;
        if rep.dim != js.dim {
            return Err(Error::Invalid("declared dimension disagrees with matrices".into()));
        }
        Ok(rep)
    }
}

/// `Sym^m` of the standard representation of `sl2`, on the basis
/// `x^m, x^{m-1} y, …, y^m` with `E = x∂_y`, `F = y∂_x`.
pub fn sym_power_rep(m: usize) -> FinDimRep {
    let n = m + 1;
    let mut f = QMatrix::zeros(n, n);
    let mut h = QMatrix::zeros(n, n);
    let mut e = QMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = rat(m as i64 - 2 * i as i64);
        if i > 0 {
            e[(i - 1, i)] = rat(i as i64);
        }
        if i < m {
            f[(i + 1, i)] = rat((m - i) as i64);
        }
    }
    FinDimRep::new(LieAlgebraDesc::sl2(), vec![f, h, e]).expect("Sym^m satisfies sl2 relations")
}

pub fn dual_rep(v: &FinDimRep) -> FinDimRep {
    v.dual()
}

/// A module for `g ⊕ g` whose left and right actions commute.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinDimBimodule {
    rep: FinDimRep,
    split: usize,
}

impl FinDimBimodule {
    /// `rep` is a representation of a direct sum whose first `split` basis
    /// elements form the left summand.
    pub fn new(rep: FinDimRep, split: usize) -> Result<Self> {
        let n = rep.algebra().dim();
        if split > n {
            return Err(Error::Invalid("split beyond algebra dimension".into()));
        }
        for i in 0..split {
            for j in split..n {
                if !rep.matrix(i).commutator(rep.matrix(j)).is_zero() {
                    return Err(Error::Invalid(format!("left generator {i} and right generator {j} do not commute")));
                }
            }
        }
        Ok(FinDimBimodule { rep, split })
    }

    pub fn rep(&self) -> &FinDimRep {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraDesc> {
        self.rep.algebra()
    }

    pub fn split(&self) -> usize {
        self.split
    }

    /// Matrix of a `g ⊕ g` element given by coordinates.
    pub fn lie_matrix(&self, coords: &[Rational]) -> QMatrix {
        self.rep.lie_matrix(coords)
    }
}

/// `V ⊠ W`: the left summand acts on `V`, the right on `W`. Basis
/// `v_i ⊗ w_j` sits at index `i · dim W + j`.
pub fn external_tensor(v: &FinDimRep, w: &FinDimRep) -> FinDimBimodule {
    let algebra = Arc::new(v.algebra().direct_sum(w.algebra(), "1", "2"));
    let algebra = if v.algebra() == &LieAlgebraDesc::sl2() && w.algebra() == &LieAlgebraDesc::sl2() {
        LieAlgebraDesc::sl2_pair()
    } else {
        algebra
    };
    let iv = QMatrix::identity(v.dim());
    let iw = QMatrix::identity(w.dim());
    let mats: Vec<QMatrix> =
        v.matrices().iter().map(|m| m.kron(&iw)).chain(w.matrices().iter().map(|m| iv.kron(m))).collect();
    let rep = FinDimRep::new(algebra, mats).expect("external tensor of representations");
    FinDimBimodule::new(rep, v.algebra().dim()).expect("external tensor factors commute")
}

/// The matrix-coefficient bimodule `V_m ⊠ V_k^*`.
pub fn matrix_coefficient_bimodule(m: usize, k: usize) -> FinDimBimodule {
    external_tensor(&sym_power_rep(m), &sym_power_rep(k).dual())
}

#[cfg(test)]
mod tests {
    use super::super::uenv::casimir_sl2;
    use super::*;

    #[test]
    fn trivial_and_standard() {
        let v0 = sym_power_rep(0);
        assert_eq!(v0.dim(), 1);
        assert!(v0.matrices().iter().all(QMatrix::is_zero));
        let v1 = sym_power_rep(1);
        assert_eq!(v1.matrix(1), &QMatrix::from_i64(&[&[1, 0], &[0, -1]]));
        assert_eq!(v1.dual().matrix(1), &QMatrix::from_i64(&[&[-1, 0], &[0, 1]]));
    }

    #[test]
    fn sym2_weights() {
        let v2 = sym_power_rep(2);
        assert_eq!(v2.matrix(1), &QMatrix::diagonal(&[rat(2), rat(0), rat(-2)]));
        // independent check of [E, F] = H
        let (f, h, e) = (v2.matrix(0), v2.matrix(1), v2.matrix(2));
        assert_eq!(&e.commutator(f), h);
    }

    #[test]
    fn casimir_scalar_on_standard() {
        let d = sym_power_rep(1).act(&casimir_sl2());
        assert_eq!(d, QMatrix::identity(2).scale(&rat(4)));
    }

    #[test]
    fn bad_matrices_rejected() {
        // H alone nonzero breaks [E, F] = H
        let z = QMatrix::zeros(2, 2);
        let h = QMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(FinDimRep::new(LieAlgebraDesc::sl2(), vec![z.clone(), h, z]).is_err());
        let e = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(FinDimRep::new(LieAlgebraDesc::sl2(), vec![e.clone(), QMatrix::zeros(2, 2), e]).is_err());
    }

    #[test]
    fn external_tensors() {
        let b = matrix_coefficient_bimodule(1, 1);
        assert_eq!(b.dim(), 4);
        let b0 = external_tensor(&sym_power_rep(0), &sym_power_rep(0));
        assert_eq!(b0.dim(), 1);
        assert!(b0.rep().matrices().iter().all(QMatrix::is_zero));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::lie::uenv::casimir_sl2;
    use crate::linalg::jordan_data;
    use crate::testkit::config;

    fn brackets_match(rep: &FinDimRep) -> bool {
        let g = rep.algebra();
        (0..g.dim())
            .all(|i| (0..g.dim()).all(|j| rep.matrix(i).commutator(rep.matrix(j)) == rep.lie_matrix(&g.bracket(i, j))))
    }

    proptest! {
        #![proptest_config(config(40))]

        #[test]
        fn representations_reproduce_brackets(m in 0usize..7, k in 0usize..4) {
            let v = sym_power_rep(m);
            prop_assert!(brackets_match(&v));
            prop_assert!(brackets_match(&v.dual()));
            let b = external_tensor(&v, &sym_power_rep(k).dual());
            prop_assert!(brackets_match(b.rep()));
            prop_assert!(brackets_match(matrix_coefficient_bimodule(m, k).rep()));
        }

        #[test]
        fn casimir_scalar(m in 0usize..7) {
            let blocks = jordan_data(&sym_power_rep(m).act(&casimir_sl2())).unwrap();
            prop_assert_eq!(blocks.len(), 1);
            prop_assert_eq!(&blocks[0].value, &rat(((m + 1) * (m + 1)) as i64));
            prop_assert!(blocks[0].block_sizes.iter().all(|&s| s == 1));
        }

        #[test]
        fn bimodule_sides_commute(m in 0usize..4, k in 0usize..4) {
            let b = matrix_coefficient_bimodule(m, k);
            for i in 0..b.split() {
                for j in b.split()..b.algebra().dim() {
                    prop_assert!(b.rep().matrix(i).commutator(b.rep().matrix(j)).is_zero());
                }
            }
        }
    }
}
