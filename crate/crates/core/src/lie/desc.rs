use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{format_rational, parse_rational, rat, Rational};
use crate::linalg::QMatrix;

/// A Lie algebra by structure constants: `[x_i, x_j] = Σ_k c[i][j][k] x_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebraDesc {
    names: Vec<String>,
    consts: Vec<Vec<Vec<Rational>>>,
}

/// One sparse structure constant in the JSON descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieAlgebraJson {
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

impl LieAlgebraDesc {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(names: Vec<String>, consts: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = names.len();
        if consts.len() != n || consts.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Invalid("structure constants must be n x n x n".into()));
        }
        let desc = LieAlgebraDesc { names, consts };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if desc.consts[i][j][k] != -desc.consts[j][i][k].clone() {
                        return Err(Error::Invalid(format!("bracket [{i},{j}] not antisymmetric")));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]]
                    let mut sum = vec![Rational::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = desc.bracket(b, c);
                        let outer = desc.bracket_vec(&unit(n, a), &inner);
                        for (s, o) in sum.iter_mut().zip(outer) {
                            *s += o;
                        }
                    }
                    if sum.iter().any(|x| !x.is_zero()) {
                        return Err(Error::Invalid(format!("Jacobi identity fails on ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(desc)
    }

    /// Builds from brackets `[x_i, x_j] = Σ c x_k` listed once per pair;
    /// the antisymmetric partner is filled in.
    pub fn from_brackets(names: &[&str], brackets: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let n = names.len();
        let mut consts = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, k, c) in brackets {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Invalid("bracket index out of range".into()));
            }
            consts[*i][*j][*k] += c;
            consts[*j][*i][*k] -= c;
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), consts)
    }

    /// `sl2` with ordered basis `F < H < E`.
    pub fn sl2() -> Arc<Self> {
        static SL2: OnceLock<Arc<LieAlgebraDesc>> = OnceLock::new();
        SL2.get_or_init(|| {
            Arc::new(
                Self::from_brackets(&["F", "H", "E"], &[(1, 2, 2, rat(2)), (1, 0, 0, rat(-2)), (2, 0, 1, rat(1))])
                    .expect("sl2 structure constants"),
            )
        })
        .clone()
    }

    /// `sl2 ⊕ sl2` with basis `F1, H1, E1, F2, H2, E2`.
    pub fn sl2_pair() -> Arc<Self> {
        static PAIR: OnceLock<Arc<LieAlgebraDesc>> = OnceLock::new();
        PAIR.get_or_init(|| {
            let s = Self::sl2();
            Arc::new(s.direct_sum(&s, "1", "2"))
        })
        .clone()
    }

    /// `self ⊕ other`, basis names suffixed.
    pub fn direct_sum(&self, other: &Self, left: &str, right: &str) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut consts = vec![vec![vec![Rational::zero(); n + m]; n + m]; n + m];
        for (offset, src) in [(0, &self.consts), (n, &other.consts)] {
            for (i, plane) in src.iter().enumerate() {
                for (j, row) in plane.iter().enumerate() {
                    consts[offset + i][offset + j][offset..offset + row.len()].clone_from_slice(row);
                }
            }
        }
        let names = self
            .names
            .iter()
            .map(|s| format!("{s}{left}"))
            .chain(other.names.iter().map(|s| format!("{s}{right}")))
            .collect();
        LieAlgebraDesc { names, consts }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.consts[i][j][k]
    }

    /// Coordinates of `[x_i, x_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        self.consts[i][j].clone()
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.consts[i][j][k].is_zero() {
                        *o += &c * &self.consts[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad x_i` in the basis (columns are images).
    pub fn ad(&self, i: usize) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.consts[i][j][k].clone();
            }
        }
        m
    }

    pub fn to_json(&self) -> LieAlgebraJson {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = &self.consts[i][j][k];
                    if !c.is_zero() {
                        brackets.push(BracketEntry { i, j, k, c: format_rational(c) });
                    }
                }
            }
        }
        LieAlgebraJson { basis: self.names.clone(), brackets }
    }

    pub fn from_json(js: &LieAlgebraJson) -> Result<Self> {
        let names: Vec<&str> = js.basis.iter().map(String::as_str).collect();
        let brackets =
            js.brackets.iter().map(|b| Ok((b.i, b.j, b.k, parse_rational(&b.c)?))).collect::<Result<Vec<_>>>()?;
        Self::from_brackets(&names, &brackets)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::from_integer(1.into());
    v
}

/// Basis indices of `sl2` in the order `F < H < E`.
pub mod sl2_index {
    pub const F: usize = 0;
    pub const H: usize = 1;
    pub const E: usize = 2;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_brackets() {
        let g = LieAlgebraDesc::sl2();
        assert_eq!(g.bracket(2, 0), vec![rat(0), rat(1), rat(0)]);
        assert_eq!(g.bracket(1, 2), vec![rat(0), rat(0), rat(2)]);
        assert_eq!(g.bracket(1, 0), vec![rat(-2), rat(0), rat(0)]);
    }

    #[test]
    fn pair_factors_commute() {
        let g = LieAlgebraDesc::sl2_pair();
        assert_eq!(g.dim(), 6);
        for i in 0..3 {
            for j in 3..6 {
                assert!(g.bracket(i, j).iter().all(Zero::is_zero));
            }
        }
        assert_eq!(g.names()[5], "E2");
    }

    #[test]
    fn jacobi_violation_rejected() {
        // [x,y] = y, [y,z] = x, [z,x] = 0 fails Jacobi
        let bad = LieAlgebraDesc::from_brackets(&["x", "y", "z"], &[(0, 1, 1, rat(1)), (1, 2, 0, rat(1))]);
        assert!(bad.is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = LieAlgebraDesc::sl2();
        let js = serde_json::to_string(&g.to_json()).unwrap();
        let back = LieAlgebraDesc::from_json(&serde_json::from_str(&js).unwrap()).unwrap();
        assert_eq!(&back, g.as_ref());
    }
}
