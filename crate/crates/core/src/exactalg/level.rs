use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::ExactPoly;
use super::ring::QuotientRing;
use crate::error::Result;

/// A filtration level: a lattice point, or bottom for the zero element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelValue {
    Bottom,
    At(Vec<i64>),
}

impl LevelValue {
    pub fn scalar(n: i64) -> Self {
        LevelValue::At(vec![n])
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LevelValue::Bottom)
    }

    pub fn point(&self) -> Option<&[i64]> {
        match self {
            LevelValue::Bottom => None,
            LevelValue::At(v) => Some(v),
        }
    }

    /// The single coordinate of a rank-one level.
    pub fn as_scalar(&self) -> Option<i64> {
        match self {
            LevelValue::At(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }
}

impl fmt::Display for LevelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelValue::Bottom => write!(f, "bottom"),
            LevelValue::At(v) if v.len() == 1 => write!(f, "{}", v[0]),
            LevelValue::At(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Peter–Weyl level of the class of `f`: the least total degree of a
/// polynomial representative, as a rank-one lattice point.
///
/// On `O(SL2)` the matrix coefficients of `Sym^m` span the classes of minimal
/// degree `m`. Which filtered pieces contain an element additionally depends
/// on the parity of its homogeneous components; that bookkeeping belongs to
/// the lattice order, see [`crate::rees::FilteredAlgebra::piece_contains`].
pub fn pw_level(f: &ExactPoly, ring: &QuotientRing) -> Result<LevelValue> {
    Ok(match ring.min_degree(f)? {
        None => LevelValue::Bottom,
        Some(d) => LevelValue::scalar(d as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Vars;

    fn p(s: &str) -> ExactPoly {
        ExactPoly::parse(&Vars::abcd(), s).unwrap()
    }

    #[test]
    fn levels_in_sl2() {
        let r = QuotientRing::sl2();
        assert_eq!(pw_level(&p("a"), &r).unwrap(), LevelValue::scalar(1));
        assert_eq!(pw_level(&p("1"), &r).unwrap(), LevelValue::scalar(0));
        assert_eq!(pw_level(&p("a d"), &r).unwrap(), LevelValue::scalar(2));
        assert_eq!(pw_level(&p("a d - b c"), &r).unwrap(), LevelValue::scalar(0));
        assert_eq!(pw_level(&p("a d - b c - 1"), &r).unwrap(), LevelValue::Bottom);
    }

    #[test]
    fn levels_in_graded_rings() {
        assert_eq!(pw_level(&p("a d - b c"), &QuotientRing::horocycle()).unwrap(), LevelValue::Bottom);
        assert_eq!(pw_level(&p("a d - b c"), &QuotientRing::mat2()).unwrap(), LevelValue::scalar(2));
    }

    #[test]
    fn level_serializes() {
        let s = serde_json::to_string(&LevelValue::scalar(3)).unwrap();
        assert_eq!(s, r#"{"at":[3]}"#);
        assert_eq!(serde_json::to_string(&LevelValue::Bottom).unwrap(), r#""bottom""#);
    }
}
