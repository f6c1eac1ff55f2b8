//! Fiberwise localization: the relative localization on `Mat2` against the
//! direct localizations on `SL2` and the horocycle chart, and parabolic
//! restriction before localization on the torus fiber.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::action::{
    builtin_lr_action_horocycle, builtin_lr_action_mat2, builtin_lr_action_sl2, coinvariants, localization_fiber,
    stabilizer_subalgebra, LieSubalgebra, RationalPoint,
};
use crate::error::{Error, Result};
use crate::exactalg::rational::{rat, ratio, Rational};
use crate::lie::desc::LieAlgebraDesc;
use crate::lie::rep::{matrix_coefficient_bimodule, FinDimBimodule};
use crate::linalg::QMatrix;
use crate::report::Report;

/// `(a, b, c, d)` of the default sample points: the identity, a torus
/// point and a unipotent point of `SL2`, the four rank-one coordinate
/// matrices and a generic rank-one matrix.
pub fn default_sample_points() -> Vec<RationalPoint> {
    vec![
        RationalPoint::from_i64(&[1, 0, 0, 1]),
        RationalPoint::new(vec![rat(2), rat(0), rat(0), ratio(1, 2)]),
        RationalPoint::from_i64(&[1, 1, 0, 1]),
        RationalPoint::from_i64(&[1, 0, 0, 0]),
        RationalPoint::from_i64(&[0, 1, 0, 0]),
        RationalPoint::from_i64(&[0, 0, 1, 0]),
        RationalPoint::from_i64(&[0, 0, 0, 1]),
        RationalPoint::from_i64(&[2, 3, 4, 6]),
    ]
}

/// Stabilizer of `X` in `sl2 ⊕ sl2` from the matrix equation `xX = Xy`:
/// the field of `(x, y)` at `X` is `-xX + Xy`.
pub fn stabilizer_by_matrices(p: &RationalPoint) -> Vec<Vec<Rational>> {
    let x = p.matrix();
    let e = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
    let f = QMatrix::from_i64(&[&[0, 0], &[1, 0]]);
    let h = QMatrix::from_i64(&[&[1, 0], &[0, -1]]);
    // basis order F1, H1, E1, F2, H2, E2
    let images: Vec<QMatrix> =
        [&f, &h, &e].iter().map(|g| g.mul(&x).scale(&rat(-1))).chain([&f, &h, &e].iter().map(|g| x.mul(g))).collect();
    let rows = images.iter().map(|m| m.to_rows().concat()).collect();
    QMatrix::from_rows(rows).left_kernel()
}

/// `dim M / s·M` as `dim M - rank [ρ(s_1) | ρ(s_2) | …]`.
pub fn coinvariant_dim_by_rank(m: &FinDimBimodule, basis: &[Vec<Rational>]) -> usize {
    let mut stacked = QMatrix::zeros(m.dim(), 0);
    for s in basis {
        stacked = stacked.hstack(&m.lie_matrix(s));
    }
    m.dim() - stacked.rank_fraction_free()
}

fn fiber_of(p: &RationalPoint) -> Result<&'static str> {
    let det = p.det();
    if det == rat(1) {
        Ok("SL2")
    } else if det.is_zero() && !p.is_zero() {
        Ok("Y")
    } else {
        Err(Error::NotOnVariety {
            point: p.to_string(),
            expected: "SL2 (det = 1) or the rank-one locus (det = 0, nonzero)".into(),
        })
    }
}

/// For each point, the coinvariant dimension computed three ways:
/// the relative action on `Mat2` at that point, the direct action on the
/// fiber, and the matrix-equation stabilizer with a rank count.
pub fn asymp_diagram_check(m: &FinDimBimodule, label: &str, points: &[RationalPoint]) -> Result<Report> {
    let mut r = Report::new(
        "asymp-diagram",
        json!({ "module": label, "points": points.iter().map(ToString::to_string).collect::<Vec<_>>() }),
    );
    let mat2 = builtin_lr_action_mat2();
    let sl2 = builtin_lr_action_sl2();
    let y = builtin_lr_action_horocycle();
    for p in points {
        let fiber = fiber_of(p)?;
        let relative = coinvariants(m, &stabilizer_subalgebra(&mat2, p)?, None)?.dim;
        let direct = localization_fiber(m, if fiber == "SL2" { &sl2 } else { &y }, p)?.dim;
        let oracle = coinvariant_dim_by_rank(m, &stabilizer_by_matrices(p));
        r.compare(format!("{label} at {p} ({fiber}): relative vs direct"), direct, relative);
        r.compare(format!("{label} at {p} ({fiber}): oracle vs direct"), oracle, direct);
    }
    Ok(r)
}

/// All `V_m ⊠ V_k^*` with `m, k ≤ max` over the default points.
pub fn asymp_diagram_suite(max: usize) -> Result<Report> {
    let points = default_sample_points();
    let mut r = Report::new("asymp-diagram", json!({ "max_weight": max, "points": points.len() }));
    for mm in 0..=max {
        for k in 0..=max {
            let sub = asymp_diagram_check(&matrix_coefficient_bimodule(mm, k), &format!("V{mm}⊗V{k}*"), &points)?;
            for it in sub.items {
                r.item(it.name, it.expected, it.got, it.pass);
            }
        }
    }
    Ok(r)
}

/// One localization fiber, as printed by the command-line driver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizeReport {
    pub module: [usize; 2],
    pub point: RationalPoint,
    pub fiber: String,
    /// Stabilizer basis in coordinates `F1, H1, E1, F2, H2, E2`.
    pub stabilizer: Vec<Vec<String>>,
    pub dim: usize,
    /// Induced `H1, H2` on the coinvariants, when `h ⊕ h` normalizes the stabilizer.
    pub cartan: Option<Vec<Vec<Vec<String>>>>,
    pub pass: bool,
}

/// Fiber at `p` of the localization of `V_m ⊠ V_k^*` on `SL2` or the
/// horocycle chart, whichever contains `p`.
pub fn localize(m: usize, k: usize, p: &RationalPoint) -> Result<LocalizeReport> {
    let fiber = fiber_of(p)?;
    let act = if fiber == "SL2" { builtin_lr_action_sl2() } else { builtin_lr_action_horocycle() };
    let module = matrix_coefficient_bimodule(m, k);
    let s = stabilizer_subalgebra(&act, p)?;
    let cartan_span = span(&LieAlgebraDesc::sl2_pair(), &[1, 4]);
    let (dim, cartan) = match coinvariants(&module, &s, Some(&cartan_span)) {
        Ok(res) => (res.dim, Some(res.induced.iter().map(QMatrix::to_json).collect())),
        Err(Error::NotNormalizing) => (coinvariants(&module, &s, None)?.dim, None),
        Err(e) => return Err(e),
    };
    Ok(LocalizeReport {
        module: [m, k],
        point: p.clone(),
        fiber: fiber.to_string(),
        stabilizer: s.basis_strings(),
        dim,
        cartan,
        pass: true,
    })
}

/// Projection and induced Cartan matrices from one route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicRoute {
    pub projection: QMatrix,
    pub cartan: Vec<QMatrix>,
}

fn span(pair: &Arc<LieAlgebraDesc>, idx: &[usize]) -> LieSubalgebra {
    LieSubalgebra::spanned_by_generators(pair.clone(), idx).expect("coordinate subalgebra")
}

fn right_inverse(p: &QMatrix) -> QMatrix {
    let pt = p.transpose();
    pt.mul(&p.mul(&pt).inverse().expect("full row rank"))
}

/// Checks the point lies on `{(t, 0, 0, 0) : t ≠ 0}`, the torus fiber over
/// the base point of the horocycle chart.
fn torus_fiber_point(p: &RationalPoint) -> Result<()> {
    let c = p.coords();
    if c.len() == 4 && !c[0].is_zero() && c[1..].iter().all(Zero::is_zero) {
        Ok(())
    } else {
        Err(Error::NotOnVariety { point: p.to_string(), expected: "torus fiber (t, 0, 0, 0), t ≠ 0".into() })
    }
}

/// Staged route: `n ⊕ n̄ = span{E1, F2}` coinvariants with the induced
/// `h ⊕ h` action, then coinvariants by the stabilizer of `p` in `h ⊕ h`
/// for its action on the torus fiber.
pub fn staged_route(m: &FinDimBimodule, p: &RationalPoint) -> Result<ParabolicRoute> {
    torus_fiber_point(p)?;
    let pair = LieAlgebraDesc::sl2_pair();
    let stage1 = coinvariants(m, &span(&pair, &[2, 3]), Some(&span(&pair, &[1, 4])))?;
    // torus stabilizer: kernel of the evaluation of H1, H2 at p
    let act = builtin_lr_action_horocycle();
    let eval =
        QMatrix::from_rows(vec![act.evaluation_matrix(p).row(1).to_vec(), act.evaluation_matrix(p).row(4).to_vec()]);
    let t = eval.left_kernel();
    let n1 = stage1.dim;
    let mut image = QMatrix::zeros(n1, 0);
    for c in &t {
        image = image.hstack(&stage1.induced[0].scale(&c[0]).add(&stage1.induced[1].scale(&c[1])));
    }
    let p2 = QMatrix::from_rows_with_cols(image.left_kernel(), n1);
    let cartan = if p2.nrows() == 0 {
        vec![QMatrix::zeros(0, 0); 2]
    } else {
        let r2 = right_inverse(&p2);
        stage1.induced.iter().map(|a| p2.mul(a).mul(&r2)).collect()
    };
    Ok(ParabolicRoute { projection: p2.mul(&stage1.projection), cartan })
}

/// Direct route: stabilizer coinvariants on the horocycle chart with the
/// induced `h ⊕ h` action.
pub fn direct_route(m: &FinDimBimodule, p: &RationalPoint) -> Result<ParabolicRoute> {
    torus_fiber_point(p)?;
    let pair = LieAlgebraDesc::sl2_pair();
    let s = stabilizer_subalgebra(&builtin_lr_action_horocycle(), p)?;
    let res = coinvariants(m, &s, Some(&span(&pair, &[1, 4])))?;
    Ok(ParabolicRoute { projection: res.projection, cartan: res.induced })
}

/// Whether two routes have the same kernel, and the comparison map `T`
/// (`P_direct = T P_staged`) intertwines the induced Cartan actions.
pub fn routes_agree(staged: &ParabolicRoute, direct: &ParabolicRoute) -> (bool, bool) {
    let (ps, pd) = (&staged.projection, &direct.projection);
    if ps.nrows() != pd.nrows() {
        return (false, false);
    }
    if ps.nrows() == 0 {
        return (true, true);
    }
    let t = pd.mul(&right_inverse(ps));
    let same_kernel = &t.mul(ps) == pd;
    let intertwines = same_kernel && staged.cartan.iter().zip(&direct.cartan).all(|(a, b)| t.mul(a) == b.mul(&t));
    (same_kernel, intertwines)
}

pub fn default_torus_points() -> Vec<RationalPoint> {
    vec![
        RationalPoint::from_i64(&[1, 0, 0, 0]),
        RationalPoint::from_i64(&[2, 0, 0, 0]),
        RationalPoint::new(vec![ratio(-1, 3), rat(0), rat(0), rat(0)]),
    ]
}

pub fn parabolic_rank1_check(m: &FinDimBimodule, label: &str, points: &[RationalPoint]) -> Result<Report> {
    let mut r = Report::new("parabolic", json!({ "module": label }));
    for p in points {
        let staged = staged_route(m, p)?;
        let direct = direct_route(m, p)?;
        r.compare(
            format!("{label} at {p}: staged vs direct dimension"),
            direct.projection.nrows(),
            staged.projection.nrows(),
        );
        let (kernel, cartan) = routes_agree(&staged, &direct);
        r.compare(format!("{label} at {p}: same quotient"), true, kernel);
        r.compare(format!("{label} at {p}: induced Cartan actions agree"), true, cartan);
    }
    Ok(r)
}

pub fn parabolic_suite(max: usize) -> Result<Report> {
    let points = default_torus_points();
    let mut r = Report::new(
        "parabolic",
        json!({ "max_weight": max, "points": points.iter().map(ToString::to_string).collect::<Vec<_>>() }),
    );
    for mm in 0..=max {
        for k in 0..=max {
            let sub = parabolic_rank1_check(&matrix_coefficient_bimodule(mm, k), &format!("V{mm}⊗V{k}*"), &points)?;
            for it in sub.items {
                r.item(it.name, it.expected, it.got, it.pass);
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::rep::{external_tensor, sym_power_rep};

    #[test]
    fn localize_examples() {
        let at = |m, k, p: &str| localize(m, k, &RationalPoint::parse(p).unwrap()).unwrap();
        assert_eq!(at(1, 1, "1,0,0,1").dim, 1);
        assert_eq!(at(1, 0, "1,0,0,1").dim, 0);
        assert_eq!(at(0, 0, "2,0,0,1/2").dim, 1);
        let torus = at(1, 1, "1,0,0,0");
        assert_eq!(torus.fiber, "Y");
        assert!(torus.cartan.is_some());
        assert!(matches!(localize(0, 0, &RationalPoint::from_i64(&[2, 0, 0, 1])), Err(Error::NotOnVariety { .. })));
    }

    #[test]
    fn matrix_stabilizer_matches_fields() {
        let act = builtin_lr_action_mat2();
        for p in default_sample_points() {
            let by_fields = stabilizer_subalgebra(&act, &p).unwrap();
            let by_matrices = stabilizer_by_matrices(&p);
            assert_eq!(by_fields.dim(), by_matrices.len(), "{p}");
            assert!(by_matrices.iter().all(|v| by_fields.contains(v)), "{p}");
        }
    }

    #[test]
    fn identity_fiber_of_v1() {
        let r = asymp_diagram_check(
            &matrix_coefficient_bimodule(1, 1),
            "V1⊗V1*",
            &[RationalPoint::from_i64(&[1, 0, 0, 1])],
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.items[0].got, json!(1));
    }

    #[test]
    fn off_fiber_points_rejected() {
        let m = matrix_coefficient_bimodule(0, 0);
        assert!(asymp_diagram_check(&m, "V0", &[RationalPoint::from_i64(&[2, 0, 0, 1])]).is_err());
        assert!(parabolic_rank1_check(&m, "V0", &[RationalPoint::from_i64(&[1, 0, 0, 1])]).is_err());
    }

    #[test]
    fn parabolic_examples() {
        for m in [
            matrix_coefficient_bimodule(0, 0),
            matrix_coefficient_bimodule(1, 1),
            external_tensor(&sym_power_rep(2), &sym_power_rep(0).dual()),
        ] {
            let r = parabolic_rank1_check(&m, "M", &default_torus_points()).unwrap();
            assert!(r.pass, "{}", r.summary());
        }
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::testkit::config;

    proptest! {
        #![proptest_config(config(32))]

        #[test]
        fn staged_and_direct_routes_agree(m in 0usize..4, k in 0usize..4, num in 1i64..7, den in 1i64..5, neg in any::<bool>()) {
            let t = ratio(if neg { -num } else { num }, den);
            let p = RationalPoint::new(vec![t, rat(0), rat(0), rat(0)]);
            let module = matrix_coefficient_bimodule(m, k);
            let (staged, direct) = (staged_route(&module, &p).unwrap(), direct_route(&module, &p).unwrap());
            prop_assert_eq!(staged.projection.nrows(), direct.projection.nrows());
            prop_assert_eq!(routes_agree(&staged, &direct), (true, true));
        }
    }
}
