//! Reports for the Rees degeneration `O(SL2) ⇝ O(Y)`: fiber tables, `τ`
//! and the associated graded of the derivation filtration.

use serde_json::json;

use crate::error::Result;
use crate::rees::{fiber_tables, gr_derivations_check, rees_build, tau_check, FilteredAlgebra, ReesPresentation};
use crate::report::Report;

fn presentation() -> Result<ReesPresentation> {
    rees_build(&FilteredAlgebra::peter_weyl_sl2())
}

/// Fibers at `z = 1` and `z = 0` against the Peter–Weyl and horocycle
/// dimension counts, for levels `0..=bound`.
pub fn rees_fibers_check(bound: i64) -> Result<Report> {
    let r = presentation()?;
    let mut out = Report::new("rees", json!({ "bound": bound, "relation": r.relation().to_string() }));
    for row in fiber_tables(&r, bound)? {
        let pass = row.pass();
        out.item(
            format!("level {}: fibers at z=1 and z=0", row.level),
            json!({ "sl2": row.peter_weyl_dim, "horocycle": (row.level + 1) * (row.level + 1) }),
            json!({
                "rees": row.rees_dim,
                "filtered": row.filtered_dim,
                "rank_at_one": row.rank_at_one,
                "graded": row.graded_dim,
                "rank_at_zero": row.rank_at_zero,
            }),
            pass,
        );
    }
    Ok(out)
}

/// `τ: Derv_{≤λ}(O(SL2)) → RelDer(Rees)_λ` for `|λ| ≤ bound`.
pub fn tau_report(bound: i64) -> Result<Report> {
    let r = presentation()?;
    let mut out = Report::new("tau", json!({ "bound": bound }));
    for row in tau_check(&r, bound)? {
        let pass = row.pass();
        out.item(
            format!("level {}: τ injective with relative image", row.level),
            json!({ "dim": row.filtered_dim, "relative": true }),
            json!({
                "dim": row.image_rank,
                "relative": row.images_relative,
                "relative_derivations": row.relative_dim,
            }),
            pass,
        );
    }
    Ok(out)
}

/// `gr_λ Derv(O(SL2))` against `Derv(O(Y))_λ` for `|λ| ≤ bound`, with the
/// base change `RelDer ⊗ O(Y)` and the rank of specialization at `z = 0`.
pub fn grderv_report(bound: i64) -> Result<Report> {
    let r = presentation()?;
    let mut out = Report::new("grderv", json!({ "bound": bound }));
    for row in gr_derivations_check(&r, bound)? {
        let pass = row.pass();
        out.item(
            format!("level {}: gr Derv(O(SL2)) vs Derv(O(Y))", row.level),
            json!({ "dim": row.horocycle_dim }),
            json!({
                "dim": row.graded_filtered_dim,
                "base_changed": row.base_changed_dim,
                "specialization_rank": row.specialization_rank,
            }),
            pass,
        );
    }
    Ok(out)
}
