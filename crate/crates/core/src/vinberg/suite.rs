//! Named verification suites with their default bounds.

use crate::asymptotics::exponents_suite;
use crate::error::{Error, Result};
use crate::report::Report;

use super::degeneration::{grderv_report, rees_fibers_check, tau_report};
use super::{
    asymp_diagram_suite, parabolic_suite, pw_vs_derivations_check, verify_dsl2_presentation, verify_dy_relation,
    verify_sl2_identities, vfiltration_check,
};

/// Suites in the order `all` runs them.
pub const SUITES: [&str; 11] = [
    "identities",
    "presentation",
    "dy",
    "rees",
    "tau",
    "grderv",
    "pwfilt",
    "vfilt",
    "asymp-diagram",
    "parabolic",
    "exponents",
];

/// Default bound of each suite: the polynomial/PBW degree, level, or
/// highest weight the suite sweeps up to. The `D_Y` table grows steeply
/// (about 4 s at bound 4, 40 s at 5, 10 min at 6), so it defaults lower.
pub fn default_bound(suite: &str) -> Option<u32> {
    if !SUITES.contains(&suite) {
        return None;
    }
    Some(if suite == "dy" { 4 } else { 6 })
}

pub fn run_suite(suite: &str, bound: u32) -> Result<Report> {
    match suite {
        "identities" => Ok(verify_sl2_identities()),
        "presentation" => Ok(verify_dsl2_presentation()),
        "dy" => verify_dy_relation(bound),
        "rees" => rees_fibers_check(bound as i64),
        "tau" => tau_report(bound as i64),
        "grderv" => grderv_report(bound as i64),
        "pwfilt" => pw_vs_derivations_check(bound),
        "vfilt" => vfiltration_check(bound),
        "asymp-diagram" => asymp_diagram_suite(bound as usize),
        "parabolic" => parabolic_suite(bound as usize),
        "exponents" => exponents_suite(bound),
        other => Err(Error::Invalid(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_has_a_default() {
        assert!(SUITES.iter().all(|s| default_bound(s).is_some()));
        assert!(default_bound("bogus").is_none());
        assert!(run_suite("bogus", 1).is_err());
    }
}
