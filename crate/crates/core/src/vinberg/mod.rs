//! The SL2 verification suite.

pub mod dy;
pub mod identities;

pub use dy::{dy_table, verify_dy_relation, DyRow, SmashProduct};
pub use identities::{euler_operator, left_cofactor, verify_dsl2_presentation, verify_sl2_identities, CROSS_RELATIONS};
pub mod filtrations;
pub use filtrations::{
    default_pw_samples, pw_vs_derivations_check, vfiltration_check, FiltrationComparisonReport, LevelRecord, PwSample,
};
pub mod localization;
pub use localization::{
    asymp_diagram_check, asymp_diagram_suite, localize, parabolic_rank1_check, parabolic_suite, LocalizeReport,
};
pub mod degeneration;
pub use degeneration::{grderv_report, rees_fibers_check, tau_report};
pub mod suite;
pub use suite::{default_bound, run_suite, SUITES};
