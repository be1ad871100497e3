//! Evidential reasoning as posterior odds.
//!
//! A case pits two explanations against each other for each claim. Each
//! group of jointly assessed evidence contributes a likelihood ratio,
//! optionally discounted by a coverage exponent; complexity weights add an
//! Occam factor; the result is compared against a standard of proof.
//!
//! ```
//! use plaus_core::{parse_case, explain};
//!
//! let case = parse_case(r#"
//! case "demo"
//! claim c1 {
//!   for hp "the accused did it"
//!   against hd "a stranger did it"
//!   group g1 { evidence e1 "fingerprint" lr 9 }
//! }
//! "#).unwrap();
//! let report = explain(&case).unwrap();
//! assert!((report.claims[0].total.odds() - 9.0).abs() < 1e-9);
//! ```

pub mod coherence;
pub mod config;
pub mod inference;
pub mod model;
pub mod numeric;
pub mod parser;
pub mod report;
pub mod validate;

pub use config::{qualitative_to_lr, Config, ScaleTable};
pub use inference::{
    apply_standard, case_combined_log_odds, claim_posterior_log_odds, explain,
    group_effective_log_lr, occam_net_log_factor, probability_from_odds, sweep, Finding,
    InferenceError, LogOdds,
};
pub use model::*;
pub use parser::{parse_case, parse_case_with, serialize_case, ParseDiagnostic, SourceSpan};
pub use validate::{validate_case, ValidationReport, Violation, ViolationCode};
