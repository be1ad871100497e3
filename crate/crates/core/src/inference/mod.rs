//! Posterior odds for claims and cases.
//!
//! Everything is additive in natural-log space: a claim's posterior
//! log-odds is its prior log-odds, plus each group's coverage-discounted
//! log likelihood ratio, plus the net Occam factor.

mod evaluate;
mod log_odds;
mod sweep;

use thiserror::Error;

pub use evaluate::{
    apply_standard, case_combined_log_odds, claim_contributions, claim_posterior_log_odds, explain,
    group_effective_log_lr, occam_net_log_factor, probability_from_odds, CaseOdds,
    ClaimContribution, CombinedOdds, ContributionReport, Finding, GroupContribution,
};
pub use log_odds::LogOdds;
pub use sweep::{sweep, SweepRow, SweepTable, SweepTarget};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("NONFINITE_WITH_COVERAGE: group {group} has conclusive likelihood ratio {lr} and coverage {coverage} < 1")]
    NonfiniteWithCoverage {
        group: String,
        lr: f64,
        coverage: f64,
    },
    #[error(
        "CONTRADICTORY_CONCLUSIVES: {scope} combines conclusive support with conclusive refutation"
    )]
    ContradictoryConclusives { scope: String },
    #[error("invalid odds {0}")]
    InvalidOdds(f64),
    #[error("UNKNOWN_TARGET: {0}")]
    UnknownTarget(String),
    #[error("DOMAIN: {target} = {value}: {reason}")]
    Domain {
        target: String,
        value: f64,
        reason: String,
    },
}
