//! Coherence checking: an exact enumeration oracle over small discrete
//! worlds, and seeded property probes that exercise the engine's
//! consistency guarantees on real cases.

mod checks;
pub mod generator;
mod oracle;
mod world;

pub use checks::{
    check_case_coherence, check_case_coherence_with, check_chain_rule, check_chain_rule_with,
    check_engine_vs_oracle, enumerated_conditional, log_odds_close, CheckResult, CoherenceError,
    ConditionalFn, LOG_TOLERANCE, RELATIVE_TOLERANCE,
};
pub use oracle::{oracle_lr, OracleError};
pub use world::{Assignment, DiscreteWorld, Variable, WorldError, MASS_TOLERANCE, MAX_OUTCOMES};
