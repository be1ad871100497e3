use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::InferenceError;
use crate::numeric::canonical_sum;

/// Odds held as a natural logarithm, with explicit states for the two
/// conclusive extremes.
///
/// `Finite` always holds a finite real. `Zero` (odds 0) and `Infinite`
/// (odds +inf) absorb finite terms under combination; combining one with
/// the other is an error rather than a value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogOdds {
    Zero,
    Finite(f64),
    Infinite,
}

impl LogOdds {
    pub const EVEN: LogOdds = LogOdds::Finite(0.0);

    /// From a ratio in `[0, +inf]`.
    pub fn from_odds(odds: f64) -> Result<Self, InferenceError> {
        if odds.is_nan() || odds < 0.0 {
            return Err(InferenceError::InvalidOdds(odds));
        }
        Ok(if odds == 0.0 {
            LogOdds::Zero
        } else if odds == f64::INFINITY {
            LogOdds::Infinite
        } else {
            LogOdds::Finite(odds.ln())
        })
    }

    /// From a natural-log value; `±inf` map to the conclusive states.
    pub fn from_ln(ln: f64) -> Result<Self, InferenceError> {
        if ln.is_nan() {
            return Err(InferenceError::InvalidOdds(ln));
        }
        Ok(if ln == f64::NEG_INFINITY {
            LogOdds::Zero
        } else if ln == f64::INFINITY {
            LogOdds::Infinite
        } else {
            LogOdds::Finite(ln)
        })
    }

    /// Natural log, `None` for the conclusive states.
    pub fn ln(self) -> Option<f64> {
        match self {
            LogOdds::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Natural log with the conclusive states mapped to `±inf`.
    pub fn ln_extended(self) -> f64 {
        match self {
            LogOdds::Zero => f64::NEG_INFINITY,
            LogOdds::Finite(v) => v,
            LogOdds::Infinite => f64::INFINITY,
        }
    }

    /// Base-10 log, the "weight of evidence" display unit.
    pub fn log10(self) -> Option<f64> {
        self.ln().map(|v| v / std::f64::consts::LN_10)
    }

    /// The odds ratio itself. Very large finite log-odds overflow to `inf`.
    pub fn odds(self) -> f64 {
        self.ln_extended().exp()
    }

    pub fn probability(self) -> f64 {
        match self {
            LogOdds::Zero => 0.0,
            LogOdds::Infinite => 1.0,
            // logistic, arranged so exp never overflows
            LogOdds::Finite(x) if x >= 0.0 => 1.0 / (1.0 + (-x).exp()),
            LogOdds::Finite(x) => {
                let e = x.exp();
                e / (1.0 + e)
            }
        }
    }

    pub fn is_conclusive(self) -> bool {
        !matches!(self, LogOdds::Finite(_))
    }

    /// Sum of log-odds terms (product of odds). Finite parts are summed in
    /// canonical order, so the result does not depend on the order of
    /// `terms`. Returns `None` when a zero meets an infinite.
    pub fn combine(terms: &[LogOdds]) -> Option<LogOdds> {
        let zero = terms.contains(&LogOdds::Zero);
        let infinite = terms.contains(&LogOdds::Infinite);
        match (zero, infinite) {
            (true, true) => None,
            (true, false) => Some(LogOdds::Zero),
            (false, true) => Some(LogOdds::Infinite),
            (false, false) => {
                let finite: Vec<f64> = terms.iter().filter_map(|t| t.ln()).collect();
                Some(LogOdds::Finite(canonical_sum(&finite)))
            }
        }
    }

    pub fn state_name(self) -> &'static str {
        match self {
            LogOdds::Zero => "zero",
            LogOdds::Finite(_) => "finite",
            LogOdds::Infinite => "infinite",
        }
    }
}

impl fmt::Display for LogOdds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogOdds::Zero => f.write_str("zero"),
            LogOdds::Infinite => f.write_str("infinite"),
            LogOdds::Finite(v) => write!(f, "ln {v}"),
        }
    }
}

/// JSON form: `state`, `ln`, `log10`, `odds`, `probability`. Values that
/// JSON cannot represent (the conclusive logs, overflowing odds) are null.
impl Serialize for LogOdds {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let odds = self.odds();
        let mut s = serializer.serialize_struct("LogOdds", 5)?;
        s.serialize_field("state", self.state_name())?;
        s.serialize_field("ln", &self.ln())?;
        s.serialize_field("log10", &self.log10())?;
        s.serialize_field("odds", &odds.is_finite().then_some(odds))?;
        s.serialize_field("probability", &self.probability())?;
        s.end()
    }
}
