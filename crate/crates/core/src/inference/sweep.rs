//! One-parameter sensitivity sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{apply_standard, case_combined_log_odds, Finding, InferenceError, LogOdds};
use crate::model::{CaseSpec, Side, StandardOfProof};
use crate::validate::validate_case;

/// A numeric parameter of a case, written `claim.group.lr`,
/// `claim.group.coverage`, `claim.prior_odds`, `claim.for.complexity` or
/// `claim.against.complexity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    Lr { claim: String, group: String },
    Coverage { claim: String, group: String },
    Prior { claim: String },
    Complexity { claim: String, side: Side },
}

impl FromStr for SweepTarget {
    type Err = InferenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('.').collect();
        let target = match parts.as_slice() {
            [claim, "prior_odds"] => SweepTarget::Prior {
                claim: claim.to_string(),
            },
            [claim, "for", "complexity"] => SweepTarget::Complexity {
                claim: claim.to_string(),
                side: Side::Claimant,
            },
            [claim, "against", "complexity"] => SweepTarget::Complexity {
                claim: claim.to_string(),
                side: Side::Opposing,
            },
            [claim, group, "lr"] => SweepTarget::Lr {
                claim: claim.to_string(),
                group: group.to_string(),
            },
            [claim, group, "coverage"] => SweepTarget::Coverage {
                claim: claim.to_string(),
                group: group.to_string(),
            },
            _ => {
                return Err(InferenceError::UnknownTarget(format!(
                    "`{s}` is not a parameter reference (try claim.group.lr, claim.group.coverage, claim.prior_odds or claim.for.complexity)"
                )))
            }
        };
        Ok(target)
    }
}

impl fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepTarget::Lr { claim, group } => write!(f, "{claim}.{group}.lr"),
            SweepTarget::Coverage { claim, group } => write!(f, "{claim}.{group}.coverage"),
            SweepTarget::Prior { claim } => write!(f, "{claim}.prior_odds"),
            SweepTarget::Complexity { claim, side } => {
                write!(f, "{claim}.{}.complexity", side.keyword())
            }
        }
    }
}

impl Serialize for SweepTarget {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl SweepTarget {
    fn check_domain(&self, value: f64) -> Result<(), InferenceError> {
        let reason = match self {
            SweepTarget::Lr { .. } if value.is_nan() || value < 0.0 => {
                "likelihood ratio must be >= 0"
            }
            SweepTarget::Coverage { .. } if !(value > 0.0 && value <= 1.0) => {
                "coverage must lie in (0, 1]"
            }
            SweepTarget::Prior { .. } if value.is_nan() || value < 0.0 => "prior odds must be >= 0",
            SweepTarget::Complexity { .. } if !(value >= 1.0 && value.is_finite()) => {
                "complexity must be a finite number >= 1"
            }
            _ => return Ok(()),
        };
        Err(self.domain(value, reason.into()))
    }

    fn domain(&self, value: f64, reason: String) -> InferenceError {
        InferenceError::Domain {
            target: self.to_string(),
            value,
            reason,
        }
    }

    fn unknown(&self) -> InferenceError {
        InferenceError::UnknownTarget(format!("{self} does not exist in this case"))
    }

    /// Current value of the parameter in `case`.
    pub fn current(&self, case: &CaseSpec) -> Result<f64, InferenceError> {
        let mut probe = case.clone();
        self.slot(&mut probe).map(|v| *v)
    }

    fn slot<'c>(&self, case: &'c mut CaseSpec) -> Result<&'c mut f64, InferenceError> {
        let unknown = self.unknown();
        let claim_id = match self {
            SweepTarget::Lr { claim, .. }
            | SweepTarget::Coverage { claim, .. }
            | SweepTarget::Prior { claim }
            | SweepTarget::Complexity { claim, .. } => claim,
        };
        let claim = case.claim_mut(claim_id).ok_or_else(|| unknown.clone())?;
        match self {
            SweepTarget::Prior { .. } => Ok(&mut claim.prior_odds),
            SweepTarget::Complexity { side, .. } => Ok(&mut claim.hypothesis_mut(*side).complexity),
            SweepTarget::Lr { group, .. } => {
                let group = claim.group_mut(group).ok_or(unknown)?;
                group.lr_label = None;
                Ok(&mut group.lr)
            }
            SweepTarget::Coverage { group, .. } => {
                Ok(&mut claim.group_mut(group).ok_or(unknown)?.coverage)
            }
        }
    }

    /// Copy of `case` with the parameter set to `value`.
    pub fn substitute(&self, case: &CaseSpec, value: f64) -> Result<CaseSpec, InferenceError> {
        self.check_domain(value)?;
        let mut out = case.clone();
        *self.slot(&mut out)? = value;
        if let Some(v) = validate_case(&out).violations.first() {
            return Err(self.domain(value, v.to_string()));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepClaim {
    pub claim_id: String,
    pub odds: LogOdds,
    pub finding: Finding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "crate::numeric::serialize_extended")]
    pub value: f64,
    pub claims: Vec<SweepClaim>,
    pub combined: LogOdds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub target: SweepTarget,
    #[serde(serialize_with = "crate::numeric::serialize_extended")]
    pub base_value: f64,
    pub rows: Vec<SweepRow>,
}

/// Re-evaluate `case` once per value with the target parameter replaced.
/// Rows are computed independently and returned in input order.
pub fn sweep(
    case: &CaseSpec,
    target: &SweepTarget,
    values: &[f64],
    standard: &StandardOfProof,
) -> Result<SweepTable, InferenceError> {
    let base_value = target.current(case)?;
    let rows = values
        .par_iter()
        .map(|&value| {
            let variant = target.substitute(case, value)?;
            let odds = case_combined_log_odds(&variant)?;
            Ok(SweepRow {
                value,
                claims: odds
                    .per_claim
                    .into_iter()
                    .map(|(claim_id, odds)| SweepClaim {
                        claim_id,
                        odds,
                        finding: apply_standard(odds, standard),
                    })
                    .collect(),
                combined: odds.combined,
            })
        })
        .collect::<Result<Vec<_>, InferenceError>>()?;
    Ok(SweepTable {
        target: target.clone(),
        base_value,
        rows,
    })
}
