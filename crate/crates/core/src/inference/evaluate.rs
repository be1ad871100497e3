use serde::Serialize;

use super::{InferenceError, LogOdds};
use crate::model::{CaseSpec, Claim, EvidenceGroup, StandardOfProof};

/// `c · ln(lr)` for a group with likelihood ratio `lr` and coverage `c`.
///
/// Conclusive ratios (`0` or `inf`) pass through as the corresponding state
/// and may not be discounted.
pub fn group_effective_log_lr(group: &EvidenceGroup) -> Result<LogOdds, InferenceError> {
    let c = group.coverage;
    if !(c > 0.0 && c <= 1.0) {
        return Err(InferenceError::Domain {
            target: format!("{}.coverage", group.id),
            value: c,
            reason: "coverage must lie in (0, 1]".into(),
        });
    }
    let raw = LogOdds::from_odds(group.lr)?;
    match raw {
        LogOdds::Finite(ln_lr) => Ok(LogOdds::Finite(c * ln_lr)),
        _ if c < 1.0 => Err(InferenceError::NonfiniteWithCoverage {
            group: group.id.clone(),
            lr: group.lr,
            coverage: c,
        }),
        conclusive => Ok(conclusive),
    }
}

/// Net Occam factor `ln(F_opposing / F_claimant)`. Penalising the claimant
/// lowers its odds, penalising the opponent raises them; only the ratio
/// matters.
pub fn occam_net_log_factor(claimant_complexity: f64, opposing_complexity: f64) -> LogOdds {
    LogOdds::Finite((opposing_complexity / claimant_complexity).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Finding {
    Met,
    NotMet,
}

impl Finding {
    pub fn as_str(self) -> &'static str {
        match self {
            Finding::Met => "met",
            Finding::NotMet => "not_met",
        }
    }
}

/// Met iff the odds strictly exceed the threshold; a tie leaves the burden
/// undischarged.
pub fn apply_standard(odds: LogOdds, standard: &StandardOfProof) -> Finding {
    let met = match odds {
        LogOdds::Zero => false,
        LogOdds::Infinite => true,
        LogOdds::Finite(ln) => ln > standard.threshold_odds.ln(),
    };
    if met {
        Finding::Met
    } else {
        Finding::NotMet
    }
}

pub fn probability_from_odds(odds: LogOdds) -> f64 {
    odds.probability()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupContribution {
    pub group_id: String,
    pub items: Vec<String>,
    #[serde(serialize_with = "crate::numeric::serialize_extended")]
    pub lr: f64,
    pub lr_label: Option<String>,
    pub coverage: f64,
    /// `ln(lr)`
    pub raw: LogOdds,
    /// `coverage · ln(lr)`
    pub effective: LogOdds,
    pub conditions_on: Vec<String>,
}

/// Every additive term of one claim's posterior log-odds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimContribution {
    pub claim_id: String,
    pub claimant: String,
    pub opposing: String,
    pub prior: LogOdds,
    pub groups: Vec<GroupContribution>,
    pub claimant_complexity: f64,
    pub opposing_complexity: f64,
    pub occam: LogOdds,
    pub total: LogOdds,
}

impl ClaimContribution {
    /// The terms whose sum is `total`: prior, each group's effective
    /// log-LR, then the Occam factor.
    pub fn terms(&self) -> Vec<LogOdds> {
        std::iter::once(self.prior)
            .chain(self.groups.iter().map(|g| g.effective))
            .chain(std::iter::once(self.occam))
            .collect()
    }
}

pub fn claim_contributions(claim: &Claim) -> Result<ClaimContribution, InferenceError> {
    let prior = LogOdds::from_odds(claim.prior_odds)?;
    let groups = claim
        .groups
        .iter()
        .map(|group| {
            Ok(GroupContribution {
                group_id: group.id.clone(),
                items: group.items.iter().map(|i| i.id.clone()).collect(),
                lr: group.lr,
                lr_label: group.lr_label.clone(),
                coverage: group.coverage,
                raw: LogOdds::from_odds(group.lr)?,
                effective: group_effective_log_lr(group)?,
                conditions_on: group.conditions_on.clone(),
            })
        })
        .collect::<Result<Vec<_>, InferenceError>>()?;
    let occam = occam_net_log_factor(claim.claimant.complexity, claim.opposing.complexity);
    let mut contribution = ClaimContribution {
        claim_id: claim.id.clone(),
        claimant: claim.claimant.id.clone(),
        opposing: claim.opposing.id.clone(),
        prior,
        groups,
        claimant_complexity: claim.claimant.complexity,
        opposing_complexity: claim.opposing.complexity,
        occam,
        total: LogOdds::EVEN,
    };
    contribution.total = LogOdds::combine(&contribution.terms()).ok_or_else(|| {
        InferenceError::ContradictoryConclusives {
            scope: format!("claim {}", claim.id),
        }
    })?;
    Ok(contribution)
}

/// `ln(prior) + Σ c·ln(lr) + ln(F_opposing / F_claimant)`.
pub fn claim_posterior_log_odds(claim: &Claim) -> Result<LogOdds, InferenceError> {
    claim_contributions(claim).map(|c| c.total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOdds {
    pub per_claim: Vec<(String, LogOdds)>,
    /// Product of the per-claim odds. Informational only: standards are
    /// applied to each claim separately.
    pub combined: LogOdds,
}

fn combine_claims(totals: &[LogOdds]) -> Result<LogOdds, InferenceError> {
    LogOdds::combine(totals).ok_or_else(|| InferenceError::ContradictoryConclusives {
        scope: "the combined case odds".into(),
    })
}

pub fn case_combined_log_odds(case: &CaseSpec) -> Result<CaseOdds, InferenceError> {
    let per_claim = case
        .claims
        .iter()
        .map(|claim| Ok((claim.id.clone(), claim_posterior_log_odds(claim)?)))
        .collect::<Result<Vec<_>, InferenceError>>()?;
    let totals: Vec<LogOdds> = per_claim.iter().map(|(_, odds)| *odds).collect();
    Ok(CaseOdds {
        combined: combine_claims(&totals)?,
        per_claim,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinedOdds {
    pub total: LogOdds,
    /// Π P(claim), the figure the conjunction argument multiplies. Shown
    /// for contrast; never used for a finding.
    pub naive_probability_product: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContributionReport {
    pub case_id: String,
    pub claims: Vec<ClaimContribution>,
    pub combined: CombinedOdds,
}

pub fn explain(case: &CaseSpec) -> Result<ContributionReport, InferenceError> {
    let claims = case
        .claims
        .iter()
        .map(claim_contributions)
        .collect::<Result<Vec<_>, _>>()?;
    let totals: Vec<LogOdds> = claims.iter().map(|c| c.total).collect();
    let naive_probability_product = totals.iter().map(|t| t.probability()).product();
    Ok(ContributionReport {
        case_id: case.case_id.clone(),
        combined: CombinedOdds {
            total: combine_claims(&totals)?,
            naive_probability_product,
        },
        claims,
    })
}
