//! Structural validation of a [`CaseSpec`].
//!
//! Problems are collected, never thrown. A case with an empty report is
//! evaluable: every inference operation on it is total.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::model::{is_identifier, AssumptionKind, CaseSpec, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    DuplicateItem,
    ItemInTwoGroups,
    CoverageOutOfRange,
    NegativeLr,
    ComplexityLtOne,
    EmptyClaim,
    EmptyGroup,
    EmptyStatement,
    DuplicateClaim,
    DuplicateGroup,
    DuplicateHypothesis,
    DuplicateAssumption,
    InvalidPrior,
    InvalidIdentifier,
    NonfiniteWithCoverage,
    ContradictoryConclusives,
    StipulationAsEvidence,
    UnknownAssumption,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::DuplicateItem => "DUPLICATE_ITEM",
            ViolationCode::ItemInTwoGroups => "ITEM_IN_TWO_GROUPS",
            ViolationCode::CoverageOutOfRange => "COVERAGE_OUT_OF_RANGE",
            ViolationCode::NegativeLr => "NEGATIVE_LR",
            ViolationCode::ComplexityLtOne => "COMPLEXITY_LT_ONE",
            ViolationCode::EmptyClaim => "EMPTY_CLAIM",
            ViolationCode::EmptyGroup => "EMPTY_GROUP",
            ViolationCode::EmptyStatement => "EMPTY_STATEMENT",
            ViolationCode::DuplicateClaim => "DUPLICATE_CLAIM",
            ViolationCode::DuplicateGroup => "DUPLICATE_GROUP",
            ViolationCode::DuplicateHypothesis => "DUPLICATE_HYPOTHESIS",
            ViolationCode::DuplicateAssumption => "DUPLICATE_ASSUMPTION",
            ViolationCode::InvalidPrior => "INVALID_PRIOR",
            ViolationCode::InvalidIdentifier => "INVALID_IDENTIFIER",
            ViolationCode::NonfiniteWithCoverage => "NONFINITE_WITH_COVERAGE",
            ViolationCode::ContradictoryConclusives => "CONTRADICTORY_CONCLUSIVES",
            ViolationCode::StipulationAsEvidence => "STIPULATION_AS_EVIDENCE",
            ViolationCode::UnknownAssumption => "UNKNOWN_ASSUMPTION",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where in a case a violation sits. Keyed by ids, never by position, so
/// that reports do not depend on declaration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Location {
    Case,
    Assumption {
        id: String,
    },
    Claim {
        claim: String,
    },
    Prior {
        claim: String,
    },
    Hypothesis {
        claim: String,
        side: Side,
    },
    Statement {
        claim: String,
        side: Side,
    },
    Complexity {
        claim: String,
        side: Side,
    },
    Group {
        claim: String,
        group: String,
    },
    Coverage {
        claim: String,
        group: String,
    },
    Lr {
        claim: String,
        group: String,
    },
    Condition {
        claim: String,
        group: String,
        assumption: String,
    },
    Item {
        claim: String,
        group: String,
        item: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// Sorted, deduplicated list of violations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

struct Collector(BTreeSet<Violation>);

impl Collector {
    fn push(&mut self, code: ViolationCode, location: Location, message: String) {
        self.0.insert(Violation {
            code,
            location,
            message,
        });
    }

    fn ident(&mut self, id: &str, what: &str, location: Location) {
        if !is_identifier(id) {
            self.push(
                ViolationCode::InvalidIdentifier,
                location,
                format!("{what} id {id:?} is not a valid identifier"),
            );
        }
    }
}

pub fn validate_case(case: &CaseSpec) -> ValidationReport {
    let mut out = Collector(BTreeSet::new());

    if case.claims.is_empty() {
        out.push(
            ViolationCode::EmptyClaim,
            Location::Case,
            "case declares no claims".into(),
        );
    }

    let mut assumptions: BTreeMap<&str, AssumptionKind> = BTreeMap::new();
    for assumption in &case.background {
        let loc = Location::Assumption {
            id: assumption.id.clone(),
        };
        out.ident(&assumption.id, "assumption", loc.clone());
        if assumptions
            .insert(&assumption.id, assumption.kind)
            .is_some()
        {
            out.push(
                ViolationCode::DuplicateAssumption,
                loc,
                format!("assumption {} declared more than once", assumption.id),
            );
        }
    }

    let mut claim_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for claim in &case.claims {
        *claim_counts.entry(&claim.id).or_default() += 1;
    }
    for (id, n) in &claim_counts {
        if *n > 1 {
            out.push(
                ViolationCode::DuplicateClaim,
                Location::Claim {
                    claim: id.to_string(),
                },
                format!("claim {id} declared {n} times"),
            );
        }
    }

    // item id -> (claim, group) of each occurrence
    let mut occurrences: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
    let mut claims_with_zero = BTreeSet::new();
    let mut claims_with_inf = BTreeSet::new();

    for claim in &case.claims {
        let cid = claim.id.as_str();
        out.ident(cid, "claim", Location::Claim { claim: cid.into() });

        if claim.prior_odds.is_nan() || claim.prior_odds < 0.0 {
            out.push(
                ViolationCode::InvalidPrior,
                Location::Prior { claim: cid.into() },
                format!("claim {cid}: prior odds {} must be >= 0", claim.prior_odds),
            );
        }
        let mut has_zero = claim.prior_odds == 0.0;
        let mut has_inf = claim.prior_odds == f64::INFINITY;

        for side in [Side::Claimant, Side::Opposing] {
            let hypo = claim.hypothesis(side);
            out.ident(
                &hypo.id,
                "hypothesis",
                Location::Hypothesis {
                    claim: cid.into(),
                    side,
                },
            );
            if hypo.statement.trim().is_empty() {
                out.push(
                    ViolationCode::EmptyStatement,
                    Location::Statement {
                        claim: cid.into(),
                        side,
                    },
                    format!("claim {cid}: hypothesis {} has no statement", hypo.id),
                );
            }
            if hypo.complexity.is_nan() || hypo.complexity < 1.0 || hypo.complexity.is_infinite() {
                out.push(
                    ViolationCode::ComplexityLtOne,
                    Location::Complexity {
                        claim: cid.into(),
                        side,
                    },
                    format!(
                        "claim {cid}: complexity {} of hypothesis {} must be a finite number >= 1",
                        hypo.complexity, hypo.id
                    ),
                );
            }
        }
        if claim.claimant.id == claim.opposing.id {
            out.push(
                ViolationCode::DuplicateHypothesis,
                Location::Hypothesis {
                    claim: cid.into(),
                    side: Side::Opposing,
                },
                format!(
                    "claim {cid}: both hypotheses are named {}",
                    claim.claimant.id
                ),
            );
        }

        let mut group_counts: BTreeMap<&str, usize> = BTreeMap::new();
        for group in &claim.groups {
            *group_counts.entry(&group.id).or_default() += 1;
        }
        for (gid, n) in &group_counts {
            if *n > 1 {
                out.push(
                    ViolationCode::DuplicateGroup,
                    Location::Group {
                        claim: cid.into(),
                        group: gid.to_string(),
                    },
                    format!("claim {cid}: group {gid} declared {n} times"),
                );
            }
        }

        for group in &claim.groups {
            let gid = group.id.as_str();
            let group_loc = Location::Group {
                claim: cid.into(),
                group: gid.into(),
            };
            out.ident(gid, "group", group_loc.clone());

            if group.items.is_empty() {
                out.push(
                    ViolationCode::EmptyGroup,
                    group_loc.clone(),
                    format!("group {cid}.{gid} contains no evidence items"),
                );
            }
            if !(group.coverage > 0.0 && group.coverage <= 1.0) {
                out.push(
                    ViolationCode::CoverageOutOfRange,
                    Location::Coverage {
                        claim: cid.into(),
                        group: gid.into(),
                    },
                    format!(
                        "group {cid}.{gid}: coverage {} is outside (0, 1]",
                        group.coverage
                    ),
                );
            }
            if group.lr.is_nan() || group.lr < 0.0 {
                out.push(
                    ViolationCode::NegativeLr,
                    Location::Lr {
                        claim: cid.into(),
                        group: gid.into(),
                    },
                    format!(
                        "group {cid}.{gid}: likelihood ratio {} must be >= 0",
                        group.lr
                    ),
                );
            } else {
                let conclusive = group.lr == 0.0 || group.lr == f64::INFINITY;
                has_zero |= group.lr == 0.0;
                has_inf |= group.lr == f64::INFINITY;
                if conclusive && group.coverage < 1.0 {
                    out.push(
                        ViolationCode::NonfiniteWithCoverage,
                        Location::Coverage {
                            claim: cid.into(),
                            group: gid.into(),
                        },
                        format!(
                            "group {cid}.{gid}: conclusive likelihood ratio {} cannot be discounted by coverage {}",
                            group.lr, group.coverage
                        ),
                    );
                }
            }

            for assumption in &group.conditions_on {
                if !assumptions.contains_key(assumption.as_str()) {
                    out.push(
                        ViolationCode::UnknownAssumption,
                        Location::Condition {
                            claim: cid.into(),
                            group: gid.into(),
                            assumption: assumption.clone(),
                        },
                        format!(
                            "group {cid}.{gid} is conditioned on unknown assumption {assumption}"
                        ),
                    );
                }
            }

            for item in &group.items {
                let item_loc = Location::Item {
                    claim: cid.into(),
                    group: gid.into(),
                    item: item.id.clone(),
                };
                out.ident(&item.id, "evidence item", item_loc.clone());
                occurrences.entry(&item.id).or_default().push((cid, gid));
                if assumptions.get(item.id.as_str()) == Some(&AssumptionKind::Stipulation) {
                    out.push(
                        ViolationCode::StipulationAsEvidence,
                        item_loc,
                        format!("{} is stipulated and cannot also be evidence", item.id),
                    );
                }
            }
        }

        if has_zero && has_inf {
            out.push(
                ViolationCode::ContradictoryConclusives,
                Location::Claim { claim: cid.into() },
                format!("claim {cid} combines conclusive support with conclusive refutation"),
            );
        }
        if has_zero {
            claims_with_zero.insert(cid);
        }
        if has_inf {
            claims_with_inf.insert(cid);
        }
    }

    let cross: Vec<_> = claims_with_zero
        .iter()
        .flat_map(|z| claims_with_inf.iter().map(move |i| (*z, *i)))
        .filter(|(z, i)| z != i)
        .collect();
    if !cross.is_empty() {
        out.push(
            ViolationCode::ContradictoryConclusives,
            Location::Case,
            format!(
                "combined odds are undefined: claim {} is conclusively refuted while claim {} is conclusively supported",
                cross[0].0, cross[0].1
            ),
        );
    }

    for (item, mut places) in occurrences {
        if places.len() < 2 {
            continue;
        }
        places.sort();
        let distinct: BTreeSet<_> = places.iter().copied().collect();
        for (claim, group) in &distinct {
            if places
                .iter()
                .filter(|p| p.0 == *claim && p.1 == *group)
                .count()
                > 1
            {
                out.push(
                    ViolationCode::DuplicateItem,
                    Location::Item {
                        claim: claim.to_string(),
                        group: group.to_string(),
                        item: item.to_string(),
                    },
                    format!("evidence {item} listed more than once in group {claim}.{group}"),
                );
            }
        }
        if distinct.len() > 1 {
            let (claim, group) = *distinct.iter().next_back().expect("nonempty");
            let groups: Vec<String> = distinct.iter().map(|(c, g)| format!("{c}.{g}")).collect();
            out.push(
                ViolationCode::ItemInTwoGroups,
                Location::Item {
                    claim: claim.to_string(),
                    group: group.to_string(),
                    item: item.to_string(),
                },
                format!("evidence {item} is counted in groups {}", groups.join(", ")),
            );
        }
    }

    ValidationReport {
        violations: out.0.into_iter().collect(),
    }
}
