//! Domain types for a case: the question, background knowledge, the claims
//! being litigated and the evidence groups assessed for each claim.
//!
//! All numbers live on evidence groups and hypotheses. Evidence items are
//! atoms that only carry identity and a description.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A complete case ready for evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub case_id: String,
    pub question: String,
    pub background: Vec<BackgroundAssumption>,
    pub claims: Vec<Claim>,
    pub standard: StandardName,
}

impl CaseSpec {
    pub fn new(case_id: impl Into<String>) -> Self {
        Self {
            case_id: case_id.into(),
            question: String::new(),
            background: Vec::new(),
            claims: Vec::new(),
            standard: StandardName::default(),
        }
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn claim_mut(&mut self, id: &str) -> Option<&mut Claim> {
        self.claims.iter_mut().find(|c| c.id == id)
    }

    /// Every evidence item in case order, paired with the claim and group
    /// that hold it.
    pub fn items(&self) -> impl Iterator<Item = (&Claim, &EvidenceGroup, &EvidenceItem)> {
        self.claims.iter().flat_map(|claim| {
            claim
                .groups
                .iter()
                .flat_map(move |group| group.items.iter().map(move |item| (claim, group, item)))
        })
    }
}

/// Knowledge that conditions every likelihood assessment but carries no
/// numeric weight of its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackgroundAssumption {
    pub id: String,
    pub text: String,
    pub kind: AssumptionKind,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssumptionKind {
    #[default]
    GeneralKnowledge,
    /// A fact both parties accept for the purposes of the litigation.
    Stipulation,
}

/// Which side of a claim a hypothesis argues for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Claimant,
    Opposing,
}

impl Side {
    pub fn keyword(self) -> &'static str {
        match self {
            Side::Claimant => "for",
            Side::Opposing => "against",
        }
    }
}

/// One explanation of the evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: String,
    pub statement: String,
    /// Occam weight `F`; an explanation with weight `F` has its odds scaled
    /// by `1/F`. Never below 1.
    pub complexity: f64,
    pub assumptions: Vec<String>,
}

impl Hypothesis {
    pub fn new(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            complexity: 1.0,
            assumptions: Vec::new(),
        }
    }

    pub fn with_complexity(mut self, complexity: f64) -> Self {
        self.complexity = complexity;
        self
    }
}

/// A pair of mutually exclusive explanations and the evidence weighed
/// between them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub claimant: Hypothesis,
    pub opposing: Hypothesis,
    /// `P(H_claimant) / P(H_opposing)`. `0` and `+inf` are the conclusive
    /// states.
    pub prior_odds: f64,
    pub groups: Vec<EvidenceGroup>,
}

impl Claim {
    pub fn new(id: impl Into<String>, claimant: Hypothesis, opposing: Hypothesis) -> Self {
        Self {
            id: id.into(),
            claimant,
            opposing,
            prior_odds: 1.0,
            groups: Vec::new(),
        }
    }

    pub fn hypothesis(&self, side: Side) -> &Hypothesis {
        match side {
            Side::Claimant => &self.claimant,
            Side::Opposing => &self.opposing,
        }
    }

    pub fn hypothesis_mut(&mut self, side: Side) -> &mut Hypothesis {
        match side {
            Side::Claimant => &mut self.claimant,
            Side::Opposing => &mut self.opposing,
        }
    }

    pub fn group(&self, id: &str) -> Option<&EvidenceGroup> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn group_mut(&mut self, id: &str) -> Option<&mut EvidenceGroup> {
        self.groups.iter_mut().find(|g| g.id == id)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceKind {
    Testimony,
    Physical,
    Documentary,
    #[default]
    Other,
}

impl EvidenceKind {
    pub const ALL: [EvidenceKind; 4] = [
        EvidenceKind::Testimony,
        EvidenceKind::Physical,
        EvidenceKind::Documentary,
        EvidenceKind::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EvidenceKind::Testimony => "testimony",
            EvidenceKind::Physical => "physical",
            EvidenceKind::Documentary => "documentary",
            EvidenceKind::Other => "other",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceItem {
    pub id: String,
    pub description: String,
    pub kind: EvidenceKind,
}

impl EvidenceItem {
    pub fn new(id: impl Into<String>, description: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            kind: EvidenceKind::Other,
        }
    }
}

/// Evidence items assessed jointly with a single likelihood ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceGroup {
    pub id: String,
    pub items: Vec<EvidenceItem>,
    /// `P(E | H_claimant, K) / P(E | H_opposing, K)`; `+inf` for conclusive
    /// support, `0` for conclusive refutation.
    pub lr: f64,
    /// Verbal label the ratio was resolved from, if it was given as one.
    pub lr_label: Option<String>,
    /// Exponent in `(0, 1]` discounting incomplete evidence.
    pub coverage: f64,
    pub rationale: String,
    /// Background assumption ids this assessment relies on.
    pub conditions_on: Vec<String>,
}

impl EvidenceGroup {
    pub fn new(id: impl Into<String>, items: Vec<EvidenceItem>, lr: f64) -> Self {
        Self {
            id: id.into(),
            items,
            lr,
            lr_label: None,
            coverage: 1.0,
            rationale: String::new(),
            conditions_on: Vec::new(),
        }
    }

    pub fn with_coverage(mut self, coverage: f64) -> Self {
        self.coverage = coverage;
        self
    }
}

/// Named standard of proof. Thresholds are policy and come from
/// configuration, never from the case file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardName {
    #[default]
    Preponderance,
    ClearAndConvincing,
    BeyondReasonableDoubt,
    Custom(String),
}

impl StandardName {
    pub fn from_name(name: &str) -> Self {
        match name {
            "preponderance" => StandardName::Preponderance,
            "clear_and_convincing" => StandardName::ClearAndConvincing,
            "beyond_reasonable_doubt" => StandardName::BeyondReasonableDoubt,
            other => StandardName::Custom(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            StandardName::Preponderance => "preponderance",
            StandardName::ClearAndConvincing => "clear_and_convincing",
            StandardName::BeyondReasonableDoubt => "beyond_reasonable_doubt",
            StandardName::Custom(name) => name,
        }
    }
}

impl fmt::Display for StandardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A resolved standard: met when posterior odds strictly exceed
/// `threshold_odds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardOfProof {
    pub name: StandardName,
    pub threshold_odds: f64,
}

impl StandardOfProof {
    pub fn new(
        name: StandardName,
        threshold_odds: f64,
    ) -> Result<Self, crate::config::ConfigError> {
        if threshold_odds <= 0.0 || !threshold_odds.is_finite() {
            return Err(crate::config::ConfigError::InvalidThreshold {
                name: name.to_string(),
                value: threshold_odds,
            });
        }
        Ok(Self {
            name,
            threshold_odds,
        })
    }
}

/// Identifiers are `[A-Za-z_][A-Za-z0-9_-]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers() {
        assert!(is_identifier("e1"));
        assert!(is_identifier("_x-y_2"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("1e"));
        assert!(!is_identifier("a.b"));
        assert!(!is_identifier("a b"));
    }

    #[test]
    fn standard_names_round_trip() {
        for name in [
            "preponderance",
            "clear_and_convincing",
            "beyond_reasonable_doubt",
            "civil_fraud",
        ] {
            assert_eq!(StandardName::from_name(name).as_str(), name);
        }
    }

    #[test]
    fn standard_rejects_nonpositive_threshold() {
        assert!(StandardOfProof::new(StandardName::Preponderance, 0.0).is_err());
        assert!(StandardOfProof::new(StandardName::Preponderance, f64::NAN).is_err());
        assert!(StandardOfProof::new(StandardName::Preponderance, 1.0).is_ok());
    }
}
