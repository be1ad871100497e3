//! Seeded generators for random cases and product-form worlds, used by the
//! property suites.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::world::{DiscreteWorld, Variable};
use crate::model::{
    AssumptionKind, BackgroundAssumption, CaseSpec, Claim, EvidenceGroup, EvidenceItem,
    EvidenceKind, Hypothesis, StandardName,
};

#[derive(Clone, Debug)]
pub struct CaseBounds {
    pub max_claims: usize,
    pub max_groups: usize,
    pub max_items: usize,
    /// Likelihood ratios are drawn log-uniformly from this closed range.
    pub lr_range: (f64, f64),
    pub max_complexity: f64,
    pub max_assumptions: usize,
}

impl Default for CaseBounds {
    fn default() -> Self {
        Self {
            max_claims: 5,
            max_groups: 8,
            max_items: 3,
            lr_range: (1e-3, 1e3),
            max_complexity: 50.0,
            max_assumptions: 3,
        }
    }
}

const TEXT_PIECES: &[&str] = &[
    "the",
    "accused",
    "was",
    "seen",
    "near",
    "the",
    "house",
    "\"quoted\"",
    "back\\slash",
    "tab\there",
    "line\nbreak",
    "café",
    "証言",
    "#hash",
    "{brace}",
    "",
    " ",
];

fn text<R: Rng + ?Sized>(rng: &mut R) -> String {
    let n = rng.random_range(1..6);
    let words: Vec<&str> = (0..n)
        .map(|_| *TEXT_PIECES.choose(rng).expect("nonempty"))
        .collect();
    let joined = words.join(" ");
    if joined.trim().is_empty() {
        "statement".into()
    } else {
        joined
    }
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    rng.random_range(lo.ln()..=hi.ln()).exp().clamp(lo, hi)
}

/// Coverage in `(0, 1]`, exactly 1 about a third of the time.
fn coverage<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(1.0 / 3.0) {
        1.0
    } else {
        1.0 - rng.random::<f64>()
    }
}

/// A valid case within `bounds`. Ids are unique case-wide.
pub fn random_case<R: Rng + ?Sized>(rng: &mut R, bounds: &CaseBounds) -> CaseSpec {
    let mut case = CaseSpec::new(format!("random-{}", rng.random::<u32>()));
    if rng.random_bool(0.5) {
        case.question = text(rng);
    }
    case.standard = [
        StandardName::Preponderance,
        StandardName::ClearAndConvincing,
        StandardName::BeyondReasonableDoubt,
    ]
    .choose(rng)
    .expect("nonempty")
    .clone();
    for k in 0..rng.random_range(0..=bounds.max_assumptions) {
        case.background.push(BackgroundAssumption {
            id: format!("k{k}"),
            text: text(rng),
            kind: if rng.random_bool(0.3) {
                AssumptionKind::Stipulation
            } else {
                AssumptionKind::GeneralKnowledge
            },
        });
    }

    let mut next_item = 0;
    for c in 0..rng.random_range(1..=bounds.max_claims) {
        let mut claimant = Hypothesis::new("hp", text(rng));
        let mut opposing = Hypothesis::new("hd", text(rng));
        for h in [&mut claimant, &mut opposing] {
            if rng.random_bool(0.5) {
                h.complexity = rng.random_range(1.0..=bounds.max_complexity);
            }
            for _ in 0..rng.random_range(0..2) {
                h.assumptions.push(text(rng));
            }
        }
        let mut claim = Claim::new(format!("c{c}"), claimant, opposing);
        if rng.random_bool(0.5) {
            claim.prior_odds = log_uniform(rng, (1e-2, 1e2));
        }
        for g in 0..rng.random_range(0..=bounds.max_groups) {
            let items = (0..rng.random_range(1..=bounds.max_items))
                .map(|_| {
                    next_item += 1;
                    let mut item = EvidenceItem::new(format!("e{next_item}"), text(rng));
                    item.kind = *EvidenceKind::ALL.choose(rng).expect("nonempty");
                    item
                })
                .collect();
            let mut group =
                EvidenceGroup::new(format!("g{g}"), items, log_uniform(rng, bounds.lr_range))
                    .with_coverage(coverage(rng));
            if rng.random_bool(0.3) {
                group.rationale = text(rng);
            }
            for b in &case.background {
                if rng.random_bool(0.3) {
                    group.conditions_on.push(b.id.clone());
                }
            }
            claim.groups.push(group);
        }
        case.claims.push(claim);
    }
    // stipulations must not collide with evidence ids; they use k*, items e*
    case
}

fn distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// A world whose tables are products of independent per-variable
/// distributions, every variable observed.
pub struct ProductWorld {
    pub world: DiscreteWorld,
    /// Per variable, `p(observed) / q(observed)` from the generating
    /// distributions (not from the joint tables).
    pub variable_lrs: Vec<f64>,
}

/// `variables` variables with 2..=`max_outcomes` outcomes each.
pub fn random_product_world<R: Rng + ?Sized>(
    rng: &mut R,
    variables: usize,
    max_outcomes: usize,
) -> ProductWorld {
    let mut vars = Vec::new();
    let mut marginals = Vec::new();
    let mut observed = BTreeMap::new();
    let mut variable_lrs = Vec::new();
    for i in 0..variables {
        let n = rng.random_range(2..=max_outcomes.max(2));
        let outcomes: Vec<String> = (0..n).map(|o| format!("o{o}")).collect();
        let refs: Vec<&str> = outcomes.iter().map(String::as_str).collect();
        vars.push(Variable::new(format!("v{i}"), &refs));
        let p = distribution(rng, n);
        let q = distribution(rng, n);
        let obs = rng.random_range(0..n);
        variable_lrs.push(p[obs] / q[obs]);
        observed.insert(format!("v{i}"), outcomes[obs].clone());
        marginals.push((p, q));
    }
    let world = DiscreteWorld::product(vars, &marginals, observed)
        .expect("product of distributions is valid");
    ProductWorld {
        world,
        variable_lrs,
    }
}
