//! Executable coherence checks.
//!
//! Two families: checks of the engine against exact enumeration on a
//! [`DiscreteWorld`], and property probes on a single case (permutation
//! invariance, no double counting, round-trip equivalence, qualitative
//! correspondence and Occam scale invariance).

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::oracle::{oracle_lr, OracleError};
use super::world::DiscreteWorld;
use crate::config::{Config, ScaleTable};
use crate::inference::{claim_posterior_log_odds, explain, InferenceError, LogOdds};
use crate::model::{CaseSpec, Claim, EvidenceGroup, EvidenceItem, Side};
use crate::numeric::CompensatedSum;
use crate::parser::{parse_case_with, serialize_case};
use crate::validate::{validate_case, ViolationCode};

/// Absolute tolerance on log-odds and on factorized probabilities.
pub const LOG_TOLERANCE: f64 = 1e-12;
/// Relative tolerance on probabilities and likelihood ratios.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

const MAX_WITNESSES: usize = 20;

#[derive(Debug, Error)]
pub enum CoherenceError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}

/// Outcome of one named check. Passes iff there are no witnesses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    name: String,
    passed: bool,
    witnesses: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, mut witnesses: Vec<String>) -> Self {
        if witnesses.len() > MAX_WITNESSES {
            let extra = witnesses.len() - MAX_WITNESSES;
            witnesses.truncate(MAX_WITNESSES);
            witnesses.push(format!("... and {extra} more"));
        }
        Self {
            name: name.into(),
            passed: witnesses.is_empty(),
            witnesses,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn witnesses(&self) -> &[String] {
        &self.witnesses
    }
}

fn relatively_close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

/// Same state, and finite values within `tolerance`.
pub fn log_odds_close(a: LogOdds, b: LogOdds, tolerance: f64) -> bool {
    match (a, b) {
        (LogOdds::Finite(x), LogOdds::Finite(y)) => (x - y).abs() <= tolerance,
        (x, y) => x == y,
    }
}

/// `P(next | given)` under one table.
pub type ConditionalFn<'a> =
    dyn Fn(&DiscreteWorld, Side, &[(usize, usize)], (usize, usize)) -> f64 + 'a;

/// Conditional probability by enumeration: `P(given, next) / P(given)`.
pub fn enumerated_conditional(
    world: &DiscreteWorld,
    side: Side,
    given: &[(usize, usize)],
    next: (usize, usize),
) -> f64 {
    let mut both = given.to_vec();
    both.push(next);
    world.marginal(side, &both) / world.marginal(side, given)
}

/// Check that the joint probability of the observations equals the product
/// of sequential conditionals under every ordering, and that the oracle LR
/// of the full observed set does not depend on the ordering.
pub fn check_chain_rule(world: &DiscreteWorld, orderings: &[Vec<String>]) -> CheckResult {
    check_chain_rule_with(world, orderings, &enumerated_conditional)
}

/// [`check_chain_rule`] with the conditionals supplied by `conditional`.
pub fn check_chain_rule_with(
    world: &DiscreteWorld,
    orderings: &[Vec<String>],
    conditional: &ConditionalFn<'_>,
) -> CheckResult {
    let mut witnesses = Vec::new();
    let observed: BTreeSet<&str> = world.observed().keys().map(String::as_str).collect();
    let mut reference: Option<(Vec<String>, Result<f64, OracleError>)> = None;

    for ordering in orderings {
        let as_set: BTreeSet<&str> = ordering.iter().map(String::as_str).collect();
        if as_set != observed || as_set.len() != ordering.len() {
            witnesses.push(format!(
                "ordering {ordering:?} is not a permutation of the observed variables {observed:?}"
            ));
            continue;
        }
        let assignment = match world.observed_assignment(ordering) {
            Ok(Some(a)) => a,
            _ => unreachable!("ordering holds exactly the observed variables"),
        };
        for side in [Side::Claimant, Side::Opposing] {
            let joint = world.marginal(side, &assignment);
            let mut product = 1.0;
            for i in 0..assignment.len() {
                if product == 0.0 {
                    break;
                }
                product *= conditional(world, side, &assignment[..i], assignment[i]);
            }
            if !relatively_close(joint, product) {
                witnesses.push(format!(
                    "ordering {ordering:?}, table {}: joint probability {joint:e} but product of conditionals {product:e}",
                    side.keyword()
                ));
            }
        }
        let lr = oracle_lr(world, ordering);
        match &reference {
            None => reference = Some((ordering.clone(), lr)),
            Some((first, expected)) => {
                let same = match (expected, &lr) {
                    (Ok(a), Ok(b)) => relatively_close(*a, *b),
                    (Err(_), Err(_)) => true,
                    _ => false,
                };
                if !same {
                    witnesses.push(format!(
                        "oracle LR {lr:?} for ordering {ordering:?} differs from {expected:?} for {first:?}"
                    ));
                }
            }
        }
    }
    CheckResult::new("chain_rule", witnesses)
}

/// Mixed-radix index of the outcomes of `vars` in world row `row`.
fn project(row: usize, vars: &[usize], strides: &[usize], cards: &[usize]) -> usize {
    vars.iter()
        .fold(0, |acc, &v| acc * cards[v] + (row / strides[v]) % cards[v])
}

/// Whether the variable subsets are mutually independent under `side`:
/// the joint over their union equals the product of the subset marginals
/// in every cell, within [`LOG_TOLERANCE`].
fn factorization_failure(
    world: &DiscreteWorld,
    side: Side,
    subsets: &[Vec<usize>],
) -> Option<String> {
    let subsets: Vec<&Vec<usize>> = subsets.iter().filter(|s| !s.is_empty()).collect();
    if subsets.len() < 2 {
        return None;
    }
    let cards: Vec<usize> = world.variables().iter().map(|v| v.outcomes.len()).collect();
    let strides = world.strides();
    let union: Vec<usize> = subsets.iter().flat_map(|s| s.iter().copied()).collect();
    let cells = |vars: &[usize]| vars.iter().map(|&v| cards[v]).product::<usize>();

    let table = world.table(side);
    let total = table.iter().copied().collect::<CompensatedSum>().value();
    let accumulate = |vars: &[usize]| {
        let mut acc = vec![CompensatedSum::new(); cells(vars)];
        for (row, &mass) in table.iter().enumerate() {
            acc[project(row, vars, &strides, &cards)].add(mass);
        }
        acc.into_iter()
            .map(|a| a.value() / total)
            .collect::<Vec<f64>>()
    };
    let joint = accumulate(&union);
    let marginals: Vec<Vec<f64>> = subsets.iter().map(|s| accumulate(s)).collect();

    for (cell, &p_joint) in joint.iter().enumerate() {
        // decode the union cell into per-subset cells
        let mut digits = vec![0; union.len()];
        let mut rest = cell;
        for (k, &v) in union.iter().enumerate().rev() {
            digits[k] = rest % cards[v];
            rest /= cards[v];
        }
        let mut offset = 0;
        let mut product = 1.0;
        for (s, subset) in subsets.iter().enumerate() {
            let index = subset
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &v)| acc * cards[v] + digits[offset + k]);
            offset += subset.len();
            product *= marginals[s][index];
        }
        if (p_joint - product).abs() > LOG_TOLERANCE {
            let names: Vec<String> = union
                .iter()
                .zip(&digits)
                .map(|(&v, &o)| {
                    let var = &world.variables()[v];
                    format!("{}={}", var.id, var.outcomes[o])
                })
                .collect();
            return Some(format!(
                "table {}: P({}) = {p_joint:e} but the product of subset marginals is {product:e}",
                side.keyword(),
                names.join(", ")
            ));
        }
    }
    None
}

fn binding_for<'b>(
    binding: &'b BTreeMap<String, Vec<String>>,
    claim: &Claim,
    group: &EvidenceGroup,
) -> Option<&'b Vec<String>> {
    binding
        .get(&format!("{}.{}", claim.id, group.id))
        .or_else(|| binding.get(&group.id))
}

/// Compare the engine's posterior log-odds for every claim with
/// `ln(prior) + Σ ln oracle_lr(bound subset)`.
///
/// Preconditions (violations are errors): every group has coverage 1, no
/// claim has a net Occam factor, every group is bound, bound subsets are
/// disjoint and mutually independent under both tables. A group whose
/// stated LR disagrees with the oracle is a BINDING_MISMATCH witness.
pub fn check_engine_vs_oracle(
    world: &DiscreteWorld,
    case: &CaseSpec,
    binding: &BTreeMap<String, Vec<String>>,
) -> Result<CheckResult, CoherenceError> {
    let precondition = |m: String| Err(CoherenceError::Precondition(m));

    let mut known_keys = BTreeSet::new();
    for claim in &case.claims {
        for group in &claim.groups {
            known_keys.insert(group.id.clone());
            known_keys.insert(format!("{}.{}", claim.id, group.id));
        }
    }
    if let Some(unknown) = binding.keys().find(|k| !known_keys.contains(*k)) {
        return precondition(format!("binding names unknown group {unknown}"));
    }

    let mut witnesses = Vec::new();
    for claim in &case.claims {
        if claim.claimant.complexity != claim.opposing.complexity {
            return precondition(format!("claim {} carries an Occam penalty", claim.id));
        }
        let mut subsets = Vec::new();
        let mut used = BTreeSet::new();
        for group in &claim.groups {
            if group.coverage != 1.0 {
                return precondition(format!(
                    "group {}.{} has coverage {} != 1",
                    claim.id, group.id, group.coverage
                ));
            }
            let Some(vars) = binding_for(binding, claim, group) else {
                return precondition(format!(
                    "group {}.{} is not bound to any variables",
                    claim.id, group.id
                ));
            };
            let mut indices = Vec::new();
            for var in vars {
                let index = world.variable_index(var).map_err(OracleError::from)?;
                if !used.insert(index) {
                    return precondition(format!(
                        "variable {var} is bound to more than one group of claim {}",
                        claim.id
                    ));
                }
                indices.push(index);
            }
            subsets.push(indices);
        }
        for side in [Side::Claimant, Side::Opposing] {
            if let Some(failure) = factorization_failure(world, side, &subsets) {
                return precondition(format!(
                    "bound subsets of claim {} are not independent: {failure}",
                    claim.id
                ));
            }
        }

        let mut expected_terms = vec![LogOdds::from_odds(claim.prior_odds)?];
        for group in &claim.groups {
            let vars = binding_for(binding, claim, group).expect("checked above");
            let oracle = oracle_lr(world, vars)?;
            let oracle_log = LogOdds::from_odds(oracle)?;
            let stated = LogOdds::from_odds(group.lr)?;
            if !log_odds_close(stated, oracle_log, LOG_TOLERANCE) {
                witnesses.push(format!(
                    "BINDING_MISMATCH: claim {} group {} states lr {} but the oracle gives {} for {vars:?}",
                    claim.id, group.id, group.lr, oracle
                ));
            }
            expected_terms.push(oracle_log);
        }
        let engine = claim_posterior_log_odds(claim)?;
        match LogOdds::combine(&expected_terms) {
            Some(expected) if log_odds_close(engine, expected, LOG_TOLERANCE) => {}
            Some(expected) => witnesses.push(format!(
                "claim {}: engine log-odds {engine} but prior plus oracle gives {expected}",
                claim.id
            )),
            None => witnesses.push(format!(
                "claim {}: oracle ratios combine conclusive support and refutation",
                claim.id
            )),
        }
    }
    Ok(CheckResult::new("engine_vs_oracle", witnesses))
}

struct Totals {
    claims: BTreeMap<String, LogOdds>,
    combined: LogOdds,
}

fn totals(case: &CaseSpec) -> Result<Totals, InferenceError> {
    let report = explain(case)?;
    Ok(Totals {
        claims: report
            .claims
            .iter()
            .map(|c| (c.claim_id.clone(), c.total))
            .collect(),
        combined: report.combined.total,
    })
}

fn compare_totals(label: &str, base: &Totals, other: &Totals, witnesses: &mut Vec<String>) {
    for (id, odds) in &base.claims {
        match other.claims.get(id) {
            Some(o) if log_odds_close(*odds, *o, LOG_TOLERANCE) => {}
            o => witnesses.push(format!("{label}: claim {id} changed from {odds} to {o:?}")),
        }
    }
    if !log_odds_close(base.combined, other.combined, LOG_TOLERANCE) {
        witnesses.push(format!(
            "{label}: combined odds changed from {} to {}",
            base.combined, other.combined
        ));
    }
}

fn fresh_id(taken: &BTreeSet<String>, stem: &str) -> String {
    (0..)
        .map(|n| {
            if n == 0 {
                stem.to_string()
            } else {
                format!("{stem}_{n}")
            }
        })
        .find(|id| !taken.contains(id))
        .expect("unbounded")
}

/// `case` with one extra probe group appended to `claim_index`.
fn with_probe(case: &CaseSpec, claim_index: usize, lr: f64, coverage: f64) -> CaseSpec {
    let mut out = case.clone();
    let item_ids: BTreeSet<String> = case
        .items()
        .map(|(_, _, item)| item.id.clone())
        .chain(case.background.iter().map(|b| b.id.clone()))
        .collect();
    let claim = &mut out.claims[claim_index];
    let group_ids: BTreeSet<String> = claim.groups.iter().map(|g| g.id.clone()).collect();
    let item = EvidenceItem::new(fresh_id(&item_ids, "probe_item"), "coherence probe");
    claim.groups.push(
        EvidenceGroup::new(fresh_id(&group_ids, "probe"), vec![item], lr).with_coverage(coverage),
    );
    out
}

/// Seeded property probes over one case.
pub fn check_case_coherence(case: &CaseSpec, trials: usize, seed: u64) -> Vec<CheckResult> {
    check_case_coherence_with(case, trials, seed, &Config::default().scale)
}

/// [`check_case_coherence`] with the scale used to re-read `lr label`
/// clauses during the round-trip probe.
pub fn check_case_coherence_with(
    case: &CaseSpec,
    trials: usize,
    seed: u64,
    scale: &ScaleTable,
) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = totals(case);
    let evaluation_failed = |e: &InferenceError| vec![format!("evaluation failed: {e}")];

    // (a) permutation invariance
    let permutation = match &base {
        Err(e) => evaluation_failed(e),
        Ok(base) => {
            let mut witnesses = Vec::new();
            for trial in 0..trials {
                let mut shuffled = case.clone();
                shuffled.claims.shuffle(&mut rng);
                for claim in &mut shuffled.claims {
                    claim.groups.shuffle(&mut rng);
                    for group in &mut claim.groups {
                        group.items.shuffle(&mut rng);
                    }
                }
                match totals(&shuffled) {
                    Ok(t) => {
                        compare_totals(&format!("permutation {trial}"), base, &t, &mut witnesses)
                    }
                    Err(e) => witnesses.push(format!("permutation {trial}: {e}")),
                }
            }
            witnesses
        }
    };

    // (b) every item counted once
    let double_count = validate_case(case)
        .violations
        .into_iter()
        .filter(|v| {
            matches!(
                v.code,
                ViolationCode::DuplicateItem | ViolationCode::ItemInTwoGroups
            )
        })
        .map(|v| v.to_string())
        .collect();

    // (c) serialize -> parse -> evaluate gives the identical numbers
    let round_trip = match &base {
        Err(e) => evaluation_failed(e),
        Ok(base) => match parse_case_with(&serialize_case(case), scale) {
            Err(diagnostics) => diagnostics
                .iter()
                .map(|d| format!("reparse failed: {}", d.render("<serialized>")))
                .collect(),
            Ok(reparsed) => {
                let mut witnesses = Vec::new();
                if &reparsed != case {
                    witnesses.push("reparsed case differs structurally from the original".into());
                }
                match totals(&reparsed) {
                    Ok(t) => {
                        compare_totals("round trip", base, &t, &mut witnesses);
                        let bitwise = t.claims.iter().all(|(id, o)| {
                            base.claims.get(id).map(|b| b.ln_extended().to_bits())
                                == Some(o.ln_extended().to_bits())
                        });
                        if !bitwise {
                            witnesses.push("round trip changed totals in the last bit".into());
                        }
                    }
                    Err(e) => witnesses.push(format!("round trip: {e}")),
                }
                witnesses
            }
        },
    };

    // (d) neutral evidence changes nothing, favourable evidence raises the
    // odds, unfavourable evidence lowers them
    let qualitative = match &base {
        Err(e) => evaluation_failed(e),
        Ok(base) => {
            let mut witnesses = Vec::new();
            for (index, claim) in case.claims.iter().enumerate() {
                let before = base.claims[&claim.id];
                let neutral_coverage = 1.0 - rng.random::<f64>();
                let probes = [(1.0, neutral_coverage), (2.0, 1.0), (0.5, 1.0)];
                for (lr, coverage) in probes {
                    let after = match totals(&with_probe(case, index, lr, coverage)) {
                        Ok(t) => t.claims[&claim.id],
                        Err(e) => {
                            witnesses.push(format!("claim {}: probe lr {lr}: {e}", claim.id));
                            continue;
                        }
                    };
                    let ok = match (before, after) {
                        (LogOdds::Finite(b), LogOdds::Finite(a)) if lr == 1.0 => {
                            (a - b).abs() <= LOG_TOLERANCE
                        }
                        (LogOdds::Finite(b), LogOdds::Finite(a)) if lr > 1.0 => a > b,
                        (LogOdds::Finite(b), LogOdds::Finite(a)) => a < b,
                        (b, a) => a == b,
                    };
                    if !ok {
                        witnesses.push(format!(
                            "claim {}: appending a group with lr {lr} (coverage {coverage}) moved odds from {before} to {after}",
                            claim.id
                        ));
                    }
                }
            }
            witnesses
        }
    };

    // (e) scaling both complexities by the same factor changes nothing
    let occam = match &base {
        Err(e) => evaluation_failed(e),
        Ok(base) => {
            let mut witnesses = Vec::new();
            for _ in 0..trials {
                let factor = rng.random_range(1.0..1000.0);
                let mut scaled = case.clone();
                for claim in &mut scaled.claims {
                    claim.claimant.complexity *= factor;
                    claim.opposing.complexity *= factor;
                }
                match totals(&scaled) {
                    Ok(t) => {
                        compare_totals(&format!("complexity x{factor}"), base, &t, &mut witnesses)
                    }
                    Err(e) => witnesses.push(format!("complexity x{factor}: {e}")),
                }
            }
            witnesses
        }
    };

    vec![
        CheckResult::new("permutation_invariance", permutation),
        CheckResult::new("no_double_count", double_count),
        CheckResult::new("round_trip_equivalence", round_trip),
        CheckResult::new("qualitative_correspondence", qualitative),
        CheckResult::new("occam_scale_invariance", occam),
    ]
}
