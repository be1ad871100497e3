mod common;

use std::collections::BTreeMap;

use plaus_core::coherence::generator::random_product_world;
use plaus_core::coherence::{
    check_chain_rule, check_chain_rule_with, check_engine_vs_oracle, enumerated_conditional,
    oracle_lr, CoherenceError, DiscreteWorld, OracleError, Variable, WorldError,
};
use plaus_core::inference::claim_posterior_log_odds;
use plaus_core::{CaseSpec, Claim, EvidenceGroup, EvidenceItem, Hypothesis, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{corpus_case, read};

fn bind(pairs: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
    pairs
        .iter()
        .map(|(g, vars)| (g.to_string(), vars.iter().map(|v| v.to_string()).collect()))
        .collect()
}

/// Two binary variables, independent under both hypotheses, with
/// per-variable likelihood ratios 2 and 3 at the observed outcome.
fn two_three_world() -> DiscreteWorld {
    let vars = vec![
        Variable::new("a", &["hit", "miss"]),
        Variable::new("b", &["hit", "miss"]),
    ];
    // P(a=hit) = 0.4 vs 0.2, P(b=hit) = 0.6 vs 0.2
    let marginals = [
        (vec![0.4, 0.6], vec![0.2, 0.8]),
        (vec![0.6, 0.4], vec![0.2, 0.8]),
    ];
    let mut claimant = Vec::new();
    let mut opposing = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            claimant.push(marginals[0].0[i] * marginals[1].0[j]);
            opposing.push(marginals[0].1[i] * marginals[1].1[j]);
        }
    }
    let observed = BTreeMap::from([("a".into(), "hit".into()), ("b".into(), "hit".into())]);
    DiscreteWorld::new(vars, claimant, opposing, observed).unwrap()
}

fn two_group_case(lrs: [f64; 2]) -> CaseSpec {
    let mut claim = Claim::new("c", Hypothesis::new("p", "x"), Hypothesis::new("d", "y"));
    claim.groups.push(EvidenceGroup::new(
        "ga",
        vec![EvidenceItem::new("a", "first")],
        lrs[0],
    ));
    claim.groups.push(EvidenceGroup::new(
        "gb",
        vec![EvidenceItem::new("b", "second")],
        lrs[1],
    ));
    let mut case = CaseSpec::new("two-three");
    case.claims.push(claim);
    case
}

#[test]
fn independent_lrs_multiply() {
    let world = two_three_world();
    let a = oracle_lr(&world, &["a"]).unwrap();
    let b = oracle_lr(&world, &["b"]).unwrap();
    let joint = oracle_lr(&world, &["a", "b"]).unwrap();
    assert!((a - 2.0).abs() < 1e-12 && (b - 3.0).abs() < 1e-12);
    assert!((joint - 6.0).abs() < 1e-12);

    let case = two_group_case([2.0, 3.0]);
    let engine = claim_posterior_log_odds(&case.claims[0])
        .unwrap()
        .ln()
        .unwrap();
    assert!((engine - 6f64.ln()).abs() < 1e-12);
    assert!((engine - joint.ln()).abs() < 1e-12);

    let result =
        check_engine_vs_oracle(&world, &case, &bind(&[("ga", &["a"]), ("c.gb", &["b"])])).unwrap();
    assert!(result.passed(), "{:?}", result.witnesses());
}

#[test]
fn wrong_stated_lr_is_a_binding_mismatch() {
    let world = two_three_world();
    let case = two_group_case([2.0, 4.0]);
    let result =
        check_engine_vs_oracle(&world, &case, &bind(&[("ga", &["a"]), ("gb", &["b"])])).unwrap();
    assert!(!result.passed());
    assert!(result
        .witnesses()
        .iter()
        .any(|w| w.starts_with("BINDING_MISMATCH") && w.contains("gb")));
}

#[test]
fn oracle_preconditions() {
    let world = two_three_world();
    let ok = bind(&[("ga", &["a"]), ("gb", &["b"])]);

    let mut discounted = two_group_case([2.0, 3.0]);
    discounted.claims[0].groups[0].coverage = 0.5;
    assert!(matches!(
        check_engine_vs_oracle(&world, &discounted, &ok),
        Err(CoherenceError::Precondition(_))
    ));

    let mut penalized = two_group_case([2.0, 3.0]);
    penalized.claims[0].opposing.complexity = 2.0;
    assert!(matches!(
        check_engine_vs_oracle(&world, &penalized, &ok),
        Err(CoherenceError::Precondition(_))
    ));

    let case = two_group_case([2.0, 3.0]);
    let unbound = bind(&[("ga", &["a"])]);
    assert!(matches!(
        check_engine_vs_oracle(&world, &case, &unbound),
        Err(CoherenceError::Precondition(_))
    ));
    let overlapping = bind(&[("ga", &["a"]), ("gb", &["a", "b"])]);
    assert!(matches!(
        check_engine_vs_oracle(&world, &case, &overlapping),
        Err(CoherenceError::Precondition(_))
    ));
    let unknown = bind(&[("ga", &["a"]), ("gz", &["b"])]);
    assert!(check_engine_vs_oracle(&world, &case, &unknown).is_err());
}

#[test]
fn dependent_items_cannot_be_split_into_groups() {
    let world = DiscreteWorld::parse(&read("cases/witnesses.world")).unwrap();
    let mut case = corpus_case("witnesses.case");
    let joint = case.claims[0].groups.remove(0);
    let single = oracle_lr(&world, &["e1"]).unwrap();
    for item in joint.items {
        let id = format!("g_{}", item.id);
        case.claims[0]
            .groups
            .push(EvidenceGroup::new(id, vec![item], single));
    }
    let split = bind(&[("g_e1", &["e1"]), ("g_e2", &["e2"])]);
    let err = check_engine_vs_oracle(&world, &case, &split).unwrap_err();
    assert!(matches!(err, CoherenceError::Precondition(_)), "{err}");
}

#[test]
fn witnesses_fixture_shows_joint_evaluation_matters() {
    let world = DiscreteWorld::parse(&read("cases/witnesses.world")).unwrap();
    let e1 = oracle_lr(&world, &["e1"]).unwrap();
    let e2 = oracle_lr(&world, &["e2"]).unwrap();
    let joint = oracle_lr(&world, &["e1", "e2"]).unwrap();
    // by hand: 0.1/0.3 per witness; 0.01/0.25 together
    assert!((e1 - 1.0 / 3.0).abs() < 1e-12 && (e2 - 1.0 / 3.0).abs() < 1e-12);
    assert!((joint - 0.04).abs() < 1e-12);
    assert!(e1 * e2 / joint >= 2.0);
    let stated = corpus_case("witnesses.case").claims[0].groups[0].lr;
    assert!((stated - joint).abs() < 1e-12);
}

#[test]
fn chain_rule_holds_for_every_ordering() {
    let world = DiscreteWorld::parse(&read("cases/witnesses.world")).unwrap();
    let orderings = vec![
        vec!["e1".to_string(), "e2".to_string()],
        vec!["e2".to_string(), "e1".to_string()],
    ];
    assert!(check_chain_rule(&world, &orderings).passed());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pw = random_product_world(&mut rng, 4, 3);
    let ids: Vec<String> = pw.world.variables().iter().map(|v| v.id.clone()).collect();
    let mut reversed = ids.clone();
    reversed.reverse();
    assert!(check_chain_rule(&pw.world, &[ids, reversed]).passed());
}

#[test]
fn chain_rule_catches_a_naive_conditional() {
    let world = DiscreteWorld::parse(&read("cases/witnesses.world")).unwrap();
    // ignores the conditioning set, which is wrong for dependent items
    let naive = |w: &DiscreteWorld, side: Side, _given: &[(usize, usize)], next: (usize, usize)| {
        enumerated_conditional(w, side, &[], next)
    };
    let orderings = vec![vec!["e1".to_string(), "e2".to_string()]];
    let result = check_chain_rule_with(&world, &orderings, &naive);
    assert!(!result.passed());
    assert!(!result.witnesses().is_empty());
}

#[test]
fn zero_denominator_and_undefined_ratios() {
    let vars = vec![Variable::new("x", &["a", "b"])];
    let observed = BTreeMap::from([("x".into(), "a".into())]);
    let world = DiscreteWorld::new(
        vars.clone(),
        vec![0.5, 0.5],
        vec![0.0, 1.0],
        observed.clone(),
    )
    .unwrap();
    assert_eq!(oracle_lr(&world, &["x"]).unwrap(), f64::INFINITY);
    let world = DiscreteWorld::new(vars.clone(), vec![0.0, 1.0], vec![0.0, 1.0], observed).unwrap();
    assert!(matches!(
        oracle_lr(&world, &["x"]),
        Err(OracleError::UndefinedLr(_))
    ));
    let unobserved =
        DiscreteWorld::new(vars, vec![0.5, 0.5], vec![0.5, 0.5], BTreeMap::new()).unwrap();
    assert!(matches!(
        oracle_lr(&unobserved, &["x"]),
        Err(OracleError::NotObserved(_))
    ));
}

#[test]
fn world_text_round_trips() {
    let world = DiscreteWorld::parse(&read("cases/witnesses.world")).unwrap();
    let again = DiscreteWorld::parse(&world.to_text()).unwrap();
    assert_eq!(world, again);
    assert_eq!(world.to_text(), again.to_text());
}

#[test]
fn world_rejects_bad_tables() {
    let header = "variable x a b\nobserve x a\n";
    let cases = [
        (
            "table for\na 0.5\nb 0.4\ntable against\na 0.5\nb 0.5\n",
            "NotNormalized",
        ),
        (
            "table for\na 0.5\na 0.5\ntable against\na 0.5\nb 0.5\n",
            "Syntax",
        ),
        (
            "table for\na -0.5\nb 1.5\ntable against\na 0.5\nb 0.5\n",
            "BadMass",
        ),
        ("table for\nc 1\ntable against\na 0.5\nb 0.5\n", "Syntax"),
        ("table for\na b 1\ntable against\na 0.5\nb 0.5\n", "Syntax"),
        ("table sideways\n", "Syntax"),
    ];
    for (body, kind) in cases {
        let err = DiscreteWorld::parse(&format!("{header}{body}")).unwrap_err();
        assert!(format!("{err:?}").starts_with(kind), "{body}: {err:?}");
    }
    assert!(matches!(
        DiscreteWorld::parse("variable x a\nvariable x b\ntable for\na b 1\n"),
        Err(WorldError::DuplicateVariable(_))
    ));
    let huge: String = (0..21).map(|i| format!("variable v{i} a b\n")).collect();
    assert!(matches!(
        DiscreteWorld::parse(&huge),
        Err(WorldError::TooLarge)
    ));
}
