use plaus_core::parser::Severity;
use plaus_core::{
    parse_case, parse_case_with, Config, EvidenceKind, ScaleTable, SourceSpan, StandardName,
};

const MINIMAL: &str = r#"case "minimal"
claim c {
  for p "the claimant's account"
  against d "the other account"
  group g { evidence e "one observation" lr 5 }
}
"#;

fn codes(source: &str) -> Vec<String> {
    parse_case(source)
        .unwrap_err()
        .into_iter()
        .map(|d| d.code)
        .collect()
}

#[test]
fn minimal_case_gets_defaults() {
    let case = parse_case(MINIMAL).unwrap();
    let claim = &case.claims[0];
    assert_eq!(claim.prior_odds, 1.0);
    assert_eq!(claim.claimant.complexity, 1.0);
    assert_eq!(claim.opposing.complexity, 1.0);
    assert_eq!(claim.groups.len(), 1);
    assert_eq!(claim.groups[0].coverage, 1.0);
    assert_eq!(claim.groups[0].lr, 5.0);
    assert_eq!(claim.groups[0].items[0].kind, EvidenceKind::Other);
    assert_eq!(case.standard, StandardName::Preponderance);
}

#[test]
fn zero_coverage_is_reported_at_its_number() {
    let source = MINIMAL.replace("group g {", "group g coverage 0 {");
    let diagnostics = parse_case(&source).unwrap_err();
    assert_eq!(diagnostics.len(), 1);
    let d = &diagnostics[0];
    assert_eq!(d.code, "COVERAGE_OUT_OF_RANGE");
    assert_eq!(d.severity, Severity::Error);
    assert_eq!(
        d.span,
        SourceSpan {
            line: 5,
            column: 20,
            length: 1
        }
    );
    assert!(d
        .render("x.case")
        .starts_with("x.case:5:20: error[COVERAGE_OUT_OF_RANGE]: "));
}

#[test]
fn syntax_errors() {
    assert_eq!(codes("case \"x"), ["UNTERMINATED_STRING"]);
    assert_eq!(
        codes(&MINIMAL.replace("against", "versus")),
        ["UNKNOWN_KEYWORD"]
    );
    assert_eq!(codes(&MINIMAL.replace(" lr 5", "")), ["MISSING_LR"]);
    assert_eq!(
        codes(&MINIMAL.replace("lr 5", "lr 5 lr 6")),
        ["DUPLICATE_CLAUSE"]
    );
    assert_eq!(codes(&MINIMAL.replace("lr 5", "lr 5x")), ["INVALID_NUMBER"]);
    assert_eq!(
        codes(&MINIMAL.replace("lr 5", "lr label \"huge\"")),
        ["UNKNOWN_LABEL"]
    );
    assert_eq!(codes(&MINIMAL[..MINIMAL.len() - 3]), ["UNEXPECTED_EOF"]);
    assert_eq!(codes(""), ["UNEXPECTED_EOF"]);
}

#[test]
fn semantic_errors_come_from_validation() {
    let dup = MINIMAL.replace("lr 5 }", "lr 5 }\n  group h { evidence e \"again\" lr 2 }");
    assert_eq!(codes(&dup), ["ITEM_IN_TWO_GROUPS"]);
    assert_eq!(codes(&MINIMAL.replace("lr 5", "lr -5")), ["NEGATIVE_LR"]);
    assert_eq!(
        codes(&MINIMAL.replace(
            "\"the other account\"",
            "\"the other account\" complexity 0.5"
        )),
        ["COMPLEXITY_LT_ONE"]
    );
    assert_eq!(
        codes(
            &MINIMAL
                .replace("group g {", "group g coverage 0.5 {")
                .replace("lr 5", "lr inf")
        ),
        ["NONFINITE_WITH_COVERAGE"]
    );
}

#[test]
fn labels_resolve_through_the_scale() {
    let source = MINIMAL.replace("lr 5", "lr label \"strong_support\"");
    let case = parse_case(&source).unwrap();
    assert_eq!(case.claims[0].groups[0].lr, 100.0);
    assert_eq!(
        case.claims[0].groups[0].lr_label.as_deref(),
        Some("strong_support")
    );

    let mut scale = ScaleTable::default();
    scale.insert("strong_support", 30.0);
    assert_eq!(
        parse_case_with(&source, &scale).unwrap().claims[0].groups[0].lr,
        30.0
    );
    assert!(Config::default().scale.get("strong_support").is_some());
}

#[test]
fn every_diagnostic_span_is_inside_the_source() {
    let sources = [
        "",
        "case",
        "case \"x\"\n",
        "case \"x\" claim",
        "case \"x\"\nclaim c {\n  for",
        "case \"\\q\"",
        "case \"x\"\nclaim c { for p \"a\" against d \"b\" group g { evidence e \"z\" lr 2 }",
        "case \"é\" \u{1F600}",
        "case \"x\"\r\nclaim c {\r\n  for p \"a\" complexity 0\r\n  against d \"b\"\r\n}\r\n",
    ];
    for source in sources {
        let diagnostics = parse_case(source).unwrap_err();
        assert!(!diagnostics.is_empty(), "{source:?}");
        for d in diagnostics {
            assert!(d.span.is_within(source), "{source:?}: {d:?}");
        }
    }
}
