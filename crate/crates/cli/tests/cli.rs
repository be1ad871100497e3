use std::path::{Path, PathBuf};
use std::process::Command;

use plaus_cli::{run, EXIT_INVALID, EXIT_NOT_MET, EXIT_OK};
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn case(name: &str) -> String {
    root().join("cases").join(name).display().to_string()
}

fn invoke(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("plaus").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (u8, Value) {
    let (code, out, err) = invoke(args);
    assert!(err.is_empty(), "{err}");
    (code, serde_json::from_str(&out).unwrap())
}

const CORPUS: &[&str] = &[
    "colonel.case",
    "conjunction.case",
    "missing-body.case",
    "witnesses.case",
];

#[test]
fn conjunction_json_report() {
    let (code, report) = json(&["evaluate", &case("conjunction.case"), "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report["format"], "plaus-report/1");
    assert_eq!(report["kind"], "evaluation");
    let claims = report["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 2);
    for claim in claims {
        let odds = claim["total"]["odds"].as_f64().unwrap();
        assert!((odds - 7.0 / 3.0).abs() < 1e-12);
        assert_eq!(claim["finding"], "met");
    }
    let combined = report["combined"]["total"]["odds"].as_f64().unwrap();
    assert!((combined - 49.0 / 9.0).abs() < 1e-9);
    let naive = report["combined"]["naive_probability_product"]
        .as_f64()
        .unwrap();
    assert!((naive - 0.49).abs() < 1e-12);
}

#[test]
fn colonel_check_passes() {
    let (code, out, err) = invoke(&[
        "check",
        &case("colonel.case"),
        "--trials",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    assert!(!out.contains("FAIL"));
    assert_eq!(out.lines().filter(|l| l.starts_with("pass")).count(), 5);
}

#[test]
fn malformed_case_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("malformed.case");
    std::fs::write(&path, "case \"m\"\nclaim c {\n  for a \"x\"\n  against b \"y\"\n  group g coverage 0 { evidence e \"z\" lr 2 }\n}\n").unwrap();
    let (code, out, err) = invoke(&["evaluate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    let first = err.lines().next().unwrap();
    assert!(
        first.contains("malformed.case:5:20: error[COVERAGE_OUT_OF_RANGE]"),
        "{first}"
    );
}

#[test]
fn missing_file_and_usage_errors() {
    assert_eq!(invoke(&["evaluate", "/nonexistent/x.case"]).0, EXIT_INVALID);
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_INVALID);
    assert_eq!(invoke(&["evaluate"]).0, EXIT_INVALID);
    assert_eq!(
        invoke(&["evaluate", &case("colonel.case"), "--format", "xml"]).0,
        EXIT_INVALID
    );
    assert_eq!(
        invoke(&[
            "sweep",
            &case("colonel.case"),
            "--target",
            "order.prior_odds"
        ])
        .0,
        EXIT_INVALID
    );
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("evaluate"));
}

#[test]
fn standard_not_met_exits_one() {
    let (code, out, _) = invoke(&["evaluate", &case("missing-body.case")]);
    assert_eq!(code, EXIT_NOT_MET);
    assert!(out.contains("finding not_met"));
    // odds 3 clears a threshold of 2 but not a tie at 3
    assert_eq!(
        invoke(&["evaluate", &case("missing-body.case"), "--threshold", "2"]).0,
        EXIT_OK
    );
    assert_eq!(
        invoke(&["evaluate", &case("missing-body.case"), "--threshold", "3"]).0,
        EXIT_NOT_MET
    );
    assert_eq!(
        invoke(&[
            "evaluate",
            &case("missing-body.case"),
            "--standard",
            "preponderance"
        ])
        .0,
        EXIT_OK
    );
    assert_eq!(
        invoke(&["evaluate", &case("missing-body.case"), "--standard", "whim"]).0,
        EXIT_INVALID
    );
    assert_eq!(
        invoke(&["evaluate", &case("missing-body.case"), "--threshold", "-1"]).0,
        EXIT_INVALID
    );
}

#[test]
fn witnesses_world_check() {
    let world = case("witnesses.world");
    let (code, out, err) = invoke(&[
        "check",
        &case("witnesses.case"),
        "--world",
        &world,
        "--bind",
        "sightings=e1,e2",
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    assert!(out.contains("pass  engine_vs_oracle"));

    // the same group bound to one witness only disagrees with the oracle
    let (code, out, _) = invoke(&[
        "check",
        &case("witnesses.case"),
        "--world",
        &world,
        "--bind",
        "sightings=e1",
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("FAIL  engine_vs_oracle"));
    assert!(out.contains("BINDING_MISMATCH"));

    let (code, _, err) = invoke(&["check", &case("witnesses.case"), "--world", &world]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("sightings"), "{err}");
}

#[test]
fn sweep_values_and_range() {
    let (code, report) = json(&[
        "sweep",
        &case("missing-body.case"),
        "--target",
        "responsibility.forensic.coverage",
        "--values",
        "1,0.5",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report["base_value"], 0.5);
    let odds: Vec<f64> = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["claims"][0]["odds"]["odds"].as_f64().unwrap())
        .collect();
    assert!((odds[0] - 9.0).abs() < 1e-9 && (odds[1] - 3.0).abs() < 1e-9);

    let (code, out, _) = invoke(&[
        "sweep",
        &case("colonel.case"),
        "--target",
        "order.against.complexity",
        "--range",
        "1:15:3",
    ]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<&str> = out
        .lines()
        .skip(5)
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(values, ["1", "8", "15"]);

    let (code, _, err) = invoke(&[
        "sweep",
        &case("colonel.case"),
        "--target",
        "order.nope.lr",
        "--values",
        "2",
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(!err.is_empty());
}

#[test]
fn fmt_is_a_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    for name in CORPUS {
        let (code, once, _) = invoke(&["fmt", &case(name)]);
        assert_eq!(code, EXIT_OK);
        let path = dir.path().join(name);
        std::fs::write(&path, &once).unwrap();
        let (_, twice, _) = invoke(&["fmt", path.to_str().unwrap()]);
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn json_reports_match_schema() {
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap(),
    )
    .unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut reports = Vec::new();
    for name in CORPUS {
        let path = case(name);
        reports.push(invoke(&["evaluate", &path, "--format", "json"]).1);
        reports.push(invoke(&["check", &path, "--trials", "5", "--format", "json"]).1);
    }
    reports.push(
        invoke(&[
            "sweep",
            &case("colonel.case"),
            "--target",
            "order.movements.lr",
            "--values",
            "0,1,inf",
            "--format",
            "json",
        ])
        .1,
    );
    for text in reports {
        let value: Value = serde_json::from_str(&text).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&value)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{errors:?}\n{text}");
    }

    let mut broken: Value =
        serde_json::from_str(&invoke(&["evaluate", &case("colonel.case"), "--format", "json"]).1)
            .unwrap();
    broken["claims"][0]["finding"] = Value::from("maybe");
    assert!(!validator.is_valid(&broken));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let commands: Vec<Vec<String>> = CORPUS
        .iter()
        .flat_map(|name| {
            [
                vec![
                    "evaluate".into(),
                    case(name),
                    "--format".into(),
                    "json".into(),
                ],
                vec!["evaluate".into(), case(name)],
                vec![
                    "check".into(),
                    case(name),
                    "--trials".into(),
                    "50".into(),
                    "--seed".into(),
                    "3".into(),
                ],
                vec!["fmt".into(), case(name)],
            ]
        })
        .collect();
    for args in commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(invoke(&args), invoke(&args), "{args:?}");
    }
}

#[test]
fn binary_reads_config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("strict.conf");
    std::fs::write(&config, "threshold.preponderance = 20\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_plaus");

    let status = Command::new(bin)
        .args(["evaluate", &case("colonel.case")])
        .env_remove("PLAUS_CONFIG")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));

    let strict = Command::new(bin)
        .args(["evaluate", &case("colonel.case")])
        .env("PLAUS_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stdout).contains("met when odds > 20"));

    std::fs::write(&config, "threshold.preponderance = nope\n").unwrap();
    let bad = Command::new(bin)
        .args(["evaluate", &case("colonel.case")])
        .env("PLAUS_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
