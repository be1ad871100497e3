//! Golden files under `tests/golden/`. Set `PLAUS_BLESS=1` to rewrite them
//! after an intended change, then review the diff.

mod common;

use std::path::PathBuf;

use plaus_core::inference::explain;
use plaus_core::numeric::canonical_sum;
use plaus_core::report::Evaluation;
use plaus_core::{parse_case, serialize_case, Config};

use common::{corpus_case, read, CORPUS};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("PLAUS_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with PLAUS_BLESS=1 to create)", path.display()));
    assert!(
        expected == actual,
        "{name} differs from golden file:\n--- expected\n{expected}\n--- actual\n{actual}"
    );
}

fn evaluation(name: &str) -> Evaluation {
    let case = corpus_case(name);
    let standard = Config::default().standard(&case.standard).unwrap();
    Evaluation::new(&case, explain(&case).unwrap(), standard)
}

#[test]
fn canonical_form_of_corpus() {
    for name in CORPUS {
        let case = corpus_case(name);
        let text = serialize_case(&case);
        assert_golden(&format!("{name}.fmt"), &text);
        assert_eq!(parse_case(&text).unwrap(), case, "{name}");
        assert_eq!(serialize_case(&case), text, "{name}");
    }
}

#[test]
fn explicit_defaults_are_omitted() {
    let source = read("crates/core/tests/golden/defaults.case");
    let case = parse_case(&source).unwrap();
    assert_golden("defaults.case.fmt", &serialize_case(&case));
}

#[test]
fn evaluation_reports() {
    for name in CORPUS {
        let evaluation = evaluation(name);
        assert_golden(&format!("{name}.json"), &evaluation.to_json());
        assert_golden(&format!("{name}.txt"), &evaluation.to_text());
    }
}

#[test]
fn totals_are_the_canonical_sum_of_reported_terms() {
    for name in CORPUS {
        for claim in explain(&corpus_case(name)).unwrap().claims {
            let terms: Vec<f64> = claim.terms().iter().map(|t| t.ln().unwrap()).collect();
            assert_eq!(
                claim.total.ln().unwrap().to_bits(),
                canonical_sum(&terms).to_bits(),
                "{name}"
            );
        }
    }
}
