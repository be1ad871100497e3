#![allow(dead_code)]

use std::path::{Path, PathBuf};

use plaus_core::{parse_case, CaseSpec};

pub const CORPUS: &[&str] = &[
    "colonel.case",
    "conjunction.case",
    "missing-body.case",
    "witnesses.case",
];

pub fn repo_path(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(relative)
}

pub fn read(relative: &str) -> String {
    let path = repo_path(relative);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn corpus_case(name: &str) -> CaseSpec {
    let source = read(&format!("cases/{name}"));
    parse_case(&source).unwrap_or_else(|d| panic!("{name}: {d:?}"))
}
