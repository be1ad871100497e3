//! Rendering of evaluation, coherence and sweep results as JSON (one
//! envelope shape for all three) and as aligned text tables.

use std::fmt::Write;

use serde::Serialize;

use crate::coherence::CheckResult;
use crate::inference::{
    apply_standard, ClaimContribution, ContributionReport, Finding, LogOdds, SweepTable,
};
use crate::model::{AssumptionKind, BackgroundAssumption, CaseSpec, StandardOfProof};

/// Value of the `format` field of every JSON report.
pub const REPORT_FORMAT: &str = "plaus-report/1";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format: &'static str,
    kind: &'static str,
    case_id: &'a str,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(kind: &'static str, case_id: &str, body: T) -> String {
    let envelope = Envelope {
        format: REPORT_FORMAT,
        kind,
        case_id,
        body,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report types serialize");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct ClaimRecord<'a> {
    #[serde(flatten)]
    contribution: &'a ClaimContribution,
    finding: Finding,
}

#[derive(Serialize)]
struct CombinedRecord {
    total: LogOdds,
    naive_probability_product: f64,
    gates_findings: bool,
}

#[derive(Serialize)]
struct EvaluationBody<'a> {
    question: &'a str,
    standard: &'a StandardOfProof,
    background: &'a [BackgroundAssumption],
    claims: Vec<ClaimRecord<'a>>,
    combined: CombinedRecord,
}

/// A case evaluated against a standard of proof.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub question: String,
    pub background: Vec<BackgroundAssumption>,
    pub standard: StandardOfProof,
    pub report: ContributionReport,
    pub findings: Vec<Finding>,
}

impl Evaluation {
    pub fn new(case: &CaseSpec, report: ContributionReport, standard: StandardOfProof) -> Self {
        let findings = report
            .claims
            .iter()
            .map(|c| apply_standard(c.total, &standard))
            .collect();
        Self {
            question: case.question.clone(),
            background: case.background.clone(),
            standard,
            report,
            findings,
        }
    }

    pub fn all_met(&self) -> bool {
        self.findings.iter().all(|f| *f == Finding::Met)
    }

    pub fn to_json(&self) -> String {
        let body = EvaluationBody {
            question: &self.question,
            standard: &self.standard,
            background: &self.background,
            claims: self
                .report
                .claims
                .iter()
                .zip(&self.findings)
                .map(|(contribution, finding)| ClaimRecord {
                    contribution,
                    finding: *finding,
                })
                .collect(),
            combined: CombinedRecord {
                total: self.report.combined.total,
                naive_probability_product: self.report.combined.naive_probability_product,
                gates_findings: false,
            },
        };
        to_json("evaluation", &self.report.case_id, body)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case      {}", self.report.case_id);
        if !self.question.is_empty() {
            let _ = writeln!(out, "question  {}", self.question);
        }
        let _ = writeln!(
            out,
            "standard  {} (met when odds > {})",
            self.standard.name,
            num(self.standard.threshold_odds)
        );

        for (claim, finding) in self.report.claims.iter().zip(&self.findings) {
            let _ = writeln!(
                out,
                "\nclaim {}: {} vs {}",
                claim.claim_id, claim.claimant, claim.opposing
            );
            let mut table = Table::new(&["term", "lr", "coverage", "ln", "log10"]);
            table.row(vec![
                "prior odds".into(),
                odds_cell(claim.prior),
                "".into(),
                ln_cell(claim.prior),
                log10_cell(claim.prior),
            ]);
            for g in &claim.groups {
                let lr = match &g.lr_label {
                    Some(label) => format!("{} ({label})", odds_cell(g.raw)),
                    None => odds_cell(g.raw),
                };
                table.row(vec![
                    format!("group {} [{}]", g.group_id, g.items.join(", ")),
                    lr,
                    num(g.coverage),
                    ln_cell(g.effective),
                    log10_cell(g.effective),
                ]);
            }
            table.row(vec![
                format!(
                    "occam {}/{}",
                    num(claim.opposing_complexity),
                    num(claim.claimant_complexity)
                ),
                odds_cell(claim.occam),
                "".into(),
                ln_cell(claim.occam),
                log10_cell(claim.occam),
            ]);
            table.row(vec![
                "posterior".into(),
                odds_cell(claim.total),
                "".into(),
                ln_cell(claim.total),
                log10_cell(claim.total),
            ]);
            out.push_str(&table.render("  "));
            let _ = writeln!(
                out,
                "  posterior odds {}  probability {}  finding {}",
                odds_cell(claim.total),
                num(claim.total.probability()),
                finding.as_str()
            );
        }

        let combined = &self.report.combined;
        let _ = writeln!(
            out,
            "\ncombined odds {}  ln {}  log10 {}  probability {}",
            odds_cell(combined.total),
            ln_cell(combined.total),
            log10_cell(combined.total),
            num(combined.total.probability())
        );
        let _ = writeln!(
            out,
            "product of claim probabilities {} (informational; standards apply per claim)",
            num(combined.naive_probability_product)
        );
        if !self.background.is_empty() {
            out.push_str("\nbackground\n");
            for b in &self.background {
                let tag = match b.kind {
                    AssumptionKind::Stipulation => " [stipulated]",
                    AssumptionKind::GeneralKnowledge => "",
                };
                let _ = writeln!(out, "  {}: {}{tag}", b.id, b.text);
            }
        }
        out
    }
}

#[derive(Serialize)]
struct CheckBody<'a> {
    passed: bool,
    checks: &'a [CheckResult],
}

pub fn checks_to_json(case_id: &str, checks: &[CheckResult]) -> String {
    to_json(
        "coherence",
        case_id,
        CheckBody {
            passed: checks.iter().all(CheckResult::passed),
            checks,
        },
    )
}

pub fn checks_to_text(case_id: &str, checks: &[CheckResult]) -> String {
    let mut out = format!("case {case_id}\n");
    for check in checks {
        let status = if check.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {}", check.name());
        for witness in check.witnesses() {
            let _ = writeln!(out, "      {witness}");
        }
    }
    out
}

#[derive(Serialize)]
struct SweepBody<'a> {
    standard: &'a StandardOfProof,
    #[serde(flatten)]
    table: &'a SweepTable,
}

pub fn sweep_to_json(case_id: &str, table: &SweepTable, standard: &StandardOfProof) -> String {
    to_json("sweep", case_id, SweepBody { standard, table })
}

pub fn sweep_to_text(case_id: &str, table: &SweepTable, standard: &StandardOfProof) -> String {
    let mut out = format!(
        "case {case_id}\nsweep {} (base value {})\nstandard {} (met when odds > {})\n\n",
        table.target,
        num(table.base_value),
        standard.name,
        num(standard.threshold_odds)
    );
    let mut header = vec!["value".to_string()];
    if let Some(first) = table.rows.first() {
        for c in &first.claims {
            header.push(format!("{} odds", c.claim_id));
            header.push(format!("{} finding", c.claim_id));
        }
    }
    header.push("combined odds".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new(&header_refs);
    for row in &table.rows {
        let mut cells = vec![num(row.value)];
        for c in &row.claims {
            cells.push(odds_cell(c.odds));
            cells.push(c.finding.as_str().into());
        }
        cells.push(odds_cell(row.combined));
        t.row(cells);
    }
    out.push_str(&t.render(""));
    out
}

/// Compact deterministic rendering of a real.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if (1e-4..1e6).contains(&x.abs()) {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:.4e}")
    }
}

fn odds_cell(odds: LogOdds) -> String {
    match odds {
        LogOdds::Zero => "0".into(),
        LogOdds::Infinite => "inf".into(),
        LogOdds::Finite(_) => num(odds.odds()),
    }
}

fn ln_cell(odds: LogOdds) -> String {
    num(odds.ln_extended())
}

fn log10_cell(odds: LogOdds) -> String {
    match odds.log10() {
        Some(v) => num(v),
        None => num(odds.ln_extended()),
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    /// First column left-aligned, the rest right-aligned.
    fn render(&self, indent: &str) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let mut line = String::from(indent);
            for (i, cell) in row.iter().enumerate() {
                let pad = widths[i] - cell.chars().count();
                if i == 0 {
                    line.push_str(cell);
                    line.push_str(&" ".repeat(pad));
                } else {
                    line.push_str("  ");
                    line.push_str(&" ".repeat(pad));
                    line.push_str(cell);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_rendering() {
        assert_eq!(num(15.0), "15");
        assert_eq!(num(7.0 / 3.0), "2.333333");
        assert_eq!(num(0.49), "0.49");
        assert_eq!(num(1e-9), "1.0000e-9");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(&["name", "value"]);
        t.row(vec!["a".into(), "1".into()]);
        t.row(vec!["longer".into(), "100".into()]);
        assert_eq!(
            t.render(""),
            "name    value\na           1\nlonger    100\n"
        );
    }
}
