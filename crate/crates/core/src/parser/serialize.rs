//! Canonical text form of a case. Default-valued clauses are omitted so the
//! output of `plaus fmt` stays minimal.

use std::fmt::Write;

use crate::model::{AssumptionKind, CaseSpec, EvidenceKind, Hypothesis, StandardName};

/// Shortest text that parses back to exactly `value`.
pub fn format_number(value: f64) -> String {
    if value == f64::INFINITY {
        return "inf".into();
    }
    let text = format!("{value:?}");
    match text.strip_suffix(".0") {
        Some(integral) => integral.to_string(),
        None => text,
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn serialize_case(case: &CaseSpec) -> String {
    let mut out = String::new();
    // writes to a String cannot fail
    let _ = write_case(&mut out, case);
    out
}

fn write_case(out: &mut String, case: &CaseSpec) -> std::fmt::Result {
    writeln!(out, "case {}", quote(&case.case_id))?;
    if !case.question.is_empty() {
        writeln!(out, "question {}", quote(&case.question))?;
    }
    if case.standard != StandardName::Preponderance {
        writeln!(out, "standard {}", case.standard)?;
    }
    for assumption in &case.background {
        write!(out, "assume {} {}", assumption.id, quote(&assumption.text))?;
        if assumption.kind == AssumptionKind::Stipulation {
            out.push_str(" stipulated");
        }
        out.push('\n');
    }

    for claim in &case.claims {
        writeln!(out, "\nclaim {} {{", claim.id)?;
        write_hypothesis(out, "for", &claim.claimant)?;
        write_hypothesis(out, "against", &claim.opposing)?;
        if claim.prior_odds != 1.0 {
            writeln!(out, "  prior_odds {}", format_number(claim.prior_odds))?;
        }
        for group in &claim.groups {
            out.push_str("\n  group ");
            out.push_str(&group.id);
            if group.coverage != 1.0 {
                write!(out, " coverage {}", format_number(group.coverage))?;
            }
            out.push_str(" {\n");
            for item in &group.items {
                write!(out, "    evidence {} {}", item.id, quote(&item.description))?;
                if item.kind != EvidenceKind::Other {
                    write!(out, " kind {}", item.kind.as_str())?;
                }
                out.push('\n');
            }
            match &group.lr_label {
                Some(label) => writeln!(out, "    lr label {}", quote(label))?,
                None => writeln!(out, "    lr {}", format_number(group.lr))?,
            }
            if !group.rationale.is_empty() {
                writeln!(out, "    because {}", quote(&group.rationale))?;
            }
            if !group.conditions_on.is_empty() {
                writeln!(out, "    given {}", group.conditions_on.join(", "))?;
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
    }
    Ok(())
}

fn write_hypothesis(out: &mut String, keyword: &str, hypothesis: &Hypothesis) -> std::fmt::Result {
    write!(
        out,
        "  {keyword} {} {}",
        hypothesis.id,
        quote(&hypothesis.statement)
    )?;
    if hypothesis.complexity != 1.0 {
        write!(out, " complexity {}", format_number(hypothesis.complexity))?;
    }
    out.push('\n');
    for assumption in &hypothesis.assumptions {
        writeln!(out, "    assuming {}", quote(assumption))?;
    }
    Ok(())
}
