//! Recursive-descent parser for the case language.
//!
//! ```text
//! case    := "case" STRING header* claim+
//! header  := "question" STRING | "standard" IDENT | "assume" IDENT STRING ["stipulated"]
//! claim   := "claim" IDENT "{" hypo hypo ["prior_odds" NUMBER] group* "}"
//! hypo    := ("for"|"against") IDENT STRING ["complexity" NUMBER] ("assuming" STRING)*
//! group   := "group" IDENT ["coverage" NUMBER] "{" item+ clause* "}"
//! clause  := "lr" (NUMBER | "inf" | "label" STRING) | "because" STRING
//!          | "given" IDENT ("," IDENT)*
//! item    := "evidence" IDENT STRING ["kind" IDENT]
//! ```
//!
//! `lr` is required exactly once per group; `because` and `given` at most
//! once.

use std::collections::HashMap;

use super::diagnostics::{LineIndex, ParseDiagnostic, Severity};
use super::lexer::{tokenize, Token, TokenKind};
use crate::config::{Config, ScaleTable};
use crate::model::{
    AssumptionKind, BackgroundAssumption, CaseSpec, Claim, EvidenceGroup, EvidenceItem,
    EvidenceKind, Hypothesis, Side, StandardName,
};
use crate::validate::{validate_case, Location};

const TOP_LEVEL: &[&str] = &["question", "standard", "assume", "claim"];
const CLAIM_LEVEL: &[&str] = &["for", "against", "prior_odds", "group"];
const GROUP_LEVEL: &[&str] = &["evidence", "lr", "because", "given"];

/// Parse with the default likelihood-ratio scale.
pub fn parse_case(source: &str) -> Result<CaseSpec, Vec<ParseDiagnostic>> {
    parse_case_with(source, &Config::default().scale)
}

/// Parse, resolving `lr label "..."` clauses against `scale`. Semantic
/// problems found by [`validate_case`] are reported as diagnostics at the
/// offending construct.
pub fn parse_case_with(source: &str, scale: &ScaleTable) -> Result<CaseSpec, Vec<ParseDiagnostic>> {
    let index = LineIndex::new(source);
    let error = |code: &str, message: String, start: usize, end: usize| ParseDiagnostic {
        severity: Severity::Error,
        code: code.to_string(),
        message,
        span: index.span(start, end),
    };

    let tokens = tokenize(source).map_err(|e| vec![error(e.code, e.message, e.start, e.end)])?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        scale,
        spans: HashMap::new(),
    };
    let case = parser
        .case()
        .map_err(|e| vec![error(e.code, e.message, e.start, e.end)])?;

    let report = validate_case(&case);
    if report.is_empty() {
        return Ok(case);
    }
    let fallback = parser.spans.get(&Location::Case).copied().unwrap_or((0, 0));
    Err(report
        .violations
        .into_iter()
        .map(|v| {
            let (start, end) = parser.lookup(&v.location).unwrap_or(fallback);
            error(v.code.as_str(), v.message, start, end)
        })
        .collect())
}

struct SyntaxError {
    code: &'static str,
    message: String,
    start: usize,
    end: usize,
}

type PResult<T> = Result<T, SyntaxError>;

struct Parser<'s> {
    tokens: Vec<Token>,
    pos: usize,
    scale: &'s ScaleTable,
    /// First source range recorded for each location.
    spans: HashMap<Location, (usize, usize)>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_word(&self) -> Option<&str> {
        match &self.peek().kind {
            TokenKind::Word(w) => Some(w),
            _ => None,
        }
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        if token.kind != TokenKind::Eof {
            self.pos += 1;
        }
        token
    }

    fn error_at(&self, token: &Token, code: &'static str, message: String) -> SyntaxError {
        SyntaxError {
            code,
            message,
            start: token.start,
            end: token.end,
        }
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        let token = self.peek();
        let code = if token.kind == TokenKind::Eof {
            "UNEXPECTED_EOF"
        } else {
            "EXPECTED_TOKEN"
        };
        self.error_at(
            token,
            code,
            format!("expected {expected}, found {}", token.kind.describe()),
        )
    }

    /// Error for a word that is not valid at this point: unknown words are
    /// UNKNOWN_KEYWORD, known keywords in the wrong place are EXPECTED_TOKEN.
    fn misplaced(&self, expected: &str) -> SyntaxError {
        let token = self.peek();
        if let TokenKind::Word(w) = &token.kind {
            let known = [TOP_LEVEL, CLAIM_LEVEL, GROUP_LEVEL, &["case"]]
                .iter()
                .any(|set| set.contains(&w.as_str()));
            if !known {
                return self.error_at(
                    token,
                    "UNKNOWN_KEYWORD",
                    format!("unknown keyword `{w}`, expected {expected}"),
                );
            }
        }
        self.unexpected(expected)
    }

    fn record(&mut self, location: Location, token: &Token) {
        self.spans
            .entry(location)
            .or_insert((token.start, token.end));
    }

    fn lookup(&self, location: &Location) -> Option<(usize, usize)> {
        if let Some(span) = self.spans.get(location) {
            return Some(*span);
        }
        // fall back to the enclosing construct
        let parent = match location {
            Location::Case => return None,
            Location::Assumption { .. } | Location::Claim { .. } => Location::Case,
            Location::Prior { claim }
            | Location::Hypothesis { claim, .. }
            | Location::Statement { claim, .. }
            | Location::Complexity { claim, .. }
            | Location::Group { claim, .. } => Location::Claim {
                claim: claim.clone(),
            },
            Location::Coverage { claim, group }
            | Location::Lr { claim, group }
            | Location::Condition { claim, group, .. }
            | Location::Item { claim, group, .. } => Location::Group {
                claim: claim.clone(),
                group: group.clone(),
            },
        };
        self.lookup(&parent)
    }

    fn keyword(&mut self, word: &str) -> PResult<Token> {
        if self.peek_word() == Some(word) {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Token)> {
        match self.peek_word() {
            Some(w) => {
                let w = w.to_string();
                Ok((w, self.advance()))
            }
            None => Err(self.unexpected(what)),
        }
    }

    fn string(&mut self, what: &str) -> PResult<(String, Token)> {
        match &self.peek().kind {
            TokenKind::Str(s) => {
                let s = s.clone();
                Ok((s, self.advance()))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn number(&mut self, what: &str) -> PResult<(f64, Token)> {
        match &self.peek().kind {
            TokenKind::Number(v) => {
                let v = *v;
                Ok((v, self.advance()))
            }
            TokenKind::Word(w) if w == "inf" => Ok((f64::INFINITY, self.advance())),
            _ => Err(self.unexpected(what)),
        }
    }

    fn symbol(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&kind.describe()))
        }
    }

    fn case(&mut self) -> PResult<CaseSpec> {
        let head = self.keyword("case")?;
        let (case_id, id_token) = self.string("a case name string")?;
        self.spans
            .insert(Location::Case, (head.start, id_token.end));
        let mut case = CaseSpec::new(case_id);
        let mut seen_question = false;
        let mut seen_standard = false;

        loop {
            match self.peek_word() {
                Some("question") => {
                    let kw = self.advance();
                    if seen_question {
                        return Err(self.error_at(
                            &kw,
                            "DUPLICATE_CLAUSE",
                            "`question` given twice".into(),
                        ));
                    }
                    seen_question = true;
                    case.question = self.string("the question text")?.0;
                }
                Some("standard") => {
                    let kw = self.advance();
                    if seen_standard {
                        return Err(self.error_at(
                            &kw,
                            "DUPLICATE_CLAUSE",
                            "`standard` given twice".into(),
                        ));
                    }
                    seen_standard = true;
                    case.standard = StandardName::from_name(&self.ident("a standard name")?.0);
                }
                Some("assume") => {
                    self.advance();
                    let (id, token) = self.ident("an assumption id")?;
                    self.record(Location::Assumption { id: id.clone() }, &token);
                    let text = self.string("the assumption text")?.0;
                    let kind = if self.peek_word() == Some("stipulated") {
                        self.advance();
                        AssumptionKind::Stipulation
                    } else {
                        AssumptionKind::GeneralKnowledge
                    };
                    case.background
                        .push(BackgroundAssumption { id, text, kind });
                }
                _ => break,
            }
        }

        while self.peek_word() == Some("claim") {
            let claim = self.claim()?;
            case.claims.push(claim);
        }

        if case.claims.is_empty() {
            return Err(self.misplaced("`claim`"));
        }
        if self.peek().kind != TokenKind::Eof {
            if let Some(w @ ("question" | "standard" | "assume")) = self.peek_word() {
                let message = format!("`{w}` must appear before the first claim");
                return Err(self.error_at(self.peek(), "EXPECTED_TOKEN", message));
            }
            return Err(self.misplaced("`claim` or end of file"));
        }
        Ok(case)
    }

    fn claim(&mut self) -> PResult<Claim> {
        let kw = self.keyword("claim")?;
        let (id, id_token) = self.ident("a claim id")?;
        self.record(Location::Claim { claim: id.clone() }, &id_token);
        self.symbol(TokenKind::LBrace)?;

        let mut claimant = None;
        let mut opposing = None;
        while let Some(word @ ("for" | "against")) = self.peek_word() {
            let side = if word == "for" {
                Side::Claimant
            } else {
                Side::Opposing
            };
            let kw = self.advance();
            let slot = match side {
                Side::Claimant => &claimant,
                Side::Opposing => &opposing,
            };
            if slot.is_some() {
                return Err(self.error_at(
                    &kw,
                    "DUPLICATE_CLAUSE",
                    format!(
                        "claim {id} has more than one `{}` hypothesis",
                        side.keyword()
                    ),
                ));
            }
            let hypothesis = self.hypothesis(&id, side)?;
            match side {
                Side::Claimant => claimant = Some(hypothesis),
                Side::Opposing => opposing = Some(hypothesis),
            }
        }
        let (Some(claimant), Some(opposing)) = (claimant, opposing) else {
            if self.peek_word().is_some_and(|w| !CLAIM_LEVEL.contains(&w)) {
                return Err(self.misplaced("`for` or `against`"));
            }
            return Err(SyntaxError {
                code: "MISSING_HYPOTHESIS",
                message: format!("claim {id} needs one `for` and one `against` hypothesis"),
                start: kw.start,
                end: id_token.end,
            });
        };
        let mut claim = Claim::new(id.clone(), claimant, opposing);

        if self.peek_word() == Some("prior_odds") {
            self.advance();
            let (value, token) = self.number("prior odds")?;
            self.record(Location::Prior { claim: id.clone() }, &token);
            claim.prior_odds = value;
        }

        while self.peek_word() == Some("group") {
            let group = self.group(&id)?;
            claim.groups.push(group);
        }

        if self.peek().kind != TokenKind::RBrace {
            return Err(self.misplaced("`group` or `}`"));
        }
        self.advance();
        Ok(claim)
    }

    fn hypothesis(&mut self, claim: &str, side: Side) -> PResult<Hypothesis> {
        let (id, id_token) = self.ident("a hypothesis id")?;
        self.record(
            Location::Hypothesis {
                claim: claim.into(),
                side,
            },
            &id_token,
        );
        let (statement, stmt_token) = self.string("the hypothesis statement")?;
        self.record(
            Location::Statement {
                claim: claim.into(),
                side,
            },
            &stmt_token,
        );
        let mut hypothesis = Hypothesis::new(id, statement);
        if self.peek_word() == Some("complexity") {
            self.advance();
            let (value, token) = self.number("a complexity weight")?;
            self.record(
                Location::Complexity {
                    claim: claim.into(),
                    side,
                },
                &token,
            );
            hypothesis.complexity = value;
        }
        while self.peek_word() == Some("assuming") {
            self.advance();
            hypothesis
                .assumptions
                .push(self.string("the assumption text")?.0);
        }
        Ok(hypothesis)
    }

    fn group(&mut self, claim: &str) -> PResult<EvidenceGroup> {
        let kw = self.keyword("group")?;
        let (id, id_token) = self.ident("a group id")?;
        self.record(
            Location::Group {
                claim: claim.into(),
                group: id.clone(),
            },
            &id_token,
        );
        let mut group = EvidenceGroup::new(id.clone(), Vec::new(), 1.0);
        if self.peek_word() == Some("coverage") {
            self.advance();
            let (value, token) = self.number("a coverage exponent")?;
            self.record(
                Location::Coverage {
                    claim: claim.into(),
                    group: id.clone(),
                },
                &token,
            );
            group.coverage = value;
        }
        self.symbol(TokenKind::LBrace)?;

        while self.peek_word() == Some("evidence") {
            self.advance();
            let (item_id, token) = self.ident("an evidence id")?;
            self.record(
                Location::Item {
                    claim: claim.into(),
                    group: id.clone(),
                    item: item_id.clone(),
                },
                &token,
            );
            let mut item = EvidenceItem::new(item_id, self.string("the evidence description")?.0);
            if self.peek_word() == Some("kind") {
                self.advance();
                let (name, token) = self.ident("an evidence kind")?;
                item.kind = EvidenceKind::from_name(&name).ok_or_else(|| {
                    self.error_at(
                        &token,
                        "UNKNOWN_KIND",
                        format!(
                            "unknown evidence kind `{name}` (expected testimony, physical, documentary or other)"
                        ),
                    )
                })?;
            }
            group.items.push(item);
        }
        if group.items.is_empty() {
            return Err(self.misplaced("`evidence`"));
        }

        let mut seen_lr = false;
        let mut seen_because = false;
        let mut seen_given = false;
        loop {
            let token = self.peek().clone();
            let duplicate = |name: &str| SyntaxError {
                code: "DUPLICATE_CLAUSE",
                message: format!("`{name}` given twice in group {id}"),
                start: token.start,
                end: token.end,
            };
            match self.peek_word() {
                Some("lr") => {
                    if seen_lr {
                        return Err(duplicate("lr"));
                    }
                    seen_lr = true;
                    self.advance();
                    if self.peek_word() == Some("label") {
                        self.advance();
                        let (label, label_token) = self.string("a scale label")?;
                        self.record(
                            Location::Lr {
                                claim: claim.into(),
                                group: id.clone(),
                            },
                            &label_token,
                        );
                        group.lr = self.scale.get(&label).ok_or_else(|| {
                            self.error_at(
                                &label_token,
                                "UNKNOWN_LABEL",
                                format!("`{label}` is not in the likelihood-ratio scale"),
                            )
                        })?;
                        group.lr_label = Some(label);
                    } else {
                        let (value, value_token) =
                            self.number("a likelihood ratio, `inf` or `label`")?;
                        self.record(
                            Location::Lr {
                                claim: claim.into(),
                                group: id.clone(),
                            },
                            &value_token,
                        );
                        group.lr = value;
                    }
                }
                Some("because") => {
                    if seen_because {
                        return Err(duplicate("because"));
                    }
                    seen_because = true;
                    self.advance();
                    group.rationale = self.string("the rationale text")?.0;
                }
                Some("given") => {
                    if seen_given {
                        return Err(duplicate("given"));
                    }
                    seen_given = true;
                    self.advance();
                    loop {
                        let (assumption, token) = self.ident("an assumption id")?;
                        self.record(
                            Location::Condition {
                                claim: claim.into(),
                                group: id.clone(),
                                assumption: assumption.clone(),
                            },
                            &token,
                        );
                        group.conditions_on.push(assumption);
                        if self.peek().kind != TokenKind::Comma {
                            break;
                        }
                        self.advance();
                    }
                }
                _ => break,
            }
        }
        if self.peek().kind != TokenKind::RBrace {
            return Err(self.misplaced("`lr`, `because`, `given` or `}`"));
        }
        self.advance();
        if !seen_lr {
            return Err(SyntaxError {
                code: "MISSING_LR",
                message: format!("group {id} has no `lr` clause"),
                start: kw.start,
                end: id_token.end,
            });
        }
        Ok(group)
    }
}
