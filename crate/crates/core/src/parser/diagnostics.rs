use std::fmt;

use serde::Serialize;

/// 1-based line and column, length in characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    /// True when the span addresses characters that exist in `source`. A
    /// zero-length span may sit one past the end of a line.
    pub fn is_within(&self, source: &str) -> bool {
        if self.line == 0 || self.column == 0 {
            return false;
        }
        match source.split('\n').nth(self.line - 1) {
            Some(text) => self.column - 1 + self.length <= text.chars().count(),
            None => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseDiagnostic {
    /// `file:line:col: severity[code]: message`
    pub fn render(&self, file: &str) -> String {
        format!(
            "{}:{}:{}: {}[{}]: {}",
            file, self.span.line, self.span.column, self.severity, self.code, self.message
        )
    }
}

/// Converts byte offsets into line/column positions.
pub(crate) struct LineIndex<'a> {
    source: &'a str,
    line_starts: Vec<usize>,
}

impl<'a> LineIndex<'a> {
    pub fn new(source: &'a str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(source.match_indices('\n').map(|(i, _)| i + 1));
        Self {
            source,
            line_starts,
        }
    }

    /// Span for the byte range `start..end`, clipped to the line holding
    /// `start`.
    pub fn span(&self, start: usize, end: usize) -> SourceSpan {
        let start = start.min(self.source.len());
        let line = match self.line_starts.binary_search(&start) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let line_start = self.line_starts[line];
        let line_end = self
            .line_starts
            .get(line + 1)
            .map(|next| next - 1)
            .unwrap_or(self.source.len());
        let end = end.clamp(start, line_end);
        SourceSpan {
            line: line + 1,
            column: self.source[line_start..start].chars().count() + 1,
            length: self.source[start..end].chars().count(),
        }
    }
}
