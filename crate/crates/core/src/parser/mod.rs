//! The `.case` language: parsing, diagnostics and canonical serialization.

mod diagnostics;
mod lexer;
mod parse;
mod serialize;

pub use diagnostics::{ParseDiagnostic, Severity, SourceSpan};
pub use parse::{parse_case, parse_case_with};
pub use serialize::{format_number, serialize_case};
