//! Text formats: `.resp` models, `.answers` elicitation answers and `.reqs`
//! requirement records.
//!
//! All three share one lexer. Element references use the bracket notation
//! of responsibility diagrams: `<Agent>`, `[Physical resource]` and
//! `|Information resource|`. Responsibility and channel names are double
//! quoted strings with `\"` and `\\` as the only escapes. `#` starts a
//! comment that runs to the end of the line.

mod answers;
mod ast;
mod cursor;
mod lexer;
mod parser;
mod printer;
mod reqs;

use std::fmt;

use thiserror::Error;

pub use answers::{parse_answers, parse_answers_in, print_answers};
pub use ast::{
    AgentDecl, ChannelDecl, Declaration, ResourceDecl, ResponsibilityDecl, ResponsibilityItem,
    Spanned,
};
pub use parser::{parse_model, parse_model_in};
pub use printer::{print_declarations, print_model, quote};
pub use reqs::{parse_requirements, parse_requirements_in, print_requirements};

pub(crate) use answers::{
    format_hazard as answers_format_hazard, format_need as answers_format_need,
    format_record as answers_format_record, session_header as answers_session_header,
};
pub(crate) use printer::model_declarations;

/// Label used for text that did not come from a named file.
pub const ANONYMOUS_SOURCE: &str = "<input>";

/// A position in a source document. Lines and columns are 1-based; columns
/// count characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, column: usize) -> Self {
        SourceSpan {
            file: file.into(),
            line,
            column,
        }
    }

    /// Placeholder for elements synthesised in code rather than parsed.
    pub fn synthetic() -> Self {
        SourceSpan::new(ANONYMOUS_SOURCE, 0, 0)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: error: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError {
            span,
            expected: expected.into(),
            found: found.into(),
        }
    }
}
