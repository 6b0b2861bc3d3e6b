//! Whole-model validation.
//!
//! | Code              | Severity | Mode   | Raised for                                   |
//! |-------------------|----------|--------|----------------------------------------------|
//! | `UNASSIGNED_RESP` | high     | both   | a responsibility with no assigned agent      |
//! | `IMPLICIT_DECL`   | low      | strict | an element that was mentioned, not declared  |
//! | `EMPTY_CHANNELS`  | low      | strict | a need or product with no channel            |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dsl::SourceSpan;
use crate::model::{ElementRef, Model, Severity, UnknownToken};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Mode {
    Strict,
    #[default]
    Lenient,
}

impl FromStr for Mode {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "lenient" => Ok(Mode::Lenient),
            _ => Err(UnknownToken::new(s, ["strict", "lenient"])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    EmptyChannels,
    ImplicitDecl,
    UnassignedResp,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::EmptyChannels => "EMPTY_CHANNELS",
            DiagnosticCode::ImplicitDecl => "IMPLICIT_DECL",
            DiagnosticCode::UnassignedResp => "UNASSIGNED_RESP",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            DiagnosticCode::UnassignedResp => Severity::High,
            DiagnosticCode::ImplicitDecl | DiagnosticCode::EmptyChannels => Severity::Low,
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub severity: Severity,
    pub message: String,
    pub subject: ElementRef,
    pub location: Option<SourceSpan>,
}

impl Diagnostic {
    fn new(model: &Model, code: DiagnosticCode, subject: ElementRef, message: String) -> Self {
        Diagnostic {
            code,
            severity: code.severity(),
            message,
            location: model.span_of(&subject).filter(|s| s.line > 0).cloned(),
            subject,
        }
    }
}

/// `file:line:col: CODE severity subject: message`, without the location
/// prefix when none is known.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.location {
            write!(f, "{span}: ")?;
        }
        write!(f, "{} {} {}: {}", self.code, self.severity, self.subject, self.message)
    }
}

fn element_label(model: &Model, element: &ElementRef) -> String {
    match element {
        ElementRef::Agent(id) => format!("agent <{}>", model.agent_name(id)),
        ElementRef::Resource(id) => match model.resource(id) {
            Some(r) => format!("resource {}", r.kind.bracket(&r.name)),
            None => format!("resource {id}"),
        },
        ElementRef::Channel(id) => format!("channel \"{}\"", model.channel_name(id)),
        other => other.to_string(),
    }
}

pub fn validate(model: &Model, mode: Mode) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for resp in model.responsibilities() {
        if resp.assigned_to.is_empty() {
            out.push(Diagnostic::new(
                model,
                DiagnosticCode::UnassignedResp,
                ElementRef::Responsibility(resp.id.clone()),
                format!("responsibility \"{}\" has no assigned agent", resp.name),
            ));
        }
    }
    if mode == Mode::Strict {
        for element in model.implicit_elements() {
            out.push(Diagnostic::new(
                model,
                DiagnosticCode::ImplicitDecl,
                element.clone(),
                format!("{} is used but never declared", element_label(model, element)),
            ));
        }
        for resp in model.responsibilities() {
            for need in resp.needs.iter().filter(|n| n.channels.is_empty()) {
                out.push(Diagnostic::new(
                    model,
                    DiagnosticCode::EmptyChannels,
                    ElementRef::Need(resp.id.clone(), need.resource.clone()),
                    format!(
                        "no channel given for |{}| required by \"{}\"",
                        model.resource_name(&need.resource),
                        resp.name
                    ),
                ));
            }
            for product in resp.products.iter().filter(|p| p.channels.is_empty()) {
                out.push(Diagnostic::new(
                    model,
                    DiagnosticCode::EmptyChannels,
                    ElementRef::Product(resp.id.clone(), product.resource.clone()),
                    format!(
                        "no channel given for |{}| produced by \"{}\"",
                        model.resource_name(&product.resource),
                        resp.name
                    ),
                ));
            }
        }
    }
    out.sort_by_cached_key(|d| (d.code, d.subject.to_string()));
    out
}
