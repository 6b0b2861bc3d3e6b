//! Renderers: requirement reports, findings, diffs, tables and diagrams.

mod dot;
mod table;

use std::fmt::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::{Finding, PerceptionInconsistency};
use crate::dsl::quote;
use crate::hazards::GuideWord;
use crate::model::{Model, ResourceKind, UnknownToken};

pub use dot::to_dot;
pub use table::{table_to_csv, table_to_markdown, worksheet_table, WORKSHEET_COLUMNS};

/// A reference from a requirement into the model, by element name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TraceRef {
    Info(String),
    Agent(String),
    Responsibility(String),
    /// Resolves when some responsibility needs the item.
    Hazard { item: String, guide_word: GuideWord },
}

impl TraceRef {
    pub fn resolves_in(&self, model: &Model) -> bool {
        match self {
            TraceRef::Info(name) => model
                .resource_named(name)
                .is_some_and(|r| r.kind == ResourceKind::Information),
            TraceRef::Agent(name) => model.agent_named(name).is_some(),
            TraceRef::Responsibility(name) => model.responsibility_named(name).is_some(),
            TraceRef::Hazard { item, .. } => model.resource_named(item).is_some_and(|res| {
                model
                    .responsibilities()
                    .iter()
                    .any(|r| r.need(&res.id).is_some())
            }),
        }
    }
}

/// Same notation as the `traces` clause of `.reqs` files.
impl fmt::Display for TraceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceRef::Info(name) => write!(f, "|{name}|"),
            TraceRef::Agent(name) => write!(f, "<{name}>"),
            TraceRef::Responsibility(name) => write!(f, "responsibility {}", quote(name)),
            TraceRef::Hazard { item, guide_word } => write!(f, "hazard |{item}| {guide_word}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementRecord {
    pub id: String,
    pub text: String,
    pub rationale: String,
    pub traces: Vec<TraceRef>,
    /// The hazard a generated mitigation stub answers.
    pub derived_from: Option<TraceRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedTrace {
    pub requirement: String,
    pub trace: TraceRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render_unresolved(.0))]
pub struct UnresolvedTraces(pub Vec<UnresolvedTrace>);

fn render_unresolved(list: &[UnresolvedTrace]) -> String {
    list.iter()
        .map(|u| format!("error: requirement {} traces {}, which the model does not contain", u.requirement, u.trace))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Every trace that does not resolve, in authored order.
pub fn unresolved_traces(model: &Model, requirements: &[RequirementRecord]) -> Vec<UnresolvedTrace> {
    requirements
        .iter()
        .flat_map(|r| {
            r.traces.iter().filter(|t| !t.resolves_in(model)).map(|t| UnresolvedTrace {
                requirement: r.id.clone(),
                trace: t.clone(),
            })
        })
        .collect()
}

/// Markdown report: requirements numbered in authored order, each with its
/// rationale and a trace line, followed by a summary line.
pub fn requirements_report(model: &Model, requirements: &[RequirementRecord]) -> Result<String, UnresolvedTraces> {
    let unresolved = unresolved_traces(model, requirements);
    if !unresolved.is_empty() {
        return Err(UnresolvedTraces(unresolved));
    }
    let mut out = String::new();
    if model.name().is_empty() {
        out.push_str("# Requirements\n\n");
    } else {
        let _ = writeln!(out, "# Requirements: {}\n", model.name());
    }
    for (i, r) in requirements.iter().enumerate() {
        let n = i + 1;
        let indent = " ".repeat(n.to_string().len() + 2);
        let _ = writeln!(out, "{n}. {} *({})*", r.text, r.rationale);
        if !r.traces.is_empty() {
            let traces: Vec<_> = r.traces.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "{indent}Traces: {}", traces.join(", "));
        }
        out.push('\n');
    }
    let traces: usize = requirements.iter().map(|r| r.traces.len()).sum();
    let _ = writeln!(
        out,
        "{} {}, {} {}",
        requirements.len(),
        plural(requirements.len(), "requirement", "requirements"),
        traces,
        plural(traces, "trace", "traces"),
    );
    Ok(out)
}

fn plural<'a>(n: usize, one: &'a str, many: &'a str) -> &'a str {
    if n == 1 {
        one
    } else {
        many
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for ReportFormat {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            _ => Err(UnknownToken::new(s, ["text", "json"])),
        }
    }
}

fn json_lines<T: serde::Serialize>(items: &[T]) -> String {
    let mut out = serde_json::to_string_pretty(items).expect("report values serialize");
    out.push('\n');
    out
}

/// Text: one `CODE severity subjects: explanation` line per finding and a
/// count. JSON: an array of objects with keys `code`, `severity`,
/// `subjects`, `explanation`.
pub fn findings_report(findings: &[Finding], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json_lines(findings),
        ReportFormat::Text => {
            let mut out = String::new();
            for f in findings {
                let _ = writeln!(out, "{f}");
            }
            let _ = writeln!(out, "{} {}", findings.len(), plural(findings.len(), "finding", "findings"));
            out
        }
    }
}

/// Text: one line per inconsistency and a count. JSON: an array of objects
/// with keys `kind`, `responsibility`, `item`, `left`, `right`.
pub fn diff_report(diff: &[PerceptionInconsistency], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json_lines(diff),
        ReportFormat::Text => {
            let mut out = String::new();
            for d in diff {
                let _ = writeln!(out, "{d}");
            }
            let _ = writeln!(
                out,
                "{} {}",
                diff.len(),
                plural(diff.len(), "inconsistency", "inconsistencies")
            );
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{Finding, FindingCode};
    use crate::dsl::parse_model;
    use crate::model::{ElementRef, ResponsibilityId};
    use crate::resolve::build_model;

    fn build(text: &str) -> Model {
        build_model(&parse_model(text).unwrap()).unwrap()
    }

    fn req(id: &str, traces: Vec<TraceRef>) -> RequirementRecord {
        RequirementRecord {
            id: id.into(),
            text: format!("The system shall do {id}."),
            rationale: "Because.".into(),
            traces,
            derived_from: None,
        }
    }

    #[test]
    fn empty_report() {
        let m = build("model \"M\"");
        assert_eq!(requirements_report(&m, &[]).unwrap(), "# Requirements: M\n\n0 requirements, 0 traces\n");
    }

    #[test]
    fn numbered_report_with_traces() {
        let m = build("model \"M\"\nresponsibility \"R\" { assigned to <A> requires |Map| }");
        let reqs = vec![
            req("R1", vec![TraceRef::Info("Map".into())]),
            req(
                "R2",
                vec![
                    TraceRef::Agent("A".into()),
                    TraceRef::Hazard {
                        item: "Map".into(),
                        guide_word: GuideWord::Late,
                    },
                ],
            ),
        ];
        let report = requirements_report(&m, &reqs).unwrap();
        assert_eq!(
            report,
            "# Requirements: M\n\n1. The system shall do R1. *(Because.)*\n   Traces: |Map|\n\n2. The system shall do R2. *(Because.)*\n   Traces: <A>, hazard |Map| late\n\n2 requirements, 3 traces\n"
        );
    }

    #[test]
    fn unresolved_traces_abort() {
        let m = build("resource [Map]\nresponsibility \"R\" {}");
        let reqs = vec![req(
            "R1",
            vec![
                TraceRef::Info("Map".into()),
                TraceRef::Responsibility("R".into()),
                TraceRef::Hazard {
                    item: "Map".into(),
                    guide_word: GuideWord::Early,
                },
            ],
        )];
        let err = requirements_report(&m, &reqs).unwrap_err();
        assert_eq!(err.0.len(), 2);
        assert!(err.to_string().starts_with("error: requirement R1 traces |Map|"));
    }

    #[test]
    fn findings_text_and_json() {
        assert_eq!(findings_report(&[], ReportFormat::Text), "0 findings\n");
        assert_eq!(findings_report(&[], ReportFormat::Json), "[]\n");
        let f = Finding::new(
            FindingCode::UnassignedResp,
            vec![ElementRef::Responsibility(ResponsibilityId::for_name("Collect").unwrap())],
            "no agent".into(),
        );
        let text = findings_report(std::slice::from_ref(&f), ReportFormat::Text);
        assert_eq!(text, "UNASSIGNED_RESP high collect: no agent\n1 finding\n");
        let json = findings_report(&[f], ReportFormat::Json);
        let keys: Vec<_> = ["\"code\"", "\"severity\"", "\"subjects\"", "\"explanation\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{json}");
    }
}
