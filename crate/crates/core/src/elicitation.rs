//! Structured information-requirements elicitation.
//!
//! Each responsibility is discussed through six questions. Answers are
//! captured in `.answers` documents and merged into the model; the merged
//! model renders as the "information required" and "information recorded"
//! tables.

use std::fmt::Write;

use thiserror::Error;

use crate::dsl::{self, ResponsibilityItem, SourceSpan, Spanned};
use crate::hazards::GuideWord;
use crate::model::{Model, ResourceKind, Severity, UnknownResponsibility};
use crate::resolve::{build_model, BuildError};
use crate::validate::Mode;

/// One need line: information item, where it comes from, how it arrives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeedAnswer {
    pub resource: String,
    pub sources: Vec<String>,
    pub channels: Vec<String>,
    pub span: SourceSpan,
}

/// One record line: information created while discharging the
/// responsibility, how it is passed on, and why it is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordAnswer {
    pub resource: String,
    pub channels: Vec<String>,
    pub rationale: Option<String>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HazardAnswer {
    pub item: String,
    pub guide_word: GuideWord,
    pub consequence: String,
    pub severity: Severity,
    pub span: SourceSpan,
}

/// The answers gathered in one session about one responsibility. Elements
/// are referred to by name and resolved when ingested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElicitationRecord {
    pub responsibility: String,
    pub by: Option<String>,
    pub date: Option<String>,
    pub needs: Vec<NeedAnswer>,
    pub records: Vec<RecordAnswer>,
    pub hazards: Vec<HazardAnswer>,
    pub span: SourceSpan,
}

impl ElicitationRecord {
    pub fn new(responsibility: impl Into<String>) -> Self {
        ElicitationRecord {
            responsibility: responsibility.into(),
            by: None,
            date: None,
            needs: Vec::new(),
            records: Vec::new(),
            hazards: Vec::new(),
            span: SourceSpan::synthetic(),
        }
    }
}

/// The kind of answer a question expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerSlot {
    /// Lines in a `needs` block.
    NeedLines,
    /// `via` clauses on need or record lines.
    ChannelAnnotations,
    /// Lines in a `records` block.
    RecordLines,
    /// One `hazards` block per needed item.
    HazardBlocks,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub number: u8,
    pub prompt: &'static str,
    pub slot: AnswerSlot,
    /// What the model already says, one entry per line.
    pub draft: Vec<String>,
}

pub const PROMPTS: [(&str, AnswerSlot); 6] = [
    (
        "What information needs to be provided to discharge this responsibility?",
        AnswerSlot::NeedLines,
    ),
    (
        "What channels are used to communicate this information?",
        AnswerSlot::ChannelAnnotations,
    ),
    ("Where does this information come from?", AnswerSlot::NeedLines),
    (
        "What information is generated and recorded in the discharge of this responsibility and why?",
        AnswerSlot::RecordLines,
    ),
    (
        "What channels are used to communicate this recorded information?",
        AnswerSlot::ChannelAnnotations,
    ),
    (
        "What are the consequences if the information required is unavailable, inaccurate, incomplete, late, early?",
        AnswerSlot::HazardBlocks,
    ),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Questionnaire {
    pub responsibility: String,
    pub questions: Vec<Question>,
    /// Existing model content, as answers, for the engineer to extend.
    pub draft: ElicitationRecord,
}

/// Answers equivalent to what the model already records about a
/// responsibility.
fn current_answers(model: &Model, name: &str) -> Result<ElicitationRecord, UnknownResponsibility> {
    let resp = model.find_responsibility(name)?;
    let mut record = ElicitationRecord::new(resp.name.clone());
    record.needs = resp
        .needs
        .iter()
        .map(|n| NeedAnswer {
            resource: model.resource_name(&n.resource).to_string(),
            sources: n.sources.iter().map(|a| model.agent_name(a).to_string()).collect(),
            channels: n.channels.iter().map(|c| model.channel_name(c).to_string()).collect(),
            span: SourceSpan::synthetic(),
        })
        .collect();
    record.records = resp
        .products
        .iter()
        .map(|p| RecordAnswer {
            resource: model.resource_name(&p.resource).to_string(),
            channels: p.channels.iter().map(|c| model.channel_name(c).to_string()).collect(),
            rationale: p.rationale.clone(),
            span: SourceSpan::synthetic(),
        })
        .collect();
    record.hazards = resp
        .hazards
        .iter()
        .map(|h| HazardAnswer {
            item: model.resource_name(&h.item).to_string(),
            guide_word: h.guide_word,
            consequence: h.consequence.clone(),
            severity: h.severity,
            span: SourceSpan::synthetic(),
        })
        .collect();
    Ok(record)
}

/// The six questions for one responsibility, with drafts taken from the
/// model.
pub fn generate_questionnaire(model: &Model, responsibility: &str) -> Result<Questionnaire, UnknownResponsibility> {
    let draft = current_answers(model, responsibility)?;
    let item = |name: &str| format!("|{name}|");
    let drafts: [Vec<String>; 6] = [
        draft.needs.iter().map(|n| item(&n.resource)).collect(),
        draft
            .needs
            .iter()
            .filter(|n| !n.channels.is_empty())
            .map(|n| format!("{} via {}", item(&n.resource), n.channels.join(", ")))
            .collect(),
        draft
            .needs
            .iter()
            .filter(|n| !n.sources.is_empty())
            .map(|n| {
                let agents: Vec<_> = n.sources.iter().map(|s| format!("<{s}>")).collect();
                format!("{} from {}", item(&n.resource), agents.join(", "))
            })
            .collect(),
        draft.records.iter().map(|r| item(&r.resource)).collect(),
        draft
            .records
            .iter()
            .filter(|r| !r.channels.is_empty())
            .map(|r| format!("{} via {}", item(&r.resource), r.channels.join(", ")))
            .collect(),
        draft
            .hazards
            .iter()
            .map(|h| format!("{} {}: {}", item(&h.item), h.guide_word, h.consequence))
            .collect(),
    ];
    let questions = PROMPTS
        .iter()
        .zip(drafts)
        .enumerate()
        .map(|(i, (&(prompt, slot), draft))| Question {
            number: i as u8 + 1,
            prompt,
            slot,
            draft,
        })
        .collect();
    Ok(Questionnaire {
        responsibility: draft.responsibility.clone(),
        questions,
        draft,
    })
}

fn slot_hint(slot: AnswerSlot, number: u8) -> &'static str {
    match (slot, number) {
        (AnswerSlot::NeedLines, 1) => "one line per item in the needs block: |Item|",
        (AnswerSlot::NeedLines, _) => "a from clause on each needs line: from <Agent>, <Agent>",
        (AnswerSlot::ChannelAnnotations, 2) => "a via clause on each needs line: via \"Channel\", \"Backup channel\"",
        (AnswerSlot::ChannelAnnotations, _) => "a via clause on each records line",
        (AnswerSlot::RecordLines, _) => "one line per item in the records block: |Item| rationale \"why\"",
        (AnswerSlot::HazardBlocks, _) => {
            "a hazards block per needed item: guide word, \"consequence\", severity"
        }
    }
}

/// Renders the questionnaire as an editable `.answers` document. Questions
/// are comments; the session block holds the drafts plus commented-out
/// hazard lines for every unassessed guide word.
pub fn render_skeleton(model: &Model, questionnaire: &Questionnaire) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# Elicitation questionnaire for \"{}\" (model \"{}\")",
        questionnaire.responsibility,
        model.name()
    );
    out.push_str("#\n");
    for q in &questionnaire.questions {
        let _ = writeln!(out, "# Q{}. {}", q.number, q.prompt);
        let _ = writeln!(out, "#     Answer with {}.", slot_hint(q.slot, q.number));
    }
    out.push('\n');

    let draft = &questionnaire.draft;
    let _ = writeln!(out, "{} {{", dsl::answers_session_header(draft));
    out.push_str("  needs {\n");
    for n in &draft.needs {
        let _ = writeln!(out, "    {}", dsl::answers_format_need(n));
    }
    out.push_str("  }\n  records {\n");
    for r in &draft.records {
        let _ = writeln!(out, "    {}", dsl::answers_format_record(r));
    }
    out.push_str("  }\n");
    for n in &draft.needs {
        let _ = writeln!(out, "  hazards |{}| {{", n.resource);
        for gw in GuideWord::ALL {
            let existing = draft
                .hazards
                .iter()
                .find(|h| h.item == n.resource && h.guide_word == gw);
            match existing {
                Some(h) => {
                    let _ = writeln!(out, "    {}", dsl::answers_format_hazard(h));
                }
                None => {
                    let _ = writeln!(out, "    # {gw} \"\" severity none");
                }
            }
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    UnknownResponsibility(#[from] UnknownResponsibility),
    #[error("{span}: error: unknown {kind} \"{name}\" (strict mode only accepts declared elements)")]
    Unresolved {
        kind: &'static str,
        name: String,
        span: SourceSpan,
    },
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    Build(Vec<BuildError>),
}

fn check_declared(model: &Model, record: &ElicitationRecord) -> Result<(), IngestError> {
    let unresolved = |kind, name: &str, span: &SourceSpan| IngestError::Unresolved {
        kind,
        name: name.to_string(),
        span: span.clone(),
    };
    let info = |name: &str| {
        model
            .resource_named(name)
            .is_some_and(|r| r.kind == ResourceKind::Information)
    };
    for n in &record.needs {
        if !info(&n.resource) {
            return Err(unresolved("information resource", &n.resource, &n.span));
        }
        if let Some(a) = n.sources.iter().find(|a| model.agent_named(a).is_none()) {
            return Err(unresolved("agent", a, &n.span));
        }
        if let Some(c) = n.channels.iter().find(|c| model.channel_named(c).is_none()) {
            return Err(unresolved("channel", c, &n.span));
        }
    }
    for r in &record.records {
        if !info(&r.resource) {
            return Err(unresolved("information resource", &r.resource, &r.span));
        }
        if let Some(c) = r.channels.iter().find(|c| model.channel_named(c).is_none()) {
            return Err(unresolved("channel", c, &r.span));
        }
    }
    for h in &record.hazards {
        if !info(&h.item) {
            return Err(unresolved("information resource", &h.item, &h.span));
        }
    }
    Ok(())
}

/// Merges a session's answers into a copy of the model.
///
/// Answers only ever add: sources and channels are unioned, missing
/// rationales and unassessed hazards are filled in, and nothing is removed.
/// Ingesting the same record twice gives the same model as ingesting it
/// once. In strict mode every referenced element must already be declared;
/// in lenient mode unknown elements are declared implicitly.
pub fn ingest(model: &Model, record: &ElicitationRecord, mode: Mode) -> Result<Model, IngestError> {
    let target = model.find_responsibility(&record.responsibility)?.name.clone();
    if mode == Mode::Strict {
        check_declared(model, record)?;
    }

    let mut decls = dsl::model_declarations(model, false);
    let block = decls
        .iter_mut()
        .find_map(|d| match &mut d.node {
            dsl::Declaration::Responsibility(r) if r.name == target => Some(r),
            _ => None,
        })
        .expect("responsibility exists in its own model");

    for n in &record.needs {
        block.items.push(Spanned::new(
            ResponsibilityItem::Requires {
                resource: n.resource.clone(),
                sources: n.sources.clone(),
                channels: n.channels.clone(),
                criticality: None,
            },
            n.span.clone(),
        ));
    }
    for r in &record.records {
        block.items.push(Spanned::new(
            ResponsibilityItem::Produces {
                resource: r.resource.clone(),
                channels: r.channels.clone(),
                rationale: r.rationale.clone(),
            },
            r.span.clone(),
        ));
    }
    for h in &record.hazards {
        block.items.push(Spanned::new(
            ResponsibilityItem::Hazard {
                item: h.item.clone(),
                guide_word: h.guide_word,
                consequence: h.consequence.clone(),
                severity: h.severity,
                mitigation: None,
            },
            h.span.clone(),
        ));
    }
    build_model(&decls).map_err(IngestError::Build)
}

/// Ingests several sessions in order.
pub fn ingest_all(model: &Model, records: &[ElicitationRecord], mode: Mode) -> Result<Model, IngestError> {
    records
        .iter()
        .try_fold(model.clone(), |m, r| ingest(&m, r, mode))
}

/// A titled table of text cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub const REQUIRED_COLUMNS: [&str; 3] = ["Information required", "Source", "Communication channel"];
pub const RECORDED_COLUMNS: [&str; 2] = ["Information created/recorded", "Channels"];

/// One row per need: item, sources, channels. Multi-valued cells are joined
/// with ", ".
pub fn information_required_table(model: &Model, responsibility: &str) -> Result<InfoTable, UnknownResponsibility> {
    let resp = model.find_responsibility(responsibility)?;
    let rows = resp
        .needs
        .iter()
        .map(|n| {
            vec![
                model.resource_name(&n.resource).to_string(),
                join(n.sources.iter().map(|a| model.agent_name(a))),
                join(n.channels.iter().map(|c| model.channel_name(c))),
            ]
        })
        .collect();
    Ok(InfoTable {
        title: format!("Information used in the discharge of the \"{}\" responsibility", resp.name),
        columns: REQUIRED_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}

/// One row per product: item and channels.
pub fn information_recorded_table(model: &Model, responsibility: &str) -> Result<InfoTable, UnknownResponsibility> {
    let resp = model.find_responsibility(responsibility)?;
    let rows = resp
        .products
        .iter()
        .map(|p| {
            vec![
                model.resource_name(&p.resource).to_string(),
                join(p.channels.iter().map(|c| model.channel_name(c))),
            ]
        })
        .collect();
    Ok(InfoTable {
        title: format!("Information recorded in the discharge of the \"{}\" responsibility", resp.name),
        columns: RECORDED_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}

fn join<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    parts.collect::<Vec<_>>().join(", ")
}
