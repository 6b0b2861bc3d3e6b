use crate::hazards::GuideWord;
use crate::model::{AgentKind, ResourceKind, Severity};

use super::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub span: SourceSpan,
}

impl<T> Spanned<T> {
    pub fn new(node: T, span: SourceSpan) -> Self {
        Spanned { node, span }
    }
}

/// One top-level statement of a `.resp` document. Names are held exactly as
/// written, minus surrounding whitespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    Model(String),
    Agent(AgentDecl),
    Resource(ResourceDecl),
    Channel(ChannelDecl),
    Responsibility(ResponsibilityDecl),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentDecl {
    pub name: String,
    /// `None` when the `kind` clause was omitted.
    pub kind: Option<AgentKind>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceDecl {
    pub name: String,
    pub kind: ResourceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelDecl {
    pub name: String,
    pub medium: Option<String>,
    pub backup_of: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponsibilityDecl {
    pub name: String,
    pub items: Vec<Spanned<ResponsibilityItem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResponsibilityItem {
    AssignedTo(Vec<String>),
    Requires {
        resource: String,
        sources: Vec<String>,
        channels: Vec<String>,
        criticality: Option<Severity>,
    },
    Produces {
        resource: String,
        channels: Vec<String>,
        rationale: Option<String>,
    },
    Uses(String),
    Precedes(String),
    Note(String),
    Hazard {
        item: String,
        guide_word: GuideWord,
        consequence: String,
        severity: Severity,
        mitigation: Option<String>,
    },
}
