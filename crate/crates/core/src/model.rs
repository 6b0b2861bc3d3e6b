//! The responsibility model: agents, resources, channels, and the
//! responsibilities that connect them.
//!
//! A [`Model`] is produced by [`crate::resolve::build_model`] and is never
//! mutated afterwards. Operations that "change" a model (such as
//! [`crate::elicitation::ingest`]) return a new value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dsl::SourceSpan;
use crate::hazards::GuideWord;

/// Five-level severity scale shared by diagnostics, findings and hazards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Severity {
    #[default]
    None,
    Low,
    Medium,
    High,
    Critical,
}

impl Severity {
    pub const ALL: [Severity; 5] = [
        Severity::None,
        Severity::Low,
        Severity::Medium,
        Severity::High,
        Severity::Critical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Severity::None => "none",
            Severity::Low => "low",
            Severity::Medium => "medium",
            Severity::High => "high",
            Severity::Critical => "critical",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Severity::ALL
            .into_iter()
            .find(|sev| sev.as_str() == s)
            .ok_or_else(|| UnknownToken::new(s, Severity::ALL.iter().map(|s| s.as_str())))
    }
}

impl Serialize for Severity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A token that is not one of a fixed set of legal words.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown token '{found}', expected one of {}", .legal.join(", "))]
pub struct UnknownToken {
    pub found: String,
    pub legal: Vec<&'static str>,
}

impl UnknownToken {
    pub(crate) fn new(found: &str, legal: impl IntoIterator<Item = &'static str>) -> Self {
        UnknownToken {
            found: found.to_string(),
            legal: legal.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlugError {
    #[error("name is empty")]
    Empty,
    #[error("name {0:?} contains no letters or digits")]
    NoAlphanumeric(String),
}

/// Derives the identifier for a display name: lowercase, with every maximal
/// run of non-alphanumeric characters replaced by a single hyphen and no
/// leading or trailing hyphen.
pub fn slugify(name: &str) -> Result<String, SlugError> {
    let trimmed = name.trim();
    if trimmed.is_empty() {
        return Err(SlugError::Empty);
    }
    // Lowercase first: some characters lowercase to sequences that include
    // combining marks, which must be classified after the mapping.
    let lowered = trimmed.to_lowercase();
    let mut slug = String::with_capacity(lowered.len());
    let mut pending_hyphen = false;
    for c in lowered.chars() {
        if c.is_alphanumeric() {
            if pending_hyphen && !slug.is_empty() {
                slug.push('-');
            }
            pending_hyphen = false;
            slug.push(c);
        } else {
            pending_hyphen = true;
        }
    }
    if slug.is_empty() {
        return Err(SlugError::NoAlphanumeric(trimmed.to_string()));
    }
    Ok(slug)
}

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            /// Builds the identifier for a display name.
            pub fn for_name(name: &str) -> Result<Self, SlugError> {
                slugify(name).map($name)
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.0)
            }
        }
    };
}

id_type!(
    /// Slug identifying an [`Agent`].
    AgentId
);
id_type!(
    /// Slug identifying a [`Resource`].
    ResourceId
);
id_type!(
    /// Slug identifying a [`Channel`].
    ChannelId
);
id_type!(
    /// Slug identifying a [`Responsibility`].
    ResponsibilityId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum AgentKind {
    #[default]
    Organization,
    Role,
    Person,
    System,
    Group,
}

impl AgentKind {
    pub const ALL: [AgentKind; 5] = [
        AgentKind::Organization,
        AgentKind::Role,
        AgentKind::Person,
        AgentKind::System,
        AgentKind::Group,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Organization => "organization",
            AgentKind::Role => "role",
            AgentKind::Person => "person",
            AgentKind::System => "system",
            AgentKind::Group => "group",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgentKind {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownToken::new(s, AgentKind::ALL.iter().map(|k| k.as_str())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResourceKind {
    /// Consumed or limited in use.
    Physical,
    /// Not depleted by use.
    Information,
}

impl ResourceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResourceKind::Physical => "physical",
            ResourceKind::Information => "information",
        }
    }

    /// Renders a name in the bracket notation for this kind.
    pub fn bracket(self, name: &str) -> String {
        match self {
            ResourceKind::Physical => format!("[{name}]"),
            ResourceKind::Information => format!("|{name}|"),
        }
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub id: AgentId,
    pub name: String,
    pub kind: AgentKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub id: ResourceId,
    pub name: String,
    pub kind: ResourceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub id: ChannelId,
    pub name: String,
    pub medium: Option<String>,
    pub backup_of: Option<ChannelId>,
}

/// Information a responsibility holder must be given.
///
/// `sources` and `channels` keep first-mention order and never hold
/// duplicates. Several sources mean joint involvement; whether any one of
/// them suffices is not recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoNeed {
    pub resource: ResourceId,
    pub sources: Vec<AgentId>,
    pub channels: Vec<ChannelId>,
    pub criticality: Option<Severity>,
}

/// Information generated and recorded while discharging a responsibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoProduct {
    pub resource: ResourceId,
    pub channels: Vec<ChannelId>,
    pub rationale: Option<String>,
}

/// The assessed consequence of one guide-word deviation of one
/// information item. An empty consequence means "not yet assessed".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HazardEntry {
    pub responsibility: String,
    pub item: ResourceId,
    pub guide_word: GuideWord,
    pub consequence: String,
    pub severity: Severity,
    /// Id of the requirement that mitigates this hazard.
    pub mitigation: Option<String>,
}

impl HazardEntry {
    pub fn is_assessed(&self) -> bool {
        !self.consequence.trim().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Responsibility {
    pub id: ResponsibilityId,
    pub name: String,
    /// May be empty: an unassigned responsibility is legal but reportable.
    pub assigned_to: Vec<AgentId>,
    pub needs: Vec<InfoNeed>,
    pub products: Vec<InfoProduct>,
    /// Physical resources only.
    pub uses: Vec<ResourceId>,
    pub notes: Vec<String>,
    pub hazards: Vec<HazardEntry>,
}

impl Responsibility {
    pub fn need(&self, resource: &ResourceId) -> Option<&InfoNeed> {
        self.needs.iter().find(|n| &n.resource == resource)
    }

    pub fn product(&self, resource: &ResourceId) -> Option<&InfoProduct> {
        self.products.iter().find(|p| &p.resource == resource)
    }

    pub fn hazard(&self, item: &ResourceId, guide_word: GuideWord) -> Option<&HazardEntry> {
        self.hazards
            .iter()
            .find(|h| &h.item == item && h.guide_word == guide_word)
    }
}

/// `from` must be discharged before `to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequenceLink {
    pub from: ResponsibilityId,
    pub to: ResponsibilityId,
}

/// Reference to an element of a model, used as the subject of diagnostics
/// and findings. Renders as the element's id; nested elements join ids with
/// `/`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementRef {
    Agent(AgentId),
    Resource(ResourceId),
    Channel(ChannelId),
    Responsibility(ResponsibilityId),
    Need(ResponsibilityId, ResourceId),
    Product(ResponsibilityId, ResourceId),
    Hazard(ResponsibilityId, ResourceId, GuideWord),
}

impl ElementRef {
    pub fn kind(&self) -> &'static str {
        match self {
            ElementRef::Agent(_) => "agent",
            ElementRef::Resource(_) => "resource",
            ElementRef::Channel(_) => "channel",
            ElementRef::Responsibility(_) => "responsibility",
            ElementRef::Need(..) => "need",
            ElementRef::Product(..) => "product",
            ElementRef::Hazard(..) => "hazard",
        }
    }
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::Agent(id) => write!(f, "{id}"),
            ElementRef::Resource(id) => write!(f, "{id}"),
            ElementRef::Channel(id) => write!(f, "{id}"),
            ElementRef::Responsibility(id) => write!(f, "{id}"),
            ElementRef::Need(r, i) | ElementRef::Product(r, i) => write!(f, "{r}/{i}"),
            ElementRef::Hazard(r, i, g) => write!(f, "{r}/{i}/{g}"),
        }
    }
}

impl Serialize for ElementRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown responsibility \"{name}\"; available: {}", list_names(.available))]
pub struct UnknownResponsibility {
    pub name: String,
    pub available: Vec<String>,
}

fn list_names(names: &[String]) -> String {
    if names.is_empty() {
        return "(none)".to_string();
    }
    names
        .iter()
        .map(|n| format!("\"{n}\""))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Where elements came from. Not part of model equality.
#[derive(Debug, Clone, Default)]
pub(crate) struct Provenance {
    pub(crate) spans: BTreeMap<ElementRef, SourceSpan>,
    pub(crate) implicit: BTreeSet<ElementRef>,
}

/// A resolved responsibility model.
///
/// Element lists are held in canonical order: by display name, ties broken by
/// declaration order. Equality compares content only; source locations and
/// the record of which elements were implicitly declared are ignored.
#[derive(Debug, Clone, Default)]
pub struct Model {
    pub(crate) name: String,
    pub(crate) agents: Vec<Agent>,
    pub(crate) resources: Vec<Resource>,
    pub(crate) channels: Vec<Channel>,
    pub(crate) responsibilities: Vec<Responsibility>,
    pub(crate) sequence_links: Vec<SequenceLink>,
    pub(crate) provenance: Provenance,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.agents == other.agents
            && self.resources == other.resources
            && self.channels == other.channels
            && self.responsibilities == other.responsibilities
            && self.sequence_links == other.sequence_links
    }
}

impl Eq for Model {}

impl Model {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn responsibilities(&self) -> &[Responsibility] {
        &self.responsibilities
    }

    pub fn sequence_links(&self) -> &[SequenceLink] {
        &self.sequence_links
    }

    pub fn agent(&self, id: &AgentId) -> Option<&Agent> {
        self.agents.iter().find(|a| &a.id == id)
    }

    pub fn resource(&self, id: &ResourceId) -> Option<&Resource> {
        self.resources.iter().find(|r| &r.id == id)
    }

    pub fn channel(&self, id: &ChannelId) -> Option<&Channel> {
        self.channels.iter().find(|c| &c.id == id)
    }

    pub fn responsibility(&self, id: &ResponsibilityId) -> Option<&Responsibility> {
        self.responsibilities.iter().find(|r| &r.id == id)
    }

    pub fn agent_named(&self, name: &str) -> Option<&Agent> {
        let name = name.trim();
        self.agents.iter().find(|a| a.name == name)
    }

    pub fn resource_named(&self, name: &str) -> Option<&Resource> {
        let name = name.trim();
        self.resources.iter().find(|r| r.name == name)
    }

    pub fn channel_named(&self, name: &str) -> Option<&Channel> {
        let name = name.trim();
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn responsibility_named(&self, name: &str) -> Option<&Responsibility> {
        let name = name.trim();
        self.responsibilities.iter().find(|r| r.name == name)
    }

    /// Like [`Model::responsibility_named`], but the error lists every
    /// responsibility the model does have.
    pub fn find_responsibility(&self, name: &str) -> Result<&Responsibility, UnknownResponsibility> {
        self.responsibility_named(name)
            .ok_or_else(|| UnknownResponsibility {
                name: name.trim().to_string(),
                available: self.responsibilities.iter().map(|r| r.name.clone()).collect(),
            })
    }

    pub fn agent_name<'a>(&'a self, id: &'a AgentId) -> &'a str {
        self.agent(id).map_or(id.as_str(), |a| a.name.as_str())
    }

    pub fn resource_name<'a>(&'a self, id: &'a ResourceId) -> &'a str {
        self.resource(id).map_or(id.as_str(), |r| r.name.as_str())
    }

    pub fn channel_name<'a>(&'a self, id: &'a ChannelId) -> &'a str {
        self.channel(id).map_or(id.as_str(), |c| c.name.as_str())
    }

    pub fn responsibility_name<'a>(&'a self, id: &'a ResponsibilityId) -> &'a str {
        self.responsibility(id).map_or(id.as_str(), |r| r.name.as_str())
    }

    /// Where the element was first declared or mentioned, if known.
    pub fn span_of(&self, element: &ElementRef) -> Option<&SourceSpan> {
        self.provenance.spans.get(element)
    }

    /// True when the element was never declared and exists only because a
    /// responsibility mentioned it.
    pub fn is_implicit(&self, element: &ElementRef) -> bool {
        self.provenance.implicit.contains(element)
    }

    pub fn implicit_elements(&self) -> impl Iterator<Item = &ElementRef> {
        self.provenance.implicit.iter()
    }

    /// Responsibilities that produce the given information resource.
    pub fn producers_of<'a>(
        &'a self,
        resource: &'a ResourceId,
    ) -> impl Iterator<Item = &'a Responsibility> + 'a {
        self.responsibilities
            .iter()
            .filter(move |r| r.product(resource).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slug_examples() {
        assert_eq!(slugify("Silver Command").unwrap(), "silver-command");
        assert_eq!(slugify("MRCC  Clyde").unwrap(), "mrcc-clyde");
        assert_eq!(slugify("  --Area map!! ").unwrap(), "area-map");
        assert_eq!(slugify("Straße 5").unwrap(), "straße-5");
    }

    #[test]
    fn slug_rejects_empty_and_symbol_only_names() {
        assert_eq!(slugify("   "), Err(SlugError::Empty));
        assert_eq!(slugify(""), Err(SlugError::Empty));
        assert!(matches!(slugify("!!!"), Err(SlugError::NoAlphanumeric(_))));
    }

    #[test]
    fn severity_is_totally_ordered() {
        for pair in Severity::ALL.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert_eq!("high".parse::<Severity>(), Ok(Severity::High));
        let err = "severe".parse::<Severity>().unwrap_err();
        assert_eq!(err.legal, vec!["none", "low", "medium", "high", "critical"]);
    }

    #[test]
    fn element_refs_render_as_ids() {
        let r = ResponsibilityId::for_name("Evacuate area").unwrap();
        let i = ResourceId::for_name("Area map").unwrap();
        assert_eq!(ElementRef::Responsibility(r.clone()).to_string(), "evacuate-area");
        assert_eq!(ElementRef::Need(r.clone(), i.clone()).to_string(), "evacuate-area/area-map");
        assert_eq!(
            ElementRef::Hazard(r, i, GuideWord::Late).to_string(),
            "evacuate-area/area-map/late"
        );
    }

    #[test]
    fn unknown_responsibility_lists_alternatives() {
        let err = UnknownResponsibility {
            name: "X".into(),
            available: vec!["A".into(), "B".into()],
        };
        assert_eq!(err.to_string(), "unknown responsibility \"X\"; available: \"A\", \"B\"");
    }
}
