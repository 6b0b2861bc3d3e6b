//! Turns parsed declarations into a resolved [`Model`].
//!
//! Elements first mentioned inside a responsibility are declared implicitly:
//! agents default to kind `organization`, channels have no medium, and
//! resources take the kind implied by their brackets. Repeated needs and
//! products for the same resource merge into one entry.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::dsl::{Declaration, ResponsibilityItem, SourceSpan, Spanned};
use crate::hazards::GuideWord;
use crate::model::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildErrorKind {
    #[error("conflicting resource kind for \"{name}\": declared {declared}, used as {found}")]
    ConflictingResourceKind {
        name: String,
        declared: ResourceKind,
        found: ResourceKind,
    },
    #[error("conflicting agent kind for <{name}>: {first} and {second}")]
    ConflictingAgentKind {
        name: String,
        first: AgentKind,
        second: AgentKind,
    },
    #[error("conflicting declarations of channel \"{name}\"")]
    ConflictingChannel { name: String },
    #[error("duplicate responsibility \"{name}\"")]
    DuplicateResponsibility { name: String },
    #[error("duplicate {kind} id '{id}': \"{first}\" and \"{second}\"")]
    DuplicateId {
        kind: &'static str,
        id: String,
        first: String,
        second: String,
    },
    #[error("invalid {kind} name: {source}")]
    InvalidName {
        kind: &'static str,
        source: SlugError,
    },
    #[error("responsibility \"{from}\" precedes unknown responsibility \"{target}\"")]
    UnresolvedPrecedes { from: String, target: String },
    #[error("channel \"{channel}\" is a backup of unknown channel \"{target}\"")]
    UnresolvedBackup { channel: String, target: String },
    #[error("channel \"{channel}\" is declared as a backup of itself")]
    SelfBackup { channel: String },
    #[error("backup channels form a cycle: {}", .channels.join(" -> "))]
    BackupCycle { channels: Vec<String> },
    #[error("hazard for |{item}| in \"{responsibility}\", which neither needs nor produces it")]
    HazardItemNotUsed { responsibility: String, item: String },
    #[error("conflicting assessments of |{item}| {guide_word} in \"{responsibility}\"")]
    ConflictingHazard {
        responsibility: String,
        item: String,
        guide_word: GuideWord,
    },
}

/// A resolution error, located where the offending declaration starts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct BuildError {
    pub kind: BuildErrorKind,
    pub span: Option<SourceSpan>,
}

impl std::fmt::Display for BuildError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.span {
            Some(span) => write!(f, "{span}: error: {}", self.kind),
            None => write!(f, "error: {}", self.kind),
        }
    }
}

struct Entry<T> {
    name: String,
    data: T,
    span: SourceSpan,
    explicit: bool,
}

/// Elements of one kind, keyed by slug, in first-seen order.
struct Table<T> {
    kind: &'static str,
    entries: Vec<Entry<T>>,
    index: HashMap<String, usize>,
}

impl<T> Table<T> {
    fn new(kind: &'static str) -> Self {
        Table {
            kind,
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Finds or inserts `name`. Returns the index and whether it was new.
    #[allow(clippy::result_large_err)]
    fn intern(
        &mut self,
        name: &str,
        span: &SourceSpan,
        explicit: bool,
        data: impl FnOnce() -> T,
    ) -> Result<(usize, bool), BuildError> {
        let err = |kind| BuildError {
            kind,
            span: Some(span.clone()),
        };
        let id = slugify(name).map_err(|source| {
            err(BuildErrorKind::InvalidName {
                kind: self.kind,
                source,
            })
        })?;
        if let Some(&idx) = self.index.get(&id) {
            let entry = &mut self.entries[idx];
            if entry.name != name {
                return Err(err(BuildErrorKind::DuplicateId {
                    kind: self.kind,
                    id,
                    first: entry.name.clone(),
                    second: name.to_string(),
                }));
            }
            if explicit && !entry.explicit {
                entry.explicit = true;
                entry.span = span.clone();
            }
            return Ok((idx, false));
        }
        self.index.insert(id, self.entries.len());
        self.entries.push(Entry {
            name: name.to_string(),
            data: data(),
            span: span.clone(),
            explicit,
        });
        Ok((self.entries.len() - 1, true))
    }

    fn find(&self, name: &str) -> Option<usize> {
        let id = slugify(name).ok()?;
        self.index
            .get(&id)
            .copied()
            .filter(|&i| self.entries[i].name == name)
    }
}

#[derive(Default)]
struct ChannelData {
    medium: Option<String>,
    backup_of: Option<String>,
}

#[derive(Default)]
struct RespData {
    assigned_to: Vec<usize>,
    needs: Vec<NeedData>,
    products: Vec<ProductData>,
    uses: Vec<usize>,
    notes: Vec<String>,
    hazards: Vec<(HazardData, SourceSpan)>,
    precedes: Vec<(String, SourceSpan)>,
}

struct NeedData {
    resource: usize,
    sources: Vec<usize>,
    channels: Vec<usize>,
    criticality: Option<Severity>,
    span: SourceSpan,
}

struct ProductData {
    resource: usize,
    channels: Vec<usize>,
    rationale: Option<String>,
    span: SourceSpan,
}

#[derive(Clone, PartialEq)]
struct HazardData {
    item: String,
    guide_word: GuideWord,
    consequence: String,
    severity: Severity,
    mitigation: Option<String>,
}

fn push_unique<T: PartialEq>(list: &mut Vec<T>, value: T) {
    if !list.contains(&value) {
        list.push(value);
    }
}

struct Builder {
    name: Option<String>,
    agents: Table<Option<AgentKind>>,
    resources: Table<ResourceKind>,
    channels: Table<ChannelData>,
    resps: Table<RespData>,
    errors: Vec<BuildError>,
}

impl Builder {
    fn error(&mut self, kind: BuildErrorKind, span: &SourceSpan) {
        self.errors.push(BuildError {
            kind,
            span: Some(span.clone()),
        });
    }

    fn declare_agent(&mut self, name: &str, kind: Option<AgentKind>, span: &SourceSpan, explicit: bool) -> Option<usize> {
        match self.agents.intern(name, span, explicit, || kind) {
            Ok((idx, true)) => Some(idx),
            Ok((idx, false)) => {
                let entry = &mut self.agents.entries[idx];
                match (entry.data, kind) {
                    (Some(first), Some(second)) if first != second => {
                        self.error(
                            BuildErrorKind::ConflictingAgentKind {
                                name: name.to_string(),
                                first,
                                second,
                            },
                            span,
                        );
                    }
                    (None, Some(k)) => entry.data = Some(k),
                    _ => {}
                }
                Some(idx)
            }
            Err(e) => {
                self.errors.push(e);
                None
            }
        }
    }

    fn declare_resource(&mut self, name: &str, kind: ResourceKind, span: &SourceSpan, explicit: bool) -> Option<usize> {
        match self.resources.intern(name, span, explicit, || kind) {
            Ok((idx, _)) => {
                let declared = self.resources.entries[idx].data;
                if declared != kind {
                    self.error(
                        BuildErrorKind::ConflictingResourceKind {
                            name: name.to_string(),
                            declared,
                            found: kind,
                        },
                        span,
                    );
                    return None;
                }
                Some(idx)
            }
            Err(e) => {
                self.errors.push(e);
                None
            }
        }
    }

    fn declare_channel(&mut self, name: &str, data: Option<ChannelData>, span: &SourceSpan) -> Option<usize> {
        let explicit = data.is_some();
        let mut data = data;
        match self.channels.intern(name, span, explicit, || data.take().unwrap_or_default()) {
            Ok((idx, _)) => {
                if let Some(new) = data {
                    let entry = &mut self.channels.entries[idx];
                    let conflict = |a: &Option<String>, b: &Option<String>| {
                        matches!((a, b), (Some(x), Some(y)) if x != y)
                    };
                    if conflict(&entry.data.medium, &new.medium) || conflict(&entry.data.backup_of, &new.backup_of) {
                        self.error(
                            BuildErrorKind::ConflictingChannel {
                                name: name.to_string(),
                            },
                            span,
                        );
                    } else {
                        entry.data.medium = entry.data.medium.take().or(new.medium);
                        entry.data.backup_of = entry.data.backup_of.take().or(new.backup_of);
                    }
                }
                Some(idx)
            }
            Err(e) => {
                self.errors.push(e);
                None
            }
        }
    }

    fn agent_list(&mut self, names: &[String], span: &SourceSpan) -> Vec<usize> {
        let mut ids = Vec::new();
        for name in names {
            if let Some(idx) = self.declare_agent(name, None, span, false) {
                push_unique(&mut ids, idx);
            }
        }
        ids
    }

    fn channel_list(&mut self, names: &[String], span: &SourceSpan) -> Vec<usize> {
        let mut ids = Vec::new();
        for name in names {
            if let Some(idx) = self.declare_channel(name, None, span) {
                push_unique(&mut ids, idx);
            }
        }
        ids
    }

    fn item(&mut self, resp: usize, item: &Spanned<ResponsibilityItem>) {
        let span = &item.span;
        match &item.node {
            ResponsibilityItem::AssignedTo(names) => {
                for idx in self.agent_list(names, span) {
                    push_unique(&mut self.resps.entries[resp].data.assigned_to, idx);
                }
            }
            ResponsibilityItem::Requires {
                resource,
                sources,
                channels,
                criticality,
            } => {
                let Some(res) = self.declare_resource(resource, ResourceKind::Information, span, false) else {
                    return;
                };
                let sources = self.agent_list(sources, span);
                let channels = self.channel_list(channels, span);
                let needs = &mut self.resps.entries[resp].data.needs;
                match needs.iter_mut().find(|n| n.resource == res) {
                    Some(need) => {
                        sources.into_iter().for_each(|s| push_unique(&mut need.sources, s));
                        channels.into_iter().for_each(|c| push_unique(&mut need.channels, c));
                        need.criticality = need.criticality.max(*criticality);
                    }
                    None => needs.push(NeedData {
                        resource: res,
                        sources,
                        channels,
                        criticality: *criticality,
                        span: span.clone(),
                    }),
                }
            }
            ResponsibilityItem::Produces {
                resource,
                channels,
                rationale,
            } => {
                let Some(res) = self.declare_resource(resource, ResourceKind::Information, span, false) else {
                    return;
                };
                let channels = self.channel_list(channels, span);
                let products = &mut self.resps.entries[resp].data.products;
                match products.iter_mut().find(|p| p.resource == res) {
                    Some(product) => {
                        channels.into_iter().for_each(|c| push_unique(&mut product.channels, c));
                        if product.rationale.is_none() {
                            product.rationale = rationale.clone();
                        }
                    }
                    None => products.push(ProductData {
                        resource: res,
                        channels,
                        rationale: rationale.clone(),
                        span: span.clone(),
                    }),
                }
            }
            ResponsibilityItem::Uses(name) => {
                if let Some(res) = self.declare_resource(name, ResourceKind::Physical, span, false) {
                    push_unique(&mut self.resps.entries[resp].data.uses, res);
                }
            }
            ResponsibilityItem::Precedes(target) => {
                self.resps.entries[resp].data.precedes.push((target.clone(), span.clone()));
            }
            ResponsibilityItem::Note(text) => {
                push_unique(&mut self.resps.entries[resp].data.notes, text.clone());
            }
            ResponsibilityItem::Hazard {
                item,
                guide_word,
                consequence,
                severity,
                mitigation,
            } => {
                self.resps.entries[resp].data.hazards.push((
                    HazardData {
                        item: item.clone(),
                        guide_word: *guide_word,
                        consequence: consequence.clone(),
                        severity: *severity,
                        mitigation: mitigation.clone(),
                    },
                    span.clone(),
                ));
            }
        }
    }

    fn check_backups(&mut self) -> Vec<Option<usize>> {
        let mut targets = Vec::with_capacity(self.channels.entries.len());
        let mut errors = Vec::new();
        for (idx, entry) in self.channels.entries.iter().enumerate() {
            let target = entry.data.backup_of.as_ref().and_then(|t| {
                let found = self.channels.find(t);
                if found.is_none() {
                    errors.push(BuildError {
                        kind: BuildErrorKind::UnresolvedBackup {
                            channel: entry.name.clone(),
                            target: t.clone(),
                        },
                        span: Some(entry.span.clone()),
                    });
                } else if found == Some(idx) {
                    errors.push(BuildError {
                        kind: BuildErrorKind::SelfBackup {
                            channel: entry.name.clone(),
                        },
                        span: Some(entry.span.clone()),
                    });
                    return None;
                }
                found
            });
            targets.push(target);
        }
        let mut reported = BTreeSet::new();
        for start in 0..targets.len() {
            let mut path = vec![start];
            let mut cur = start;
            while let Some(next) = targets[cur] {
                if let Some(pos) = path.iter().position(|&p| p == next) {
                    let mut cycle: Vec<usize> = path[pos..].to_vec();
                    let min = cycle.iter().enumerate().min_by_key(|(_, &c)| &self.channels.entries[c].name).map(|(i, _)| i).unwrap_or(0);
                    cycle.rotate_left(min);
                    if reported.insert(cycle.clone()) {
                        errors.push(BuildError {
                            kind: BuildErrorKind::BackupCycle {
                                channels: cycle.iter().map(|&c| self.channels.entries[c].name.clone()).collect(),
                            },
                            span: Some(self.channels.entries[cycle[0]].span.clone()),
                        });
                    }
                    break;
                }
                path.push(next);
                cur = next;
            }
        }
        self.errors.extend(errors);
        targets
    }

    fn merge_hazards(&mut self, resp: usize) -> Vec<(HazardData, SourceSpan)> {
        let entry = &self.resps.entries[resp];
        let mut merged: Vec<(HazardData, SourceSpan)> = Vec::new();
        let mut errors = Vec::new();
        for (hazard, span) in &entry.data.hazards {
            let res = self.resources.find(&hazard.item);
            let used = res.is_some_and(|r| {
                entry.data.needs.iter().any(|n| n.resource == r) || entry.data.products.iter().any(|p| p.resource == r)
            });
            if !used {
                errors.push(BuildError {
                    kind: BuildErrorKind::HazardItemNotUsed {
                        responsibility: entry.name.clone(),
                        item: hazard.item.clone(),
                    },
                    span: Some(span.clone()),
                });
                continue;
            }
            let existing = merged
                .iter_mut()
                .find(|(h, _)| h.item == hazard.item && h.guide_word == hazard.guide_word);
            let Some((current, _)) = existing else {
                merged.push((hazard.clone(), span.clone()));
                continue;
            };
            match merge_hazard(current, hazard) {
                Some(m) => *current = m,
                None => errors.push(BuildError {
                    kind: BuildErrorKind::ConflictingHazard {
                        responsibility: entry.name.clone(),
                        item: hazard.item.clone(),
                        guide_word: hazard.guide_word,
                    },
                    span: Some(span.clone()),
                }),
            }
        }
        self.errors.extend(errors);
        merged
    }
}

/// Combines two entries for the same (item, guide word). An assessment
/// fills an unassessed entry; two different assessments conflict.
fn merge_hazard(a: &HazardData, b: &HazardData) -> Option<HazardData> {
    if a == b {
        return Some(a.clone());
    }
    let assessed = |h: &HazardData| !h.consequence.trim().is_empty();
    let (consequence, severity) = match (assessed(a), assessed(b)) {
        (true, true) => {
            if a.consequence != b.consequence || a.severity != b.severity {
                return None;
            }
            (a.consequence.clone(), a.severity)
        }
        (true, false) => (a.consequence.clone(), a.severity),
        (false, true) => (b.consequence.clone(), b.severity),
        (false, false) => (a.consequence.clone(), a.severity.max(b.severity)),
    };
    let mitigation = match (&a.mitigation, &b.mitigation) {
        (Some(x), Some(y)) if x != y => return None,
        (x, y) => x.clone().or_else(|| y.clone()),
    };
    Some(HazardData {
        item: a.item.clone(),
        guide_word: a.guide_word,
        consequence,
        severity,
        mitigation,
    })
}

/// Resolves declarations into a model, collecting every error found.
pub fn build_model(declarations: &[Spanned<Declaration>]) -> Result<Model, Vec<BuildError>> {
    let mut b = Builder {
        name: None,
        agents: Table::new("agent"),
        resources: Table::new("resource"),
        channels: Table::new("channel"),
        resps: Table::new("responsibility"),
        errors: Vec::new(),
    };

    // Declarations first, so that mentions never shadow them.
    let mut blocks = Vec::new();
    for decl in declarations {
        let span = &decl.span;
        match &decl.node {
            Declaration::Model(name) => {
                b.name.get_or_insert_with(|| name.clone());
            }
            Declaration::Agent(a) => {
                b.declare_agent(&a.name, a.kind, span, true);
            }
            Declaration::Resource(r) => {
                b.declare_resource(&r.name, r.kind, span, true);
            }
            Declaration::Channel(c) => {
                let data = ChannelData {
                    medium: c.medium.clone(),
                    backup_of: c.backup_of.clone(),
                };
                b.declare_channel(&c.name, Some(data), span);
            }
            Declaration::Responsibility(r) => {
                if b.resps.find(&r.name).is_some() {
                    b.error(
                        BuildErrorKind::DuplicateResponsibility { name: r.name.clone() },
                        span,
                    );
                    continue;
                }
                match b.resps.intern(&r.name, span, true, RespData::default) {
                    Ok((idx, _)) => blocks.push((idx, r)),
                    Err(e) => b.errors.push(e),
                }
            }
        }
    }
    for (idx, r) in &blocks {
        for item in &r.items {
            b.item(*idx, item);
        }
    }

    let backup_targets = b.check_backups();

    let mut links = BTreeSet::new();
    let mut link_errors = Vec::new();
    for (idx, entry) in b.resps.entries.iter().enumerate() {
        for (target, span) in &entry.data.precedes {
            match b.resps.find(target) {
                Some(t) => {
                    links.insert((idx, t));
                }
                None => link_errors.push(BuildError {
                    kind: BuildErrorKind::UnresolvedPrecedes {
                        from: entry.name.clone(),
                        target: target.clone(),
                    },
                    span: Some(span.clone()),
                }),
            }
        }
    }
    b.errors.extend(link_errors);

    let hazards: Vec<_> = (0..b.resps.entries.len()).map(|i| b.merge_hazards(i)).collect();

    if !b.errors.is_empty() {
        let mut errors = b.errors;
        errors.sort_by(|x, y| x.span.cmp(&y.span));
        return Err(errors);
    }

    Ok(assemble(b, backup_targets, links, hazards))
}

fn assemble(
    b: Builder,
    backup_targets: Vec<Option<usize>>,
    links: BTreeSet<(usize, usize)>,
    hazards: Vec<Vec<(HazardData, SourceSpan)>>,
) -> Model {
    let mut prov = Provenance::default();
    let agent_id = |i: usize| AgentId::for_name(&b.agents.entries[i].name).expect("interned names have slugs");
    let resource_id = |i: usize| ResourceId::for_name(&b.resources.entries[i].name).expect("interned names have slugs");
    let channel_id = |i: usize| ChannelId::for_name(&b.channels.entries[i].name).expect("interned names have slugs");
    let resp_id = |i: usize| ResponsibilityId::for_name(&b.resps.entries[i].name).expect("interned names have slugs");

    let note = |prov: &mut Provenance, element: ElementRef, span: &SourceSpan, explicit: bool| {
        if !explicit {
            prov.implicit.insert(element.clone());
        }
        prov.spans.insert(element, span.clone());
    };

    let mut agents: Vec<Agent> = b
        .agents
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            note(&mut prov, ElementRef::Agent(agent_id(i)), &e.span, e.explicit);
            Agent {
                id: agent_id(i),
                name: e.name.clone(),
                kind: e.data.unwrap_or_default(),
            }
        })
        .collect();
    agents.sort_by(|x, y| x.name.cmp(&y.name));

    let mut resources: Vec<Resource> = b
        .resources
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            note(&mut prov, ElementRef::Resource(resource_id(i)), &e.span, e.explicit);
            Resource {
                id: resource_id(i),
                name: e.name.clone(),
                kind: e.data,
            }
        })
        .collect();
    resources.sort_by(|x, y| x.name.cmp(&y.name));

    let mut channels: Vec<Channel> = b
        .channels
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            note(&mut prov, ElementRef::Channel(channel_id(i)), &e.span, e.explicit);
            Channel {
                id: channel_id(i),
                name: e.name.clone(),
                medium: e.data.medium.clone(),
                backup_of: backup_targets[i].map(channel_id),
            }
        })
        .collect();
    channels.sort_by(|x, y| x.name.cmp(&y.name));

    let resource_name = |i: usize| b.resources.entries[i].name.as_str();
    let mut responsibilities: Vec<Responsibility> = Vec::new();
    for (i, (e, hz)) in b.resps.entries.iter().zip(hazards).enumerate() {
        let rid = resp_id(i);
        note(&mut prov, ElementRef::Responsibility(rid.clone()), &e.span, true);

        let mut needs: Vec<&NeedData> = e.data.needs.iter().collect();
        needs.sort_by(|x, y| resource_name(x.resource).cmp(resource_name(y.resource)));
        let needs = needs
            .into_iter()
            .map(|n| {
                prov.spans
                    .insert(ElementRef::Need(rid.clone(), resource_id(n.resource)), n.span.clone());
                InfoNeed {
                    resource: resource_id(n.resource),
                    sources: n.sources.iter().map(|&a| agent_id(a)).collect(),
                    channels: n.channels.iter().map(|&c| channel_id(c)).collect(),
                    criticality: n.criticality,
                }
            })
            .collect();

        let mut products: Vec<&ProductData> = e.data.products.iter().collect();
        products.sort_by(|x, y| resource_name(x.resource).cmp(resource_name(y.resource)));
        let products = products
            .into_iter()
            .map(|p| {
                prov.spans
                    .insert(ElementRef::Product(rid.clone(), resource_id(p.resource)), p.span.clone());
                InfoProduct {
                    resource: resource_id(p.resource),
                    channels: p.channels.iter().map(|&c| channel_id(c)).collect(),
                    rationale: p.rationale.clone(),
                }
            })
            .collect();

        let mut uses = e.data.uses.clone();
        uses.sort_by(|&x, &y| resource_name(x).cmp(resource_name(y)));

        let mut hz = hz;
        hz.sort_by(|(x, _), (y, _)| (x.item.as_str(), x.guide_word).cmp(&(y.item.as_str(), y.guide_word)));
        let hazards = hz
            .into_iter()
            .map(|(h, span)| {
                let item = ResourceId::for_name(&h.item).expect("hazard items resolve");
                prov.spans
                    .insert(ElementRef::Hazard(rid.clone(), item.clone(), h.guide_word), span);
                HazardEntry {
                    responsibility: e.name.clone(),
                    item,
                    guide_word: h.guide_word,
                    consequence: h.consequence,
                    severity: h.severity,
                    mitigation: h.mitigation,
                }
            })
            .collect();

        responsibilities.push(Responsibility {
            id: rid,
            name: e.name.clone(),
            assigned_to: e.data.assigned_to.iter().map(|&a| agent_id(a)).collect(),
            needs,
            products,
            uses: uses.into_iter().map(resource_id).collect(),
            notes: e.data.notes.clone(),
            hazards,
        });
    }
    responsibilities.sort_by(|x, y| x.name.cmp(&y.name));

    let mut sequence_links: Vec<(String, String, SequenceLink)> = links
        .into_iter()
        .map(|(f, t)| {
            (
                b.resps.entries[f].name.clone(),
                b.resps.entries[t].name.clone(),
                SequenceLink {
                    from: resp_id(f),
                    to: resp_id(t),
                },
            )
        })
        .collect();
    sequence_links.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));

    Model {
        name: b.name.unwrap_or_default(),
        agents,
        resources,
        channels,
        responsibilities,
        sequence_links: sequence_links.into_iter().map(|(_, _, l)| l).collect(),
        provenance: prov,
    }
}
