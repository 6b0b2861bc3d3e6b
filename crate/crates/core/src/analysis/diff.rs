use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::model::{AgentId, ChannelId, Model, Responsibility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum InconsistencyKind {
    MissingResponsibility,
    AssignmentMismatch,
    SourceMismatch,
    ChannelMismatch,
}

impl fmt::Display for InconsistencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A disagreement between two models about one responsibility. `item`
/// names the information resource for source and channel mismatches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerceptionInconsistency {
    pub kind: InconsistencyKind,
    pub responsibility: String,
    pub item: Option<String>,
    pub left: String,
    pub right: String,
}

impl PerceptionInconsistency {
    /// The same disagreement seen from the other side.
    pub fn swapped(&self) -> Self {
        PerceptionInconsistency {
            left: self.right.clone(),
            right: self.left.clone(),
            ..self.clone()
        }
    }
}

impl fmt::Display for PerceptionInconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} \"{}\"", self.kind, self.responsibility)?;
        if let Some(item) = &self.item {
            write!(f, " |{item}|")?;
        }
        write!(f, ": left {}; right {}", self.left, self.right)
    }
}

const ABSENT: &str = "(absent)";

fn agent_names<'a>(model: &'a Model, ids: &'a [AgentId]) -> BTreeSet<&'a str> {
    ids.iter().map(|a| model.agent_name(a)).collect()
}

fn channel_names<'a>(model: &'a Model, ids: &'a [ChannelId]) -> BTreeSet<&'a str> {
    ids.iter().map(|c| model.channel_name(c)).collect()
}

fn describe_agents(prefix: &str, names: &BTreeSet<&str>) -> String {
    if names.is_empty() {
        return format!("{prefix} (none)");
    }
    let listed: Vec<_> = names.iter().map(|n| format!("<{n}>")).collect();
    format!("{prefix} {}", listed.join(", "))
}

fn describe_channels(prefix: &str, names: &BTreeSet<&str>) -> String {
    if names.is_empty() {
        return format!("{prefix} no channel");
    }
    let listed: Vec<_> = names.iter().map(|n| format!("\"{n}\"")).collect();
    format!("{prefix} via {}", listed.join(", "))
}

/// Entries plus a facet that keeps need and product rows of the same item
/// apart when sorting.
type Keyed = (PerceptionInconsistency, u8);

fn compare(left: &Model, l: &Responsibility, right: &Model, r: &Responsibility, out: &mut Vec<Keyed>) {
    let entry = |kind, item: Option<&str>, left: String, right: String| PerceptionInconsistency {
        kind,
        responsibility: l.name.clone(),
        item: item.map(str::to_string),
        left,
        right,
    };

    let la = agent_names(left, &l.assigned_to);
    let ra = agent_names(right, &r.assigned_to);
    if la != ra {
        out.push((
            entry(
                InconsistencyKind::AssignmentMismatch,
                None,
                describe_agents("assigned to", &la),
                describe_agents("assigned to", &ra),
            ),
            0,
        ));
    }

    let need_items: BTreeSet<&str> = l
        .needs
        .iter()
        .map(|n| left.resource_name(&n.resource))
        .chain(r.needs.iter().map(|n| right.resource_name(&n.resource)))
        .collect();
    for item in need_items {
        let ln = left.resource_named(item).and_then(|res| l.need(&res.id));
        let rn = right.resource_named(item).and_then(|res| r.need(&res.id));
        match (ln, rn) {
            (Some(ln), Some(rn)) => {
                let ls = agent_names(left, &ln.sources);
                let rs = agent_names(right, &rn.sources);
                if ls != rs {
                    out.push((
                        entry(
                            InconsistencyKind::SourceMismatch,
                            Some(item),
                            describe_agents("from", &ls),
                            describe_agents("from", &rs),
                        ),
                        0,
                    ));
                }
                let lc = channel_names(left, &ln.channels);
                let rc = channel_names(right, &rn.channels);
                if lc != rc {
                    out.push((
                        entry(
                            InconsistencyKind::ChannelMismatch,
                            Some(item),
                            describe_channels("required", &lc),
                            describe_channels("required", &rc),
                        ),
                        0,
                    ));
                }
            }
            (ln, rn) => {
                let describe = |model, need: Option<&crate::model::InfoNeed>| match need {
                    Some(n) => describe_agents("from", &agent_names(model, &n.sources)),
                    None => "(not required)".to_string(),
                };
                out.push((
                    entry(
                        InconsistencyKind::SourceMismatch,
                        Some(item),
                        describe(left, ln),
                        describe(right, rn),
                    ),
                    0,
                ));
            }
        }
    }

    let product_items: BTreeSet<&str> = l
        .products
        .iter()
        .map(|p| left.resource_name(&p.resource))
        .chain(r.products.iter().map(|p| right.resource_name(&p.resource)))
        .collect();
    for item in product_items {
        let lp = product_channels(left, l, item);
        let rp = product_channels(right, r, item);
        if lp != rp {
            let text = |p: Option<BTreeSet<&str>>| match p {
                Some(names) => describe_channels("produced", &names),
                None => "(not produced)".to_string(),
            };
            out.push((
                entry(InconsistencyKind::ChannelMismatch, Some(item), text(lp), text(rp)),
                1,
            ));
        }
    }
}

fn product_channels<'a>(model: &'a Model, resp: &'a Responsibility, item: &str) -> Option<BTreeSet<&'a str>> {
    model
        .resource_named(item)
        .and_then(|res| resp.product(&res.id))
        .map(|p| channel_names(model, &p.channels))
}

/// Compares two models responsibility by responsibility, matching on exact
/// names. Assignments, sources and channels are compared as sets of names.
pub fn diff_models(left: &Model, right: &Model) -> Vec<PerceptionInconsistency> {
    let mut out: Vec<Keyed> = Vec::new();
    for l in left.responsibilities() {
        match right.responsibility_named(&l.name) {
            Some(r) => compare(left, l, right, r, &mut out),
            None => out.push((missing(&l.name, "present", ABSENT), 0)),
        }
    }
    for r in right.responsibilities() {
        if left.responsibility_named(&r.name).is_none() {
            out.push((missing(&r.name, ABSENT, "present"), 0));
        }
    }
    out.sort_by(|(a, fa), (b, fb)| {
        (&a.responsibility, a.kind, &a.item, fa).cmp(&(&b.responsibility, b.kind, &b.item, fb))
    });
    out.into_iter().map(|(p, _)| p).collect()
}

fn missing(name: &str, left: &str, right: &str) -> PerceptionInconsistency {
    PerceptionInconsistency {
        kind: InconsistencyKind::MissingResponsibility,
        responsibility: name.to_string(),
        item: None,
        left: left.to_string(),
        right: right.to_string(),
    }
}
