use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::model::{ChannelId, ElementRef, Model, ResourceId, Responsibility};

use super::{sort_findings, Finding, FindingCode};

fn resp_ref(r: &Responsibility) -> ElementRef {
    ElementRef::Responsibility(r.id.clone())
}

pub fn find_unassigned(model: &Model) -> Vec<Finding> {
    model
        .responsibilities()
        .iter()
        .filter(|r| r.assigned_to.is_empty())
        .map(|r| {
            Finding::new(
                FindingCode::UnassignedResp,
                vec![resp_ref(r)],
                format!("responsibility \"{}\" has no agent associated with it", r.name),
            )
        })
        .collect()
}

/// Needs with no source whose information no responsibility produces.
pub fn find_unsourced_info(model: &Model) -> Vec<Finding> {
    let mut out = Vec::new();
    for r in model.responsibilities() {
        for need in r.needs.iter().filter(|n| n.sources.is_empty()) {
            if model.producers_of(&need.resource).next().is_none() {
                out.push(Finding::new(
                    FindingCode::UnsourcedInfo,
                    vec![ElementRef::Need(r.id.clone(), need.resource.clone())],
                    format!(
                        "|{}| required by \"{}\" has no source agent and no producing responsibility",
                        model.resource_name(&need.resource),
                        r.name
                    ),
                ));
            }
        }
    }
    sort_findings(&mut out);
    out
}

pub fn find_unused_resources(model: &Model) -> Vec<Finding> {
    let mut used: BTreeSet<&ResourceId> = BTreeSet::new();
    for r in model.responsibilities() {
        used.extend(r.needs.iter().map(|n| &n.resource));
        used.extend(r.products.iter().map(|p| &p.resource));
        used.extend(r.uses.iter());
        used.extend(r.hazards.iter().map(|h| &h.item));
    }
    model
        .resources()
        .iter()
        .filter(|res| !used.contains(&res.id))
        .map(|res| {
            Finding::new(
                FindingCode::UnusedResource,
                vec![ElementRef::Resource(res.id.clone())],
                format!(
                    "resource {} is not needed, produced or used by any responsibility",
                    res.kind.bracket(&res.name)
                ),
            )
        })
        .collect()
}

/// The channels plus every channel paired with one of them by `backup_of`,
/// in either direction.
fn effective_channels<'a>(model: &'a Model, channels: &'a [ChannelId]) -> BTreeSet<&'a ChannelId> {
    let mut set: BTreeSet<&ChannelId> = channels.iter().collect();
    for c in model.channels() {
        if let Some(primary) = &c.backup_of {
            if channels.contains(primary) {
                set.insert(&c.id);
            }
            if channels.contains(&c.id) {
                set.insert(primary);
            }
        }
    }
    set
}

pub fn find_single_channel(model: &Model) -> Vec<Finding> {
    let mut out = Vec::new();
    let explain = |verb: &str, resource: &ResourceId, resp: &Responsibility, channels: &[ChannelId]| {
        format!(
            "|{}| {verb} \"{}\" only via \"{}\" with no backup channel",
            model.resource_name(resource),
            resp.name,
            model.channel_name(&channels[0])
        )
    };
    for r in model.responsibilities() {
        for need in &r.needs {
            if effective_channels(model, &need.channels).len() == 1 {
                out.push(Finding::new(
                    FindingCode::SingleChannel,
                    vec![ElementRef::Need(r.id.clone(), need.resource.clone())],
                    explain("reaches", &need.resource, r, &need.channels),
                ));
            }
        }
        for product in &r.products {
            if effective_channels(model, &product.channels).len() == 1 {
                out.push(Finding::new(
                    FindingCode::SingleChannel,
                    vec![ElementRef::Product(r.id.clone(), product.resource.clone())],
                    explain("leaves", &product.resource, r, &product.channels),
                ));
            }
        }
    }
    sort_findings(&mut out);
    out
}

/// Information required from disagreeing source sets by different
/// responsibilities, or produced by more than one responsibility. Needs that
/// name no source take no part in the comparison.
pub fn find_duplicate_sources(model: &Model) -> Vec<Finding> {
    let mut sourced: BTreeMap<&ResourceId, BTreeSet<BTreeSet<&str>>> = BTreeMap::new();
    let mut producers: BTreeMap<&ResourceId, Vec<&str>> = BTreeMap::new();
    for r in model.responsibilities() {
        for need in r.needs.iter().filter(|n| !n.sources.is_empty()) {
            let set = need.sources.iter().map(|a| model.agent_name(a)).collect();
            sourced.entry(&need.resource).or_default().insert(set);
        }
        for product in &r.products {
            producers.entry(&product.resource).or_default().push(&r.name);
        }
    }

    let mut out = Vec::new();
    for res in model.resources() {
        let mut reasons = Vec::new();
        if let Some(sets) = sourced.get(&res.id).filter(|s| s.len() > 1) {
            let listed: Vec<String> = sets
                .iter()
                .map(|s| {
                    let agents: Vec<_> = s.iter().map(|a| format!("<{a}>")).collect();
                    format!("{{{}}}", agents.join(", "))
                })
                .collect();
            reasons.push(format!("required from differing sources {}", listed.join(" and ")));
        }
        if let Some(names) = producers.get(&res.id).filter(|p| p.len() > 1) {
            let quoted: Vec<_> = names.iter().map(|n| format!("\"{n}\"")).collect();
            reasons.push(format!("produced by {}", quoted.join(", ")));
        }
        if !reasons.is_empty() {
            out.push(Finding::new(
                FindingCode::DuplicateSource,
                vec![ElementRef::Resource(res.id.clone())],
                format!("|{}| is {}", res.name, reasons.join("; ")),
            ));
        }
    }
    out
}

/// Agents holding strictly more than `threshold` responsibilities.
pub fn agent_load(model: &Model, threshold: usize) -> Vec<Finding> {
    model
        .agents()
        .iter()
        .filter_map(|a| {
            let count = model
                .responsibilities()
                .iter()
                .filter(|r| r.assigned_to.contains(&a.id))
                .count();
            (count > threshold).then(|| {
                Finding::new(
                    FindingCode::AgentOverload,
                    vec![ElementRef::Agent(a.id.clone())],
                    format!(
                        "<{}> is assigned {count} responsibilities (threshold {threshold})",
                        a.name
                    ),
                )
            })
        })
        .collect()
}

/// One finding per strongly connected component of the `precedes` graph
/// with two or more members, or with a self-loop.
pub fn detect_sequence_cycles(model: &Model) -> Vec<Finding> {
    let resps = model.responsibilities();
    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..resps.len()).map(|i| graph.add_node(i)).collect();
    let index = |id| resps.iter().position(|r| &r.id == id);
    for link in model.sequence_links() {
        if let (Some(a), Some(b)) = (index(&link.from), index(&link.to)) {
            graph.add_edge(nodes[a], nodes[b], ());
        }
    }

    let mut out = Vec::new();
    for component in tarjan_scc(&graph) {
        let looped = component.len() == 1 && graph.contains_edge(component[0], component[0]);
        if component.len() < 2 && !looped {
            continue;
        }
        // Node weights are positions in the canonical responsibility list.
        let mut members: Vec<usize> = component.iter().map(|n| graph[*n]).collect();
        members.sort_unstable();
        let names: Vec<_> = members.iter().map(|&i| format!("\"{}\"", resps[i].name)).collect();
        out.push(Finding::new(
            FindingCode::SequenceCycle,
            members.iter().map(|&i| resp_ref(&resps[i])).collect(),
            format!("precedes links form a cycle through {}", names.join(", ")),
        ));
    }
    sort_findings(&mut out);
    out
}
