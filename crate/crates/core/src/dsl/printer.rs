//! Canonical `.resp` printer.

use std::fmt::Write;

use crate::model::{ElementRef, Model};

use super::ast::*;
use super::lexer::is_word;
use super::SourceSpan;

/// Quotes a string, escaping `"` and `\`.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn quote_list(names: &[String]) -> String {
    names.iter().map(|n| quote(n)).collect::<Vec<_>>().join(", ")
}

fn agent_list(names: &[String]) -> String {
    names.iter().map(|n| format!("<{n}>")).collect::<Vec<_>>().join(", ")
}

/// Converts a model back into declarations.
///
/// With `explicit` set every element is declared; otherwise elements that
/// were implicitly declared are left to their mentions, so that rebuilding
/// preserves which elements are implicit.
pub(crate) fn model_declarations(model: &Model, explicit: bool) -> Vec<Spanned<Declaration>> {
    let span_of = |element: &ElementRef| {
        model
            .span_of(element)
            .cloned()
            .unwrap_or_else(SourceSpan::synthetic)
    };
    let keep = |element: &ElementRef| explicit || !model.is_implicit(element);

    let mut decls = vec![Spanned::new(
        Declaration::Model(model.name().to_string()),
        SourceSpan::synthetic(),
    )];
    for agent in model.agents() {
        let element = ElementRef::Agent(agent.id.clone());
        if keep(&element) {
            decls.push(Spanned::new(
                Declaration::Agent(AgentDecl {
                    name: agent.name.clone(),
                    kind: Some(agent.kind),
                }),
                span_of(&element),
            ));
        }
    }
    for resource in model.resources() {
        let element = ElementRef::Resource(resource.id.clone());
        if keep(&element) {
            decls.push(Spanned::new(
                Declaration::Resource(ResourceDecl {
                    name: resource.name.clone(),
                    kind: resource.kind,
                }),
                span_of(&element),
            ));
        }
    }
    for channel in model.channels() {
        let element = ElementRef::Channel(channel.id.clone());
        if keep(&element) {
            decls.push(Spanned::new(
                Declaration::Channel(ChannelDecl {
                    name: channel.name.clone(),
                    medium: channel.medium.clone(),
                    backup_of: channel
                        .backup_of
                        .as_ref()
                        .map(|b| model.channel_name(b).to_string()),
                }),
                span_of(&element),
            ));
        }
    }

    for resp in model.responsibilities() {
        let rspan = span_of(&ElementRef::Responsibility(resp.id.clone()));
        let mut items = Vec::new();
        let mut item = |node, span: SourceSpan| items.push(Spanned::new(node, span));

        if !resp.assigned_to.is_empty() {
            item(
                ResponsibilityItem::AssignedTo(
                    resp.assigned_to
                        .iter()
                        .map(|a| model.agent_name(a).to_string())
                        .collect(),
                ),
                rspan.clone(),
            );
        }
        for need in &resp.needs {
            item(
                ResponsibilityItem::Requires {
                    resource: model.resource_name(&need.resource).to_string(),
                    sources: need.sources.iter().map(|a| model.agent_name(a).to_string()).collect(),
                    channels: need.channels.iter().map(|c| model.channel_name(c).to_string()).collect(),
                    criticality: need.criticality,
                },
                span_of(&ElementRef::Need(resp.id.clone(), need.resource.clone())),
            );
        }
        for product in &resp.products {
            item(
                ResponsibilityItem::Produces {
                    resource: model.resource_name(&product.resource).to_string(),
                    channels: product
                        .channels
                        .iter()
                        .map(|c| model.channel_name(c).to_string())
                        .collect(),
                    rationale: product.rationale.clone(),
                },
                span_of(&ElementRef::Product(resp.id.clone(), product.resource.clone())),
            );
        }
        for used in &resp.uses {
            item(
                ResponsibilityItem::Uses(model.resource_name(used).to_string()),
                rspan.clone(),
            );
        }
        for link in model.sequence_links().iter().filter(|l| l.from == resp.id) {
            item(
                ResponsibilityItem::Precedes(model.responsibility_name(&link.to).to_string()),
                rspan.clone(),
            );
        }
        for note in &resp.notes {
            item(ResponsibilityItem::Note(note.clone()), rspan.clone());
        }
        for hazard in &resp.hazards {
            item(
                ResponsibilityItem::Hazard {
                    item: model.resource_name(&hazard.item).to_string(),
                    guide_word: hazard.guide_word,
                    consequence: hazard.consequence.clone(),
                    severity: hazard.severity,
                    mitigation: hazard.mitigation.clone(),
                },
                span_of(&ElementRef::Hazard(
                    resp.id.clone(),
                    hazard.item.clone(),
                    hazard.guide_word,
                )),
            );
        }
        decls.push(Spanned::new(
            Declaration::Responsibility(ResponsibilityDecl {
                name: resp.name.clone(),
                items,
            }),
            rspan,
        ));
    }
    decls
}

fn print_item(out: &mut String, item: &ResponsibilityItem) {
    out.push_str("  ");
    match item {
        ResponsibilityItem::AssignedTo(agents) => {
            let _ = write!(out, "assigned to {}", agent_list(agents));
        }
        ResponsibilityItem::Requires {
            resource,
            sources,
            channels,
            criticality,
        } => {
            let _ = write!(out, "requires |{resource}|");
            if !sources.is_empty() {
                let _ = write!(out, " from {}", agent_list(sources));
            }
            if !channels.is_empty() {
                let _ = write!(out, " via {}", quote_list(channels));
            }
            if let Some(c) = criticality {
                let _ = write!(out, " criticality {c}");
            }
        }
        ResponsibilityItem::Produces {
            resource,
            channels,
            rationale,
        } => {
            let _ = write!(out, "produces |{resource}|");
            if !channels.is_empty() {
                let _ = write!(out, " via {}", quote_list(channels));
            }
            if let Some(r) = rationale {
                let _ = write!(out, " rationale {}", quote(r));
            }
        }
        ResponsibilityItem::Uses(name) => {
            let _ = write!(out, "uses [{name}]");
        }
        ResponsibilityItem::Precedes(name) => {
            let _ = write!(out, "precedes {}", quote(name));
        }
        ResponsibilityItem::Note(text) => {
            let _ = write!(out, "note {}", quote(text));
        }
        ResponsibilityItem::Hazard {
            item,
            guide_word,
            consequence,
            severity,
            mitigation,
        } => {
            let _ = write!(out, "hazard |{item}| {guide_word} {}", quote(consequence));
            if *severity != Default::default() {
                let _ = write!(out, " severity {severity}");
            }
            if let Some(m) = mitigation {
                debug_assert!(is_word(m));
                let _ = write!(out, " mitigation {m}");
            }
        }
    }
    out.push('\n');
}

/// Prints declarations in order, one clause per line with two-space
/// indentation inside blocks and a blank line between groups.
pub fn print_declarations(decls: &[Spanned<Declaration>]) -> String {
    let mut out = String::new();
    let mut last_group = None;
    for decl in decls {
        let group = std::mem::discriminant(&decl.node);
        let is_block = matches!(decl.node, Declaration::Responsibility(_));
        if last_group.is_some() && (last_group != Some(group) || is_block) {
            out.push('\n');
        }
        last_group = Some(group);
        match &decl.node {
            Declaration::Model(name) => {
                let _ = writeln!(out, "model {}", quote(name));
            }
            Declaration::Agent(a) => {
                let _ = write!(out, "agent <{}>", a.name);
                if let Some(kind) = a.kind {
                    let _ = write!(out, " kind {kind}");
                }
                out.push('\n');
            }
            Declaration::Resource(r) => {
                let _ = writeln!(out, "resource {}", r.kind.bracket(&r.name));
            }
            Declaration::Channel(c) => {
                let _ = write!(out, "channel {}", quote(&c.name));
                if let Some(m) = &c.medium {
                    let _ = write!(out, " medium {m}");
                }
                if let Some(b) = &c.backup_of {
                    let _ = write!(out, " backup_of {}", quote(b));
                }
                out.push('\n');
            }
            Declaration::Responsibility(r) => {
                if r.items.is_empty() {
                    let _ = writeln!(out, "responsibility {} {{}}", quote(&r.name));
                } else {
                    let _ = writeln!(out, "responsibility {} {{", quote(&r.name));
                    for item in &r.items {
                        print_item(&mut out, &item.node);
                    }
                    out.push_str("}\n");
                }
            }
        }
    }
    out
}

/// Canonical text of a model: every element declared explicitly, in
/// canonical order. Parsing the output yields an equal model.
pub fn print_model(model: &Model) -> String {
    print_declarations(&model_declarations(model, true))
}
