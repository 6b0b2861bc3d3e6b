//! Graphviz DOT output. Layout is left to the renderer.
//!
//! Responsibilities are rounded boxes whose ids are their slugs. Agents,
//! information and physical resources are plain-text nodes labelled in
//! bracket notation, with ids prefixed `agent:`, `info:` and `phys:`.
//!
//! | Edge                              | Style                          |
//! |-----------------------------------|--------------------------------|
//! | agent holds responsibility        | `dir=none, style=bold`         |
//! | source agent to information       | solid arrow                    |
//! | information to responsibility     | solid arrow, labelled channels |
//! | responsibility to product         | solid arrow, labelled channels |
//! | responsibility uses physical item | `dir=none` (no arrowhead)      |
//! | `precedes`                        | `style=dashed` arrow           |

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::model::{ChannelId, Model, ResourceKind};

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn channel_label(model: &Model, channels: &[ChannelId]) -> String {
    channels
        .iter()
        .map(|c| model.channel_name(c))
        .collect::<Vec<_>>()
        .join(", ")
}

fn edge(out: &mut String, from: &str, to: &str, attrs: &[String]) {
    let _ = write!(out, "  {} -> {}", esc(from), esc(to));
    if !attrs.is_empty() {
        let _ = write!(out, " [{}]", attrs.join(", "));
    }
    out.push_str(";\n");
}

pub fn to_dot(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", esc(model.name()));

    for r in model.responsibilities() {
        let _ = writeln!(
            out,
            "  {} [label={}, shape=box, style=rounded];",
            esc(r.id.as_str()),
            esc(&r.name)
        );
    }
    for a in model.agents() {
        let _ = writeln!(
            out,
            "  {} [label={}, shape=plaintext];",
            esc(&format!("agent:{}", a.id)),
            esc(&format!("<{}>", a.name))
        );
    }
    let prefix = |kind| match kind {
        ResourceKind::Information => "info",
        ResourceKind::Physical => "phys",
    };
    for kind in [ResourceKind::Information, ResourceKind::Physical] {
        for res in model.resources().iter().filter(|r| r.kind == kind) {
            let _ = writeln!(
                out,
                "  {} [label={}, shape=plaintext];",
                esc(&format!("{}:{}", prefix(kind), res.id)),
                esc(&kind.bracket(&res.name))
            );
        }
    }

    let mut source_edges = BTreeSet::new();
    for r in model.responsibilities() {
        let rid = r.id.as_str();
        for a in &r.assigned_to {
            edge(
                &mut out,
                &format!("agent:{a}"),
                rid,
                &["dir=none".into(), "style=bold".into()],
            );
        }
        for need in &r.needs {
            let info = format!("info:{}", need.resource);
            for s in &need.sources {
                let from = format!("agent:{s}");
                if source_edges.insert((from.clone(), info.clone())) {
                    edge(&mut out, &from, &info, &[]);
                }
            }
            let mut attrs = Vec::new();
            if !need.channels.is_empty() {
                attrs.push(format!("label={}", esc(&channel_label(model, &need.channels))));
            }
            edge(&mut out, &info, rid, &attrs);
        }
        for product in &r.products {
            let mut attrs = Vec::new();
            if !product.channels.is_empty() {
                attrs.push(format!("label={}", esc(&channel_label(model, &product.channels))));
            }
            edge(&mut out, rid, &format!("info:{}", product.resource), &attrs);
        }
        for used in &r.uses {
            edge(&mut out, rid, &format!("phys:{used}"), &["dir=none".into()]);
        }
    }
    for link in model.sequence_links() {
        edge(
            &mut out,
            link.from.as_str(),
            link.to.as_str(),
            &["style=dashed".into()],
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;
    use crate::resolve::build_model;

    #[test]
    fn empty_model() {
        assert_eq!(to_dot(&Model::default()), "digraph \"\" {\n}\n");
    }

    #[test]
    fn shapes_and_edges() {
        let m = build_model(
            &parse_model(
                r#"model "M \"x\""
                   responsibility "A" { assigned to <Police> requires |Map| from <Council> via "Fax" uses [Van] precedes "B" }
                   responsibility "B" { produces |Log| }"#,
            )
            .unwrap(),
        )
        .unwrap();
        let dot = to_dot(&m);
        assert!(dot.starts_with("digraph \"M \\\"x\\\"\" {\n"));
        for line in [
            "  \"a\" [label=\"A\", shape=box, style=rounded];",
            "  \"agent:police\" [label=\"<Police>\", shape=plaintext];",
            "  \"info:map\" [label=\"|Map|\", shape=plaintext];",
            "  \"phys:van\" [label=\"[Van]\", shape=plaintext];",
            "  \"agent:police\" -> \"a\" [dir=none, style=bold];",
            "  \"agent:council\" -> \"info:map\";",
            "  \"info:map\" -> \"a\" [label=\"Fax\"];",
            "  \"a\" -> \"phys:van\" [dir=none];",
            "  \"b\" -> \"info:log\";",
            "  \"a\" -> \"b\" [style=dashed];",
        ] {
            assert!(dot.lines().any(|l| l == line), "missing {line}\n{dot}");
        }
    }
}
