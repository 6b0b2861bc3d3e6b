//! Random `.resp` documents for property tests.
//!
//! Every element name ends in a unique number, so slugs never collide.
//! Documents mix explicit and implicit declarations, repeat needs and
//! products so that merging is exercised, and put quotes and backslashes in
//! quoted names.

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;

const KINDS: [&str; 5] = ["organization", "role", "person", "system", "group"];
const MEDIA: [&str; 6] = ["radio", "sms", "email", "fax", "verbal", "data-link"];
const SEVERITIES: [&str; 5] = ["none", "low", "medium", "high", "critical"];
pub const GUIDE_WORDS: [&str; 5] = ["unavailable", "inaccurate", "incomplete", "late", "early"];

#[derive(Debug, Clone)]
pub struct AgentPlan {
    pub name: String,
    pub kind: Option<usize>,
    pub declared: bool,
}

#[derive(Debug, Clone)]
pub struct ResourcePlan {
    pub name: String,
    pub declared: bool,
}

#[derive(Debug, Clone)]
pub struct ChannelPlan {
    pub name: String,
    pub medium: Option<usize>,
    /// Index of an earlier declared channel.
    pub backup_of: Option<usize>,
    pub declared: bool,
}

#[derive(Debug, Clone)]
pub struct NeedPlan {
    pub item: usize,
    pub sources: Vec<usize>,
    pub channels: Vec<usize>,
    pub criticality: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ProductPlan {
    pub item: usize,
    pub channels: Vec<usize>,
    pub rationale: Option<String>,
}

#[derive(Debug, Clone)]
pub struct HazardPlan {
    /// Index into the responsibility's needs.
    pub need: usize,
    pub guide_word: usize,
    pub consequence: String,
    pub severity: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RespPlan {
    pub name: String,
    pub assigned: Vec<usize>,
    pub needs: Vec<NeedPlan>,
    pub products: Vec<ProductPlan>,
    pub uses: Vec<usize>,
    pub precedes: Vec<usize>,
    pub notes: Vec<String>,
    pub hazards: Vec<HazardPlan>,
}

#[derive(Debug, Clone)]
pub struct ModelPlan {
    pub name: String,
    pub agents: Vec<AgentPlan>,
    pub info: Vec<ResourcePlan>,
    pub physical: Vec<ResourcePlan>,
    pub channels: Vec<ChannelPlan>,
    pub resps: Vec<RespPlan>,
}

/// Pools of element names shared by a pair of models.
#[derive(Debug, Clone)]
pub struct Names {
    pub agent: String,
    pub info: String,
    pub physical: String,
    pub channel: String,
    pub resp: String,
}

fn prefix() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z é'.-]{0,7}".prop_map(|s| s.trim_end().to_string())
}

fn quoted_prefix() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z \"\\\\,]{0,7}".prop_map(|s| s.trim_end().to_string())
}

fn free_text() -> impl Strategy<Value = String> {
    "[ -~]{0,16}"
}

pub fn names() -> impl Strategy<Value = Names> {
    (prefix(), prefix(), prefix(), quoted_prefix(), quoted_prefix()).prop_map(
        |(agent, info, physical, channel, resp)| Names {
            agent,
            info,
            physical,
            channel,
            resp,
        },
    )
}

/// Fixed pools so that two independently generated models share names.
pub fn fixed_names() -> Names {
    Names {
        agent: "Agent".into(),
        info: "Info".into(),
        physical: "Kit".into(),
        channel: "Channel".into(),
        resp: "Duty".into(),
    }
}

fn indices(max: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<usize>> {
    vec(0..max, len)
}

fn resp_plan(
    name: String,
    n_agents: usize,
    n_info: usize,
    n_phys: usize,
    n_chan: usize,
    n_resps: usize,
) -> impl Strategy<Value = RespPlan> {
    let need = (
        0..n_info,
        indices(n_agents, 0..3),
        indices(n_chan, 0..3),
        option::of(0..SEVERITIES.len()),
    )
        .prop_map(|(item, sources, channels, criticality)| NeedPlan {
            item,
            sources,
            channels,
            criticality,
        });
    let product = (0..n_info, indices(n_chan, 0..3), option::of(free_text())).prop_map(
        |(item, channels, rationale)| ProductPlan {
            item,
            channels,
            rationale,
        },
    );
    let hazard = (
        0..8usize,
        0..GUIDE_WORDS.len(),
        free_text(),
        option::of(0..SEVERITIES.len()),
    )
        .prop_map(|(need, guide_word, consequence, severity)| HazardPlan {
            need,
            guide_word,
            consequence,
            severity,
        });
    (
        indices(n_agents, 0..3),
        vec(need, 0..5),
        vec(product, 0..3),
        indices(n_phys.max(1), 0..3),
        indices(n_resps, 0..2),
        vec(free_text(), 0..2),
        vec(hazard, 0..4),
    )
        .prop_map(move |(assigned, needs, products, uses, precedes, notes, hazards)| {
            let uses = if n_phys == 0 { Vec::new() } else { uses };
            // Hazards need a needed item and one entry per (item, guide word).
            let mut seen = Vec::new();
            let hazards = hazards
                .into_iter()
                .filter(|_| !needs.is_empty())
                .map(|mut h| {
                    h.need %= needs.len();
                    h
                })
                .filter(|h| {
                    let key = (needs[h.need].item, h.guide_word);
                    let fresh = !seen.contains(&key);
                    seen.push(key);
                    fresh
                })
                .collect();
            RespPlan {
                name: name.clone(),
                assigned,
                needs,
                products,
                uses,
                precedes,
                notes,
                hazards,
            }
        })
}

pub fn model_plan(names: Names) -> impl Strategy<Value = ModelPlan> {
    (1..6usize, 1..7usize, 0..3usize, 1..5usize, 0..6usize, free_text()).prop_flat_map(
        move |(n_agents, n_info, n_phys, n_chan, n_resps, model_name)| {
            let names = names.clone();
            let agents = vec((option::of(0..KINDS.len()), any::<bool>()), n_agents).prop_map({
                let prefix = names.agent.clone();
                move |v| {
                    v.into_iter()
                        .enumerate()
                        .map(|(i, (kind, declared))| AgentPlan {
                            name: format!("{prefix} {i}"),
                            kind,
                            declared,
                        })
                        .collect::<Vec<_>>()
                }
            });
            let resources = |prefix: String, n: usize, offset: usize| {
                vec(any::<bool>(), n).prop_map(move |v| {
                    v.into_iter()
                        .enumerate()
                        .map(|(i, declared)| ResourcePlan {
                            name: format!("{prefix} {}", i + offset),
                            declared,
                        })
                        .collect::<Vec<_>>()
                })
            };
            let channels = vec(
                (option::of(0..MEDIA.len()), option::of(0..n_chan), any::<bool>()),
                n_chan,
            )
            .prop_map({
                let prefix = names.channel.clone();
                move |v| {
                    let mut out: Vec<ChannelPlan> = Vec::new();
                    for (i, (medium, backup, declared)) in v.into_iter().enumerate() {
                        let backup_of = backup.filter(|&b| b < i && declared && out[b].declared);
                        out.push(ChannelPlan {
                            name: format!("{prefix} {i}"),
                            medium,
                            backup_of,
                            declared,
                        });
                    }
                    out
                }
            });
            let resps: Vec<_> = (0..n_resps)
                .map(|i| {
                    resp_plan(
                        format!("{} {i}", names.resp),
                        n_agents,
                        n_info,
                        n_phys,
                        n_chan,
                        n_resps,
                    )
                })
                .collect();
            (
                Just(model_name.clone()),
                agents,
                resources(names.info.clone(), n_info, 0),
                resources(names.physical.clone(), n_phys, 100),
                channels,
                resps,
            )
                .prop_map(|(name, agents, info, physical, channels, resps)| ModelPlan {
                    name,
                    agents,
                    info,
                    physical,
                    channels,
                    resps,
                })
        },
    )
}

pub fn q(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl ModelPlan {
    /// Renders the plan as `.resp` text. Half of the explicit declarations
    /// come before the responsibilities and half after.
    pub fn render(&self) -> String {
        let mut decls = Vec::new();
        for a in self.agents.iter().filter(|a| a.declared) {
            decls.push(match a.kind {
                Some(k) => format!("agent <{}> kind {}", a.name, KINDS[k]),
                None => format!("agent <{}>", a.name),
            });
        }
        for r in self.info.iter().filter(|r| r.declared) {
            decls.push(format!("resource |{}|", r.name));
        }
        for r in self.physical.iter().filter(|r| r.declared) {
            decls.push(format!("resource [ {} ]", r.name));
        }
        for c in self.channels.iter().filter(|c| c.declared) {
            let mut line = format!("channel {}", q(&c.name));
            if let Some(m) = c.medium {
                line.push_str(&format!(" medium {}", MEDIA[m]));
            }
            if let Some(b) = c.backup_of {
                line.push_str(&format!(" backup_of {}", q(&self.channels[b].name)));
            }
            decls.push(line);
        }
        let split = decls.len() / 2;

        let mut out = String::new();
        out.push_str(&format!("# generated\nmodel {}\n", q(&self.name)));
        for d in &decls[..split] {
            out.push_str(d);
            out.push('\n');
        }
        for r in &self.resps {
            out.push_str(&format!("responsibility {} {{", q(&r.name)));
            if !r.assigned.is_empty() {
                let agents: Vec<_> = r.assigned.iter().map(|&a| format!("<{}>", self.agents[a].name)).collect();
                out.push_str(&format!("\n    assigned to {}", agents.join(" , ")));
            }
            for n in &r.needs {
                out.push_str(&format!("\n  requires |{}|", self.info[n.item].name));
                if !n.sources.is_empty() {
                    let s: Vec<_> = n.sources.iter().map(|&a| format!("<{}>", self.agents[a].name)).collect();
                    out.push_str(&format!(" from {}", s.join(",")));
                }
                if !n.channels.is_empty() {
                    let c: Vec<_> = n.channels.iter().map(|&c| q(&self.channels[c].name)).collect();
                    out.push_str(&format!(" via {}", c.join(", ")));
                }
                if let Some(s) = n.criticality {
                    out.push_str(&format!(" criticality {}", SEVERITIES[s]));
                }
            }
            for p in &r.products {
                out.push_str(&format!(" produces |{}|", self.info[p.item].name));
                if !p.channels.is_empty() {
                    let c: Vec<_> = p.channels.iter().map(|&c| q(&self.channels[c].name)).collect();
                    out.push_str(&format!(" via {}", c.join(", ")));
                }
                if let Some(why) = &p.rationale {
                    out.push_str(&format!(" rationale {}", q(why)));
                }
            }
            for &u in &r.uses {
                out.push_str(&format!("\n  uses [{}]", self.physical[u].name));
            }
            for &p in &r.precedes {
                out.push_str(&format!("\n  precedes {}", q(&self.resps[p].name)));
            }
            for note in &r.notes {
                out.push_str(&format!("\n  note {}  # trailing comment", q(note)));
            }
            for h in &r.hazards {
                out.push_str(&format!(
                    "\n  hazard |{}| {} {}",
                    self.info[r.needs[h.need].item].name,
                    GUIDE_WORDS[h.guide_word],
                    q(&h.consequence)
                ));
                if let Some(s) = h.severity {
                    out.push_str(&format!(" severity {}", SEVERITIES[s]));
                }
            }
            out.push_str("\n}\n");
        }
        for d in &decls[split..] {
            out.push_str(d);
            out.push('\n');
        }
        out
    }
}
