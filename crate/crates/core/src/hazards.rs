//! HAZOP-style information-hazard worksheets.
//!
//! Every piece of information a responsibility needs is examined under five
//! guide words. Assessed rows with a high enough severity and no linked
//! mitigation turn into requirement stubs for a coping strategy.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::model::{
    HazardEntry, Model, ResourceId, Severity, UnknownResponsibility, UnknownToken,
};
use crate::reporting::{RequirementRecord, TraceRef};

/// Deviation prompts applied to each needed information item, in the order
/// they are always presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuideWord {
    Unavailable,
    Inaccurate,
    Incomplete,
    Late,
    Early,
}

impl GuideWord {
    pub const ALL: [GuideWord; 5] = [
        GuideWord::Unavailable,
        GuideWord::Inaccurate,
        GuideWord::Incomplete,
        GuideWord::Late,
        GuideWord::Early,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GuideWord::Unavailable => "unavailable",
            GuideWord::Inaccurate => "inaccurate",
            GuideWord::Incomplete => "incomplete",
            GuideWord::Late => "late",
            GuideWord::Early => "early",
        }
    }
}

impl fmt::Display for GuideWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GuideWord {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GuideWord::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| UnknownToken::new(s, GuideWord::ALL.iter().map(|g| g.as_str())))
    }
}

impl Serialize for GuideWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One responsibility's hazard rows: needed items × guide words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Worksheet {
    pub responsibility: String,
    pub rows: Vec<HazardEntry>,
}

impl Worksheet {
    pub fn assessed(&self) -> usize {
        self.rows.iter().filter(|r| r.is_assessed()).count()
    }
}

/// Builds the worksheet for a responsibility, filling in any entries the
/// model already holds. Rows follow the canonical need order, and within an
/// item the guide-word order.
pub fn generate_worksheet(model: &Model, responsibility: &str) -> Result<Worksheet, UnknownResponsibility> {
    let resp = model.find_responsibility(responsibility)?;
    let rows = resp
        .needs
        .iter()
        .flat_map(|need| {
            GuideWord::ALL.into_iter().map(move |gw| {
                resp.hazard(&need.resource, gw)
                    .cloned()
                    .unwrap_or_else(|| HazardEntry {
                        responsibility: resp.name.clone(),
                        item: need.resource.clone(),
                        guide_word: gw,
                        consequence: String::new(),
                        severity: Severity::None,
                        mitigation: None,
                    })
            })
        })
        .collect();
    Ok(Worksheet {
        responsibility: resp.name.clone(),
        rows,
    })
}

/// Fraction of worksheet rows that carry an assessment. A worksheet with no
/// rows counts as complete.
pub fn coverage(model: &Model, responsibility: &str) -> Result<f64, UnknownResponsibility> {
    let sheet = generate_worksheet(model, responsibility)?;
    if sheet.rows.is_empty() {
        return Ok(1.0);
    }
    Ok(sheet.assessed() as f64 / sheet.rows.len() as f64)
}

/// Default minimum severity that calls for a mitigation.
pub const DEFAULT_MITIGATION_THRESHOLD: Severity = Severity::Medium;

/// Id of the stub requirement for one hazard.
pub fn mitigation_id(model: &Model, entry: &HazardEntry) -> String {
    let resp = model
        .responsibility_named(&entry.responsibility)
        .map_or_else(|| entry.responsibility.to_lowercase(), |r| r.id.to_string());
    format!("MIT-{resp}-{}-{}", entry.item, entry.guide_word)
}

/// Emits a placeholder requirement for every assessed hazard of the
/// responsibility whose severity reaches `threshold` and that has no
/// mitigation yet.
pub fn derive_mitigations(
    model: &Model,
    responsibility: &str,
    threshold: Severity,
) -> Result<Vec<RequirementRecord>, UnknownResponsibility> {
    let resp = model.find_responsibility(responsibility)?;
    Ok(resp
        .hazards
        .iter()
        .filter(|h| h.is_assessed() && h.severity >= threshold && h.mitigation.is_none())
        .map(|h| {
            let item = model.resource_name(&h.item).to_string();
            let hazard = TraceRef::Hazard {
                item: item.clone(),
                guide_word: h.guide_word,
            };
            RequirementRecord {
                id: mitigation_id(model, h),
                text: format!(
                    "TBD: define how \"{}\" continues when |{}| is {}. Consequence to mitigate: {}",
                    resp.name,
                    item,
                    h.guide_word,
                    h.consequence.trim()
                ),
                rationale: format!("Mitigates a {} severity information hazard.", h.severity),
                traces: vec![TraceRef::Responsibility(resp.name.clone()), hazard.clone()],
                derived_from: Some(hazard),
            }
        })
        .collect())
}

/// Returns a copy of the model in which every hazard traced by a
/// requirement records that requirement as its mitigation. A requirement
/// that also traces responsibilities links only hazards of those
/// responsibilities. Already-linked hazards are left alone.
pub fn link_mitigations(model: &Model, requirements: &[RequirementRecord]) -> Model {
    let mut linked = model.clone();
    for req in requirements {
        let scoped: Vec<&str> = req
            .traces
            .iter()
            .filter_map(|t| match t {
                TraceRef::Responsibility(name) => Some(name.as_str()),
                _ => None,
            })
            .collect();
        for trace in &req.traces {
            let TraceRef::Hazard { item, guide_word } = trace else {
                continue;
            };
            let Ok(item_id) = ResourceId::for_name(item) else {
                continue;
            };
            for resp in &mut linked.responsibilities {
                if !scoped.is_empty() && !scoped.contains(&resp.name.as_str()) {
                    continue;
                }
                for h in &mut resp.hazards {
                    if h.item == item_id && h.guide_word == *guide_word && h.mitigation.is_none() {
                        h.mitigation = Some(req.id.clone());
                    }
                }
            }
        }
    }
    linked
}
