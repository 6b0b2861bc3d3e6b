//! Responsibility vulnerability detection and model comparison.
//!
//! | Code               | Severity | Raised for                                                      |
//! |--------------------|----------|-----------------------------------------------------------------|
//! | `UNASSIGNED_RESP`  | high     | a responsibility nobody holds                                   |
//! | `SEQUENCE_CYCLE`   | high     | responsibilities whose `precedes` links form a loop             |
//! | `UNSOURCED_INFO`   | medium   | a need with no source agent that no responsibility produces     |
//! | `SINGLE_CHANNEL`   | medium   | a need or product that reaches its holder by one channel only   |
//! | `AGENT_OVERLOAD`   | medium   | an agent holding more responsibilities than the threshold       |
//! | `DUPLICATE_SOURCE` | low      | information obtained from disagreeing sources or produced twice |
//! | `UNUSED_RESOURCE`  | low      | a resource no responsibility needs, produces or uses            |

mod checks;
mod diff;

use std::fmt;

use serde::Serialize;

use crate::model::{ElementRef, Model, Severity};

pub use checks::{
    agent_load, detect_sequence_cycles, find_duplicate_sources, find_single_channel,
    find_unassigned, find_unsourced_info, find_unused_resources,
};
pub use diff::{diff_models, InconsistencyKind, PerceptionInconsistency};

/// Responsibilities an agent may hold before `AGENT_OVERLOAD` is raised.
pub const DEFAULT_LOAD_THRESHOLD: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingCode {
    AgentOverload,
    DuplicateSource,
    SequenceCycle,
    SingleChannel,
    UnassignedResp,
    UnsourcedInfo,
    UnusedResource,
}

impl FindingCode {
    pub const ALL: [FindingCode; 7] = [
        FindingCode::AgentOverload,
        FindingCode::DuplicateSource,
        FindingCode::SequenceCycle,
        FindingCode::SingleChannel,
        FindingCode::UnassignedResp,
        FindingCode::UnsourcedInfo,
        FindingCode::UnusedResource,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::AgentOverload => "AGENT_OVERLOAD",
            FindingCode::DuplicateSource => "DUPLICATE_SOURCE",
            FindingCode::SequenceCycle => "SEQUENCE_CYCLE",
            FindingCode::SingleChannel => "SINGLE_CHANNEL",
            FindingCode::UnassignedResp => "UNASSIGNED_RESP",
            FindingCode::UnsourcedInfo => "UNSOURCED_INFO",
            FindingCode::UnusedResource => "UNUSED_RESOURCE",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            FindingCode::UnassignedResp | FindingCode::SequenceCycle => Severity::High,
            FindingCode::UnsourcedInfo | FindingCode::SingleChannel | FindingCode::AgentOverload => {
                Severity::Medium
            }
            FindingCode::DuplicateSource | FindingCode::UnusedResource => Severity::Low,
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FindingCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Field order here is the key order of the JSON rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub severity: Severity,
    pub subjects: Vec<ElementRef>,
    pub explanation: String,
}

impl Finding {
    pub(crate) fn new(code: FindingCode, subjects: Vec<ElementRef>, explanation: String) -> Self {
        Finding {
            code,
            severity: code.severity(),
            subjects,
            explanation,
        }
    }

    /// Subject ids joined with ",".
    pub fn subject_list(&self) -> String {
        self.subjects
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `CODE severity subjects: explanation`
impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            self.code,
            self.severity,
            self.subject_list(),
            self.explanation
        )
    }
}

/// Sorts findings by code, then by subject list.
pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by_cached_key(|f| (f.code, f.subject_list()));
}

/// Runs every analysis and returns the combined, sorted findings.
pub fn analyze_all(model: &Model, load_threshold: usize) -> Vec<Finding> {
    let mut findings: Vec<Finding> = std::thread::scope(|scope| {
        let handles = [
            scope.spawn(|| find_unassigned(model)),
            scope.spawn(|| find_unsourced_info(model)),
            scope.spawn(|| find_unused_resources(model)),
            scope.spawn(|| find_single_channel(model)),
            scope.spawn(|| find_duplicate_sources(model)),
            scope.spawn(|| agent_load(model, load_threshold)),
            scope.spawn(|| detect_sequence_cycles(model)),
        ];
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });
    sort_findings(&mut findings);
    findings
}
