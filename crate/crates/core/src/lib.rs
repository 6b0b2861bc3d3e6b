//! Responsibility modelling for multi-agency systems.
//!
//! Models are written in the `.resp` text format, resolved into a [`Model`],
//! and then analysed, elicited against, hazard-assessed and rendered.
//!
//! ```
//! use respmod::{analysis, build_model, dsl};
//!
//! let decls = dsl::parse_model(r#"
//!     responsibility "Evacuate area" { assigned to <Police> }
//!     responsibility "Collect evacuee information" {}
//! "#).unwrap();
//! let model = build_model(&decls).unwrap();
//! let findings = analysis::find_unassigned(&model);
//! assert_eq!(findings[0].subject_list(), "collect-evacuee-information");
//! ```

pub mod analysis;
pub mod cli;
pub mod dsl;
pub mod elicitation;
pub mod hazards;
pub mod model;
pub mod reporting;
pub mod resolve;
pub mod validate;

pub use model::{slugify, ElementRef, Model, Severity};
pub use resolve::{build_model, BuildError};
pub use validate::{validate, Diagnostic, Mode};

/// Parses and resolves `.resp` text in one step.
pub fn load_model(file: &str, text: &str) -> Result<Model, LoadError> {
    let decls = dsl::parse_model_in(file, text).map_err(LoadError::Parse)?;
    build_model(&decls).map_err(LoadError::Build)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}", join_lines(.0))]
    Parse(Vec<dsl::ParseError>),
    #[error("{}", join_lines(.0))]
    Build(Vec<BuildError>),
}

fn join_lines<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("\n")
}
