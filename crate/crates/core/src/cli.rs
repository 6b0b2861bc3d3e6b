//! The `respmod` command line. Every subcommand is a thin wrapper around the
//! library; [`run`] takes its streams as arguments so it can be driven from
//! tests.
//!
//! Exit status: 0 on success, 1 when `analyze` reports findings at or above
//! `--fail-level` or `diff` reports any inconsistency, 2 on usage, parse or
//! resolution errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze_all, diff_models, DEFAULT_LOAD_THRESHOLD};
use crate::dsl::{self, print_model, print_requirements};
use crate::elicitation::{
    generate_questionnaire, information_recorded_table, information_required_table, ingest_all,
    render_skeleton, InfoTable,
};
use crate::hazards::{derive_mitigations, generate_worksheet};
use crate::model::{Model, Severity};
use crate::reporting::{
    diff_report, findings_report, requirements_report, table_to_csv, table_to_markdown, to_dot,
    unresolved_traces, worksheet_table, ReportFormat, UnresolvedTraces,
};
use crate::validate::{validate, Mode};
use crate::LoadError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Findings,
    Error,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Findings => 1,
            ExitStatus::Error => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "respmod", version, about = "Responsibility models: check, analyse, elicit and report")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for ReportFormat {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => ReportFormat::Text,
            OutputFormat::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Required,
    Recorded,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Level {
    None,
    Low,
    Medium,
    High,
    Critical,
}

impl From<Level> for Severity {
    fn from(l: Level) -> Self {
        match l {
            Level::None => Severity::None,
            Level::Low => Severity::Low,
            Level::Medium => Severity::Medium,
            Level::High => Severity::High,
            Level::Critical => Severity::Critical,
        }
    }
}

/// FILE arguments accept `-` for standard input.
#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and resolve a model, then report validation diagnostics
    Check {
        file: PathBuf,
        /// Also report implicit declarations and empty channel sets
        #[arg(long)]
        strict: bool,
    },
    /// Report responsibility vulnerabilities
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Responsibilities an agent may hold before it counts as overloaded
        #[arg(long, default_value_t = DEFAULT_LOAD_THRESHOLD as u64, value_parser = clap::value_parser!(u64).range(1..))]
        load_threshold: u64,
        /// Lowest severity that makes the exit status 1
        #[arg(long, value_enum, default_value = "medium")]
        fail_level: Level,
    },
    /// Write the six-question questionnaire for a responsibility as an answers skeleton
    Elicit {
        file: PathBuf,
        #[arg(long)]
        responsibility: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge elicitation answers into a model and print the result
    Ingest {
        file: PathBuf,
        answers: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Reject answers that mention undeclared elements
        #[arg(long)]
        strict: bool,
    },
    /// Render the information required and recorded tables
    Tables {
        file: PathBuf,
        #[arg(long)]
        responsibility: String,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
        #[arg(long, value_enum, default_value = "required")]
        which: Which,
    },
    /// Render the information-hazard worksheet
    Hazards {
        file: PathBuf,
        #[arg(long)]
        responsibility: String,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
    },
    /// Print mitigation requirement stubs for assessed hazards
    Mitigations {
        file: PathBuf,
        #[arg(long)]
        responsibility: String,
        /// Lowest severity that needs a mitigation
        #[arg(long, value_enum, default_value = "medium")]
        threshold: Level,
    },
    /// Check requirement traces against a model and render them
    Requirements {
        file: PathBuf,
        reqs: PathBuf,
        /// Render a numbered Markdown report instead of canonical requirements
        #[arg(long)]
        report: bool,
    },
    /// Emit the model as a Graphviz graph
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two organisations' models of the same responsibilities
    Diff {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
}

/// A failure, already rendered for stderr.
struct Failure(String);

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure(e.to_string())
    }
}

impl From<UnresolvedTraces> for Failure {
    fn from(e: UnresolvedTraces) -> Self {
        Failure(e.to_string())
    }
}

fn fail(e: impl std::fmt::Display) -> Failure {
    Failure(format!("error: {e}"))
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> Result<(String, String), Failure> {
        if path == Path::new("-") {
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| fail(format!("cannot read standard input: {e}")))?;
            return Ok(("<stdin>".to_string(), text));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
        Ok((path.display().to_string(), text))
    }

    fn model(&mut self, path: &Path) -> Result<Model, Failure> {
        let (label, text) = self.read(path)?;
        Ok(crate::load_model(&label, &text)?)
    }

    fn out(&mut self, text: &str) -> Result<(), Failure> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| fail(format!("cannot write output: {e}")))
    }

    fn artifact(&mut self, text: &str, output: Option<&Path>) -> Result<(), Failure> {
        match output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| fail(format!("cannot write {}: {e}", path.display()))),
            None => self.out(text),
        }
    }

    fn err(&mut self, text: &str) {
        let _ = self.stderr.write_all(text.as_bytes());
    }
}

fn render_table(table: &InfoTable, format: TableFormat) -> String {
    match format {
        TableFormat::Md => table_to_markdown(table),
        TableFormat::Csv => table_to_csv(table),
    }
}

fn execute(command: Command, io: &mut Io) -> Result<ExitStatus, Failure> {
    match command {
        Command::Check { file, strict } => {
            let model = io.model(&file)?;
            let mode = if strict { Mode::Strict } else { Mode::Lenient };
            let diagnostics = validate(&model, mode);
            let mut text = String::new();
            for d in &diagnostics {
                let _ = writeln!(text, "{d}");
            }
            io.err(&text);
            io.out(&format!(
                "{} responsibilities, {} agents, {} resources, {} channels; {} diagnostics\n",
                model.responsibilities().len(),
                model.agents().len(),
                model.resources().len(),
                model.channels().len(),
                diagnostics.len()
            ))?;
            Ok(ExitStatus::Success)
        }
        Command::Analyze {
            file,
            format,
            load_threshold,
            fail_level,
        } => {
            let model = io.model(&file)?;
            let findings = analyze_all(&model, load_threshold as usize);
            io.out(&findings_report(&findings, format.into()))?;
            let level = Severity::from(fail_level);
            Ok(if findings.iter().any(|f| f.severity >= level) {
                ExitStatus::Findings
            } else {
                ExitStatus::Success
            })
        }
        Command::Elicit {
            file,
            responsibility,
            output,
        } => {
            let model = io.model(&file)?;
            let q = generate_questionnaire(&model, &responsibility).map_err(fail)?;
            io.artifact(&render_skeleton(&model, &q), output.as_deref())?;
            Ok(ExitStatus::Success)
        }
        Command::Ingest {
            file,
            answers,
            output,
            strict,
        } => {
            let model = io.model(&file)?;
            let (label, text) = io.read(&answers)?;
            let records = dsl::parse_answers_in(&label, &text).map_err(|errors| {
                Failure(errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))
            })?;
            let mode = if strict { Mode::Strict } else { Mode::Lenient };
            let merged = ingest_all(&model, &records, mode).map_err(|e| match e {
                crate::elicitation::IngestError::Build(_) | crate::elicitation::IngestError::Unresolved { .. } => {
                    Failure(e.to_string())
                }
                other => fail(other),
            })?;
            io.artifact(&print_model(&merged), output.as_deref())?;
            Ok(ExitStatus::Success)
        }
        Command::Tables {
            file,
            responsibility,
            format,
            which,
        } => {
            let model = io.model(&file)?;
            let required = || information_required_table(&model, &responsibility).map_err(fail);
            let recorded = || information_recorded_table(&model, &responsibility).map_err(fail);
            let text = match which {
                Which::Required => render_table(&required()?, format),
                Which::Recorded => render_table(&recorded()?, format),
                Which::Both => {
                    let tables = [required()?, recorded()?];
                    let parts: Vec<String> = tables
                        .iter()
                        .map(|t| match format {
                            TableFormat::Md => format!("## {}\n\n{}", t.title, table_to_markdown(t)),
                            TableFormat::Csv => table_to_csv(t),
                        })
                        .collect();
                    let separator = match format {
                        TableFormat::Md => "\n",
                        TableFormat::Csv => "\r\n",
                    };
                    parts.join(separator)
                }
            };
            io.out(&text)?;
            Ok(ExitStatus::Success)
        }
        Command::Hazards {
            file,
            responsibility,
            format,
        } => {
            let model = io.model(&file)?;
            let sheet = generate_worksheet(&model, &responsibility).map_err(fail)?;
            io.out(&render_table(&worksheet_table(&model, &sheet), format))?;
            let total = sheet.rows.len();
            let assessed = sheet.assessed();
            let ratio = if total == 0 { 1.0 } else { assessed as f64 / total as f64 };
            io.err(&format!(
                "coverage: {assessed}/{total} rows assessed ({:.1}%)\n",
                ratio * 100.0
            ));
            Ok(ExitStatus::Success)
        }
        Command::Mitigations {
            file,
            responsibility,
            threshold,
        } => {
            let model = io.model(&file)?;
            let stubs = derive_mitigations(&model, &responsibility, threshold.into()).map_err(fail)?;
            io.out(&print_requirements(&stubs))?;
            Ok(ExitStatus::Success)
        }
        Command::Requirements { file, reqs, report } => {
            let model = io.model(&file)?;
            let (label, text) = io.read(&reqs)?;
            let records = dsl::parse_requirements_in(&label, &text).map_err(|errors| {
                Failure(errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))
            })?;
            if report {
                io.out(&requirements_report(&model, &records)?)?;
            } else {
                let unresolved = unresolved_traces(&model, &records);
                if !unresolved.is_empty() {
                    return Err(UnresolvedTraces(unresolved).into());
                }
                io.out(&print_requirements(&records))?;
            }
            Ok(ExitStatus::Success)
        }
        Command::Dot { file, output } => {
            let model = io.model(&file)?;
            io.artifact(&to_dot(&model), output.as_deref())?;
            Ok(ExitStatus::Success)
        }
        Command::Diff { left, right, format } => {
            let left = io.model(&left)?;
            let right = io.model(&right)?;
            let diff = diff_models(&left, &right);
            io.out(&diff_report(&diff, format.into()))?;
            Ok(if diff.is_empty() {
                ExitStatus::Success
            } else {
                ExitStatus::Findings
            })
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                ExitStatus::Error
            } else {
                let _ = stdout.write_all(text.as_bytes());
                ExitStatus::Success
            };
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    match execute(cli.command, &mut io) {
        Ok(status) => status,
        Err(Failure(message)) => {
            io.err(&message);
            if !message.ends_with('\n') {
                io.err("\n");
            }
            ExitStatus::Error
        }
    }
}
