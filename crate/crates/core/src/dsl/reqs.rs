//! `.reqs` documents: authored requirements with rationale and traces.

use std::collections::HashMap;
use std::fmt::Write;

use crate::reporting::{RequirementRecord, TraceRef};

use super::cursor::{Cursor, PResult};
use super::lexer::{is_word, Tok};
use super::printer::quote;
use super::{ParseError, SourceSpan, ANONYMOUS_SOURCE};

const TOP_LEVEL: &[&str] = &["requirement"];

pub fn parse_requirements(text: &str) -> Result<Vec<RequirementRecord>, Vec<ParseError>> {
    parse_requirements_in(ANONYMOUS_SOURCE, text)
}

/// Parses requirement records in authored order. Ids must be unique.
pub fn parse_requirements_in(file: &str, text: &str) -> Result<Vec<RequirementRecord>, Vec<ParseError>> {
    let mut cur = Cursor::new(file, text);
    let mut records = Vec::new();
    let mut seen: HashMap<String, SourceSpan> = HashMap::new();
    while !cur.at_eof() {
        let start = cur.pos();
        match requirement(&mut cur, &mut seen) {
            Ok(r) => records.push(r),
            Err(_) => cur.recover(start, TOP_LEVEL),
        }
    }
    if cur.errors.is_empty() {
        Ok(records)
    } else {
        let mut errors = cur.errors;
        errors.sort_by(|a, b| a.span.cmp(&b.span));
        Err(errors)
    }
}

fn requirement(cur: &mut Cursor, seen: &mut HashMap<String, SourceSpan>) -> PResult<RequirementRecord> {
    if !cur.at_word("requirement") {
        return cur.fail("'requirement'");
    }
    cur.bump();
    let (id, span) = cur.any_word("a requirement id like REQ-1")?;
    if let Some(first) = seen.get(&id) {
        let found = format!("'{id}' (already defined at {first})");
        return cur.fail_at(span, "a unique requirement id", found);
    }
    seen.insert(id.clone(), span);
    cur.expect_lbrace()?;
    cur.expect_word("text")?;
    let text_span = cur.span();
    let text = cur.string("a requirement text string")?;
    if text.trim().is_empty() {
        return cur.fail_at(text_span, "non-empty requirement text", "empty string");
    }
    cur.expect_word("rationale")?;
    let rationale = cur.string("a rationale string")?;
    let mut traces = Vec::new();
    loop {
        if cur.eat_rbrace() {
            break;
        }
        if !cur.at_word("traces") {
            return cur.fail("'}' or 'traces'");
        }
        cur.bump();
        traces.push(trace(cur)?);
    }
    Ok(RequirementRecord {
        id,
        text,
        rationale,
        traces,
        derived_from: None,
    })
}

fn trace(cur: &mut Cursor) -> PResult<TraceRef> {
    match cur.peek() {
        Tok::Information(_) => Ok(TraceRef::Info(cur.info_ref()?)),
        Tok::Agent(_) => Ok(TraceRef::Agent(cur.agent_ref()?)),
        Tok::Word(w) if w == "responsibility" => {
            cur.bump();
            Ok(TraceRef::Responsibility(cur.name_string("a responsibility name")?))
        }
        Tok::Word(w) if w == "hazard" => {
            cur.bump();
            let item = cur.info_ref()?;
            let guide_word = cur.guide_word()?;
            Ok(TraceRef::Hazard { item, guide_word })
        }
        _ => cur.fail("a trace target (|Information|, <Agent>, responsibility \"Name\" or hazard |Information| GUIDEWORD)"),
    }
}

/// Prints records in `.reqs` syntax, one blank line between records.
pub fn print_requirements(records: &[RequirementRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        debug_assert!(is_word(&r.id));
        let _ = writeln!(out, "requirement {} {{", r.id);
        let _ = writeln!(out, "  text {}", quote(&r.text));
        let _ = writeln!(out, "  rationale {}", quote(&r.rationale));
        for t in &r.traces {
            let _ = writeln!(out, "  traces {t}");
        }
        out.push_str("}\n");
    }
    out
}
