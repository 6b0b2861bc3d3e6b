//! `.answers` documents: structured answers from elicitation sessions.

use std::fmt::Write;

use crate::elicitation::{ElicitationRecord, HazardAnswer, NeedAnswer, RecordAnswer};

use super::cursor::{Cursor, PResult};
use super::lexer::Tok;
use super::printer::quote;
use super::{ParseError, ANONYMOUS_SOURCE};

const TOP_LEVEL: &[&str] = &["elicitation"];

pub fn parse_answers(text: &str) -> Result<Vec<ElicitationRecord>, Vec<ParseError>> {
    parse_answers_in(ANONYMOUS_SOURCE, text)
}

/// Parses every `elicitation` session in the document, labelling spans
/// with `file`.
pub fn parse_answers_in(file: &str, text: &str) -> Result<Vec<ElicitationRecord>, Vec<ParseError>> {
    let mut cur = Cursor::new(file, text);
    let mut records = Vec::new();
    while !cur.at_eof() {
        let start = cur.pos();
        match session(&mut cur) {
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

fn session(cur: &mut Cursor) -> PResult<ElicitationRecord> {
    let span = cur.expect_word("elicitation")?;
    let responsibility = cur.name_string("a responsibility name")?;
    let mut record = ElicitationRecord::new(responsibility);
    record.span = span;
    loop {
        if cur.eat_word("by") {
            record.by = Some(cur.string("an interviewer string")?);
        } else if cur.eat_word("date") {
            record.date = Some(cur.string("a date string")?);
        } else {
            break;
        }
    }
    cur.expect_lbrace()?;
    loop {
        if cur.eat_rbrace() {
            return Ok(record);
        }
        match cur.peek() {
            Tok::Word(w) if w == "needs" => {
                cur.bump();
                cur.expect_lbrace()?;
                while !cur.eat_rbrace() {
                    record.needs.push(need_line(cur)?);
                }
            }
            Tok::Word(w) if w == "records" => {
                cur.bump();
                cur.expect_lbrace()?;
                while !cur.eat_rbrace() {
                    record.records.push(record_line(cur)?);
                }
            }
            Tok::Word(w) if w == "hazards" => {
                cur.bump();
                let item = cur.info_ref()?;
                cur.expect_lbrace()?;
                while !cur.eat_rbrace() {
                    record.hazards.push(hazard_line(cur, &item)?);
                }
            }
            Tok::Eof => return cur.fail("'}'"),
            _ => return cur.fail("'}' or one of needs, records, hazards"),
        }
    }
}

fn need_line(cur: &mut Cursor) -> PResult<NeedAnswer> {
    let span = cur.span();
    if matches!(cur.peek(), Tok::Eof) {
        return cur.fail("'}'");
    }
    let resource = cur.info_ref()?;
    let sources = if cur.eat_word("from") { cur.agent_list()? } else { Vec::new() };
    let channels = if cur.eat_word("via") {
        cur.string_list("a channel name")?
    } else {
        Vec::new()
    };
    Ok(NeedAnswer {
        resource,
        sources,
        channels,
        span,
    })
}

fn record_line(cur: &mut Cursor) -> PResult<RecordAnswer> {
    let span = cur.span();
    if matches!(cur.peek(), Tok::Eof) {
        return cur.fail("'}'");
    }
    let resource = cur.info_ref()?;
    let channels = if cur.eat_word("via") {
        cur.string_list("a channel name")?
    } else {
        Vec::new()
    };
    let rationale = if cur.eat_word("rationale") {
        Some(cur.string("a rationale string")?)
    } else {
        None
    };
    Ok(RecordAnswer {
        resource,
        channels,
        rationale,
        span,
    })
}

fn hazard_line(cur: &mut Cursor, item: &str) -> PResult<HazardAnswer> {
    let span = cur.span();
    if matches!(cur.peek(), Tok::Eof) {
        return cur.fail("'}'");
    }
    let guide_word = cur.guide_word()?;
    let consequence = cur.string("a consequence string")?;
    let severity = if cur.eat_word("severity") {
        cur.severity()?
    } else {
        Default::default()
    };
    Ok(HazardAnswer {
        item: item.to_string(),
        guide_word,
        consequence,
        severity,
        span,
    })
}

pub(crate) fn format_need(need: &NeedAnswer) -> String {
    let mut line = format!("|{}|", need.resource);
    if !need.sources.is_empty() {
        let agents: Vec<_> = need.sources.iter().map(|s| format!("<{s}>")).collect();
        let _ = write!(line, " from {}", agents.join(", "));
    }
    if !need.channels.is_empty() {
        let channels: Vec<_> = need.channels.iter().map(|c| quote(c)).collect();
        let _ = write!(line, " via {}", channels.join(", "));
    }
    line
}

pub(crate) fn format_record(record: &RecordAnswer) -> String {
    let mut line = format!("|{}|", record.resource);
    if !record.channels.is_empty() {
        let channels: Vec<_> = record.channels.iter().map(|c| quote(c)).collect();
        let _ = write!(line, " via {}", channels.join(", "));
    }
    if let Some(r) = &record.rationale {
        let _ = write!(line, " rationale {}", quote(r));
    }
    line
}

pub(crate) fn format_hazard(hazard: &HazardAnswer) -> String {
    let mut line = format!("{} {}", hazard.guide_word, quote(&hazard.consequence));
    if hazard.severity != Default::default() {
        let _ = write!(line, " severity {}", hazard.severity);
    }
    line
}

/// Writes the body of one session, grouping hazard lines by item in
/// first-seen order.
pub(crate) fn write_session_body(out: &mut String, record: &ElicitationRecord) {
    if !record.needs.is_empty() {
        out.push_str("  needs {\n");
        for n in &record.needs {
            let _ = writeln!(out, "    {}", format_need(n));
        }
        out.push_str("  }\n");
    }
    if !record.records.is_empty() {
        out.push_str("  records {\n");
        for r in &record.records {
            let _ = writeln!(out, "    {}", format_record(r));
        }
        out.push_str("  }\n");
    }
    let mut items: Vec<&str> = Vec::new();
    for h in &record.hazards {
        if !items.contains(&h.item.as_str()) {
            items.push(&h.item);
        }
    }
    for item in items {
        let _ = writeln!(out, "  hazards |{item}| {{");
        for h in record.hazards.iter().filter(|h| h.item == item) {
            let _ = writeln!(out, "    {}", format_hazard(h));
        }
        out.push_str("  }\n");
    }
}

pub(crate) fn session_header(record: &ElicitationRecord) -> String {
    let mut header = format!("elicitation {}", quote(&record.responsibility));
    if let Some(by) = &record.by {
        let _ = write!(header, " by {}", quote(by));
    }
    if let Some(date) = &record.date {
        let _ = write!(header, " date {}", quote(date));
    }
    header
}

/// Prints sessions in `.answers` syntax.
pub fn print_answers(records: &[ElicitationRecord]) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let mut body = String::new();
        write_session_body(&mut body, record);
        if body.is_empty() {
            let _ = writeln!(out, "{} {{}}", session_header(record));
        } else {
            let _ = writeln!(out, "{} {{", session_header(record));
            out.push_str(&body);
            out.push_str("}\n");
        }
    }
    out
}
