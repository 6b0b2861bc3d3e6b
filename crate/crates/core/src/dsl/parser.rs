//! Parser for `.resp` model documents.

use crate::model::ResourceKind;

use super::ast::*;
use super::cursor::{Cursor, PResult};
use super::lexer::Tok;
use super::{ParseError, ANONYMOUS_SOURCE};

const TOP_LEVEL: &[&str] = &["model", "agent", "resource", "channel", "responsibility"];

const ITEM_KEYWORDS: &str =
    "'}' or one of assigned, requires, produces, uses, precedes, note, hazard";

/// Parses a `.resp` document into its declarations.
pub fn parse_model(text: &str) -> Result<Vec<Spanned<Declaration>>, Vec<ParseError>> {
    parse_model_in(ANONYMOUS_SOURCE, text)
}

/// Like [`parse_model`], labelling spans with `file`.
pub fn parse_model_in(file: &str, text: &str) -> Result<Vec<Spanned<Declaration>>, Vec<ParseError>> {
    let mut cur = Cursor::new(file, text);
    let mut decls = Vec::new();

    if cur.at_word("model") {
        let start = cur.pos();
        match model_decl(&mut cur) {
            Ok(d) => decls.push(d),
            Err(_) => cur.recover(start, TOP_LEVEL),
        }
    }

    while !cur.at_eof() {
        let start = cur.pos();
        match declaration(&mut cur) {
            Ok(d) => decls.push(d),
            Err(_) => cur.recover(start, TOP_LEVEL),
        }
    }

    if cur.errors.is_empty() {
        Ok(decls)
    } else {
        let mut errors = cur.errors;
        errors.sort_by(|a, b| a.span.cmp(&b.span));
        Err(errors)
    }
}

fn model_decl(cur: &mut Cursor) -> PResult<Spanned<Declaration>> {
    let span = cur.expect_word("model")?;
    let name = cur.string("a model name string")?;
    Ok(Spanned::new(Declaration::Model(name.trim().to_string()), span))
}

fn declaration(cur: &mut Cursor) -> PResult<Spanned<Declaration>> {
    let span = cur.span();
    let Tok::Word(word) = cur.peek().clone() else {
        return cur.fail("one of agent, resource, channel, responsibility");
    };
    match word.as_str() {
        "agent" => {
            cur.bump();
            let name = cur.agent_ref()?;
            let kind = if cur.eat_word("kind") {
                Some(cur.parse_token("an agent kind")?)
            } else {
                None
            };
            Ok(Spanned::new(Declaration::Agent(AgentDecl { name, kind }), span))
        }
        "resource" => {
            cur.bump();
            let (name, kind) = match cur.peek().clone() {
                Tok::Physical(n) => (n, ResourceKind::Physical),
                Tok::Information(n) => (n, ResourceKind::Information),
                _ => return cur.fail("a resource reference like [VHF radio] or |Area map|"),
            };
            cur.bump();
            Ok(Spanned::new(Declaration::Resource(ResourceDecl { name, kind }), span))
        }
        "channel" => {
            cur.bump();
            let name = cur.name_string("a channel name")?;
            let medium = if cur.eat_word("medium") {
                Some(cur.any_word("a medium token such as radio or email")?.0)
            } else {
                None
            };
            let backup_of = if cur.eat_word("backup_of") {
                Some(cur.name_string("a channel name")?)
            } else {
                None
            };
            Ok(Spanned::new(
                Declaration::Channel(ChannelDecl {
                    name,
                    medium,
                    backup_of,
                }),
                span,
            ))
        }
        "responsibility" => {
            cur.bump();
            let name = cur.name_string("a responsibility name")?;
            cur.expect_lbrace()?;
            let mut items = Vec::new();
            loop {
                if cur.eat_rbrace() {
                    break;
                }
                items.push(item(cur)?);
            }
            Ok(Spanned::new(
                Declaration::Responsibility(ResponsibilityDecl { name, items }),
                span,
            ))
        }
        "model" => cur.fail("a declaration (the model name must come first and only once)"),
        _ => cur.fail("one of agent, resource, channel, responsibility"),
    }
}

fn item(cur: &mut Cursor) -> PResult<Spanned<ResponsibilityItem>> {
    let span = cur.span();
    let word = match cur.peek() {
        Tok::Word(w) => w.clone(),
        Tok::Eof => return cur.fail("'}'"),
        _ => return cur.fail(ITEM_KEYWORDS),
    };
    let item = match word.as_str() {
        "assigned" => {
            cur.bump();
            cur.expect_word("to")?;
            ResponsibilityItem::AssignedTo(cur.agent_list()?)
        }
        "requires" => {
            cur.bump();
            let resource = cur.info_ref()?;
            let sources = if cur.eat_word("from") { cur.agent_list()? } else { Vec::new() };
            let channels = if cur.eat_word("via") {
                cur.string_list("a channel name")?
            } else {
                Vec::new()
            };
            let criticality = if cur.eat_word("criticality") {
                Some(cur.severity()?)
            } else {
                None
            };
            ResponsibilityItem::Requires {
                resource,
                sources,
                channels,
                criticality,
            }
        }
        "produces" => {
            cur.bump();
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
            ResponsibilityItem::Produces {
                resource,
                channels,
                rationale,
            }
        }
        "uses" => {
            cur.bump();
            ResponsibilityItem::Uses(cur.physical_ref()?)
        }
        "precedes" => {
            cur.bump();
            ResponsibilityItem::Precedes(cur.name_string("a responsibility name")?)
        }
        "note" => {
            cur.bump();
            ResponsibilityItem::Note(cur.string("a note string")?)
        }
        "hazard" => {
            cur.bump();
            let item = cur.info_ref()?;
            let guide_word = cur.guide_word()?;
            let consequence = cur.string("a consequence string")?;
            let severity = if cur.eat_word("severity") {
                cur.severity()?
            } else {
                Default::default()
            };
            let mitigation = if cur.eat_word("mitigation") {
                Some(cur.any_word("a requirement id")?.0)
            } else {
                None
            };
            ResponsibilityItem::Hazard {
                item,
                guide_word,
                consequence,
                severity,
                mitigation,
            }
        }
        "responsibility" => return cur.fail("'}' (responsibility blocks cannot be nested)"),
        _ => return cur.fail(ITEM_KEYWORDS),
    };
    Ok(Spanned::new(item, span))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::SourceSpan;
    use crate::hazards::GuideWord;
    use crate::model::{AgentKind, Severity};

    fn nodes(text: &str) -> Vec<Declaration> {
        parse_model(text)
            .unwrap_or_else(|e| panic!("{e:?}"))
            .into_iter()
            .map(|d| d.node)
            .collect()
    }

    #[test]
    fn model_name_only() {
        assert_eq!(nodes(r#"model "M""#), vec![Declaration::Model("M".into())]);
    }

    #[test]
    fn empty_document() {
        assert_eq!(nodes("  # nothing\n"), vec![]);
    }

    #[test]
    fn broadcast_responsibility() {
        let decls = nodes(
            r#"
            responsibility "Broadcast safety information" {
              assigned to <MRCC Clyde>
              uses [VHF radio]
              uses [MF radio]
            }"#,
        );
        assert_eq!(decls.len(), 1);
        let Declaration::Responsibility(r) = &decls[0] else { panic!() };
        assert_eq!(r.name, "Broadcast safety information");
        let items: Vec<_> = r.items.iter().map(|i| i.node.clone()).collect();
        assert_eq!(
            items,
            vec![
                ResponsibilityItem::AssignedTo(vec!["MRCC Clyde".into()]),
                ResponsibilityItem::Uses("VHF radio".into()),
                ResponsibilityItem::Uses("MF radio".into()),
            ]
        );
    }

    #[test]
    fn all_clauses() {
        let decls = nodes(
            r#"model "Full"
            agent <Police> kind organization
            agent <Duty officer> kind role
            resource [Boat]
            resource |Map|
            channel "Radio" medium radio
            channel "SMS" medium sms backup_of "Radio"
            responsibility "A" {
              requires |Map| from <Police>, <Duty officer> via "Radio", "SMS" criticality high
              produces |Log| via "Radio" rationale "audit"
              precedes "B"
              note "free text"
              hazard |Map| late "delay" severity medium mitigation REQ-3
            }
            responsibility "B" {}
            "#,
        );
        assert_eq!(decls.len(), 9);
        assert_eq!(
            decls[2],
            Declaration::Agent(AgentDecl {
                name: "Duty officer".into(),
                kind: Some(AgentKind::Role)
            })
        );
        assert_eq!(
            decls[6],
            Declaration::Channel(ChannelDecl {
                name: "SMS".into(),
                medium: Some("sms".into()),
                backup_of: Some("Radio".into())
            })
        );
        let Declaration::Responsibility(r) = &decls[7] else { panic!() };
        assert_eq!(
            r.items[0].node,
            ResponsibilityItem::Requires {
                resource: "Map".into(),
                sources: vec!["Police".into(), "Duty officer".into()],
                channels: vec!["Radio".into(), "SMS".into()],
                criticality: Some(Severity::High),
            }
        );
        assert_eq!(
            r.items[4].node,
            ResponsibilityItem::Hazard {
                item: "Map".into(),
                guide_word: GuideWord::Late,
                consequence: "delay".into(),
                severity: Severity::Medium,
                mitigation: Some("REQ-3".into()),
            }
        );
    }

    #[test]
    fn unterminated_block_reports_missing_brace() {
        let errors = parse_model("responsibility \"X\" {").unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].expected, "'}'");
        assert_eq!(errors[0].found, "end of file");
        assert_eq!(errors[0].to_string(), "<input>:1:21: error: expected '}', found end of file");
    }

    #[test]
    fn nested_blocks_are_rejected() {
        let errors = parse_model("responsibility \"A\" {\n  responsibility \"B\" {}\n}").unwrap_err();
        assert_eq!(errors.len(), 1);
        assert!(errors[0].expected.contains("cannot be nested"));
        assert_eq!(errors[0].span, SourceSpan::new("<input>", 2, 3));
    }

    #[test]
    fn unknown_keyword() {
        let errors = parse_model_in("m.resp", "actor <X>").unwrap_err();
        assert_eq!(
            errors[0].to_string(),
            "m.resp:1:1: error: expected one of agent, resource, channel, responsibility, found 'actor'"
        );
    }

    #[test]
    fn reports_first_error_of_each_declaration() {
        let text = "agent Police\nresource <X>\nresponsibility \"R\" { assigned <A> }\nagent <Ok>\nchannel \"C\" medium";
        let errors = parse_model(text).unwrap_err();
        let lines: Vec<_> = errors.iter().map(|e| e.span.line).collect();
        assert_eq!(lines, vec![1, 2, 3, 5]);
    }

    #[test]
    fn unclosed_string_is_reported_once() {
        let errors = parse_model("responsibility \"R {\n}").unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].found, "end of line");
    }

    #[test]
    fn bad_severity_lists_legal_tokens() {
        let errors = parse_model("responsibility \"R\" { requires |X| criticality severe }").unwrap_err();
        assert_eq!(errors[0].expected, "a severity (one of none, low, medium, high, critical)");
    }

    #[test]
    fn second_model_declaration_is_an_error() {
        assert!(parse_model("model \"A\"\nmodel \"B\"").is_err());
    }

    #[test]
    fn parsing_is_deterministic() {
        let text = "model \"M\"\nresponsibility \"R\" { assigned to <A>, <B> }";
        assert_eq!(parse_model(text), parse_model(text));
    }
}
