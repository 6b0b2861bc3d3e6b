//! Token cursor shared by the three document parsers.

use std::str::FromStr;

use crate::hazards::GuideWord;
use crate::model::{Severity, UnknownToken};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};

/// Marker for "an error was recorded; resynchronise".
pub(crate) struct Abort;

pub(crate) type PResult<T> = Result<T, Abort>;

pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    pub(crate) errors: Vec<ParseError>,
}

impl Cursor {
    pub(crate) fn new(file: &str, text: &str) -> Self {
        let (tokens, errors) = tokenize(file, text);
        Cursor {
            tokens,
            pos: 0,
            depth: 0,
            errors,
        }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub(crate) fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub(crate) fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == word)
    }

    pub(crate) fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        match token.tok {
            Tok::LBrace => self.depth += 1,
            Tok::RBrace => self.depth = self.depth.saturating_sub(1),
            Tok::Eof => return token,
            _ => {}
        }
        self.pos += 1;
        token
    }

    /// Records an error at the current token. Tokens the lexer already
    /// rejected produce no second report.
    pub(crate) fn fail<T>(&mut self, expected: impl Into<String>) -> PResult<T> {
        if !matches!(self.peek(), Tok::Invalid) {
            let found = self.peek().to_string();
            self.errors.push(ParseError::new(self.span(), expected, found));
        }
        Err(Abort)
    }

    pub(crate) fn fail_at<T>(&mut self, span: SourceSpan, expected: impl Into<String>, found: impl Into<String>) -> PResult<T> {
        self.errors.push(ParseError::new(span, expected, found));
        Err(Abort)
    }

    pub(crate) fn eat_word(&mut self, word: &str) -> bool {
        if self.at_word(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_word(&mut self, word: &str) -> PResult<SourceSpan> {
        if self.at_word(word) {
            Ok(self.bump().span)
        } else {
            self.fail(format!("'{word}'"))
        }
    }

    pub(crate) fn expect_lbrace(&mut self) -> PResult<()> {
        if matches!(self.peek(), Tok::LBrace) {
            self.bump();
            Ok(())
        } else {
            self.fail("'{'")
        }
    }

    pub(crate) fn eat_rbrace(&mut self) -> bool {
        if matches!(self.peek(), Tok::RBrace) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_comma(&mut self) -> bool {
        if matches!(self.peek(), Tok::Comma) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn any_word(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        if let Tok::Word(w) = self.peek() {
            let w = w.clone();
            Ok((w, self.bump().span))
        } else {
            self.fail(what)
        }
    }

    pub(crate) fn string(&mut self, what: &str) -> PResult<String> {
        if let Tok::Str(s) = self.peek() {
            let s = s.clone();
            self.bump();
            Ok(s)
        } else {
            self.fail(what)
        }
    }

    /// A quoted name: trimmed and non-empty.
    pub(crate) fn name_string(&mut self, what: &str) -> PResult<String> {
        let span = self.span();
        let s = self.string(what)?;
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return self.fail_at(span, format!("non-empty {what}"), "empty string");
        }
        Ok(trimmed.to_string())
    }

    pub(crate) fn agent_ref(&mut self) -> PResult<String> {
        if let Tok::Agent(n) = self.peek() {
            let n = n.clone();
            self.bump();
            Ok(n)
        } else {
            self.fail("an agent reference like <Police>")
        }
    }

    pub(crate) fn physical_ref(&mut self) -> PResult<String> {
        if let Tok::Physical(n) = self.peek() {
            let n = n.clone();
            self.bump();
            Ok(n)
        } else {
            self.fail("a physical resource reference like [VHF radio]")
        }
    }

    pub(crate) fn info_ref(&mut self) -> PResult<String> {
        if let Tok::Information(n) = self.peek() {
            let n = n.clone();
            self.bump();
            Ok(n)
        } else {
            self.fail("an information resource reference like |Area map|")
        }
    }

    pub(crate) fn agent_list(&mut self) -> PResult<Vec<String>> {
        let mut names = vec![self.agent_ref()?];
        while self.eat_comma() {
            names.push(self.agent_ref()?);
        }
        Ok(names)
    }

    pub(crate) fn string_list(&mut self, what: &str) -> PResult<Vec<String>> {
        let mut names = vec![self.name_string(what)?];
        while self.eat_comma() {
            names.push(self.name_string(what)?);
        }
        Ok(names)
    }

    fn token_of<T: FromStr<Err = UnknownToken>>(&mut self, what: &str) -> PResult<T> {
        let span = self.span();
        let (word, _) = self.any_word(what)?;
        match word.parse() {
            Ok(value) => Ok(value),
            Err(err) => self.fail_at(
                span,
                format!("{what} (one of {})", err.legal.join(", ")),
                format!("'{word}'"),
            ),
        }
    }

    pub(crate) fn severity(&mut self) -> PResult<Severity> {
        self.token_of("a severity")
    }

    pub(crate) fn guide_word(&mut self) -> PResult<GuideWord> {
        self.token_of("a guide word")
    }

    pub(crate) fn parse_token<T: FromStr<Err = UnknownToken>>(&mut self, what: &str) -> PResult<T> {
        self.token_of(what)
    }

    /// Skips to the next top-level keyword outside any braces, or to EOF.
    pub(crate) fn synchronize(&mut self, top_level: &[&str]) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Word(w) if self.depth == 0 && top_level.contains(&w.as_str()) => return,
                _ => {
                    self.bump();
                }
            }
        }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    /// Error recovery for a declaration that began at `start`: guarantees
    /// progress, then skips to the next top-level keyword.
    pub(crate) fn recover(&mut self, start: usize, top_level: &[&str]) {
        if self.pos == start {
            self.bump();
        }
        self.synchronize(top_level);
    }
}
