use std::fmt;

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Keyword or bare token (`[A-Za-z0-9_][A-Za-z0-9_.-]*`).
    Word(String),
    Str(String),
    Agent(String),
    Physical(String),
    Information(String),
    LBrace,
    RBrace,
    Comma,
    /// Stands in for text the lexer already reported as an error.
    Invalid,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "'{w}'"),
            Tok::Str(s) => write!(f, "string \"{s}\""),
            Tok::Agent(n) => write!(f, "<{n}>"),
            Tok::Physical(n) => write!(f, "[{n}]"),
            Tok::Information(n) => write!(f, "|{n}|"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Comma => f.write_str("','"),
            Tok::Invalid => f.write_str("invalid input"),
            Tok::Eof => f.write_str("end of file"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    file: &'a str,
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    errors: Vec<ParseError>,
}

impl<'a> Lexer<'a> {
    fn span(&self) -> SourceSpan {
        SourceSpan::new(self.file, self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&mut self, span: SourceSpan, expected: &str, found: impl Into<String>) {
        self.errors.push(ParseError::new(span, expected, found));
    }

    /// Reads a bracketed name up to `close`. Names may not span lines.
    fn bracketed(&mut self, start: SourceSpan, open: char, close: char) -> Tok {
        let mut name = String::new();
        loop {
            match self.chars.peek().copied() {
                Some(c) if c == close => {
                    self.bump();
                    break;
                }
                Some('\n') | None => {
                    let found = if self.chars.peek().is_some() { "end of line" } else { "end of file" };
                    let span = self.span();
                    self.error(span, &format!("'{close}' to close '{open}'"), found);
                    return Tok::Invalid;
                }
                Some(c) => {
                    self.bump();
                    name.push(c);
                }
            }
        }
        let trimmed = name.trim();
        if trimmed.is_empty() {
            self.error(start, &format!("a name between '{open}' and '{close}'"), "empty name");
            return Tok::Invalid;
        }
        let name = trimmed.to_string();
        match open {
            '<' => Tok::Agent(name),
            '[' => Tok::Physical(name),
            _ => Tok::Information(name),
        }
    }

    fn string(&mut self) -> Tok {
        let mut value = String::new();
        loop {
            match self.chars.peek().copied() {
                Some('"') => {
                    self.bump();
                    return Tok::Str(value);
                }
                Some('\\') => {
                    let esc_span = self.span();
                    self.bump();
                    match self.chars.peek().copied() {
                        Some(c @ ('"' | '\\')) => {
                            self.bump();
                            value.push(c);
                        }
                        Some(c) if c != '\n' => {
                            self.bump();
                            self.error(esc_span, "'\\\"' or '\\\\'", format!("'\\{c}'"));
                        }
                        _ => {}
                    }
                }
                Some('\n') | None => {
                    let found = if self.chars.peek().is_some() { "end of line" } else { "end of file" };
                    let span = self.span();
                    self.error(span, "'\"' to close string", found);
                    return Tok::Invalid;
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
    }

    fn run(mut self) -> (Vec<Token>, Vec<ParseError>) {
        let mut tokens = Vec::new();
        while let Some(c) = self.chars.peek().copied() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
                continue;
            }
            let span = self.span();
            let tok = match c {
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '"' => {
                    self.bump();
                    self.string()
                }
                '<' => {
                    self.bump();
                    self.bracketed(span.clone(), '<', '>')
                }
                '[' => {
                    self.bump();
                    self.bracketed(span.clone(), '[', ']')
                }
                '|' => {
                    self.bump();
                    self.bracketed(span.clone(), '|', '|')
                }
                c if is_word_start(c) => {
                    let mut word = String::new();
                    while let Some(c) = self.chars.peek().copied().filter(|&c| is_word_char(c)) {
                        self.bump();
                        word.push(c);
                    }
                    Tok::Word(word)
                }
                other => {
                    self.bump();
                    self.error(span.clone(), "a keyword, name or string", format!("'{other}'"));
                    Tok::Invalid
                }
            };
            tokens.push(Token { tok, span });
        }
        tokens.push(Token {
            tok: Tok::Eof,
            span: self.span(),
        });
        (tokens, self.errors)
    }
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// True when `s` lexes as a single bare word.
pub(crate) fn is_word(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_word_start) && chars.all(is_word_char)
}

pub(crate) fn tokenize(file: &str, text: &str) -> (Vec<Token>, Vec<ParseError>) {
    Lexer {
        file,
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
        errors: Vec::new(),
    }
    .run()
}
