//! A standalone reader for the Graphviz DOT language, used to check that
//! emitted graphs are well formed. Follows the published grammar:
//!
//! ```text
//! graph     : [strict] (graph | digraph) [ID] '{' stmt_list '}'
//! stmt_list : [stmt [';'] stmt_list]
//! stmt      : node_stmt | edge_stmt | attr_stmt | ID '=' ID | subgraph
//! attr_stmt : (graph | node | edge) attr_list
//! attr_list : '[' [a_list] ']' [attr_list]
//! a_list    : ID '=' ID [(';' | ',')] [a_list]
//! edge_stmt : (node_id | subgraph) edgeRHS [attr_list]
//! edgeRHS   : edgeop (node_id | subgraph) [edgeRHS]
//! node_stmt : node_id [attr_list]
//! node_id   : ID [port]
//! port      : ':' ID [':' compass_pt] | ':' compass_pt
//! subgraph  : [subgraph [ID]] '{' stmt_list '}'
//! ```

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Colon,
    Arrow,
    Line,
}

pub type Attrs = BTreeMap<String, String>;

#[derive(Debug, Default)]
pub struct Graph {
    pub directed: bool,
    pub name: Option<String>,
    pub nodes: BTreeMap<String, Attrs>,
    pub edges: Vec<(String, String, Attrs)>,
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '#' if i == 0 || chars[i - 1] == '\n' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                while i + 1 < chars.len() && !(chars[i] == '*' && chars[i + 1] == '/') {
                    i += 1;
                }
                if i + 1 >= chars.len() {
                    return Err("unterminated comment".into());
                }
                i += 2;
            }
            '{' => {
                out.push(Tok::LBrace);
                i += 1;
            }
            '}' => {
                out.push(Tok::RBrace);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1;
            }
            ';' => {
                out.push(Tok::Semi);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            ':' => {
                out.push(Tok::Colon);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Tok::Arrow);
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                out.push(Tok::Line);
                i += 2;
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'\\') => {
                            s.push('\\');
                            i += 2;
                        }
                        Some(&c) => {
                            s.push(c);
                            i += 1;
                        }
                    }
                }
                out.push(Tok::Id(s));
            }
            '<' => {
                let mut depth = 0;
                let start = i;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated HTML string".into()),
                        Some('<') => depth += 1,
                        Some('>') => {
                            depth -= 1;
                            if depth == 0 {
                                i += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() || c == '_' || !c.is_ascii() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || !chars[i].is_ascii())
                {
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<Tok>,
    pos: usize,
    graph: Graph,
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), String> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(format!("expected {want:?}, found {other:?}")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            other => Err(format!("expected ID, found {other:?}")),
        }
    }

    fn is_keyword(tok: Option<&Tok>, word: &str) -> bool {
        matches!(tok, Some(Tok::Id(s)) if s.eq_ignore_ascii_case(word))
    }

    fn graph(&mut self) -> Result<(), String> {
        if Self::is_keyword(self.peek(), "strict") {
            self.next();
        }
        let kind = self.id()?;
        self.graph.directed = match kind.to_ascii_lowercase().as_str() {
            "digraph" => true,
            "graph" => false,
            _ => return Err(format!("expected graph or digraph, found {kind}")),
        };
        if let Some(Tok::Id(_)) = self.peek() {
            self.graph.name = Some(self.id()?);
        }
        self.expect(Tok::LBrace)?;
        self.stmt_list()?;
        self.expect(Tok::RBrace)?;
        if self.pos != self.toks.len() {
            return Err("trailing input after graph".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<Vec<String>, String> {
        let mut nodes = Vec::new();
        while !matches!(self.peek(), Some(Tok::RBrace) | None) {
            nodes.extend(self.stmt()?);
            if matches!(self.peek(), Some(Tok::Semi)) {
                self.next();
            }
        }
        Ok(nodes)
    }

    fn attr_list(&mut self) -> Result<Attrs, String> {
        let mut attrs = Attrs::new();
        while matches!(self.peek(), Some(Tok::LBracket)) {
            self.next();
            while !matches!(self.peek(), Some(Tok::RBracket)) {
                let key = self.id()?;
                self.expect(Tok::Eq)?;
                let value = self.id()?;
                attrs.insert(key, value);
                if matches!(self.peek(), Some(Tok::Semi | Tok::Comma)) {
                    self.next();
                }
            }
            self.next();
        }
        Ok(attrs)
    }

    fn subgraph(&mut self) -> Result<Vec<String>, String> {
        if Self::is_keyword(self.peek(), "subgraph") {
            self.next();
            if let Some(Tok::Id(_)) = self.peek() {
                self.next();
            }
        }
        self.expect(Tok::LBrace)?;
        let nodes = self.stmt_list()?;
        self.expect(Tok::RBrace)?;
        Ok(nodes)
    }

    fn node_id(&mut self) -> Result<String, String> {
        let id = self.id()?;
        if matches!(self.peek(), Some(Tok::Colon)) {
            self.next();
            self.id()?;
            if matches!(self.peek(), Some(Tok::Colon)) {
                self.next();
                self.id()?;
            }
        }
        Ok(id)
    }

    /// A node id or subgraph; returns the nodes it stands for.
    fn endpoint(&mut self) -> Result<Vec<String>, String> {
        if matches!(self.peek(), Some(Tok::LBrace)) || Self::is_keyword(self.peek(), "subgraph") {
            self.subgraph()
        } else {
            let id = self.node_id()?;
            self.graph.nodes.entry(id.clone()).or_default();
            Ok(vec![id])
        }
    }

    fn stmt(&mut self) -> Result<Vec<String>, String> {
        for kw in ["graph", "node", "edge"] {
            if Self::is_keyword(self.peek(), kw) && !matches!(self.toks.get(self.pos + 1), Some(Tok::Eq)) {
                self.next();
                self.attr_list()?;
                return Ok(Vec::new());
            }
        }
        if let (Some(Tok::Id(_)), Some(Tok::Eq)) = (self.peek(), self.toks.get(self.pos + 1)) {
            self.next();
            self.next();
            self.id()?;
            return Ok(Vec::new());
        }
        let mut chain = vec![self.endpoint()?];
        while let Some(op) = self.peek().cloned() {
            match (op, self.graph.directed) {
                (Tok::Arrow, true) | (Tok::Line, false) => {
                    self.next();
                    chain.push(self.endpoint()?);
                }
                (Tok::Arrow, false) | (Tok::Line, true) => {
                    return Err("edge operator does not match graph kind".into())
                }
                _ => break,
            }
        }
        let attrs = self.attr_list()?;
        if chain.len() == 1 {
            for n in &chain[0] {
                self.graph.nodes.entry(n.clone()).or_default().extend(attrs.clone());
            }
        } else {
            for pair in chain.windows(2) {
                for a in &pair[0] {
                    for b in &pair[1] {
                        self.graph.edges.push((a.clone(), b.clone(), attrs.clone()));
                    }
                }
            }
        }
        Ok(chain.concat())
    }
}

/// Parses a DOT document, returning its nodes and edges.
pub fn parse_dot(text: &str) -> Result<Graph, String> {
    let mut reader = Reader {
        toks: lex(text)?,
        pos: 0,
        graph: Graph::default(),
    };
    reader.graph()?;
    Ok(reader.graph)
}
