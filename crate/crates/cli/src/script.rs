//! The script language: lexer, parser, scope checker and printer.
//!
//! One statement per line; `#` starts a comment.
//!
//! ```text
//! group PT free x, h
//! hom pi41 : PT -> Z4 { x -> 1, h -> 1 }
//! sub G41 = kernel pi41
//! sub L = < h, h x h x^-2, (x h x) h^-1 (x h x)^-1 >
//! diamond D = G41 ^ L
//! analyze G41
//! surface build-tetrus
//! verify theorem1
//! ```

use std::collections::HashMap;
use std::fmt;

use coverbench::word::WordExpr;
use serde::Serialize;

/// Byte range in the source with its 1-based line and column.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

/// An identifier with its source location. Equality ignores the location.
#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Ident {}

/// A word literal; equality ignores the location.
#[derive(Debug, Clone)]
pub struct WordLit {
    pub expr: WordExpr,
    pub span: Span,
}

impl PartialEq for WordLit {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl Eq for WordLit {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Group {
        id: Ident,
        gens: Vec<Ident>,
    },
    Hom {
        id: Ident,
        group: Ident,
        modulus: u64,
        images: Vec<(Ident, i64)>,
    },
    Kernel {
        id: Ident,
        hom: Ident,
    },
    Generated {
        id: Ident,
        words: Vec<WordLit>,
    },
    Diamond {
        id: Ident,
        left: Ident,
        right: Ident,
    },
    Analyze {
        sub: Ident,
    },
    Surface {
        action: Ident,
    },
    Verify {
        target: Ident,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Stmt>,
}

impl Script {
    /// Appends `verify theorem1` unless the script already ends with it.
    pub fn push_verify(&mut self) {
        if !matches!(self.statements.last(), Some(Stmt::Verify { .. })) {
            self.statements.push(Stmt::Verify {
                target: Ident {
                    name: VERIFY_TARGETS[0].to_string(),
                    span: Span::default(),
                },
            });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Scope,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Lexical => "lexical",
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::Scope => "scope",
        };
        write!(
            f,
            "{}:{}: {kind} error: {} (at `{}`)",
            self.line, self.column, self.message, self.token
        )
    }
}

pub const SURFACE_ACTIONS: [&str; 1] = ["build-tetrus"];
pub const VERIFY_TARGETS: [&str; 1] = ["theorem1"];

/// Longest expanded word accepted in a literal.
const MAX_WORD_LEN: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Arrow,
    Colon,
    Comma,
    Eq,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Caret,
    Newline,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
    text: String,
}

fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    let span = |s: usize, e: usize, line: usize, ls: usize| Span {
        start: s,
        end: e,
        line,
        column: src[ls..s].chars().count() + 1,
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b'\n' => {
                i += 1;
                Tok::Newline
            }
            b' ' | b'\t' | b'\r' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'-' | b'+' | b'0'..=b'9' => {
                i += 1;
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if c.is_ascii_digit() {
                    // already consumed the first digit
                } else if i == digits {
                    return Err(Diagnostic {
                        kind: DiagnosticKind::Lexical,
                        line,
                        column: span(start, i, line, line_start).column,
                        token: src[start..i].to_string(),
                        message: "sign without digits".into(),
                    });
                }
                match src[start..i].parse::<i64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => {
                        return Err(Diagnostic {
                            kind: DiagnosticKind::Lexical,
                            line,
                            column: span(start, i, line, line_start).column,
                            token: src[start..i].to_string(),
                            message: "integer out of range".into(),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() {
                    let d = bytes[i];
                    let hyphenated = d == b'-' && bytes.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic());
                    if d.is_ascii_alphanumeric() || d == b'_' || d == b'\'' || hyphenated {
                        i += 1;
                    } else {
                        break;
                    }
                }
                Tok::Ident(src[start..i].to_string())
            }
            b':' => {
                i += 1;
                Tok::Colon
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'=' => {
                i += 1;
                Tok::Eq
            }
            b'{' => {
                i += 1;
                Tok::LBrace
            }
            b'}' => {
                i += 1;
                Tok::RBrace
            }
            b'<' => {
                i += 1;
                Tok::LAngle
            }
            b'>' => {
                i += 1;
                Tok::RAngle
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'^' => {
                i += 1;
                Tok::Caret
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Diagnostic {
                    kind: DiagnosticKind::Lexical,
                    line,
                    column: span(start, i, line, line_start).column,
                    token: ch.to_string(),
                    message: "unexpected character".into(),
                });
            }
        };
        out.push(Token {
            tok: tok.clone(),
            span: span(start, i, line, line_start),
            text: src[start..i].to_string(),
        });
        if tok == Tok::Newline {
            line += 1;
            line_start = i;
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(bytes.len(), bytes.len(), line, line_start),
        text: String::new(),
    });
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            kind: DiagnosticKind::Syntax,
            line: t.span.line,
            column: t.span.column,
            token: if t.tok == Tok::Eof {
                "end of input".into()
            } else if t.tok == Tok::Newline {
                "end of line".into()
            } else {
                t.text.clone()
            },
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, Diagnostic> {
        if self.peek().tok == want {
            Ok(self.bump())
        } else {
            Err(self.error_at(self.peek(), format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, Diagnostic> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                let t = self.bump();
                Ok(Ident { name, span: t.span })
            }
            _ => Err(self.error_at(self.peek(), format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match &self.peek().tok {
            Tok::Ident(name) if name == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error_at(self.peek(), format!("expected `{kw}`"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, Diagnostic> {
        match self.peek().tok {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.error_at(self.peek(), format!("expected {what}"))),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), Diagnostic> {
        match self.peek().tok {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.error_at(self.peek(), "expected end of line")),
        }
    }

    fn statement(&mut self) -> Result<Stmt, Diagnostic> {
        let head = self.peek().clone();
        let Tok::Ident(kw) = &head.tok else {
            return Err(self.error_at(&head, "expected a statement keyword"));
        };
        let stmt = match kw.as_str() {
            "group" => {
                self.bump();
                let id = self.ident("a group name")?;
                self.keyword("free")?;
                let mut gens = vec![self.ident("a generator")?];
                loop {
                    if self.peek().tok == Tok::Comma {
                        self.bump();
                    }
                    match self.peek().tok {
                        Tok::Ident(_) => gens.push(self.ident("a generator")?),
                        _ => break,
                    }
                }
                Stmt::Group { id, gens }
            }
            "hom" => {
                self.bump();
                let id = self.ident("a homomorphism name")?;
                self.expect(Tok::Colon, "`:`")?;
                let group = self.ident("a group name")?;
                self.expect(Tok::Arrow, "`->`")?;
                let target = self.peek().clone();
                let modulus = match &target.tok {
                    Tok::Ident(z) if z.len() > 1 && z.starts_with('Z') => z[1..]
                        .parse::<u64>()
                        .ok()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| self.error_at(&target, "expected a cyclic group `Z<n>` with n >= 1"))?,
                    _ => return Err(self.error_at(&target, "expected a cyclic group `Z<n>`")),
                };
                self.bump();
                self.expect(Tok::LBrace, "`{`")?;
                let mut images = Vec::new();
                if self.peek().tok != Tok::RBrace {
                    loop {
                        let g = self.ident("a generator")?;
                        self.expect(Tok::Arrow, "`->`")?;
                        let r = self.int("an integer image")?;
                        images.push((g, r));
                        if self.peek().tok == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                Stmt::Hom {
                    id,
                    group,
                    modulus,
                    images,
                }
            }
            "sub" => {
                self.bump();
                let id = self.ident("a subgroup name")?;
                self.expect(Tok::Eq, "`=`")?;
                match &self.peek().tok {
                    Tok::Ident(k) if k == "kernel" => {
                        self.bump();
                        let hom = self.ident("a homomorphism name")?;
                        Stmt::Kernel { id, hom }
                    }
                    Tok::LAngle => {
                        self.bump();
                        let words = self.word_list()?;
                        Stmt::Generated { id, words }
                    }
                    _ => return Err(self.error_at(self.peek(), "expected `kernel` or `<`")),
                }
            }
            "diamond" => {
                self.bump();
                let id = self.ident("a subgroup name")?;
                self.expect(Tok::Eq, "`=`")?;
                let left = self.ident("a subgroup name")?;
                self.expect(Tok::Caret, "`^`")?;
                let right = self.ident("a subgroup name")?;
                Stmt::Diamond { id, left, right }
            }
            "analyze" => {
                self.bump();
                Stmt::Analyze {
                    sub: self.ident("a subgroup name")?,
                }
            }
            "surface" => {
                self.bump();
                Stmt::Surface {
                    action: self.ident("a surface action")?,
                }
            }
            "verify" => {
                self.bump();
                Stmt::Verify {
                    target: self.ident("a verification target")?,
                }
            }
            _ => return Err(self.error_at(&head, "unknown statement")),
        };
        self.end_of_statement()?;
        Ok(stmt)
    }

    /// Comma-separated words up to the closing `>`; each word is handed to
    /// the word-expression parser.
    fn word_list(&mut self) -> Result<Vec<WordLit>, Diagnostic> {
        let mut words = Vec::new();
        let mut depth = 0i32;
        let mut first: Option<Token> = None;
        let mut last: Option<Token> = None;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Comma | Tok::RAngle if depth == 0 => {
                    let (Some(a), Some(b)) = (first.take(), last.take()) else {
                        return Err(self.error_at(&t, "expected a word"));
                    };
                    words.push(self.word(&a, &b)?);
                    self.bump();
                    if t.tok == Tok::RAngle {
                        return Ok(words);
                    }
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::Caret | Tok::LParen | Tok::RParen => {
                    match t.tok {
                        Tok::LParen => depth += 1,
                        Tok::RParen => {
                            depth -= 1;
                            if depth < 0 {
                                return Err(self.error_at(&t, "unbalanced `)`"));
                            }
                        }
                        _ => {}
                    }
                    if first.is_none() {
                        first = Some(t.clone());
                    }
                    last = Some(t);
                    self.bump();
                }
                _ => return Err(self.error_at(&t, "expected a word, `,` or `>`")),
            }
        }
    }

    fn word(&self, first: &Token, last: &Token) -> Result<WordLit, Diagnostic> {
        let text = &self.src[first.span.start..last.span.end];
        let span = Span {
            end: last.span.end,
            ..first.span
        };
        let expr = WordExpr::parse(text).map_err(|e| {
            let offset = match &e {
                coverbench::word::WordError::Syntax { pos, .. } => *pos,
                _ => 0,
            };
            let bad = self.src[first.span.start + offset..last.span.end]
                .split_whitespace()
                .next()
                .unwrap_or(text)
                .to_string();
            Diagnostic {
                kind: DiagnosticKind::Syntax,
                line: span.line,
                column: span.column + text[..offset].chars().count(),
                token: bad,
                message: e.to_string(),
            }
        })?;
        if expanded_len(&expr) > MAX_WORD_LEN {
            return Err(Diagnostic {
                kind: DiagnosticKind::Syntax,
                line: span.line,
                column: span.column,
                token: text.to_string(),
                message: format!("word expands to more than {MAX_WORD_LEN} letters"),
            });
        }
        Ok(WordLit { expr, span })
    }
}

fn expanded_len(e: &WordExpr) -> u64 {
    match e {
        WordExpr::Atom { exp, .. } => exp.unsigned_abs(),
        WordExpr::Group { parts, exp } => parts
            .iter()
            .map(expanded_len)
            .fold(0u64, u64::saturating_add)
            .saturating_mul(exp.unsigned_abs()),
    }
}

fn scope_error(id: &Ident, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::Scope,
        line: id.span.line,
        column: id.span.column,
        token: id.name.clone(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Group,
    Hom,
    Sub,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Hom => "homomorphism",
            Kind::Sub => "subgroup",
        }
    }
}

/// Declaration-before-use, no redeclaration, and kind checks.
fn check(script: &Script) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut env: HashMap<String, Kind> = HashMap::new();
    let mut generators: HashMap<String, Vec<String>> = HashMap::new();
    let mut all_gens: Vec<String> = Vec::new();
    let use_as = |env: &HashMap<String, Kind>, id: &Ident, want: Kind, diags: &mut Vec<Diagnostic>| {
        match env.get(&id.name) {
            None => diags.push(scope_error(id, format!("{} `{}` is not declared", want.name(), id.name))),
            Some(&k) if k != want => diags.push(scope_error(
                id,
                format!("`{}` is a {}, not a {}", id.name, k.name(), want.name()),
            )),
            _ => {}
        }
    };
    let declare = |env: &mut HashMap<String, Kind>, id: &Ident, k: Kind, diags: &mut Vec<Diagnostic>| {
        if env.contains_key(&id.name) {
            diags.push(scope_error(id, format!("`{}` is already declared", id.name)));
        } else {
            env.insert(id.name.clone(), k);
        }
    };
    for stmt in &script.statements {
        match stmt {
            Stmt::Group { id, gens } => {
                let mut names: Vec<String> = Vec::new();
                let before = diags.len();
                for g in gens {
                    if names.contains(&g.name) {
                        diags.push(scope_error(g, format!("generator `{}` listed twice", g.name)));
                    } else if !["x", "h"].contains(&g.name.as_str()) {
                        diags.push(scope_error(g, "only the free generators `x` and `h` are supported"));
                    }
                    names.push(g.name.clone());
                }
                if diags.len() == before && names.len() != 2 {
                    diags.push(scope_error(id, "the group must be free on `x` and `h`"));
                }
                declare(&mut env, id, Kind::Group, &mut diags);
                for n in &names {
                    if !all_gens.contains(n) {
                        all_gens.push(n.clone());
                    }
                }
                generators.insert(id.name.clone(), names);
            }
            Stmt::Hom { id, group, images, .. } => {
                use_as(&env, group, Kind::Group, &mut diags);
                if let Some(gens) = generators.get(&group.name) {
                    let mut seen: Vec<&str> = Vec::new();
                    for (g, _) in images {
                        if !gens.contains(&g.name) {
                            diags.push(scope_error(g, format!("`{}` is not a generator of `{}`", g.name, group.name)));
                        } else if seen.contains(&g.name.as_str()) {
                            diags.push(scope_error(g, format!("`{}` is assigned twice", g.name)));
                        }
                        seen.push(&g.name);
                    }
                    for g in gens {
                        if !seen.contains(&g.as_str()) {
                            diags.push(scope_error(id, format!("no image given for `{g}`")));
                        }
                    }
                }
                declare(&mut env, id, Kind::Hom, &mut diags);
            }
            Stmt::Kernel { id, hom } => {
                use_as(&env, hom, Kind::Hom, &mut diags);
                declare(&mut env, id, Kind::Sub, &mut diags);
            }
            Stmt::Generated { id, words } => {
                for w in words {
                    for name in w.expr.identifiers() {
                        if !all_gens.iter().any(|g| g == name) {
                            let at = Ident {
                                name: name.to_string(),
                                span: w.span,
                            };
                            diags.push(scope_error(&at, format!("generator `{name}` is not declared by any group")));
                        }
                    }
                }
                declare(&mut env, id, Kind::Sub, &mut diags);
            }
            Stmt::Diamond { id, left, right } => {
                use_as(&env, left, Kind::Sub, &mut diags);
                use_as(&env, right, Kind::Sub, &mut diags);
                declare(&mut env, id, Kind::Sub, &mut diags);
            }
            Stmt::Analyze { sub } => use_as(&env, sub, Kind::Sub, &mut diags),
            Stmt::Surface { action } => {
                if !SURFACE_ACTIONS.contains(&action.name.as_str()) {
                    diags.push(scope_error(action, format!("unknown surface action; expected one of {SURFACE_ACTIONS:?}")));
                }
            }
            Stmt::Verify { target } => {
                if !VERIFY_TARGETS.contains(&target.name.as_str()) {
                    diags.push(scope_error(target, format!("unknown verification target; expected one of {VERIFY_TARGETS:?}")));
                }
            }
        }
    }
    diags
}

/// Parses and scope-checks a script. Syntax errors stop at the first
/// problem in a statement and resume on the next line.
pub fn parse_script(src: &str) -> Result<Script, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { src, toks, pos: 0 };
    let mut statements = Vec::new();
    let mut diags = Vec::new();
    loop {
        while p.peek().tok == Tok::Newline {
            p.bump();
        }
        if p.peek().tok == Tok::Eof {
            break;
        }
        match p.statement() {
            Ok(s) => statements.push(s),
            Err(d) => {
                diags.push(d);
                while !matches!(p.peek().tok, Tok::Newline | Tok::Eof) {
                    p.bump();
                }
            }
        }
    }
    let script = Script { statements };
    if diags.is_empty() {
        diags = check(&script);
    }
    if diags.is_empty() {
        Ok(script)
    } else {
        Err(diags)
    }
}

fn join(ids: &[Ident]) -> String {
    ids.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Group { id, gens } => write!(f, "group {} free {}", id.name, join(gens)),
            Stmt::Hom {
                id,
                group,
                modulus,
                images,
            } => {
                let body = images
                    .iter()
                    .map(|(g, r)| format!("{} -> {r}", g.name))
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "hom {} : {} -> Z{modulus} {{ {body} }}", id.name, group.name)
            }
            Stmt::Kernel { id, hom } => write!(f, "sub {} = kernel {}", id.name, hom.name),
            Stmt::Generated { id, words } => {
                let body = words
                    .iter()
                    .map(|w| w.expr.to_source())
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "sub {} = < {body} >", id.name)
            }
            Stmt::Diamond { id, left, right } => {
                write!(f, "diamond {} = {} ^ {}", id.name, left.name, right.name)
            }
            Stmt::Analyze { sub } => write!(f, "analyze {}", sub.name),
            Stmt::Surface { action } => write!(f, "surface {}", action.name),
            Stmt::Verify { target } => write!(f, "verify {}", target.name),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coverbench::word::{FreeWord, Letter};

    fn resolve(w: &WordLit) -> FreeWord {
        w.expr
            .resolve(|n| match n {
                "x" => Some(Letter::ALL[0]),
                "h" => Some(Letter::ALL[2]),
                _ => None,
            })
            .unwrap()
    }

    #[test]
    fn hom_statement() {
        let s = parse_script("group PT free x, h\nhom pi41 : PT -> Z4 { x -> 1, h -> 1 }\n").unwrap();
        match &s.statements[1] {
            Stmt::Hom { modulus, images, .. } => {
                assert_eq!(*modulus, 4);
                assert_eq!(images.iter().map(|(g, r)| (g.name.as_str(), *r)).collect::<Vec<_>>(), [("x", 1), ("h", 1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_and_comments() {
        assert_eq!(parse_script("").unwrap(), Script::default());
        assert_eq!(parse_script("# nothing\n\n   \n").unwrap(), Script::default());
    }

    #[test]
    fn lambda_words() {
        let s = parse_script("group PT free x h\nsub L = < h, h x h x^-2, (x h x) h^-1 (x h x)^-1 >").unwrap();
        let Stmt::Generated { words, .. } = &s.statements[1] else { panic!() };
        let got: Vec<FreeWord> = words.iter().map(resolve).collect();
        let want: Vec<FreeWord> = ["h", "h x h x^-2", "x h x h^-1 x^-1 h^-1 x^-1"]
            .iter()
            .map(|t| FreeWord::parse(t).unwrap())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn round_trip() {
        let src = "group PT free x, h\nhom p : PT -> Z4 { x -> 1, h -> -3 }\nsub K = kernel p\nsub L = < h, (x h)^2 x^-1 >\ndiamond D = K ^ L\nanalyze D\nsurface build-tetrus\nverify theorem1\n";
        let s = parse_script(src).unwrap();
        let printed = s.to_string();
        assert_eq!(printed, src);
        assert_eq!(parse_script(&printed).unwrap(), s);
    }

    #[test]
    fn diagnostics_have_positions() {
        let d = parse_script("group PT free x, h\nhom p : PT -> Q4 { x -> 1 }").unwrap_err();
        assert_eq!((d[0].line, d[0].column, d[0].token.as_str()), (2, 15, "Q4"));
        let d = parse_script("analyze G").unwrap_err();
        assert_eq!((d[0].kind, d[0].token.as_str()), (DiagnosticKind::Scope, "G"));
        let d = parse_script("group G free x, h\ngroup G free x, h").unwrap_err();
        assert_eq!((d[0].line, d[0].message.contains("already")), (2, true));
        let d = parse_script("group G free x, h\nsub L = < x $ h >").unwrap_err();
        assert_eq!((d[0].kind, d[0].token.as_str()), (DiagnosticKind::Lexical, "$"));
        let d = parse_script("group G free x, h\nsub L = < x, y >").unwrap_err();
        assert_eq!(d[0].token, "y");
        let d = parse_script("group G free x, h\nsub L = < x^99999999 >").unwrap_err();
        assert!(d[0].message.contains("expands"));
        let d = parse_script("group G free x, h\nhom p : G -> Z2 { x -> 1 }").unwrap_err();
        assert!(d[0].message.contains("no image"));
    }
}
