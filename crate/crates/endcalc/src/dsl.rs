//! The `.surf` surface language.
//!
//! ```text
//! # two maximal ends, each accumulated by flute ends
//! type flute = acc([puncture])
//! root acc([flute]) * 2
//! ```
//!
//! Statements are `type NAME = expr`, `root expr [* INT | * cantor]`,
//! `sub expr * INT`, `punctures INT` and `genus INT`. Type expressions are
//! `puncture`, `acc([genus,] [..])`, `cantor([genus][,] [..])`, a typedef
//! name, or the planar shorthand `omega^k * n + 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use endcalc_core::{EndType, Multiplicity, Root, Subordinate, SurfaceSpec};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}",
            self.span.line, self.span.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub const FINITE_RANK_MESSAGE: &str =
    "exponent must be a literal positive integer (finite rank only)";

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    tokens: Vec<(Tok, SourceSpan)>,
}

fn span_at(text: &str, start: usize, end: usize) -> SourceSpan {
    let before = &text[..start];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(start, |i| start - i - 1) + 1;
    SourceSpan {
        line,
        column,
        start,
        end,
    }
}

impl<'a> Lexer<'a> {
    fn run(text: &'a str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut lx = Lexer {
            text,
            tokens: Vec::new(),
        };
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = text[i..].chars().next().unwrap();
            if c == '#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else if c.is_whitespace() {
                i += c.len_utf8();
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = text[start..i].parse::<u64>().map_err(|_| ParseError {
                    message: "integer literal too large".into(),
                    span: span_at(text, start, i),
                    expected: vec![],
                })?;
                lx.push(Tok::Int(value), start, i);
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.push(Tok::Ident(text[start..i].to_string()), start, i);
            } else if "()[],=*^+-".contains(c) {
                lx.push(Tok::Sym(c), i, i + 1);
                i += 1;
            } else {
                return Err(ParseError {
                    message: format!("unexpected character `{c}`"),
                    span: span_at(text, i, i + c.len_utf8()),
                    expected: vec![],
                });
            }
        }
        lx.push(Tok::Eof, text.len(), text.len());
        Ok(lx.tokens)
    }

    fn push(&mut self, tok: Tok, start: usize, end: usize) {
        self.tokens.push((tok, span_at(self.text, start, end)));
    }
}

#[derive(Clone, Debug)]
enum TypeExpr {
    Name(String, SourceSpan),
    Puncture,
    Node {
        genus: bool,
        cantor: bool,
        children: Vec<TypeExpr>,
    },
    Tower(u32),
}

#[derive(Clone, Debug)]
enum Item {
    Typedef(String, TypeExpr, SourceSpan),
    Root(TypeExpr, Multiplicity),
    Sub(TypeExpr, u64),
    Punctures(u64),
    Genus(u64),
}

/// Planar shorthand `omega^k * n + m`.
struct Ordinal {
    k: u32,
    n: Option<u64>,
    plus: u64,
}

const KEYWORDS: &[&str] = &[
    "type",
    "root",
    "sub",
    "punctures",
    "genus",
    "puncture",
    "acc",
    "cantor",
    "omega",
];

struct Parser {
    tokens: Vec<(Tok, SourceSpan)>,
    pos: usize,
    pending_punctures: u64,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            message: message.into(),
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(format!("unexpected {}", self.peek()), expected)
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            let want = format!("`{c}`");
            Err(self.unexpected(&[&want]))
        }
    }

    fn expect_int(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn items(&mut self) -> Result<Vec<Item>, ParseError> {
        let mut items = Vec::new();
        loop {
            let (tok, span) = self.tokens[self.pos].clone();
            let Tok::Ident(word) = tok else {
                if tok == Tok::Eof {
                    return Ok(items);
                }
                return Err(self.unexpected(&["statement"]));
            };
            match word.as_str() {
                "type" => {
                    self.bump();
                    let (name_tok, name_span) = self.tokens[self.pos].clone();
                    let name = match name_tok {
                        Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => n,
                        _ => return Err(self.unexpected(&["type name"])),
                    };
                    self.bump();
                    self.expect_sym('=')?;
                    let expr = self.type_expr()?;
                    items.push(Item::Typedef(name, expr, name_span));
                }
                "root" => {
                    self.bump();
                    items.push(self.root_stmt()?);
                }
                "sub" => {
                    self.bump();
                    let expr = self.type_expr()?;
                    self.expect_sym('*')?;
                    let count = self.expect_int()?;
                    items.push(Item::Sub(expr, count));
                }
                "punctures" => {
                    self.bump();
                    items.push(Item::Punctures(self.expect_int()?));
                }
                "genus" => {
                    self.bump();
                    items.push(Item::Genus(self.expect_int()?));
                }
                _ => {
                    return Err(ParseError {
                        message: format!("unknown statement `{word}`"),
                        span,
                        expected: ["type", "root", "sub", "punctures", "genus"]
                            .iter()
                            .map(|s| s.to_string())
                            .collect(),
                    })
                }
            }
        }
    }

    fn root_stmt(&mut self) -> Result<Item, ParseError> {
        if self.is_ident("omega") {
            let ord = self.ordinal()?;
            let extra = ord.plus - 1;
            let mult = match ord.n {
                Some(n) => Multiplicity::Finite(n),
                None => self.multiplier()?,
            };
            // `omega^k*n + m` carries m - 1 isolated punctures besides the
            // compactifying points
            self.pending_punctures += extra;
            return Ok(Item::Root(TypeExpr::Tower(ord.k), mult));
        }
        let expr = self.type_expr()?;
        Ok(Item::Root(expr, self.multiplier()?))
    }

    fn multiplier(&mut self) -> Result<Multiplicity, ParseError> {
        if !self.is_sym('*') {
            return Ok(Multiplicity::Finite(1));
        }
        self.bump();
        if self.is_ident("cantor") {
            self.bump();
            return Ok(Multiplicity::Cantor);
        }
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(Multiplicity::Finite(n))
            }
            _ => Err(self.unexpected(&["integer", "`cantor`"])),
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseError> {
        self.bump(); // omega
        let mut k = 1u32;
        if self.is_sym('^') {
            self.bump();
            match self.peek() {
                Tok::Int(e) if *e >= 1 && *e <= u32::MAX as u64 => {
                    k = *e as u32;
                    self.bump();
                }
                _ => return Err(self.error(FINITE_RANK_MESSAGE, &["positive integer"])),
            }
        }
        let mut n = None;
        if self.is_sym('*') && matches!(self.tokens[self.pos + 1].0, Tok::Int(_)) {
            self.bump();
            n = Some(self.expect_int()?);
        }
        if !self.is_sym('+') {
            return Err(self.error(
                "ordinal shorthand needs `+ 1`: end spaces are compact",
                &["`+`"],
            ));
        }
        self.bump();
        let plus_span = self.span();
        let plus = self.expect_int()?;
        if plus == 0 {
            return Err(ParseError {
                message: "ordinal shorthand needs `+ 1`: end spaces are compact".into(),
                span: plus_span,
                expected: vec!["positive integer".into()],
            });
        }
        Ok(Ordinal { k, n, plus })
    }

    fn type_expr(&mut self) -> Result<TypeExpr, ParseError> {
        let (tok, span) = self.tokens[self.pos].clone();
        let Tok::Ident(word) = tok else {
            return Err(self.unexpected(&["type expression"]));
        };
        match word.as_str() {
            "puncture" => {
                self.bump();
                Ok(TypeExpr::Puncture)
            }
            "acc" | "cantor" => {
                self.bump();
                self.node(word == "cantor")
            }
            "omega" => {
                let ord_span = self.span();
                let ord = self.ordinal()?;
                if ord.n.is_some() || ord.plus != 1 {
                    return Err(ParseError {
                        message: "inside a type, ordinal shorthand must be `omega^k + 1`; \
                                  multiplicities belong to `root`"
                            .into(),
                        span: ord_span,
                        expected: vec![],
                    });
                }
                Ok(TypeExpr::Tower(ord.k))
            }
            _ if KEYWORDS.contains(&word.as_str()) => Err(self.unexpected(&["type expression"])),
            _ => {
                self.bump();
                Ok(TypeExpr::Name(word, span))
            }
        }
    }

    fn node(&mut self, cantor: bool) -> Result<TypeExpr, ParseError> {
        self.expect_sym('(')?;
        let mut genus = false;
        let mut children = Vec::new();
        if self.is_ident("genus") {
            self.bump();
            genus = true;
            if self.is_sym(',') {
                self.bump();
                if !self.is_sym('[') {
                    return Err(self.unexpected(&["`[`"]));
                }
            }
        }
        if self.is_sym('[') {
            self.bump();
            if !self.is_sym(']') {
                loop {
                    children.push(self.type_expr()?);
                    if self.is_sym(',') {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect_sym(']')?;
        }
        if !self.is_sym(')') {
            let expected: &[&str] = if genus || !children.is_empty() {
                &["`)`"]
            } else {
                &["`genus`", "`[`", "`)`"]
            };
            return Err(self.unexpected(expected));
        }
        self.bump();
        Ok(TypeExpr::Node {
            genus,
            cantor,
            children,
        })
    }
}

struct Resolver<'a> {
    defs: &'a BTreeMap<String, (TypeExpr, SourceSpan)>,
    done: BTreeMap<String, EndType>,
    active: BTreeSet<String>,
}

impl Resolver<'_> {
    fn resolve(&mut self, e: &TypeExpr) -> Result<EndType, ParseError> {
        match e {
            TypeExpr::Puncture => Ok(EndType::puncture()),
            TypeExpr::Tower(k) => Ok(EndType::planar_tower(*k)),
            TypeExpr::Node {
                genus,
                cantor,
                children,
            } => {
                let kids = children
                    .iter()
                    .map(|c| self.resolve(c))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(EndType::new(*genus, *cantor, kids))
            }
            TypeExpr::Name(name, span) => {
                if let Some(t) = self.done.get(name) {
                    return Ok(t.clone());
                }
                let Some((body, _)) = self.defs.get(name) else {
                    return Err(ParseError {
                        message: format!("unknown type name `{name}`"),
                        span: *span,
                        expected: vec![],
                    });
                };
                if !self.active.insert(name.clone()) {
                    return Err(ParseError {
                        message: format!("recursive type definition through `{name}`"),
                        span: *span,
                        expected: vec![],
                    });
                }
                let t = self.resolve(body)?;
                self.active.remove(name);
                self.done.insert(name.clone(), t.clone());
                Ok(t)
            }
        }
    }
}

/// Parses a document into an unvalidated [`SurfaceSpec`]. Types are expanded
/// but not canonicalized; run [`endcalc_core::Surface::new`] to validate.
pub fn parse(text: &str) -> Result<SurfaceSpec, ParseError> {
    let tokens = Lexer::run(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        pending_punctures: 0,
    };
    let items = parser.items()?;

    let mut defs = BTreeMap::new();
    for item in &items {
        if let Item::Typedef(name, body, span) = item {
            if defs.insert(name.clone(), (body.clone(), *span)).is_some() {
                return Err(ParseError {
                    message: format!("type `{name}` defined twice"),
                    span: *span,
                    expected: vec![],
                });
            }
        }
    }
    let mut resolver = Resolver {
        defs: &defs,
        done: BTreeMap::new(),
        active: BTreeSet::new(),
    };
    // resolve every definition so that unused recursive ones are reported too
    for (body, _) in defs.values() {
        resolver.resolve(body)?;
    }

    let mut spec = SurfaceSpec {
        extra_punctures: parser.pending_punctures,
        ..SurfaceSpec::default()
    };
    for item in &items {
        match item {
            Item::Typedef(..) => {}
            Item::Root(e, m) => spec.roots.push(Root {
                end_type: resolver.resolve(e)?,
                multiplicity: *m,
            }),
            Item::Sub(e, n) => spec.subordinates.push(Subordinate {
                end_type: resolver.resolve(e)?,
                count: *n,
            }),
            Item::Punctures(n) => spec.extra_punctures += n,
            Item::Genus(n) => spec.extra_genus += n,
        }
    }
    Ok(spec)
}

/// Writes `spec` back in the surface language.
pub fn echo(spec: &SurfaceSpec) -> String {
    let mut out = String::new();
    for r in &spec.roots {
        let _ = writeln!(out, "root {} * {}", r.end_type, r.multiplicity);
    }
    for s in &spec.subordinates {
        let _ = writeln!(out, "sub {} * {}", s.end_type, s.count);
    }
    if spec.extra_punctures > 0 {
        let _ = writeln!(out, "punctures {}", spec.extra_punctures);
    }
    if spec.extra_genus > 0 {
        let _ = writeln!(out, "genus {}", spec.extra_genus);
    }
    out
}
