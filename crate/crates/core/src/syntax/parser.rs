//! Recursive-descent parser for the supported Dafny subset.
//!
//! Constructs outside the subset (iterators, type synonyms, ghost
//! statements, quantifiers, ...) are consumed as opaque nodes so the rest
//! of the file still yields a tree.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;
use super::lexer::{tokenize, LexError, Token, TokenKind};
use crate::span::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: expected {}, found {}",
            self.line, self.column, self.expected, self.found
        )
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxError {
    Lex(LexError),
    Parse(ParseError),
}

impl SyntaxError {
    pub fn line_col(&self) -> (u32, u32) {
        match self {
            SyntaxError::Lex(e) => (e.line, e.column),
            SyntaxError::Parse(e) => (e.line, e.column),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::Lex(e) => write!(f, "lexical error at {e}"),
            SyntaxError::Parse(e) => write!(f, "parse error at {e}"),
        }
    }
}

impl core::error::Error for SyntaxError {}

impl From<LexError> for SyntaxError {
    fn from(e: LexError) -> Self {
        SyntaxError::Lex(e)
    }
}

impl From<ParseError> for SyntaxError {
    fn from(e: ParseError) -> Self {
        SyntaxError::Parse(e)
    }
}

type PResult<T> = Result<T, ParseError>;

const KEYWORDS: &[&str] = &[
    "abstract", "allocated", "as", "assert", "assume", "break", "by", "calc", "case", "class",
    "codatatype", "const", "constructor", "continue", "datatype", "decreases", "else", "ensures",
    "exists", "expect", "export", "extends", "false", "forall", "fresh", "function", "ghost", "if",
    "imap", "import", "in", "include", "invariant", "is", "iset", "iterator", "label", "lemma",
    "map", "match", "method", "modifies", "modify", "module", "multiset", "new", "newtype", "null",
    "old", "predicate", "print", "reads", "refines", "requires", "return", "returns", "reveal",
    "set", "static", "then", "this", "trait", "true", "twostate", "type", "unchanged", "var",
    "while", "yield",
];

const DECL_START: &[&str] = &[
    "method", "function", "predicate", "lemma", "class", "trait", "datatype", "codatatype",
    "const", "var", "module", "ghost", "static", "type", "newtype", "import", "include",
    "constructor", "iterator", "twostate", "least", "greatest", "abstract", "opaque", "export",
];

const CALLABLE_CLAUSES: &[&str] = &["requires", "ensures", "reads", "modifies", "decreases"];
const LOOP_CLAUSES: &[&str] = &["invariant", "decreases", "modifies"];
const ALL_CLAUSES: &[&str] = &[
    "requires",
    "ensures",
    "reads",
    "modifies",
    "decreases",
    "invariant",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a whole Dafny source file.
pub fn parse_program(text: &str) -> Result<SyntaxTree, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        src: text,
        toks: tokens,
        pos: 0,
        next_id: 0,
        no_bar: false,
    };
    let decls = p.parse_decls(false)?;
    Ok(SyntaxTree {
        source: text.to_string(),
        tokens: p.toks,
        decls,
        expr_count: p.next_id,
    })
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
    next_id: u32,
    /// Set while parsing `|e|` and comprehension ranges, where `|` closes.
    no_bar: bool,
}

impl<'s> Parser<'s> {
    // ---- token helpers -------------------------------------------------

    fn t(&self, n: usize) -> &'s str {
        match self.toks.get(self.pos + n) {
            Some(tok) => &self.src[tok.span.start..tok.span.end],
            None => "",
        }
    }

    fn kind(&self, n: usize) -> Option<TokenKind> {
        self.toks.get(self.pos + n).map(|t| t.kind)
    }

    fn at(&self, s: &str) -> bool {
        self.pos < self.toks.len() && self.t(0) == s
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn cur_span(&self) -> SourceSpan {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => {
                let end = self.src.len();
                let (line, col) = self
                    .toks
                    .last()
                    .map(|t| (t.span.line, t.span.column))
                    .unwrap_or((1, 1));
                SourceSpan::new(end, end, line, col)
            }
        }
    }

    fn bump(&mut self) -> SourceSpan {
        let s = self.cur_span();
        if self.pos < self.toks.len() {
            self.pos += 1;
        }
        s
    }

    fn eat(&mut self, s: &str) -> Option<SourceSpan> {
        if self.at(s) {
            Some(self.bump())
        } else {
            None
        }
    }

    fn err<T>(&self, expected: &str) -> PResult<T> {
        let span = self.cur_span();
        let found = if self.at_end() {
            "end of input".to_string()
        } else {
            format!("`{}`", self.t(0))
        };
        Err(ParseError {
            line: span.line,
            column: span.column,
            offset: span.start,
            expected: expected.to_string(),
            found,
        })
    }

    fn expect(&mut self, s: &str) -> PResult<SourceSpan> {
        match self.eat(s) {
            Some(sp) => Ok(sp),
            None => self.err(&format!("`{s}`")),
        }
    }

    fn is_ident_at(&self, n: usize) -> bool {
        self.kind(n) == Some(TokenKind::Ident) && !is_keyword(self.t(n))
    }

    fn expect_ident(&mut self) -> PResult<Ident> {
        if self.is_ident_at(0) {
            let name = self.t(0).to_string();
            let span = self.bump();
            Ok(Ident { name, span })
        } else {
            self.err("identifier")
        }
    }

    fn span_from(&self, start: usize) -> SourceSpan {
        let first = self.toks[start].span;
        if self.pos == start {
            return SourceSpan::new(first.start, first.start, first.line, first.column);
        }
        first.to(self.toks[self.pos - 1].span)
    }

    fn prev_text(&self) -> &'s str {
        if self.pos == 0 {
            return "";
        }
        let t = self.toks[self.pos - 1];
        &self.src[t.span.start..t.span.end]
    }

    /// True when the previous token ends an operand, so a following `{`
    /// opens a block rather than a set display.
    fn prev_ends_operand(&self) -> bool {
        if self.pos == 0 {
            return false;
        }
        let t = self.toks[self.pos - 1];
        let text = &self.src[t.span.start..t.span.end];
        match t.kind {
            TokenKind::Ident => {
                !is_keyword(text) || matches!(text, "true" | "false" | "null" | "this")
            }
            TokenKind::Symbol => matches!(text, ")" | "]" | "}" | "*"),
            _ => true,
        }
    }

    fn mk(&mut self, kind: ExprKind, span: SourceSpan) -> Expr {
        let id = ExprId(self.next_id);
        self.next_id += 1;
        Expr { id, kind, span }
    }

    /// Splits a `>>` / `>=` token so a type argument list can close on `>`.
    fn expect_close_angle(&mut self) -> PResult<()> {
        let text = self.t(0);
        if text == ">" {
            self.bump();
            return Ok(());
        }
        if text.len() > 1 && text.starts_with('>') {
            let tok = self.toks[self.pos];
            let first = Token {
                kind: TokenKind::Symbol,
                span: SourceSpan::new(
                    tok.span.start,
                    tok.span.start + 1,
                    tok.span.line,
                    tok.span.column,
                ),
                leading: tok.leading,
            };
            let rest = Token {
                kind: TokenKind::Symbol,
                span: SourceSpan::new(
                    tok.span.start + 1,
                    tok.span.end,
                    tok.span.line,
                    tok.span.column + 1,
                ),
                leading: tok.span.start + 1,
            };
            self.toks[self.pos] = first;
            self.toks.insert(self.pos + 1, rest);
            self.bump();
            return Ok(());
        }
        self.err("`>`")
    }

    /// Skips a balanced `open ... close` group starting at the current token.
    fn skip_balanced(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            if self.at_end() {
                return self.err("closing delimiter");
            }
            match self.t(0) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    if depth == 0 {
                        return self.err("balanced delimiters");
                    }
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        return Ok(());
                    }
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn skip_attributes(&mut self) -> PResult<()> {
        loop {
            if self.at("{") && self.t(1) == ":" {
                self.skip_balanced()?;
            } else if self.at("@") && self.is_ident_at(1) {
                self.bump();
                self.bump();
                if self.at("(") {
                    self.skip_balanced()?;
                }
            } else {
                return Ok(());
            }
        }
    }

    fn skip_type_params(&mut self) -> PResult<()> {
        if !self.at("<") {
            return Ok(());
        }
        self.bump();
        let mut depth = 1usize;
        while depth > 0 {
            if self.at_end() {
                return self.err("`>`");
            }
            match self.t(0) {
                "<" => {
                    depth += 1;
                    self.bump();
                }
                ">" => {
                    depth -= 1;
                    self.bump();
                }
                ">>" | ">=" => self.expect_close_angle().map(|_| depth -= 1)?,
                "(" => self.skip_balanced()?,
                _ => {
                    self.bump();
                }
            }
        }
        Ok(())
    }

    // ---- declarations ---------------------------------------------------

    fn parse_decls(&mut self, in_braces: bool) -> PResult<Vec<Decl>> {
        let mut decls = Vec::new();
        loop {
            if self.at_end() {
                if in_braces {
                    return self.err("`}`");
                }
                break;
            }
            if self.at("}") {
                if in_braces {
                    break;
                }
                return self.err("declaration");
            }
            decls.push(self.parse_decl()?);
        }
        Ok(decls)
    }

    fn parse_decl(&mut self) -> PResult<Decl> {
        let start = self.pos;
        self.skip_attributes()?;
        let mut mods = Modifiers::default();
        loop {
            match self.t(0) {
                "ghost" => mods.ghost = true,
                "static" => mods.is_static = true,
                "twostate" | "least" | "greatest" | "inductive" => mods.ghost = true,
                "abstract" | "replaceable" | "private" => {}
                "opaque" if matches!(self.t(1), "function" | "predicate" | "method" | "ghost") => {}
                _ => break,
            }
            self.bump();
        }
        match self.t(0) {
            "method" | "constructor" | "lemma" | "function" | "predicate" => {
                self.parse_callable(start, mods).map(Decl::Callable)
            }
            "class" | "trait" => self.parse_class(start, mods).map(Decl::Class),
            "datatype" => self.parse_datatype(start).map(Decl::Datatype),
            "const" => self.parse_const(start, mods).map(Decl::Const),
            "var" => self.parse_field(start, mods).map(Decl::Field),
            "module" => self.parse_module(start).map(Decl::Module),
            _ => {
                self.skip_opaque_decl()?;
                Ok(Decl::Opaque(self.span_from(start)))
            }
        }
    }

    fn skip_opaque_decl(&mut self) -> PResult<()> {
        if self.at_end() {
            return self.err("declaration");
        }
        let mut depth = 0usize;
        let mut first = true;
        loop {
            if self.at_end() {
                return if depth == 0 { Ok(()) } else { self.err("`}`") };
            }
            let t = self.t(0);
            if depth == 0 && !first && (DECL_START.contains(&t) || t == "}") {
                return Ok(());
            }
            match t {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    if depth == 0 {
                        return self.err("declaration");
                    }
                    depth -= 1;
                }
                _ => {}
            }
            first = false;
            self.bump();
        }
    }

    fn parse_callable(&mut self, start: usize, mut mods: Modifiers) -> PResult<Callable> {
        let kw = self.t(0);
        let kw_span = self.bump();
        let kind = match kw {
            "method" => CallableKind::Method,
            "constructor" => CallableKind::Constructor,
            "lemma" => CallableKind::Lemma,
            "function" => CallableKind::Function,
            _ => CallableKind::Predicate,
        };
        if kind == CallableKind::Lemma {
            mods.ghost = true;
        }
        if matches!(kind, CallableKind::Function | CallableKind::Predicate) {
            self.eat("method");
        }
        self.skip_attributes()?;
        let name = if kind == CallableKind::Constructor && !self.is_ident_at(0) {
            Ident {
                name: "constructor".into(),
                span: kw_span,
            }
        } else {
            self.expect_ident()?
        };
        self.skip_type_params()?;
        let params = self.parse_formals(false)?;
        let mut outs = Vec::new();
        let mut result = None;
        if kind.is_method_like() {
            if self.eat("returns").is_some() {
                outs = self.parse_formals(false)?;
            }
        } else if self.eat(":").is_some() {
            if self.at("(") {
                let mut named = self.parse_formals(false)?;
                result = if named.is_empty() {
                    None
                } else {
                    Some(named.remove(0))
                };
            } else {
                let ty = self.parse_type()?;
                result = Some(Formal {
                    name: None,
                    span: ty.span,
                    ty,
                    ghost: false,
                });
            }
        }
        let specs = self.parse_specs(CALLABLE_CLAUSES)?;
        let body = if self.at("{") {
            if kind.is_method_like() {
                Some(CallableBody::Block(self.parse_block()?))
            } else {
                Some(self.parse_function_body()?)
            }
        } else {
            None
        };
        if self.at("by") && self.t(1) == "method" {
            self.bump();
            self.bump();
            self.skip_balanced()?;
        }
        Ok(Callable {
            kind,
            name,
            modifiers: mods,
            params,
            outs,
            result,
            specs,
            body,
            span: self.span_from(start),
        })
    }

    fn parse_function_body(&mut self) -> PResult<CallableBody> {
        let start = self.pos;
        let save_id = self.next_id;
        let attempt = (|| -> PResult<CallableBody> {
            self.expect("{")?;
            let expr = self.parse_expr()?;
            self.expect("}")?;
            Ok(CallableBody::Expr {
                expr,
                span: self.span_from(start),
            })
        })();
        match attempt {
            Ok(b) => Ok(b),
            Err(_) => {
                self.pos = start;
                self.next_id = save_id;
                self.skip_balanced()?;
                Ok(CallableBody::Opaque(self.span_from(start)))
            }
        }
    }

    fn parse_formals(&mut self, allow_unnamed: bool) -> PResult<Vec<Formal>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")").is_some() {
            return Ok(out);
        }
        loop {
            let start = self.pos;
            self.skip_attributes()?;
            let mut ghost = false;
            while matches!(self.t(0), "ghost" | "new" | "nameonly" | "older" | "linear" | "shared")
                && (self.is_ident_at(1) || self.t(1) == "ghost")
            {
                if self.t(0) == "ghost" {
                    ghost = true;
                }
                self.bump();
            }
            let named = self.is_ident_at(0) && self.t(1) == ":";
            let (name, ty) = if named || !allow_unnamed {
                let name = self.expect_ident()?;
                self.expect(":")?;
                (Some(name), self.parse_type()?)
            } else {
                (None, self.parse_type()?)
            };
            if self.eat(":=").is_some() {
                self.parse_expr()?;
            }
            out.push(Formal {
                name,
                ty,
                ghost,
                span: self.span_from(start),
            });
            if self.eat(",").is_none() {
                break;
            }
        }
        self.expect(")")?;
        Ok(out)
    }

    fn parse_class(&mut self, start: usize, mods: Modifiers) -> PResult<ClassDecl> {
        let is_trait = self.t(0) == "trait";
        self.bump();
        self.skip_attributes()?;
        let name = self.expect_ident()?;
        self.skip_type_params()?;
        let mut extends = Vec::new();
        if self.eat("extends").is_some() {
            loop {
                let ty = self.parse_type()?;
                if let TypeExprKind::Named { name, .. } = &ty.kind {
                    extends.push(Ident {
                        name: name.clone(),
                        span: ty.span,
                    });
                }
                if self.eat(",").is_none() {
                    break;
                }
            }
        }
        self.expect("{")?;
        let members = self.parse_decls(true)?;
        self.expect("}")?;
        Ok(ClassDecl {
            is_trait,
            name,
            modifiers: mods,
            extends,
            members,
            span: self.span_from(start),
        })
    }

    fn parse_datatype(&mut self, start: usize) -> PResult<DatatypeDecl> {
        self.bump();
        self.skip_attributes()?;
        let name = self.expect_ident()?;
        self.skip_type_params()?;
        self.expect("=")?;
        self.eat("|");
        let mut ctors = Vec::new();
        loop {
            let cstart = self.pos;
            self.skip_attributes()?;
            self.eat("ghost");
            let cname = self.expect_ident()?;
            let params = if self.at("(") {
                self.parse_formals(true)?
            } else {
                Vec::new()
            };
            ctors.push(CtorDecl {
                name: cname,
                params,
                span: self.span_from(cstart),
            });
            if self.eat("|").is_none() {
                break;
            }
        }
        let mut members = Vec::new();
        if self.at("{") {
            self.bump();
            members = self.parse_decls(true)?;
            self.expect("}")?;
        }
        Ok(DatatypeDecl {
            name,
            ctors,
            members,
            span: self.span_from(start),
        })
    }

    fn parse_const(&mut self, start: usize, mods: Modifiers) -> PResult<ConstDecl> {
        self.bump();
        self.skip_attributes()?;
        let name = self.expect_ident()?;
        let ty = if self.eat(":").is_some() {
            Some(self.parse_type()?)
        } else {
            None
        };
        let init = if self.eat(":=").is_some() {
            Some(self.parse_expr()?)
        } else {
            None
        };
        self.eat(";");
        Ok(ConstDecl {
            name,
            ty,
            init,
            modifiers: mods,
            span: self.span_from(start),
        })
    }

    fn parse_field(&mut self, start: usize, mods: Modifiers) -> PResult<FieldDecl> {
        self.bump();
        self.skip_attributes()?;
        let mut vars = Vec::new();
        loop {
            let name = self.expect_ident()?;
            self.expect(":")?;
            let ty = self.parse_type()?;
            vars.push((name, ty));
            if self.eat(",").is_none() {
                break;
            }
        }
        self.eat(";");
        Ok(FieldDecl {
            vars,
            modifiers: mods,
            span: self.span_from(start),
        })
    }

    fn parse_module(&mut self, start: usize) -> PResult<ModuleDecl> {
        self.bump();
        self.skip_attributes()?;
        let mut name = self.expect_ident()?;
        while self.at(".") && self.is_ident_at(1) {
            self.bump();
            let part = self.expect_ident()?;
            name.name.push('.');
            name.name.push_str(&part.name);
            name.span = name.span.to(part.span);
        }
        if self.eat("refines").is_some() {
            self.parse_type()?;
        }
        self.expect("{")?;
        let decls = self.parse_decls(true)?;
        self.expect("}")?;
        Ok(ModuleDecl {
            name,
            decls,
            span: self.span_from(start),
        })
    }

    // ---- specification clauses ------------------------------------------

    fn parse_specs(&mut self, allowed: &[&str]) -> PResult<Vec<SpecClause>> {
        let mut out = Vec::new();
        loop {
            self.skip_attributes()?;
            let kind = match self.t(0) {
                k if !allowed.contains(&k) || self.at_end() => break,
                "requires" => SpecKind::Requires,
                "ensures" => SpecKind::Ensures,
                "reads" => SpecKind::Reads,
                "modifies" => SpecKind::Modifies,
                "decreases" => SpecKind::Decreases,
                _ => SpecKind::Invariant,
            };
            let start = self.pos;
            self.bump();
            self.skip_attributes()?;
            let save = self.pos;
            let save_id = self.next_id;
            if self.parse_spec_body().is_err() {
                self.pos = save;
                self.next_id = save_id;
                self.skip_spec_heuristic()?;
            }
            out.push(SpecClause {
                kind,
                span: self.span_from(start),
            });
        }
        Ok(out)
    }

    fn parse_spec_body(&mut self) -> PResult<()> {
        if self.is_ident_at(0) && self.t(1) == ":" {
            // labelled clause
            self.bump();
            self.bump();
        }
        loop {
            if self.eat("*").is_none() {
                self.parse_expr()?;
            }
            if self.eat(",").is_none() {
                return Ok(());
            }
        }
    }

    fn skip_spec_heuristic(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            if self.at_end() {
                return Ok(());
            }
            let t = self.t(0);
            if depth == 0 {
                if ALL_CLAUSES.contains(&t) || t == "}" || t == ";" {
                    return Ok(());
                }
                if t == "{" && self.t(1) != ":" && self.prev_ends_operand() {
                    return Ok(());
                }
            }
            match t {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth = depth.saturating_sub(1),
                _ => {}
            }
            self.bump();
        }
    }

    // ---- types ----------------------------------------------------------

    fn parse_type(&mut self) -> PResult<TypeExpr> {
        let start = self.pos;
        let mut ty = if self.at("(") {
            self.bump();
            let mut elems = Vec::new();
            if !self.at(")") {
                loop {
                    self.eat("ghost");
                    elems.push(self.parse_type()?);
                    if self.eat(",").is_none() {
                        break;
                    }
                }
            }
            self.expect(")")?;
            if elems.len() == 1 {
                let mut inner = elems.pop().unwrap();
                inner.span = self.span_from(start);
                inner
            } else {
                TypeExpr {
                    kind: TypeExprKind::Tuple(elems),
                    span: self.span_from(start),
                }
            }
        } else {
            if self.kind(0) != Some(TokenKind::Ident) {
                return self.err("type");
            }
            let mut name = self.t(0).to_string();
            self.bump();
            while self.at(".") && self.kind(1) == Some(TokenKind::Ident) {
                self.bump();
                name.push('.');
                name.push_str(self.t(0));
                self.bump();
            }
            let nullable = name.ends_with('?');
            if nullable {
                name.pop();
            }
            let mut args = Vec::new();
            if self.at("<") {
                self.bump();
                loop {
                    args.push(self.parse_type()?);
                    if self.eat(",").is_none() {
                        break;
                    }
                }
                self.expect_close_angle()?;
            }
            TypeExpr {
                kind: TypeExprKind::Named {
                    name,
                    nullable,
                    args,
                },
                span: self.span_from(start),
            }
        };
        if matches!(self.t(0), "->" | "~>") || (self.at("-") && self.t(1) == "->") {
            if self.at("-") {
                self.bump();
            }
            self.bump();
            self.parse_type()?;
            ty = TypeExpr {
                kind: TypeExprKind::Arrow,
                span: self.span_from(start),
            };
        }
        Ok(ty)
    }

    // ---- statements -----------------------------------------------------

    fn parse_block(&mut self) -> PResult<Block> {
        let start = self.pos;
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.at_end() {
                return self.err("`}`");
            }
            stmts.push(self.parse_stmt()?);
        }
        self.bump();
        Ok(Block {
            stmts,
            span: self.span_from(start),
        })
    }

    fn parse_stmt(&mut self) -> PResult<Stmt> {
        let start = self.pos;
        let kind = match self.t(0) {
            "{" if self.t(1) != ":" => StmtKind::Block(self.parse_block()?),
            "var" => self.parse_var_decl(start)?,
            "if" => self.parse_if()?,
            "while" => self.parse_while()?,
            "for" => self.parse_for()?,
            "match" => self.parse_match_stmt()?,
            "break" | "continue" => {
                let is_break = self.at("break");
                let keyword = self.bump();
                if self.at("break") {
                    self.skip_opaque_stmt(false)?;
                    return Ok(Stmt {
                        kind: StmtKind::Opaque,
                        span: self.span_from(start),
                    });
                }
                let label = if self.is_ident_at(0) {
                    Some(self.expect_ident()?)
                } else {
                    None
                };
                self.expect(";")?;
                if is_break {
                    StmtKind::Break { keyword, label }
                } else {
                    StmtKind::Continue { keyword, label }
                }
            }
            "return" => {
                self.bump();
                let vals = if self.at(";") {
                    Vec::new()
                } else {
                    self.parse_expr_list()?
                };
                self.expect(";")?;
                StmtKind::Return(vals)
            }
            "print" => {
                self.bump();
                let vals = self.parse_expr_list()?;
                self.expect(";")?;
                StmtKind::Print(vals)
            }
            "new" if self.t(1) == ";" => {
                self.bump();
                self.bump();
                StmtKind::Opaque
            }
            "ghost" | "assert" | "assume" | "expect" | "reveal" | "forall" | "modify" | "label"
            | "hide" | "yield" | "{" | "@" => {
                self.skip_opaque_stmt(false)?;
                StmtKind::Opaque
            }
            "calc" => {
                self.skip_opaque_stmt(true)?;
                StmtKind::Opaque
            }
            _ => self.parse_expr_stmt(start)?,
        };
        Ok(Stmt {
            kind,
            span: self.span_from(start),
        })
    }

    fn skip_opaque_stmt(&mut self, is_calc: bool) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            if self.at_end() {
                return self.err("`;`");
            }
            let t = self.t(0);
            match t {
                "{" => {
                    let block = depth == 0
                        && self.t(1) != ":"
                        && (is_calc || self.prev_ends_operand() || self.prev_text() == "by");
                    if block {
                        self.skip_balanced()?;
                        if !self.at("else") {
                            return Ok(());
                        }
                        // `ghost if ... { } else { }`
                        self.bump();
                        continue;
                    }
                    depth += 1;
                }
                "(" | "[" => depth += 1,
                ")" | "]" | "}" => {
                    if depth == 0 {
                        return self.err("`;`");
                    }
                    depth -= 1;
                }
                ";" if depth == 0 => {
                    self.bump();
                    return Ok(());
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn parse_var_decl(&mut self, start: usize) -> PResult<StmtKind> {
        self.bump();
        self.skip_attributes()?;
        if self.at("(") {
            self.pos = start;
            self.skip_opaque_stmt(false)?;
            return Ok(StmtKind::Opaque);
        }
        let mut vars = Vec::new();
        loop {
            let name = self.expect_ident()?;
            let ty = if self.eat(":").is_some() {
                Some(self.parse_type()?)
            } else {
                None
            };
            vars.push(LocalVar { name, ty });
            if self.eat(",").is_none() {
                break;
            }
        }
        if self.eat(":=").is_some() {
            let init = self.parse_expr_list()?;
            self.expect(";")?;
            return Ok(StmtKind::VarDecl { vars, init });
        }
        if self.at(":|") || self.at(":-") {
            self.skip_opaque_stmt(false)?;
            return Ok(StmtKind::Opaque);
        }
        self.expect(";")?;
        Ok(StmtKind::VarDecl {
            vars,
            init: Vec::new(),
        })
    }

    fn parse_guard(&mut self) -> PResult<Expr> {
        if self.at("*") {
            let sp = self.bump();
            return Ok(self.mk(ExprKind::Opaque(OpaqueKind::Havoc), sp));
        }
        self.parse_expr()
    }

    fn parse_if(&mut self) -> PResult<StmtKind> {
        let start = self.pos;
        self.bump();
        if self.at("{") || self.at("case") {
            self.pos = start;
            self.bump();
            if self.at("{") {
                self.skip_balanced()?;
                return Ok(StmtKind::Opaque);
            }
            return self.err("`{` (alternative `if case` statements are not supported)");
        }
        let guard = self.parse_guard()?;
        let then_block = self.parse_block()?;
        let (else_keyword, else_branch) = match self.eat("else") {
            Some(kw) => {
                let branch = if self.at("if") {
                    ElseBranch::If(Box::new(self.parse_stmt()?))
                } else {
                    ElseBranch::Block(self.parse_block()?)
                };
                (Some(kw), Some(branch))
            }
            None => (None, None),
        };
        Ok(StmtKind::If(IfStmt {
            guard,
            then_block,
            else_keyword,
            else_branch,
        }))
    }

    fn parse_while(&mut self) -> PResult<StmtKind> {
        self.bump();
        if self.at("{") || self.at("case") {
            return self.err("loop guard");
        }
        let guard = self.parse_guard()?;
        let specs = self.parse_specs(LOOP_CLAUSES)?;
        let body = if self.at("{") {
            Some(self.parse_block()?)
        } else {
            None
        };
        Ok(StmtKind::While { guard, specs, body })
    }

    fn parse_for(&mut self) -> PResult<StmtKind> {
        self.bump();
        let index = self.expect_ident()?;
        let index_ty = if self.eat(":").is_some() {
            Some(self.parse_type()?)
        } else {
            None
        };
        self.expect(":=")?;
        let lo = self.parse_expr()?;
        let downward = match self.t(0) {
            "to" => false,
            "downto" => true,
            _ => return self.err("`to` or `downto`"),
        };
        self.bump();
        let hi = self.parse_guard()?;
        let specs = self.parse_specs(LOOP_CLAUSES)?;
        let body = if self.at("{") {
            Some(self.parse_block()?)
        } else {
            None
        };
        Ok(StmtKind::For {
            index,
            index_ty,
            lo,
            hi,
            downward,
            specs,
            body,
        })
    }

    fn parse_pattern(&mut self) -> PResult<Pattern> {
        let start = self.pos;
        let mut depth = 0usize;
        while !(depth == 0 && self.at("=>")) {
            if self.at_end() {
                return self.err("`=>`");
            }
            match self.t(0) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    if depth == 0 {
                        return self.err("`=>`");
                    }
                    depth -= 1
                }
                _ => {}
            }
            self.bump();
        }
        let end = self.pos;
        if end == start {
            return self.err("pattern");
        }
        let span = self.span_from(start);
        let texts: Vec<&str> = (start..end)
            .map(|i| self.toks[i].text(self.src))
            .collect();
        let wildcard = texts.len() == 1 && texts[0] == "_";
        let mut ctor = None;
        let mut binders = Vec::new();
        let head_is_ident = self.toks[start].kind == TokenKind::Ident && !wildcard;
        if head_is_ident && texts.len() == 1 {
            ctor = Some(Ident {
                name: texts[0].to_string(),
                span: self.toks[start].span,
            });
        } else if head_is_ident && texts.len() >= 3 && texts[1] == "(" && texts[texts.len() - 1] == ")" {
            ctor = Some(Ident {
                name: texts[0].to_string(),
                span: self.toks[start].span,
            });
            // split the argument list at top-level commas
            let mut group: Vec<usize> = Vec::new();
            let mut d = 0usize;
            for i in (start + 2)..(end - 1) {
                let t = self.toks[i].text(self.src);
                match t {
                    "(" | "[" | "{" => d += 1,
                    ")" | "]" | "}" => d = d.saturating_sub(1),
                    "," if d == 0 => {
                        binders.push(self.binder_of(&group));
                        group.clear();
                        continue;
                    }
                    _ => {}
                }
                group.push(i);
            }
            if !group.is_empty() {
                binders.push(self.binder_of(&group));
            }
        }
        Ok(Pattern {
            span,
            wildcard,
            ctor,
            binders,
        })
    }

    fn binder_of(&self, group: &[usize]) -> Option<Ident> {
        if group.len() != 1 {
            return None;
        }
        let tok = self.toks[group[0]];
        let text = tok.text(self.src);
        if tok.kind == TokenKind::Ident && text != "_" && !is_keyword(text) {
            Some(Ident {
                name: text.to_string(),
                span: tok.span,
            })
        } else {
            None
        }
    }

    fn parse_match_stmt(&mut self) -> PResult<StmtKind> {
        self.bump();
        let scrutinee = self.parse_expr()?;
        let braced = self.eat("{").is_some();
        let mut cases = Vec::new();
        while self.at("case") {
            let cstart = self.pos;
            self.bump();
            let pattern = self.parse_pattern()?;
            let arrow = self.expect("=>")?;
            let mut body = Vec::new();
            while !self.at("case") && !self.at("}") && !self.at_end() {
                body.push(self.parse_stmt()?);
            }
            let body_span = match (body.first(), body.last()) {
                (Some(f), Some(l)) => f.span.to(l.span),
                _ => arrow.empty_after(),
            };
            cases.push(MatchCase {
                pattern,
                body,
                body_span,
                span: self.span_from(cstart),
            });
        }
        if braced {
            self.expect("}")?;
        }
        Ok(StmtKind::Match { scrutinee, cases })
    }

    fn parse_expr_stmt(&mut self, start: usize) -> PResult<StmtKind> {
        let lhs = self.parse_expr_list()?;
        if self.eat(":=").is_some() {
            let rhs = self.parse_expr_list()?;
            self.expect(";")?;
            return Ok(StmtKind::Assign { lhs, rhs });
        }
        if self.at(":|") || self.at(":-") {
            self.pos = start;
            self.skip_opaque_stmt(false)?;
            return Ok(StmtKind::Opaque);
        }
        if self.at(";")
            && lhs.len() == 1
            && matches!(lhs[0].kind, ExprKind::Call { .. } | ExprKind::Apply { .. })
        {
            self.bump();
            return Ok(StmtKind::Call(lhs.into_iter().next().unwrap()));
        }
        self.err("`:=` or `;`")
    }

    // ---- expressions ----------------------------------------------------

    fn parse_expr_list(&mut self) -> PResult<Vec<Expr>> {
        let mut out = vec![self.parse_expr()?];
        while self.eat(",").is_some() {
            out.push(self.parse_expr()?);
        }
        Ok(out)
    }

    fn nested<T>(&mut self, no_bar: bool, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let saved = self.no_bar;
        self.no_bar = no_bar;
        let r = f(self);
        self.no_bar = saved;
        r
    }

    pub(crate) fn parse_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_implies()?;
        while self.at("<==>") {
            lhs = self.binary(lhs, BinOp::Equiv, Self::parse_implies)?;
        }
        Ok(lhs)
    }

    fn binary(
        &mut self,
        lhs: Expr,
        op: BinOp,
        next: fn(&mut Self) -> PResult<Expr>,
    ) -> PResult<Expr> {
        let op_span = self.bump();
        let rhs = next(self)?;
        let span = lhs.span.to(rhs.span);
        Ok(self.mk(
            ExprKind::Binary {
                op,
                op_span,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            },
            span,
        ))
    }

    fn parse_implies(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_logical()?;
        if self.at("==>") {
            return self.binary(lhs, BinOp::Implies, Self::parse_implies);
        }
        while self.at("<==") {
            lhs = self.binary(lhs, BinOp::Explies, Self::parse_logical)?;
        }
        // mixed directions: accepted here, rejected later by Dafny
        if self.at("==>") {
            return self.binary(lhs, BinOp::Implies, Self::parse_implies);
        }
        Ok(lhs)
    }

    fn parse_logical(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_rel()?;
        loop {
            let op = match self.t(0) {
                "&&" => BinOp::And,
                "||" => BinOp::Or,
                _ => return Ok(lhs),
            };
            lhs = self.binary(lhs, op, Self::parse_rel)?;
        }
    }

    fn rel_op(&self) -> Option<BinOp> {
        if self.at_end() {
            return None;
        }
        match self.t(0) {
            "==" | "!=" | "<" | "<=" | ">" | ">=" | "in" | "!in" | "!!" => BinOp::from_str(self.t(0)),
            _ => None,
        }
    }

    fn parse_rel(&mut self) -> PResult<Expr> {
        let first = self.parse_shift()?;
        let mut operands = vec![first];
        let mut ops = Vec::new();
        while let Some(op) = self.rel_op() {
            let sp = self.bump();
            ops.push((op, sp));
            operands.push(self.parse_shift()?);
        }
        if ops.is_empty() {
            return Ok(operands.pop().unwrap());
        }
        let span = operands[0].span.to(operands[operands.len() - 1].span);
        if ops.len() > 1 && ops.iter().all(|(op, _)| op.is_comparison()) {
            return Ok(self.mk(ExprKind::Chain { operands, ops }, span));
        }
        let mut it = operands.into_iter();
        let mut acc = it.next().unwrap();
        for ((op, op_span), rhs) in ops.into_iter().zip(it) {
            let span = acc.span.to(rhs.span);
            acc = self.mk(
                ExprKind::Binary {
                    op,
                    op_span,
                    lhs: Box::new(acc),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(acc)
    }

    fn parse_shift(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_add()?;
        loop {
            let op = match self.t(0) {
                "<<" => BinOp::Shl,
                ">>" => BinOp::Shr,
                _ => return Ok(lhs),
            };
            lhs = self.binary(lhs, op, Self::parse_add)?;
        }
    }

    fn parse_add(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_mul()?;
        loop {
            let op = match self.t(0) {
                "+" => BinOp::Add,
                "-" if self.t(1) != ">" => BinOp::Sub,
                _ => return Ok(lhs),
            };
            lhs = self.binary(lhs, op, Self::parse_mul)?;
        }
    }

    fn parse_mul(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_bitwise()?;
        loop {
            let op = match self.t(0) {
                "*" => BinOp::Mul,
                "/" => BinOp::Div,
                "%" => BinOp::Mod,
                _ => return Ok(lhs),
            };
            lhs = self.binary(lhs, op, Self::parse_bitwise)?;
        }
    }

    fn parse_bitwise(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_as()?;
        loop {
            let op = match self.t(0) {
                "&" => BinOp::BitAnd,
                "|" if !self.no_bar => BinOp::BitOr,
                "^" => BinOp::BitXor,
                _ => return Ok(lhs),
            };
            lhs = self.binary(lhs, op, Self::parse_as)?;
        }
    }

    fn parse_as(&mut self) -> PResult<Expr> {
        let mut e = self.parse_unary()?;
        while self.at("as") || self.at("is") {
            let is_test = self.at("is");
            self.bump();
            let ty = self.parse_type()?;
            let span = e.span.to(ty.span);
            e = self.mk(
                ExprKind::Conversion {
                    expr: Box::new(e),
                    ty,
                    is_test,
                },
                span,
            );
        }
        Ok(e)
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        let op = match self.t(0) {
            "-" if !self.at_end() => UnOp::Neg,
            "!" => UnOp::Not,
            _ => return self.parse_postfix(),
        };
        let op_span = self.bump();
        let operand = self.parse_unary()?;
        let span = op_span.to(operand.span);
        Ok(self.mk(
            ExprKind::Unary {
                op,
                op_span,
                operand: Box::new(operand),
            },
            span,
        ))
    }

    fn parse_args(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        self.nested(false, |p| {
            let mut args = Vec::new();
            if p.eat(")").is_some() {
                return Ok(args);
            }
            loop {
                if p.is_ident_at(0) && p.t(1) == ":=" {
                    // named argument: keep the value
                    p.bump();
                    p.bump();
                }
                args.push(p.parse_expr()?);
                if p.eat(",").is_none() {
                    break;
                }
            }
            p.expect(")")?;
            Ok(args)
        })
    }

    fn parse_postfix(&mut self) -> PResult<Expr> {
        let mut e = self.parse_primary()?;
        loop {
            if self.at(".") {
                if self.kind(1) == Some(TokenKind::Int) {
                    self.bump();
                    let index_span = self.bump();
                    let index = index_span.text(self.src).replace('_', "").parse().unwrap_or(0);
                    let span = e.span.to(index_span);
                    e = self.mk(
                        ExprKind::TupleIndex {
                            recv: Box::new(e),
                            index,
                            index_span,
                        },
                        span,
                    );
                } else if self.t(1) == "(" {
                    self.bump();
                    self.skip_balanced()?;
                    let span = e.span.to(self.toks[self.pos - 1].span);
                    e = self.mk(ExprKind::Opaque(OpaqueKind::DatatypeUpdate), span);
                } else if self.kind(1) == Some(TokenKind::Ident) {
                    self.bump();
                    let name = self.t(0).to_string();
                    let fspan = self.bump();
                    let field = Ident { name, span: fspan };
                    if self.at("(") {
                        let args = self.parse_args()?;
                        let span = e.span.to(self.toks[self.pos - 1].span);
                        e = self.mk(
                            ExprKind::Call {
                                recv: Some(Box::new(e)),
                                callee: field,
                                args,
                            },
                            span,
                        );
                    } else {
                        let span = e.span.to(fspan);
                        e = self.mk(
                            ExprKind::Field {
                                recv: Box::new(e),
                                field,
                            },
                            span,
                        );
                    }
                } else {
                    return Ok(e);
                }
            } else if self.at("`") && self.kind(1) == Some(TokenKind::Ident) {
                self.bump();
                let name = self.t(0).to_string();
                let fspan = self.bump();
                let span = e.span.to(fspan);
                e = self.mk(
                    ExprKind::Field {
                        recv: Box::new(e),
                        field: Ident { name, span: fspan },
                    },
                    span,
                );
            } else if self.at("[") {
                e = self.parse_index_suffix(e)?;
            } else if self.at("(") {
                let args = self.parse_args()?;
                let span = e.span.to(self.toks[self.pos - 1].span);
                e = self.mk(
                    ExprKind::Apply {
                        func: Box::new(e),
                        args,
                    },
                    span,
                );
            } else {
                return Ok(e);
            }
        }
    }

    fn parse_index_suffix(&mut self, recv: Expr) -> PResult<Expr> {
        self.bump();
        self.nested(false, |p| {
            let close = |p: &mut Self, recv: &Expr| -> PResult<SourceSpan> {
                let end = p.expect("]")?;
                Ok(recv.span.to(end))
            };
            if p.eat("..").is_some() {
                let hi = if p.at("]") {
                    None
                } else {
                    Some(Box::new(p.parse_expr()?))
                };
                let span = close(p, &recv)?;
                return Ok(p.mk(
                    ExprKind::Slice {
                        recv: Box::new(recv),
                        lo: None,
                        hi,
                    },
                    span,
                ));
            }
            let first = p.parse_expr()?;
            if p.eat("..").is_some() {
                let hi = if p.at("]") {
                    None
                } else {
                    Some(Box::new(p.parse_expr()?))
                };
                let span = close(p, &recv)?;
                return Ok(p.mk(
                    ExprKind::Slice {
                        recv: Box::new(recv),
                        lo: Some(Box::new(first)),
                        hi,
                    },
                    span,
                ));
            }
            if p.eat(":=").is_some() {
                let value = p.parse_expr()?;
                let span = close(p, &recv)?;
                return Ok(p.mk(
                    ExprKind::Update {
                        recv: Box::new(recv),
                        index: Box::new(first),
                        value: Box::new(value),
                    },
                    span,
                ));
            }
            if p.at(",") || p.at(":") {
                while !p.at("]") {
                    if p.at_end() {
                        return p.err("`]`");
                    }
                    if matches!(p.t(0), "(" | "[" | "{") {
                        p.skip_balanced()?;
                    } else {
                        p.bump();
                    }
                }
                let span = close(p, &recv)?;
                return Ok(p.mk(ExprKind::Opaque(OpaqueKind::Other), span));
            }
            let span = close(p, &recv)?;
            Ok(p.mk(
                ExprKind::Index {
                    recv: Box::new(recv),
                    index: Box::new(first),
                },
                span,
            ))
        })
    }

    fn paren_is_lambda(&self) -> bool {
        let mut depth = 0usize;
        let mut i = self.pos;
        while i < self.toks.len() {
            match self.toks[i].text(self.src) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth -= 1;
                    if depth == 0 {
                        return self
                            .toks
                            .get(i + 1)
                            .is_some_and(|t| matches!(t.text(self.src), "=>" | "reads" | "requires"));
                    }
                }
                _ => {}
            }
            i += 1;
        }
        false
    }

    fn parse_lambda(&mut self, start: usize) -> PResult<Expr> {
        if self.at("(") {
            self.skip_balanced()?;
        } else {
            self.bump();
        }
        self.parse_specs(&["reads", "requires"])?;
        self.expect("=>")?;
        self.nested(false, |p| p.parse_expr())?;
        let span = self.span_from(start);
        Ok(self.mk(ExprKind::Opaque(OpaqueKind::Lambda), span))
    }

    fn parse_binders(&mut self) -> PResult<()> {
        loop {
            self.expect_ident()?;
            if self.eat(":").is_some() {
                self.parse_type()?;
            }
            if self.eat(",").is_none() {
                return Ok(());
            }
        }
    }

    fn parse_primary(&mut self) -> PResult<Expr> {
        let start = self.pos;
        if self.at_end() {
            return self.err("expression");
        }
        let text = self.t(0);
        match self.kind(0).unwrap() {
            TokenKind::Int => {
                let sp = self.bump();
                return Ok(self.mk(ExprKind::Lit(Literal::Int(text.to_string())), sp));
            }
            TokenKind::Real => {
                let sp = self.bump();
                return Ok(self.mk(ExprKind::Lit(Literal::Real(text.to_string())), sp));
            }
            TokenKind::Char => {
                let sp = self.bump();
                return Ok(self.mk(ExprKind::Lit(Literal::Char(text.to_string())), sp));
            }
            TokenKind::Str => {
                let sp = self.bump();
                return Ok(self.mk(ExprKind::Lit(Literal::Str(text.to_string())), sp));
            }
            TokenKind::Symbol => return self.parse_symbol_primary(start),
            TokenKind::Ident => {}
        }
        match text {
            "true" | "false" => {
                let sp = self.bump();
                Ok(self.mk(ExprKind::Lit(Literal::Bool(text == "true")), sp))
            }
            "null" => {
                let sp = self.bump();
                Ok(self.mk(ExprKind::Lit(Literal::Null), sp))
            }
            "this" => {
                let sp = self.bump();
                Ok(self.mk(ExprKind::This, sp))
            }
            "old" | "fresh" | "allocated" | "unchanged" => {
                self.bump();
                if self.at("@") {
                    self.bump();
                    self.bump();
                }
                self.parse_args()?;
                let kind = if text == "old" {
                    OpaqueKind::Old
                } else {
                    OpaqueKind::Fresh
                };
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::Opaque(kind), span))
            }
            "forall" | "exists" => {
                self.bump();
                self.parse_binders()?;
                self.skip_attributes()?;
                if self.at("|") {
                    self.bump();
                    self.nested(true, |p| p.parse_expr())?;
                }
                self.skip_attributes()?;
                self.expect("::")?;
                self.nested(false, |p| p.parse_expr())?;
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::Opaque(OpaqueKind::Quantifier), span))
            }
            "set" | "iset" | "map" | "imap" | "multiset" | "seq"
                if matches!(self.t(1), "{" | "[" | "(" | "<") =>
            {
                self.parse_collection_primary(start, text)
            }
            "set" | "iset" | "map" | "imap" => {
                self.bump();
                self.parse_binders()?;
                self.skip_attributes()?;
                if self.at("|") {
                    self.bump();
                    self.nested(true, |p| p.parse_expr())?;
                }
                if self.eat("::").is_some() {
                    self.nested(false, |p| p.parse_expr())?;
                    if self.eat(":=").is_some() {
                        self.nested(false, |p| p.parse_expr())?;
                    }
                }
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::Opaque(OpaqueKind::Comprehension), span))
            }
            "if" => {
                self.bump();
                let guard = self.nested(false, |p| p.parse_expr())?;
                self.expect("then")?;
                let then = self.nested(false, |p| p.parse_expr())?;
                self.expect("else")?;
                let els = self.parse_expr()?;
                let span = self.span_from(start);
                Ok(self.mk(
                    ExprKind::Ite {
                        guard: Box::new(guard),
                        then: Box::new(then),
                        els: Box::new(els),
                    },
                    span,
                ))
            }
            "match" => self.parse_match_expr(start),
            "var" => {
                self.bump();
                let mut vars = Vec::new();
                loop {
                    let name = self.expect_ident()?;
                    let ty = if self.eat(":").is_some() {
                        Some(self.parse_type()?)
                    } else {
                        None
                    };
                    vars.push(LocalVar { name, ty });
                    if self.eat(",").is_none() {
                        break;
                    }
                }
                if self.eat(":|").is_some() {
                    self.parse_expr()?;
                    self.expect(";")?;
                    self.parse_expr()?;
                    let span = self.span_from(start);
                    return Ok(self.mk(ExprKind::Opaque(OpaqueKind::Other), span));
                }
                self.expect(":=")?;
                let init = self.nested(false, |p| p.parse_expr_list())?;
                self.expect(";")?;
                let body = self.parse_expr()?;
                let span = self.span_from(start);
                Ok(self.mk(
                    ExprKind::Let {
                        vars,
                        init,
                        body: Box::new(body),
                    },
                    span,
                ))
            }
            "new" => self.parse_new(start),
            "assert" | "assume" | "expect" | "reveal" => {
                self.bump();
                self.skip_attributes()?;
                self.parse_expr_list()?;
                if self.eat("by").is_some() {
                    self.skip_balanced()?;
                } else {
                    self.expect(";")?;
                }
                self.parse_expr()?;
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::Opaque(OpaqueKind::Other), span))
            }
            _ if is_keyword(text) => self.err("expression"),
            _ => {
                if self.t(1) == "=>" {
                    return self.parse_lambda(start);
                }
                let name = text.to_string();
                let span = self.bump();
                if self.at("(") {
                    let args = self.parse_args()?;
                    let span = self.span_from(start);
                    return Ok(self.mk(
                        ExprKind::Call {
                            recv: None,
                            callee: Ident {
                                name,
                                span: self.toks[start].span,
                            },
                            args,
                        },
                        span,
                    ));
                }
                Ok(self.mk(ExprKind::Ident(name), span))
            }
        }
    }

    fn parse_collection_primary(&mut self, start: usize, text: &str) -> PResult<Expr> {
        self.bump();
        match (text, self.t(0)) {
            ("multiset", "{") => self.parse_display(start, Collection::Multiset),
            ("map", "[") => {
                self.bump();
                let entries = self.nested(false, |p| {
                    let mut entries = Vec::new();
                    if p.at("]") {
                        return Ok(entries);
                    }
                    loop {
                        let k = p.parse_expr()?;
                        p.expect(":=")?;
                        let v = p.parse_expr()?;
                        entries.push((k, v));
                        if p.eat(",").is_none() {
                            return Ok(entries);
                        }
                    }
                })?;
                self.expect("]")?;
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::MapDisplay { entries }, span))
            }
            _ => {
                if self.at("<") {
                    self.skip_type_params()?;
                }
                let kind = if text == "multiset" && self.at("(") {
                    OpaqueKind::MultisetConversion
                } else {
                    OpaqueKind::Other
                };
                if matches!(self.t(0), "(" | "[" | "{") {
                    self.skip_balanced()?;
                } else {
                    return self.err("`(`");
                }
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::Opaque(kind), span))
            }
        }
    }

    fn parse_display(&mut self, start: usize, flavor: Collection) -> PResult<Expr> {
        let close = match self.t(0) {
            "[" => "]",
            _ => "}",
        };
        self.bump();
        let elems = self.nested(false, |p| {
            let mut elems = Vec::new();
            if p.at(close) {
                return Ok(elems);
            }
            loop {
                elems.push(p.parse_expr()?);
                if p.eat(",").is_none() {
                    return Ok(elems);
                }
            }
        })?;
        self.expect(close)?;
        let span = self.span_from(start);
        Ok(self.mk(ExprKind::Display { flavor, elems }, span))
    }

    fn parse_symbol_primary(&mut self, start: usize) -> PResult<Expr> {
        match self.t(0) {
            "(" => {
                if self.paren_is_lambda() {
                    return self.parse_lambda(start);
                }
                self.bump();
                let elems = self.nested(false, |p| {
                    let mut elems = Vec::new();
                    if p.at(")") {
                        return Ok(elems);
                    }
                    loop {
                        elems.push(p.parse_expr()?);
                        if p.eat(",").is_none() {
                            return Ok(elems);
                        }
                    }
                })?;
                let trailing_comma = self.prev_text() == ",";
                self.expect(")")?;
                let span = self.span_from(start);
                if elems.len() == 1 && !trailing_comma {
                    let inner = elems.into_iter().next().unwrap();
                    Ok(self.mk(ExprKind::Paren(Box::new(inner)), span))
                } else {
                    Ok(self.mk(ExprKind::Tuple(elems), span))
                }
            }
            "[" => self.parse_display(start, Collection::Seq),
            "{" => self.parse_display(start, Collection::Set),
            "|" => {
                self.bump();
                let inner = self.nested(true, |p| p.parse_expr())?;
                self.expect("|")?;
                let span = self.span_from(start);
                Ok(self.mk(ExprKind::Cardinality(Box::new(inner)), span))
            }
            "*" => {
                let sp = self.bump();
                Ok(self.mk(ExprKind::Opaque(OpaqueKind::Havoc), sp))
            }
            _ => self.err("expression"),
        }
    }

    fn parse_match_expr(&mut self, start: usize) -> PResult<Expr> {
        self.bump();
        let scrutinee = self.nested(false, |p| p.parse_expr())?;
        let braced = self.eat("{").is_some();
        let mut cases = Vec::new();
        while self.at("case") {
            self.bump();
            let pattern = self.parse_pattern()?;
            self.expect("=>")?;
            let body = self.nested(false, |p| p.parse_expr())?;
            cases.push(MatchExprCase { pattern, body });
        }
        if cases.is_empty() {
            return self.err("`case`");
        }
        if braced {
            self.expect("}")?;
        }
        let span = self.span_from(start);
        Ok(self.mk(
            ExprKind::Match {
                scrutinee: Box::new(scrutinee),
                cases,
            },
            span,
        ))
    }

    fn parse_new(&mut self, start: usize) -> PResult<Expr> {
        self.bump();
        let tstart = self.pos;
        if self.kind(0) != Some(TokenKind::Ident) {
            return self.err("type after `new`");
        }
        let mut segments = vec![(self.t(0).to_string(), self.bump())];
        while self.at(".") && self.kind(1) == Some(TokenKind::Ident) {
            self.bump();
            let s = self.t(0).to_string();
            let sp = self.bump();
            segments.push((s, sp));
        }
        let mut args_ty = Vec::new();
        if self.at("<") {
            self.bump();
            loop {
                args_ty.push(self.parse_type()?);
                if self.eat(",").is_none() {
                    break;
                }
            }
            self.expect_close_angle()?;
        }
        let mut ctor = None;
        if segments.len() > 1 && self.at("(") {
            let (name, span) = segments.pop().unwrap();
            ctor = Some(Ident { name, span });
        }
        let mut name: String = segments
            .iter()
            .map(|(s, _)| s.as_str())
            .collect::<Vec<_>>()
            .join(".");
        let nullable = name.ends_with('?');
        if nullable {
            name.pop();
        }
        let ty_end = segments.last().map(|(_, s)| *s).unwrap();
        let ty = TypeExpr {
            kind: TypeExprKind::Named {
                name,
                nullable,
                args: args_ty,
            },
            span: self.toks[tstart].span.to(ty_end),
        };
        let mut dims = Vec::new();
        let mut args = None;
        if self.at("[") {
            self.bump();
            dims = self.nested(false, |p| {
                let mut dims = Vec::new();
                if p.at("]") {
                    return Ok(dims);
                }
                loop {
                    dims.push(p.parse_expr()?);
                    if p.eat(",").is_none() {
                        return Ok(dims);
                    }
                }
            })?;
            self.expect("]")?;
            if self.at("(") {
                args = Some(self.parse_args()?);
            } else if self.at("[") {
                self.skip_balanced()?;
            }
        } else if self.at("(") {
            args = Some(self.parse_args()?);
        }
        let span = self.span_from(start);
        Ok(self.mk(
            ExprKind::New {
                ty,
                ctor,
                args,
                dims,
            },
            span,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_method(src: &str) -> Callable {
        let tree = parse_program(src).unwrap();
        match tree.decls.into_iter().next().unwrap() {
            Decl::Callable(c) => c,
            other => panic!("expected callable, got {other:?}"),
        }
    }

    #[test]
    fn minimal_method() {
        let tree = parse_program("method M() {}").unwrap();
        assert_eq!(tree.decls.len(), 1);
        assert_eq!(tree.decls[0].kind(), DeclKind::Method);
        match &tree.decls[0] {
            Decl::Callable(c) => match &c.body {
                Some(CallableBody::Block(b)) => assert!(b.stmts.is_empty()),
                other => panic!("{other:?}"),
            },
            _ => unreachable!(),
        }
    }

    #[test]
    fn chained_comparison() {
        let m = single_method("method M(n: int) { var b := 0 <= n < 10; }");
        let Some(CallableBody::Block(b)) = m.body else {
            panic!()
        };
        let StmtKind::VarDecl { init, .. } = &b.stmts[0].kind else {
            panic!()
        };
        assert!(matches!(&init[0].kind, ExprKind::Chain { ops, .. } if ops.len() == 2));
    }

    #[test]
    fn precedence_of_conditionals() {
        let m = single_method("method M(a: bool, b: bool, c: bool) { var x := a && b ==> c <==> a; }");
        let Some(CallableBody::Block(b)) = m.body else {
            panic!()
        };
        let StmtKind::VarDecl { init, .. } = &b.stmts[0].kind else {
            panic!()
        };
        let ExprKind::Binary { op, lhs, .. } = &init[0].kind else {
            panic!()
        };
        assert_eq!(*op, BinOp::Equiv);
        assert!(matches!(lhs.kind, ExprKind::Binary { op: BinOp::Implies, .. }));
    }

    #[test]
    fn nested_generic_close() {
        let src = "method M() { var s: seq<seq<int>> := []; }";
        let tree = parse_program(src).unwrap();
        assert_eq!(super::super::print_program(&tree), src);
    }

    #[test]
    fn opaque_statements_pass_through() {
        let m = single_method(
            "method M(x: int) { assert x in {1, 2}; ghost var g := 1; calc { x; == x; } forall i | 0 <= i < 3 { } var y := x; }",
        );
        let Some(CallableBody::Block(b)) = m.body else {
            panic!()
        };
        let kinds: Vec<bool> = b.stmts.iter().map(|s| matches!(s.kind, StmtKind::Opaque)).collect();
        assert_eq!(kinds, [true, true, true, true, false]);
    }

    #[test]
    fn spec_clauses_are_spans() {
        let m = single_method(
            "method M(a: array<int>) returns (r: int)\n requires a.Length > 0\n ensures forall i :: 0 <= i < a.Length ==> a[i] <= r\n modifies a\n{ r := a[0]; }",
        );
        assert_eq!(m.specs.len(), 3);
        assert_eq!(m.specs[0].kind, SpecKind::Requires);
        assert_eq!(m.outs.len(), 1);
    }

    #[test]
    fn malformed_input_reports_location() {
        let err = parse_program("method M() {\n  x := ;\n}").unwrap_err();
        assert_eq!(err.line_col(), (2, 8));
        assert!(parse_program("method M() {").is_err());
        assert!(parse_program("class C { method M( }").is_err());
    }

    #[test]
    fn unsupported_declarations_are_opaque() {
        let tree = parse_program(
            "include \"x.dfy\"\ntype T = int\nnewtype N = x: int | 0 <= x < 8\nmethod M() {}",
        )
        .unwrap();
        let kinds: Vec<DeclKind> = tree.decls.iter().map(|d| d.kind()).collect();
        assert_eq!(
            kinds,
            [DeclKind::Opaque, DeclKind::Opaque, DeclKind::Opaque, DeclKind::Method]
        );
    }

    #[test]
    fn datatype_and_match() {
        let tree = parse_program(
            "datatype Q = None | Some(x: set<int>) | All(set<int>)\nmethod M(q: Q) { match q { case None => print 0; case Some(s) => print 1; case _ => } }",
        )
        .unwrap();
        let Decl::Datatype(d) = &tree.decls[0] else {
            panic!()
        };
        assert_eq!(d.ctors.len(), 3);
        assert!(d.ctors[2].params[0].name.is_none());
        let Decl::Callable(m) = &tree.decls[1] else {
            panic!()
        };
        let Some(CallableBody::Block(b)) = &m.body else {
            panic!()
        };
        let StmtKind::Match { cases, .. } = &b.stmts[0].kind else {
            panic!()
        };
        assert_eq!(cases.len(), 3);
        assert!(cases[2].pattern.wildcard);
        assert!(cases[2].body.is_empty());
        assert_eq!(cases[1].pattern.binders.len(), 1);
    }
}
