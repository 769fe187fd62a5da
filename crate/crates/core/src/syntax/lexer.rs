//! Tokenizer for the supported Dafny subset.
//!
//! Every byte of the input belongs either to a token or to the trivia
//! (whitespace and comments) leading up to one, so concatenating
//! `source[tok.leading..tok.span.end]` over all tokens and appending the
//! tail after the last token reproduces the input exactly.

use alloc::vec::Vec;
use core::fmt;

use crate::span::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Int,
    Real,
    Char,
    Str,
    Symbol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
    /// Offset where this token's leading trivia begins.
    pub leading: usize,
}

impl Token {
    pub fn text<'s>(&self, source: &'s str) -> &'s str {
        self.span.text(source)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexError {
    pub line: u32,
    pub column: u32,
    pub message: alloc::string::String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl core::error::Error for LexError {}

/// Multi-character operators, longest first so matching is greedy.
const SYMBOLS: &[&str] = &[
    "<==>", "==>", "<==", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", ":=", "..", "::", "=>",
    ":-", ":|", "!!", "->", "~>",
];

const SINGLE: &[u8] = b"+-*/%<>!&|^=()[]{},;:.?@#`$~\\";

pub fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '?'
}

struct Lexer<'s> {
    src: &'s str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'s> Lexer<'s> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: u32, column: u32, message: &str) -> LexError {
        LexError {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_at(1) == Some('/') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    let mut depth = 1usize;
                    while depth > 0 {
                        match self.peek() {
                            None => return Err(self.error(line, col, "unterminated block comment")),
                            Some('*') if self.peek_at(1) == Some('/') => {
                                self.bump();
                                self.bump();
                                depth -= 1;
                            }
                            Some('/') if self.peek_at(1) == Some('*') => {
                                self.bump();
                                self.bump();
                                depth += 1;
                            }
                            Some(_) => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn lex_number(&mut self, digits_only: bool) -> TokenKind {
        if self.peek() == Some('0') && matches!(self.peek_at(1), Some('x') | Some('X')) {
            self.bump();
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_hexdigit() || c == '_') {
                self.bump();
            }
            return TokenKind::Int;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
            self.bump();
        }
        if !digits_only
            && self.peek() == Some('.')
            && matches!(self.peek_at(1), Some(c) if c.is_ascii_digit())
        {
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
                self.bump();
            }
            return TokenKind::Real;
        }
        TokenKind::Int
    }

    fn lex_quoted(&mut self, quote: char, line: u32, col: u32) -> Result<(), LexError> {
        self.bump();
        loop {
            match self.bump() {
                None | Some('\n') if quote == '\'' => {
                    return Err(self.error(line, col, "unterminated character literal"))
                }
                None => return Err(self.error(line, col, "unterminated string literal")),
                Some('\\') => {
                    self.bump();
                }
                Some(c) if c == quote => return Ok(()),
                Some(_) => {}
            }
        }
    }

    fn lex_verbatim(&mut self, line: u32, col: u32) -> Result<(), LexError> {
        self.bump();
        self.bump();
        loop {
            match self.bump() {
                None => return Err(self.error(line, col, "unterminated verbatim string")),
                Some('"') if self.peek() == Some('"') => {
                    self.bump();
                }
                Some('"') => return Ok(()),
                Some(_) => {}
            }
        }
    }
}

/// Splits `text` into tokens. Comments and whitespace become leading trivia.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut lx = Lexer {
        src: text,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out: Vec<Token> = Vec::new();
    loop {
        let leading = lx.pos;
        lx.skip_trivia()?;
        let Some(c) = lx.peek() else { break };
        let (start, line, col) = (lx.pos, lx.line, lx.col);
        let after_dot = out
            .last()
            .map(|t| t.kind == TokenKind::Symbol && t.text(text) == ".")
            .unwrap_or(false);
        let kind = if is_ident_start(c) {
            while matches!(lx.peek(), Some(c) if is_ident_continue(c)) {
                lx.bump();
            }
            TokenKind::Ident
        } else if c.is_ascii_digit() {
            lx.lex_number(after_dot)
        } else if c == '"' {
            lx.lex_quoted('"', line, col)?;
            TokenKind::Str
        } else if c == '@' && lx.peek_at(1) == Some('"') {
            lx.lex_verbatim(line, col)?;
            TokenKind::Str
        } else if c == '\'' {
            lx.lex_quoted('\'', line, col)?;
            TokenKind::Char
        } else if c == '!'
            && text[start..].starts_with("!in")
            && !text[start + 3..].chars().next().is_some_and(is_ident_continue)
        {
            for _ in 0..3 {
                lx.bump();
            }
            TokenKind::Symbol
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[start..].starts_with(**s)) {
            for _ in 0..sym.len() {
                lx.bump();
            }
            TokenKind::Symbol
        } else if c.is_ascii() && SINGLE.contains(&(c as u8)) {
            lx.bump();
            TokenKind::Symbol
        } else {
            return Err(lx.error(line, col, &alloc::format!("unrecognized character `{c}`")));
        };
        out.push(Token {
            kind,
            span: SourceSpan::new(start, lx.pos, line, col),
            leading,
        });
    }
    Ok(out)
}
