//! Source reconstruction and text splicing.

use alloc::string::String;
use core::fmt;

use super::ast::SyntaxTree;
use crate::span::SourceSpan;

/// Reassembles the original text from the token stream and its trivia.
pub fn print_program(tree: &SyntaxTree) -> String {
    let src = tree.source();
    let mut out = String::with_capacity(src.len());
    let mut end = 0;
    for tok in tree.tokens() {
        out.push_str(&src[tok.leading..tok.span.end]);
        end = tok.span.end;
    }
    out.push_str(&src[end..]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpliceError {
    SpanOutOfBounds { start: usize, end: usize, len: usize },
}

impl fmt::Display for SpliceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpliceError::SpanOutOfBounds { start, end, len } => {
                write!(f, "span {start}..{end} is outside the {len}-byte source")
            }
        }
    }
}

impl core::error::Error for SpliceError {}

/// Returns `source` with the bytes covered by `span` replaced.
pub fn splice(source: &str, span: SourceSpan, replacement: &str) -> Result<String, SpliceError> {
    let bad = SpliceError::SpanOutOfBounds {
        start: span.start,
        end: span.end,
        len: source.len(),
    };
    if span.start > span.end
        || span.end > source.len()
        || !source.is_char_boundary(span.start)
        || !source.is_char_boundary(span.end)
    {
        return Err(bad);
    }
    let mut out = String::with_capacity(source.len() + replacement.len());
    out.push_str(&source[..span.start]);
    out.push_str(replacement);
    out.push_str(&source[span.end..]);
    Ok(out)
}
