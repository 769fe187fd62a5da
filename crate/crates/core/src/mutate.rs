//! Applying mutation targets to source text.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::resolve::ResolvedProgram;
use crate::scan::{scan, Edit, MutationTarget, OperatorId, Rewrite};
use crate::span::SourceSpan;
use crate::syntax::{splice, SpliceError};

/// One emitted program variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutant {
    /// `<operator>-<line>-<column>-<ordinal>`
    pub id: String,
    pub operator: OperatorId,
    pub target: MutationTarget,
    /// Text that replaces `target.span`.
    pub replacement: String,
    pub text: String,
}

impl Mutant {
    /// True for operators whose edit is recorded as several spans.
    pub fn is_structured(&self) -> bool {
        !matches!(self.target.rewrite, Rewrite::Replace(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutateError {
    /// The source no longer holds the text the scanner saw.
    StaleTarget {
        span: SourceSpan,
        expected: String,
        found: String,
    },
    /// Edits overlap or leave the target span.
    BadEdits { span: SourceSpan },
    Splice(SpliceError),
}

impl fmt::Display for MutateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutateError::StaleTarget {
                span,
                expected,
                found,
            } => write!(f, "stale target at {span}: expected `{expected}`, found `{found}`"),
            MutateError::BadEdits { span } => write!(f, "overlapping edits in target at {span}"),
            MutateError::Splice(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for MutateError {}

impl From<SpliceError> for MutateError {
    fn from(e: SpliceError) -> Self {
        MutateError::Splice(e)
    }
}

pub fn mutant_id(target: &MutationTarget, ordinal: usize) -> String {
    format!(
        "{}-{}-{}-{}",
        target.operator, target.span.line, target.span.column, ordinal
    )
}

/// Applies `target` to `source`. `ordinal` tells apart targets of one
/// operator that start at the same position.
pub fn apply_target(
    source: &str,
    target: &MutationTarget,
    ordinal: usize,
) -> Result<Mutant, MutateError> {
    let span = target.span;
    let found = source.get(span.start..span.end);
    if found != Some(target.original.as_str()) {
        return Err(MutateError::StaleTarget {
            span,
            expected: target.original.clone(),
            found: found.unwrap_or_default().into(),
        });
    }
    let edits: Vec<Edit> = target.edits(source);
    let mut prev_end = span.start;
    for e in &edits {
        if e.span.start < prev_end || e.span.end > span.end || e.span.start > e.span.end {
            return Err(MutateError::BadEdits { span });
        }
        prev_end = e.span.end;
    }
    let mut text = String::from(source);
    for e in edits.iter().rev() {
        text = splice(&text, e.span, &e.replacement)?;
    }
    Ok(Mutant {
        id: mutant_id(target, ordinal),
        operator: target.operator,
        target: target.clone(),
        replacement: target.replacement_text(source),
        text,
    })
}

/// Ordinals for a target list: 1 for the first target of an operator at a
/// position, 2 for the next one there, and so on.
pub fn ordinals(targets: &[MutationTarget]) -> Vec<usize> {
    let mut seen: Vec<(OperatorId, u32, u32, usize)> = Vec::new();
    targets
        .iter()
        .map(|t| {
            let key = (t.operator, t.span.line, t.span.column);
            match seen.iter_mut().find(|s| (s.0, s.1, s.2) == key) {
                Some(s) => {
                    s.3 += 1;
                    s.3
                }
                None => {
                    seen.push((key.0, key.1, key.2, 1));
                    1
                }
            }
        })
        .collect()
}

/// Every mutant of the selected operators, in operator then source order.
pub fn generate_all(
    program: &ResolvedProgram<'_>,
    ops: &[OperatorId],
) -> Result<Vec<Mutant>, MutateError> {
    let targets = scan(program, ops);
    let source = program.source();
    ordinals(&targets)
        .into_iter()
        .zip(&targets)
        .map(|(n, t)| apply_target(source, t, n))
        .collect()
}
