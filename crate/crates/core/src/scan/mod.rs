//! Mutation-target discovery for the 32 operators.

mod context;
mod ops_call;
mod ops_expr;
mod ops_oo;
mod ops_stmt;
mod text;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::resolve::ResolvedProgram;
use crate::span::SourceSpan;

pub use context::{CallableSite, ExprSite, Position, ScanContext};

macro_rules! operators {
    ($($id:ident => $desc:literal,)*) => {
        /// The closed set of mutation operators.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum OperatorId {
            $($id,)*
        }

        impl OperatorId {
            pub const ALL: [OperatorId; 32] = [$(OperatorId::$id,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(OperatorId::$id => stringify!($id),)*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $(OperatorId::$id => $desc,)*
                }
            }
        }
    };
}

operators! {
    AMR => "accessor method replacement",
    BBR => "binary expression replaced by boolean literal",
    BOR => "binary operator replacement",
    CBE => "conditional block extraction",
    CBR => "case block replacement",
    CIR => "collection initialization replacement",
    DCR => "datatype constructor replacement",
    EVR => "expression value replacement",
    FAR => "field access replacement",
    LBI => "loop break insertion",
    LSR => "loop statement replacement",
    LVR => "literal value replacement",
    MAP => "method call replaced by argument",
    MCR => "method call replacement",
    MMR => "modifier method replacement",
    MNR => "method call replaced by receiver",
    MRR => "method return value replacement",
    MVR => "method call replaced by variable",
    ODL => "operator deletion",
    PRV => "polymorphic reference replacement",
    SAR => "swap arguments",
    SDL => "statement deletion",
    SLD => "slice bound deletion",
    SWS => "swap statements",
    SWV => "swap variable declarations",
    TAR => "tuple access replacement",
    THD => "this keyword deletion",
    THI => "this keyword insertion",
    UOD => "unary operator deletion",
    UOI => "unary operator insertion",
    VDL => "variable deletion",
    VER => "variable expression replacement",
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownOperator(pub String);

impl fmt::Display for UnknownOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown operator `{}`", self.0)
    }
}

impl core::error::Error for UnknownOperator {}

impl FromStr for OperatorId {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        OperatorId::ALL
            .iter()
            .copied()
            .find(|op| op.as_str() == upper)
            .ok_or_else(|| UnknownOperator(s.into()))
    }
}

/// One contiguous replacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edit {
    pub span: SourceSpan,
    pub replacement: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rewrite {
    /// Replace the target span; an empty string deletes, an empty span inserts.
    Replace(String),
    /// Exchange the texts of two disjoint spans.
    Swap { first: SourceSpan, second: SourceSpan },
    /// Several disjoint edits applied together.
    Multi(Vec<Edit>),
}

/// One applicable mutation found by the scanner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationTarget {
    pub operator: OperatorId,
    /// Covers every edited byte.
    pub span: SourceSpan,
    /// Source text of `span` at scan time.
    pub original: String,
    pub rewrite: Rewrite,
    pub description: String,
    pub callable: String,
    pub callable_has_postcondition: bool,
}

impl MutationTarget {
    /// The rewrite as disjoint edits sorted by position.
    pub fn edits(&self, source: &str) -> Vec<Edit> {
        let mut out = match &self.rewrite {
            Rewrite::Replace(r) => alloc::vec![Edit {
                span: self.span,
                replacement: r.clone(),
            }],
            Rewrite::Swap { first, second } => alloc::vec![
                Edit {
                    span: *first,
                    replacement: second.text(source).into(),
                },
                Edit {
                    span: *second,
                    replacement: first.text(source).into(),
                },
            ],
            Rewrite::Multi(edits) => edits.clone(),
        };
        out.sort_by_key(|e| (e.span.start, e.span.end));
        out
    }

    /// Text that replaces `span` once the rewrite is applied.
    pub fn replacement_text(&self, source: &str) -> String {
        let mut out = String::new();
        let mut pos = self.span.start;
        for e in self.edits(source) {
            out.push_str(&source[pos..e.span.start]);
            out.push_str(&e.replacement);
            pos = e.span.end;
        }
        out.push_str(&source[pos..self.span.end]);
        out
    }
}

/// All targets of one operator, in source order.
pub fn targets(program: &ResolvedProgram<'_>, op: OperatorId) -> Vec<MutationTarget> {
    let cx = ScanContext::new(program);
    targets_in(&cx, op)
}

fn targets_in(cx: &ScanContext<'_, '_>, op: OperatorId) -> Vec<MutationTarget> {
    use OperatorId::*;
    let mut out = match op {
        AMR => ops_call::accessor(cx, "get", AMR),
        MMR => ops_call::accessor(cx, "set", MMR),
        BBR => ops_expr::bbr(cx),
        BOR => ops_expr::bor(cx),
        CBE => ops_stmt::cbe(cx),
        CBR => ops_stmt::cbr(cx),
        CIR => ops_stmt::cir(cx),
        DCR => ops_call::dcr(cx),
        EVR => ops_expr::evr(cx),
        FAR => ops_oo::far(cx),
        LBI => ops_stmt::lbi(cx),
        LSR => ops_stmt::lsr(cx),
        LVR => ops_expr::lvr(cx),
        MAP => ops_call::map(cx),
        MCR => ops_call::mcr(cx),
        MNR => ops_call::mnr(cx),
        MRR => ops_call::mrr(cx),
        MVR => ops_call::mvr(cx),
        ODL => ops_expr::odl(cx),
        PRV => ops_oo::prv(cx),
        SAR => ops_call::sar(cx),
        SDL => ops_stmt::sdl(cx),
        SLD => ops_expr::sld(cx),
        SWS => ops_stmt::sws(cx),
        SWV => ops_stmt::swv(cx),
        TAR => ops_oo::tar(cx),
        THD => ops_oo::thd(cx),
        THI => ops_oo::thi(cx),
        UOD => ops_expr::uod(cx),
        UOI => ops_expr::uoi(cx),
        VDL => ops_expr::vdl(cx),
        VER => ops_oo::ver(cx),
    };
    out.sort_by_key(|t| t.span.start);
    out
}

/// Targets for the selected operators, grouped in operator order and
/// source order within each operator.
pub fn scan(program: &ResolvedProgram<'_>, ops: &[OperatorId]) -> Vec<MutationTarget> {
    let cx = ScanContext::new(program);
    let mut selected: Vec<OperatorId> = ops.to_vec();
    selected.sort();
    selected.dedup();
    selected.into_iter().flat_map(|op| targets_in(&cx, op)).collect()
}
