//! Span-annotated syntax tree for the supported Dafny subset.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::lexer::Token;
use crate::span::SourceSpan;

/// Index of an expression node; the resolver keys its side tables by it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExprId(pub u32);

#[derive(Clone, Debug)]
pub struct SyntaxTree {
    pub(crate) source: String,
    pub(crate) tokens: Vec<Token>,
    pub decls: Vec<Decl>,
    pub(crate) expr_count: u32,
}

impl SyntaxTree {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn expr_count(&self) -> usize {
        self.expr_count as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Modifiers {
    pub ghost: bool,
    pub is_static: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Method,
    Function,
    Predicate,
    Lemma,
    Class,
    Trait,
    Datatype,
    Const,
    Field,
    Module,
    Opaque,
}

#[derive(Clone, Debug)]
pub enum Decl {
    Callable(Callable),
    Class(ClassDecl),
    Datatype(DatatypeDecl),
    Const(ConstDecl),
    Field(FieldDecl),
    Module(ModuleDecl),
    Opaque(SourceSpan),
}

impl Decl {
    pub fn kind(&self) -> DeclKind {
        match self {
            Decl::Callable(c) => match c.kind {
                CallableKind::Method | CallableKind::Constructor => DeclKind::Method,
                CallableKind::Function => DeclKind::Function,
                CallableKind::Predicate => DeclKind::Predicate,
                CallableKind::Lemma => DeclKind::Lemma,
            },
            Decl::Class(c) if c.is_trait => DeclKind::Trait,
            Decl::Class(_) => DeclKind::Class,
            Decl::Datatype(_) => DeclKind::Datatype,
            Decl::Const(_) => DeclKind::Const,
            Decl::Field(_) => DeclKind::Field,
            Decl::Module(_) => DeclKind::Module,
            Decl::Opaque(_) => DeclKind::Opaque,
        }
    }

    pub fn span(&self) -> SourceSpan {
        match self {
            Decl::Callable(c) => c.span,
            Decl::Class(c) => c.span,
            Decl::Datatype(d) => d.span,
            Decl::Const(c) => c.span,
            Decl::Field(f) => f.span,
            Decl::Module(m) => m.span,
            Decl::Opaque(s) => *s,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Decl::Callable(c) => Some(&c.name.name),
            Decl::Class(c) => Some(&c.name.name),
            Decl::Datatype(d) => Some(&d.name.name),
            Decl::Const(c) => Some(&c.name.name),
            Decl::Field(f) => f.vars.first().map(|(n, _)| n.name.as_str()),
            Decl::Module(m) => Some(&m.name.name),
            Decl::Opaque(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CallableKind {
    Method,
    Constructor,
    Function,
    Predicate,
    Lemma,
}

impl CallableKind {
    pub fn is_method_like(self) -> bool {
        matches!(
            self,
            CallableKind::Method | CallableKind::Constructor | CallableKind::Lemma
        )
    }
}

#[derive(Clone, Debug)]
pub struct Callable {
    pub kind: CallableKind,
    pub name: Ident,
    pub modifiers: Modifiers,
    pub params: Vec<Formal>,
    /// Method out-parameters.
    pub outs: Vec<Formal>,
    /// Function result (named or anonymous).
    pub result: Option<Formal>,
    pub specs: Vec<SpecClause>,
    pub body: Option<CallableBody>,
    pub span: SourceSpan,
}

impl Callable {
    pub fn has_postcondition(&self) -> bool {
        self.specs.iter().any(|s| s.kind == SpecKind::Ensures)
    }
}

#[derive(Clone, Debug)]
pub struct Formal {
    pub name: Option<Ident>,
    pub ty: TypeExpr,
    pub ghost: bool,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub enum CallableBody {
    Block(Block),
    /// Function body: `{ expr }`; `span` covers the braces.
    Expr { expr: Expr, span: SourceSpan },
    Opaque(SourceSpan),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    Requires,
    Ensures,
    Reads,
    Modifies,
    Decreases,
    Invariant,
}

/// A contract clause, kept verbatim. Never descended into by the scanner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecClause {
    pub kind: SpecKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct ClassDecl {
    pub is_trait: bool,
    pub name: Ident,
    pub modifiers: Modifiers,
    pub extends: Vec<Ident>,
    pub members: Vec<Decl>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct DatatypeDecl {
    pub name: Ident,
    pub ctors: Vec<CtorDecl>,
    pub members: Vec<Decl>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct CtorDecl {
    pub name: Ident,
    pub params: Vec<Formal>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct ConstDecl {
    pub name: Ident,
    pub ty: Option<TypeExpr>,
    pub init: Option<Expr>,
    pub modifiers: Modifiers,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct FieldDecl {
    pub vars: Vec<(Ident, TypeExpr)>,
    pub modifiers: Modifiers,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct ModuleDecl {
    pub name: Ident,
    pub decls: Vec<Decl>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeExpr {
    pub kind: TypeExprKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExprKind {
    Named {
        name: String,
        nullable: bool,
        args: Vec<TypeExpr>,
    },
    Tuple(Vec<TypeExpr>),
    Arrow,
}

#[derive(Clone, Debug)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    /// Includes the braces.
    pub span: SourceSpan,
}

impl Block {
    /// Span strictly between the braces.
    pub fn interior(&self) -> SourceSpan {
        SourceSpan {
            start: self.span.start + 1,
            end: self.span.end - 1,
            line: self.span.line,
            column: self.span.column + 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct LocalVar {
    pub name: Ident,
    pub ty: Option<TypeExpr>,
}

#[derive(Clone, Debug)]
pub enum StmtKind {
    VarDecl {
        vars: Vec<LocalVar>,
        init: Vec<Expr>,
    },
    Assign {
        lhs: Vec<Expr>,
        rhs: Vec<Expr>,
    },
    /// A call used as a statement.
    Call(Expr),
    If(IfStmt),
    While {
        guard: Expr,
        specs: Vec<SpecClause>,
        body: Option<Block>,
    },
    For {
        index: Ident,
        index_ty: Option<TypeExpr>,
        lo: Expr,
        hi: Expr,
        downward: bool,
        specs: Vec<SpecClause>,
        body: Option<Block>,
    },
    Match {
        scrutinee: Expr,
        cases: Vec<MatchCase>,
    },
    Break {
        keyword: SourceSpan,
        label: Option<Ident>,
    },
    Continue {
        keyword: SourceSpan,
        label: Option<Ident>,
    },
    Return(Vec<Expr>),
    Print(Vec<Expr>),
    Block(Block),
    /// assert/assume/ghost code and other verbatim pass-through statements.
    Opaque,
}

#[derive(Clone, Debug)]
pub struct IfStmt {
    pub guard: Expr,
    pub then_block: Block,
    pub else_keyword: Option<SourceSpan>,
    pub else_branch: Option<ElseBranch>,
}

#[derive(Clone, Debug)]
pub enum ElseBranch {
    Block(Block),
    If(Box<Stmt>),
}

impl ElseBranch {
    pub fn span(&self) -> SourceSpan {
        match self {
            ElseBranch::Block(b) => b.span,
            ElseBranch::If(s) => s.span,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Pattern {
    pub span: SourceSpan,
    pub wildcard: bool,
    pub ctor: Option<Ident>,
    pub binders: Vec<Option<Ident>>,
}

#[derive(Clone, Debug)]
pub struct MatchCase {
    pub pattern: Pattern,
    pub body: Vec<Stmt>,
    /// Covers the body statements; empty (positioned after `=>`) when there are none.
    pub body_span: SourceSpan,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct MatchExprCase {
    pub pattern: Pattern,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Bool(bool),
    Int(String),
    Real(String),
    Char(String),
    Str(String),
    Null,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Equiv,
    Implies,
    Explies,
    And,
    Or,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    In,
    NotIn,
    Disjoint,
    Shl,
    Shr,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    BitAnd,
    BitOr,
    BitXor,
}

/// Replacement groups for binary operator mutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpGroup {
    Additive,
    Division,
    Relational,
    Conditional,
    Bitwise,
    Shift,
    Membership,
}

impl BinOp {
    pub const ALL: [BinOp; 24] = [
        BinOp::Equiv,
        BinOp::Implies,
        BinOp::Explies,
        BinOp::And,
        BinOp::Or,
        BinOp::Eq,
        BinOp::Neq,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::In,
        BinOp::NotIn,
        BinOp::Disjoint,
        BinOp::Shl,
        BinOp::Shr,
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Mod,
        BinOp::BitAnd,
        BinOp::BitOr,
        BinOp::BitXor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BinOp::Equiv => "<==>",
            BinOp::Implies => "==>",
            BinOp::Explies => "<==",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Eq => "==",
            BinOp::Neq => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::In => "in",
            BinOp::NotIn => "!in",
            BinOp::Disjoint => "!!",
            BinOp::Shl => "<<",
            BinOp::Shr => ">>",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::BitAnd => "&",
            BinOp::BitOr => "|",
            BinOp::BitXor => "^",
        }
    }

    pub fn from_str(s: &str) -> Option<BinOp> {
        BinOp::ALL.iter().copied().find(|op| op.as_str() == s)
    }

    pub fn group(self) -> OpGroup {
        use BinOp::*;
        match self {
            Add | Sub | Mul => OpGroup::Additive,
            Div | Mod => OpGroup::Division,
            Eq | Neq | Lt | Le | Gt | Ge => OpGroup::Relational,
            Equiv | Implies | Explies | And | Or => OpGroup::Conditional,
            BitAnd | BitOr | BitXor => OpGroup::Bitwise,
            Shl | Shr => OpGroup::Shift,
            In | NotIn | Disjoint => OpGroup::Membership,
        }
    }

    /// Comparison operators that may be chained (`0 <= i < n`).
    pub fn is_comparison(self) -> bool {
        self.group() == OpGroup::Relational
    }
}

impl OpGroup {
    /// Members of the group, in the order alternatives are generated.
    pub fn members(self) -> &'static [BinOp] {
        use BinOp::*;
        match self {
            OpGroup::Additive => &[Add, Sub, Mul],
            OpGroup::Division => &[Div, Mod],
            OpGroup::Relational => &[Eq, Neq, Lt, Le, Gt, Ge],
            OpGroup::Conditional => &[And, Or, Implies, Explies, Equiv],
            OpGroup::Bitwise => &[BitAnd, BitOr, BitXor],
            OpGroup::Shift => &[Shl, Shr],
            OpGroup::Membership => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Neg,
    Not,
}

impl UnOp {
    pub fn as_str(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Not => "!",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Collection {
    Seq,
    Set,
    Multiset,
}

/// Expression forms that are kept verbatim and never mutated inside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpaqueKind {
    Old,
    Fresh,
    Quantifier,
    Comprehension,
    Lambda,
    Havoc,
    DatatypeUpdate,
    MultisetConversion,
    Other,
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub id: ExprId,
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Lit(Literal),
    Ident(String),
    This,
    Field {
        recv: Box<Expr>,
        field: Ident,
    },
    TupleIndex {
        recv: Box<Expr>,
        index: usize,
        index_span: SourceSpan,
    },
    Index {
        recv: Box<Expr>,
        index: Box<Expr>,
    },
    /// `s[i := v]`
    Update {
        recv: Box<Expr>,
        index: Box<Expr>,
        value: Box<Expr>,
    },
    Slice {
        recv: Box<Expr>,
        lo: Option<Box<Expr>>,
        hi: Option<Box<Expr>>,
    },
    /// Named call, possibly with a receiver: `F(x)`, `o.M(x)`, `D.Ctor(x)`.
    Call {
        recv: Option<Box<Expr>>,
        callee: Ident,
        args: Vec<Expr>,
    },
    /// Application of an arbitrary expression: `f(x)(y)`.
    Apply {
        func: Box<Expr>,
        args: Vec<Expr>,
    },
    Binary {
        op: BinOp,
        op_span: SourceSpan,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    /// Chained comparison with at least two operators.
    Chain {
        operands: Vec<Expr>,
        ops: Vec<(BinOp, SourceSpan)>,
    },
    Unary {
        op: UnOp,
        op_span: SourceSpan,
        operand: Box<Expr>,
    },
    Display {
        flavor: Collection,
        elems: Vec<Expr>,
    },
    MapDisplay {
        entries: Vec<(Expr, Expr)>,
    },
    New {
        ty: TypeExpr,
        ctor: Option<Ident>,
        args: Option<Vec<Expr>>,
        dims: Vec<Expr>,
    },
    Ite {
        guard: Box<Expr>,
        then: Box<Expr>,
        els: Box<Expr>,
    },
    Let {
        vars: Vec<LocalVar>,
        init: Vec<Expr>,
        body: Box<Expr>,
    },
    Match {
        scrutinee: Box<Expr>,
        cases: Vec<MatchExprCase>,
    },
    Paren(Box<Expr>),
    Tuple(Vec<Expr>),
    Cardinality(Box<Expr>),
    Conversion {
        expr: Box<Expr>,
        ty: TypeExpr,
        is_test: bool,
    },
    Opaque(OpaqueKind),
}

impl Expr {
    /// Direct sub-expressions in source order.
    pub fn children(&self) -> Vec<&Expr> {
        let mut out: Vec<&Expr> = Vec::new();
        match &self.kind {
            ExprKind::Lit(_) | ExprKind::Ident(_) | ExprKind::This | ExprKind::Opaque(_) => {}
            ExprKind::Field { recv, .. } | ExprKind::TupleIndex { recv, .. } => out.push(recv),
            ExprKind::Index { recv, index } => {
                out.push(recv);
                out.push(index);
            }
            ExprKind::Update { recv, index, value } => {
                out.push(recv);
                out.push(index);
                out.push(value);
            }
            ExprKind::Slice { recv, lo, hi } => {
                out.push(recv);
                out.extend(lo.as_deref());
                out.extend(hi.as_deref());
            }
            ExprKind::Call { recv, args, .. } => {
                out.extend(recv.as_deref());
                out.extend(args.iter());
            }
            ExprKind::Apply { func, args } => {
                out.push(func);
                out.extend(args.iter());
            }
            ExprKind::Binary { lhs, rhs, .. } => {
                out.push(lhs);
                out.push(rhs);
            }
            ExprKind::Chain { operands, .. } => out.extend(operands.iter()),
            ExprKind::Unary { operand, .. } => out.push(operand),
            ExprKind::Display { elems, .. } | ExprKind::Tuple(elems) => out.extend(elems.iter()),
            ExprKind::MapDisplay { entries } => {
                for (k, v) in entries {
                    out.push(k);
                    out.push(v);
                }
            }
            ExprKind::New { args, dims, .. } => {
                out.extend(dims.iter());
                if let Some(args) = args {
                    out.extend(args.iter());
                }
            }
            ExprKind::Ite { guard, then, els } => {
                out.push(guard);
                out.push(then);
                out.push(els);
            }
            ExprKind::Let { init, body, .. } => {
                out.extend(init.iter());
                out.push(body);
            }
            ExprKind::Match { scrutinee, cases } => {
                out.push(scrutinee);
                out.extend(cases.iter().map(|c| &c.body));
            }
            ExprKind::Paren(e) | ExprKind::Cardinality(e) => out.push(e),
            ExprKind::Conversion { expr, .. } => out.push(expr),
        }
        out
    }

    /// Pre-order traversal of this expression and all descendants.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn strip_parens(&self) -> &Expr {
        match &self.kind {
            ExprKind::Paren(inner) => inner.strip_parens(),
            _ => self,
        }
    }

    pub fn is_literal(&self) -> bool {
        match &self.kind {
            ExprKind::Lit(_) => true,
            ExprKind::Unary {
                op: UnOp::Neg,
                operand,
                ..
            } => matches!(
                operand.kind,
                ExprKind::Lit(Literal::Int(_)) | ExprKind::Lit(Literal::Real(_))
            ),
            _ => false,
        }
    }
}

impl Stmt {
    /// Expressions directly owned by this statement (not those of nested statements).
    pub fn exprs(&self) -> Vec<&Expr> {
        let mut out: Vec<&Expr> = Vec::new();
        match &self.kind {
            StmtKind::VarDecl { init, .. } => out.extend(init.iter()),
            StmtKind::Assign { lhs, rhs } => {
                out.extend(lhs.iter());
                out.extend(rhs.iter());
            }
            StmtKind::Call(e) => out.push(e),
            StmtKind::If(i) => out.push(&i.guard),
            StmtKind::While { guard, .. } => out.push(guard),
            StmtKind::For { lo, hi, .. } => {
                out.push(lo);
                out.push(hi);
            }
            StmtKind::Match { scrutinee, .. } => out.push(scrutinee),
            StmtKind::Return(es) | StmtKind::Print(es) => out.extend(es.iter()),
            StmtKind::Break { .. }
            | StmtKind::Continue { .. }
            | StmtKind::Block(_)
            | StmtKind::Opaque => {}
        }
        out
    }

    /// Nested blocks/statement lists in source order.
    pub fn child_blocks(&self) -> Vec<&[Stmt]> {
        let mut out: Vec<&[Stmt]> = Vec::new();
        match &self.kind {
            StmtKind::If(i) => {
                out.push(&i.then_block.stmts);
                match &i.else_branch {
                    Some(ElseBranch::Block(b)) => out.push(&b.stmts),
                    Some(ElseBranch::If(s)) => out.push(core::slice::from_ref(&**s)),
                    None => {}
                }
            }
            StmtKind::While { body: Some(b), .. } | StmtKind::For { body: Some(b), .. } => {
                out.push(&b.stmts)
            }
            StmtKind::Match { cases, .. } => out.extend(cases.iter().map(|c| c.body.as_slice())),
            StmtKind::Block(b) => out.push(&b.stmts),
            _ => {}
        }
        out
    }
}
