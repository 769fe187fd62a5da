//! One pass over the resolved tree that records every mutable site.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Edit, MutationTarget, OperatorId, Rewrite};
use crate::resolve::{CallableId, ResolvedProgram};
use crate::span::SourceSpan;
use crate::syntax::ast::*;

/// Syntactic slot an expression root occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    AssignRhs,
    Init,
    CallArg,
    Return,
    None,
}

#[derive(Clone, Copy, Debug)]
pub struct CallableSite<'t> {
    pub decl: &'t Callable,
    pub id: Option<CallableId>,
    pub owner: Option<&'t str>,
    /// Owner is a class or trait (so `this` has fields).
    pub owner_is_class: bool,
}

impl CallableSite<'_> {
    pub fn name(&self) -> String {
        match self.owner {
            Some(o) => format!("{o}.{}", self.decl.name.name),
            None => self.decl.name.name.clone(),
        }
    }

    /// A method or constructor without out-parameters.
    pub fn is_void_method(&self) -> bool {
        matches!(
            self.decl.kind,
            CallableKind::Method | CallableKind::Constructor
        ) && self.decl.outs.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExprSite<'t> {
    pub expr: &'t Expr,
    pub parent: Option<&'t Expr>,
    pub callable: usize,
    pub position: Position,
    /// Root of an assignment target.
    pub lhs_root: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct StmtSite<'t> {
    pub stmt: &'t Stmt,
    pub callable: usize,
    /// The `if` directly after an `else`.
    pub else_if_child: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct BlockSite<'t> {
    pub stmts: &'t [Stmt],
    pub callable: usize,
}

pub struct ScanContext<'p, 't> {
    pub prog: &'p ResolvedProgram<'t>,
    pub src: &'t str,
    pub callables: Vec<CallableSite<'t>>,
    pub exprs: Vec<ExprSite<'t>>,
    pub stmts: Vec<StmtSite<'t>>,
    pub blocks: Vec<BlockSite<'t>>,
}

impl<'p, 't> ScanContext<'p, 't> {
    pub fn new(prog: &'p ResolvedProgram<'t>) -> Self {
        let tree = prog.tree();
        let mut cx = ScanContext {
            prog,
            src: tree.source(),
            callables: Vec::new(),
            exprs: Vec::new(),
            stmts: Vec::new(),
            blocks: Vec::new(),
        };
        cx.decls(&tree.decls, None, false);
        cx
    }

    fn decls(&mut self, decls: &'t [Decl], owner: Option<&'t str>, owner_is_class: bool) {
        for d in decls {
            match d {
                Decl::Callable(c) => self.callable(c, owner, owner_is_class),
                Decl::Class(c) => self.decls(&c.members, Some(&c.name.name), true),
                Decl::Datatype(dt) => self.decls(&dt.members, Some(&dt.name.name), false),
                Decl::Module(m) => self.decls(&m.decls, None, false),
                _ => {}
            }
        }
    }

    fn callable(&mut self, c: &'t Callable, owner: Option<&'t str>, owner_is_class: bool) {
        if c.modifiers.ghost || c.kind == CallableKind::Lemma {
            return;
        }
        let idx = self.callables.len();
        match &c.body {
            Some(CallableBody::Block(b)) => {
                self.callables.push(CallableSite {
                    decl: c,
                    id: self.prog.callable_id(c),
                    owner,
                    owner_is_class,
                });
                self.block(&b.stmts, idx);
            }
            Some(CallableBody::Expr { expr, .. }) => {
                self.callables.push(CallableSite {
                    decl: c,
                    id: self.prog.callable_id(c),
                    owner,
                    owner_is_class,
                });
                self.expr(expr, None, idx, Position::Return, false);
            }
            _ => {}
        }
    }

    fn block(&mut self, stmts: &'t [Stmt], callable: usize) {
        self.blocks.push(BlockSite { stmts, callable });
        for s in stmts {
            self.stmt(s, callable, false);
        }
    }

    fn stmt(&mut self, s: &'t Stmt, callable: usize, else_if_child: bool) {
        self.stmts.push(StmtSite {
            stmt: s,
            callable,
            else_if_child,
        });
        match &s.kind {
            StmtKind::VarDecl { init, .. } => {
                for e in init {
                    self.expr(e, None, callable, Position::Init, false);
                }
            }
            StmtKind::Assign { lhs, rhs } => {
                for e in lhs {
                    self.expr(e, None, callable, Position::None, true);
                }
                for e in rhs {
                    self.expr(e, None, callable, Position::AssignRhs, false);
                }
            }
            StmtKind::Return(es) => {
                for e in es {
                    self.expr(e, None, callable, Position::Return, false);
                }
            }
            _ => {
                for e in s.exprs() {
                    self.expr(e, None, callable, Position::None, false);
                }
            }
        }
        match &s.kind {
            StmtKind::If(i) => {
                self.block(&i.then_block.stmts, callable);
                match &i.else_branch {
                    Some(ElseBranch::Block(b)) => self.block(&b.stmts, callable),
                    Some(ElseBranch::If(inner)) => self.stmt(inner, callable, true),
                    None => {}
                }
            }
            _ => {
                for b in s.child_blocks() {
                    self.block(b, callable);
                }
            }
        }
    }

    fn expr(
        &mut self,
        e: &'t Expr,
        parent: Option<&'t Expr>,
        callable: usize,
        position: Position,
        lhs_root: bool,
    ) {
        self.exprs.push(ExprSite {
            expr: e,
            parent,
            callable,
            position,
            lhs_root,
        });
        let args: &[Expr] = match &e.kind {
            ExprKind::Call { args, .. } => args,
            ExprKind::New {
                args: Some(args), ..
            } => args,
            _ => &[],
        };
        for c in e.children() {
            let pos = if args.iter().any(|a| core::ptr::eq(a, c)) {
                Position::CallArg
            } else {
                Position::None
            };
            self.expr(c, Some(e), callable, pos, false);
        }
    }

    pub fn text(&self, span: SourceSpan) -> &'t str {
        span.text(self.src)
    }

    pub fn site(&self, callable: usize) -> &CallableSite<'t> {
        &self.callables[callable]
    }

    /// Expression sites belonging to callable `idx`.
    pub fn exprs_of(&self, idx: usize) -> impl Iterator<Item = &ExprSite<'t>> {
        self.exprs.iter().filter(move |s| s.callable == idx)
    }

    pub fn make(
        &self,
        op: OperatorId,
        callable: usize,
        span: SourceSpan,
        rewrite: Rewrite,
        description: String,
    ) -> MutationTarget {
        let site = &self.callables[callable];
        MutationTarget {
            operator: op,
            span,
            original: self.text(span).into(),
            rewrite,
            description,
            callable: site.name(),
            callable_has_postcondition: site.decl.has_postcondition(),
        }
    }

    pub fn replace(
        &self,
        op: OperatorId,
        callable: usize,
        span: SourceSpan,
        replacement: String,
    ) -> MutationTarget {
        let original = self.text(span);
        let description = if replacement.is_empty() {
            format!("delete `{}`", one_line(original))
        } else if span.is_empty() {
            format!("insert `{}`", one_line(&replacement))
        } else {
            format!("`{}` -> `{}`", one_line(original), one_line(&replacement))
        };
        self.make(op, callable, span, Rewrite::Replace(replacement), description)
    }

    pub fn swap(
        &self,
        op: OperatorId,
        callable: usize,
        first: SourceSpan,
        second: SourceSpan,
    ) -> MutationTarget {
        let description = format!(
            "swap `{}` and `{}`",
            one_line(self.text(first)),
            one_line(self.text(second))
        );
        self.make(
            op,
            callable,
            first.to(second),
            Rewrite::Swap { first, second },
            description,
        )
    }

    pub fn multi(
        &self,
        op: OperatorId,
        callable: usize,
        mut edits: Vec<Edit>,
        description: String,
    ) -> Option<MutationTarget> {
        edits.sort_by_key(|e| e.span.start);
        let first = edits.first()?.span;
        let last = edits.iter().map(|e| e.span).max_by_key(|s| s.end)?;
        Some(self.make(op, callable, first.to(last), Rewrite::Multi(edits), description))
    }
}

/// Collapses whitespace runs so descriptions stay on one line.
pub fn one_line(text: &str) -> String {
    let mut out = String::new();
    for (i, w) in text.split_whitespace().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}
