//! Operators over statements and blocks.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::context::ScanContext;
use super::text::{fit, is_atomic};
use super::{MutationTarget, OperatorId};
use crate::span::SourceSpan;
use crate::syntax::ast::*;

pub fn cbe(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let StmtKind::If(i) = &st.stmt.kind else {
            continue;
        };
        if st.else_if_child {
            continue;
        }
        let then = cx.text(i.then_block.interior()).trim().to_string();
        out.push(cx.replace(OperatorId::CBE, st.callable, st.stmt.span, then));
        let els = match &i.else_branch {
            Some(ElseBranch::Block(b)) => cx.text(b.interior()).trim(),
            Some(ElseBranch::If(s)) => cx.text(s.span),
            None => continue,
        };
        out.push(cx.replace(OperatorId::CBE, st.callable, st.stmt.span, els.into()));
    }
    for s in &cx.exprs {
        if let ExprKind::Ite { then, els, .. } = &s.expr.kind {
            for branch in [then, els] {
                let text = fit(cx.text(branch.span), is_atomic(branch), s.parent, s.expr);
                out.push(cx.replace(OperatorId::CBE, s.callable, s.expr.span, text));
            }
        }
    }
    out
}

fn body_text(cx: &ScanContext<'_, '_>, c: &MatchCase) -> String {
    cx.text(c.body_span).to_string()
}

pub fn cbr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let StmtKind::Match { cases, .. } = &st.stmt.kind else {
            continue;
        };
        let Some(wild) = cases.iter().find(|c| c.pattern.wildcard) else {
            continue;
        };
        let Some(first) = cases.iter().find(|c| !c.pattern.wildcard) else {
            continue;
        };
        for c in cases {
            let source = if c.pattern.wildcard { first } else { wild };
            let mut text = body_text(cx, source);
            if text == body_text(cx, c) {
                continue;
            }
            if c.body_span.is_empty() {
                text.insert(0, ' ');
            }
            out.push(cx.replace(OperatorId::CBR, st.callable, c.body_span, text));
        }
    }
    out
}

pub fn cir(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let empty = match &s.expr.kind {
            ExprKind::Display { flavor, elems } if !elems.is_empty() => match flavor {
                Collection::Seq => "[]",
                Collection::Set => "{}",
                Collection::Multiset => "multiset{}",
            },
            ExprKind::MapDisplay { entries } if !entries.is_empty() => "map[]",
            _ => continue,
        };
        out.push(cx.replace(OperatorId::CIR, s.callable, s.expr.span, empty.into()));
    }
    for st in &cx.stmts {
        let StmtKind::VarDecl { vars, init } = &st.stmt.kind else {
            continue;
        };
        let ([v], [e]) = (vars.as_slice(), init.as_slice()) else {
            continue;
        };
        let nullable = matches!(
            v.ty.as_ref().map(|t| &t.kind),
            Some(TypeExprKind::Named { nullable: true, .. })
        );
        if nullable && matches!(&e.kind, ExprKind::New { dims, .. } if dims.is_empty()) {
            out.push(cx.replace(OperatorId::CIR, st.callable, e.span, "null".into()));
        }
    }
    out
}

pub fn lsr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let (keyword, other) = match &st.stmt.kind {
            StmtKind::Break { keyword, .. } => (keyword, "continue"),
            StmtKind::Continue { keyword, .. } => (keyword, "break"),
            _ => continue,
        };
        out.push(cx.replace(OperatorId::LSR, st.callable, *keyword, other.into()));
        if cx.site(st.callable).is_void_method() {
            out.push(cx.replace(OperatorId::LSR, st.callable, st.stmt.span, "return;".into()));
        }
    }
    out
}

pub fn lbi(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let body = match &st.stmt.kind {
            StmtKind::While { body: Some(b), .. } | StmtKind::For { body: Some(b), .. } => b,
            _ => continue,
        };
        let at = body.span.start + 1;
        let span = SourceSpan::new(at, at, body.span.line, body.span.column + 1);
        out.push(cx.replace(OperatorId::LBI, st.callable, span, " break;".into()));
    }
    out
}

pub fn sdl(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        match &st.stmt.kind {
            StmtKind::VarDecl { .. }
            | StmtKind::Assign { .. }
            | StmtKind::Call(_)
            | StmtKind::Print(_)
            | StmtKind::Break { .. }
            | StmtKind::Continue { .. }
            | StmtKind::Return(_) => {
                out.push(cx.replace(OperatorId::SDL, st.callable, st.stmt.span, String::new()));
            }
            StmtKind::If(i) => match &i.else_branch {
                None if !st.else_if_child => {
                    out.push(cx.replace(OperatorId::SDL, st.callable, st.stmt.span, String::new()));
                }
                None => {}
                Some(b) => {
                    let span = i.then_block.span.empty_after().to(b.span());
                    out.push(cx.replace(OperatorId::SDL, st.callable, span, String::new()));
                }
            },
            _ => {}
        }
    }
    for (idx, site) in cx.callables.iter().enumerate() {
        if let Some(CallableBody::Block(b)) = &site.decl.body {
            if site.is_void_method() && !b.stmts.is_empty() {
                out.push(cx.replace(OperatorId::SDL, idx, b.interior(), String::new()));
            }
        }
    }
    out
}

pub fn sws(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for b in &cx.blocks {
        for pair in b.stmts.windows(2) {
            let (x, y) = (&pair[0], &pair[1]);
            if matches!(x.kind, StmtKind::Opaque) || matches!(y.kind, StmtKind::Opaque) {
                continue;
            }
            if cx.text(x.span) != cx.text(y.span) {
                out.push(cx.swap(OperatorId::SWS, b.callable, x.span, y.span));
            }
        }
    }
    out
}

pub fn swv(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for b in &cx.blocks {
        let decls: Vec<(&Expr, &crate::resolve::TypeRef)> = b
            .stmts
            .iter()
            .filter_map(|s| match &s.kind {
                StmtKind::VarDecl { vars, init } if vars.len() == 1 && init.len() == 1 => {
                    let id = cx.prog.local_var(&vars[0].name)?;
                    Some((&init[0], &cx.prog.var(id).ty))
                }
                _ => None,
            })
            .collect();
        for i in 0..decls.len() {
            for j in i + 1..decls.len() {
                let ((a, ta), (c, tc)) = (decls[i], decls[j]);
                if ta.same_as(tc) && cx.text(a.span) != cx.text(c.span) {
                    out.push(cx.swap(OperatorId::SWV, b.callable, a.span, c.span));
                }
            }
        }
    }
    out
}
