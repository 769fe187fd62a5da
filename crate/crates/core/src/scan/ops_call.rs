//! Operators over calls and constructor applications.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::context::ScanContext;
use super::text::{default_value, fit, is_atomic};
use super::{MutationTarget, OperatorId};
use crate::resolve::{Binding, CallableId, CallableSignature};
use crate::span::SourceSpan;
use crate::syntax::ast::*;

fn bound_callable(cx: &ScanContext<'_, '_>, e: &Expr) -> Option<CallableId> {
    match (&e.kind, cx.prog.binding(e)) {
        (ExprKind::Call { .. }, Some(Binding::Callable(id))) => Some(*id),
        _ => None,
    }
}

fn callee_span(e: &Expr) -> Option<SourceSpan> {
    match &e.kind {
        ExprKind::Call { callee, .. } => Some(callee.span),
        _ => None,
    }
}

/// Callables that could stand in for `id` at a call site: same owner,
/// same signature, not a constructor and not ghost.
fn alternatives<'a>(
    cx: &'a ScanContext<'_, '_>,
    id: CallableId,
) -> impl Iterator<Item = &'a CallableSignature> + 'a {
    let me = cx.prog.callable(id);
    let pool: Vec<CallableId> = match &me.owner {
        Some(o) => cx.prog.symbols.all_members(o),
        None => (0..cx.prog.symbols.callables.len() as u32)
            .map(CallableId)
            .filter(|&c| cx.prog.callable(c).owner.is_none())
            .collect(),
    };
    pool.into_iter()
        .map(move |c| cx.prog.callable(c))
        .filter(move |c| {
            c.name != me.name && c.kind != CallableKind::Constructor && !c.is_ghost && c.matches(me)
        })
}

pub fn mcr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let (Some(id), Some(span)) = (bound_callable(cx, s.expr), callee_span(s.expr)) else {
            continue;
        };
        if cx.prog.callable(id).kind == CallableKind::Constructor {
            continue;
        }
        for alt in alternatives(cx, id) {
            out.push(cx.replace(OperatorId::MCR, s.callable, span, alt.name.clone()));
        }
    }
    out
}

/// AMR (`get` prefix) and MMR (`set` prefix).
pub fn accessor(cx: &ScanContext<'_, '_>, prefix: &str, op: OperatorId) -> Vec<MutationTarget> {
    let has_prefix = |n: &str| n.len() >= prefix.len() && n[..prefix.len()].eq_ignore_ascii_case(prefix);
    let mut out = Vec::new();
    for s in &cx.exprs {
        let (Some(id), Some(span)) = (bound_callable(cx, s.expr), callee_span(s.expr)) else {
            continue;
        };
        if !has_prefix(&cx.prog.callable(id).name) {
            continue;
        }
        for alt in alternatives(cx, id).filter(|c| has_prefix(&c.name)) {
            out.push(cx.replace(op, s.callable, span, alt.name.clone()));
        }
    }
    out
}

pub fn dcr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let Some(Binding::Ctor { datatype, index }) = cx.prog.binding(s.expr) else {
            continue;
        };
        let span = match &s.expr.kind {
            ExprKind::Call { callee, .. } => callee.span,
            ExprKind::Ident(_) => s.expr.span,
            ExprKind::Field { field, .. } => field.span,
            _ => continue,
        };
        let Some(info) = cx.prog.symbols.datatypes.get(datatype) else {
            continue;
        };
        let me = &info.ctors[*index].name;
        for sib in cx.prog.sibling_constructors(datatype, me) {
            out.push(cx.replace(OperatorId::DCR, s.callable, span, sib.to_string()));
        }
    }
    out
}

fn call_args(e: &Expr) -> &[Expr] {
    match &e.kind {
        ExprKind::Call { args, .. } => args,
        ExprKind::New {
            args: Some(args), ..
        } => args,
        _ => &[],
    }
}

pub fn map(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let Some(id) = bound_callable(cx, s.expr) else {
            continue;
        };
        let Some(t) = cx.prog.callable(id).result_type() else {
            continue;
        };
        for a in call_args(s.expr) {
            if cx.prog.type_of(a).same_as(t) {
                let text = fit(cx.text(a.span), is_atomic(a), s.parent, s.expr);
                out.push(cx.replace(OperatorId::MAP, s.callable, s.expr.span, text));
            }
        }
    }
    out
}

pub fn mnr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let ExprKind::Call { recv: Some(recv), .. } = &s.expr.kind else {
            continue;
        };
        let Some(id) = bound_callable(cx, s.expr) else {
            continue;
        };
        let Some(t) = cx.prog.callable(id).result_type() else {
            continue;
        };
        if cx.prog.type_of(recv).same_as(t) {
            let text = fit(cx.text(recv.span), is_atomic(recv), s.parent, s.expr);
            out.push(cx.replace(OperatorId::MNR, s.callable, s.expr.span, text));
        }
    }
    out
}

pub fn mvr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let Some(id) = bound_callable(cx, s.expr) else {
            continue;
        };
        let (Some(t), Some(scope)) = (cx.prog.callable(id).result_type(), cx.prog.scope_of(s.expr)) else {
            continue;
        };
        for v in cx.prog.variables_of_type(scope, t, "") {
            out.push(cx.replace(OperatorId::MVR, s.callable, s.expr.span, v.to_string()));
        }
    }
    out
}

pub fn mrr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let call = match &st.stmt.kind {
            StmtKind::VarDecl { init, .. } if init.len() == 1 => &init[0],
            StmtKind::Assign { rhs, .. } if rhs.len() == 1 => &rhs[0],
            _ => continue,
        };
        let Some(id) = bound_callable(cx, call) else {
            continue;
        };
        let sig = cx.prog.callable(id);
        if !sig.is_method() || sig.returns.is_empty() {
            continue;
        }
        let defaults: Option<Vec<&str>> = sig.returns.iter().map(default_value).collect();
        if let Some(d) = defaults {
            out.push(cx.replace(OperatorId::MRR, st.callable, call.span, d.join(", ")));
        }
    }
    out
}

pub fn sar(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let applicable = matches!(
            cx.prog.binding(s.expr),
            Some(Binding::Callable(_) | Binding::Ctor { .. })
        ) || matches!(s.expr.kind, ExprKind::New { .. });
        if !applicable {
            continue;
        }
        let args = call_args(s.expr);
        for i in 0..args.len() {
            for j in i + 1..args.len() {
                let (a, b) = (&args[i], &args[j]);
                if cx.prog.type_of(a).same_as(cx.prog.type_of(b))
                    && cx.text(a.span) != cx.text(b.span)
                {
                    out.push(cx.swap(OperatorId::SAR, s.callable, a.span, b.span));
                }
            }
        }
    }
    out
}
