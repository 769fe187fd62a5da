//! Operators over variables, fields, tuples and `this`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::context::ScanContext;
use super::{MutationTarget, OperatorId};
use crate::resolve::{Binding, TypeRef, VarKind};
use crate::syntax::ast::*;

pub fn ver(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        if s.lhs_root || !matches!(s.expr.kind, ExprKind::Ident(_)) {
            continue;
        }
        let (Some(v), Some(scope)) = (cx.prog.var_of(s.expr), cx.prog.scope_of(s.expr)) else {
            continue;
        };
        let info = cx.prog.var(v);
        for name in cx.prog.variables_of_type(scope, &info.ty, &info.name) {
            out.push(cx.replace(OperatorId::VER, s.callable, s.expr.span, name.to_string()));
        }
    }
    out
}

pub fn far(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        if s.lhs_root {
            continue;
        }
        let ExprKind::Field { recv, field } = &s.expr.kind else {
            continue;
        };
        if !matches!(cx.prog.binding(s.expr), Some(Binding::Member { .. })) {
            continue;
        }
        let (TypeRef::Class { name: class, .. } | TypeRef::Trait(class)) = cx.prog.type_of(recv) else {
            continue;
        };
        let ty = cx.prog.type_of(s.expr);
        for f in cx.prog.symbols.all_fields(class) {
            if f.name != field.name && !f.ghost && !f.is_static && f.ty.same_as(ty) {
                out.push(cx.replace(OperatorId::FAR, s.callable, field.span, f.name.clone()));
            }
        }
    }
    out
}

pub fn tar(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let ExprKind::TupleIndex {
            recv,
            index,
            index_span,
        } = &s.expr.kind
        else {
            continue;
        };
        let TypeRef::Tuple(elems) = cx.prog.type_of(recv) else {
            continue;
        };
        let Some(mine) = elems.get(*index) else {
            continue;
        };
        for (j, t) in elems.iter().enumerate() {
            if j != *index && t.same_as(mine) {
                out.push(cx.replace(OperatorId::TAR, s.callable, *index_span, j.to_string()));
            }
        }
    }
    out
}

pub fn prv(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let Some((trait_name, rhs)) = cx.prog.parent_assignment(st.stmt) else {
            continue;
        };
        let (Some(v), Some(scope)) = (cx.prog.var_of(rhs), cx.prog.scope_of(rhs)) else {
            continue;
        };
        let TypeRef::Class { name: current, .. } = &cx.prog.var(v).ty else {
            continue;
        };
        let children = cx.prog.children_of_trait(&trait_name);
        for id in cx.prog.scopes().visible(scope) {
            let cand = cx.prog.var(id);
            if let TypeRef::Class { name, .. } = &cand.ty {
                if name != current && children.contains(&name.as_str()) {
                    out.push(cx.replace(OperatorId::PRV, st.callable, rhs.span, cand.name.clone()));
                }
            }
        }
    }
    out
}

fn has_param(decl: &Callable, name: &str) -> bool {
    decl.params
        .iter()
        .any(|p| p.name.as_ref().is_some_and(|n| n.name == name))
}

pub fn thi(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let site = cx.site(s.callable);
        let (Some(owner), true) = (site.owner, site.owner_is_class) else {
            continue;
        };
        if s.lhs_root || site.decl.modifiers.is_static {
            continue;
        }
        let ExprKind::Ident(name) = &s.expr.kind else {
            continue;
        };
        let Some(v) = cx.prog.var_of(s.expr) else {
            continue;
        };
        if cx.prog.var(v).kind != VarKind::Param {
            continue;
        }
        let shadows = cx
            .prog
            .symbols
            .field(owner, name)
            .is_some_and(|f| !f.is_static);
        if shadows {
            out.push(cx.replace(OperatorId::THI, s.callable, s.expr.span, format!("this.{name}")));
        }
    }
    out
}

pub fn thd(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        if s.lhs_root {
            continue;
        }
        let ExprKind::Field { recv, field } = &s.expr.kind else {
            continue;
        };
        if matches!(recv.kind, ExprKind::This) && has_param(cx.site(s.callable).decl, &field.name) {
            out.push(cx.replace(OperatorId::THD, s.callable, s.expr.span, field.name.clone()));
        }
    }
    out
}
