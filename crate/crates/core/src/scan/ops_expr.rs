//! Operators over expressions: operators, literals and values.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::context::{ExprSite, Position, ScanContext};
use super::text::{fit, int_value, is_atomic, real_value};
use super::{Edit, MutationTarget, OperatorId};
use crate::resolve::{Binding, TypeRef};
use crate::syntax::ast::*;

fn level(op: BinOp) -> u8 {
    use BinOp::*;
    match op {
        Equiv => 1,
        Implies | Explies => 2,
        And | Or => 3,
        Eq | Neq | Lt | Le | Gt | Ge | In | NotIn | Disjoint => 4,
        Shl | Shr => 5,
        Add | Sub => 6,
        Mul | Div | Mod => 7,
        BitAnd | BitOr | BitXor => 8,
    }
}

/// Operators that Dafny refuses to mix at one level without parentheses.
fn needs_grouping(op: BinOp) -> bool {
    use BinOp::*;
    matches!(op, And | Or | Implies | Explies | BitAnd | BitOr | BitXor)
}

fn binary_level(e: &Expr) -> Option<u8> {
    match &e.kind {
        ExprKind::Binary { op, .. } => Some(level(*op)),
        _ => None,
    }
}

fn relational_alternatives(cx: &ScanContext<'_, '_>, a: &Expr, b: &Expr) -> &'static [BinOp] {
    let ta = cx.prog.type_of(a);
    let t = if ta.is_unknown() { cx.prog.type_of(b) } else { ta };
    if !t.is_unknown() && !t.is_ordered() {
        &[BinOp::Eq, BinOp::Neq]
    } else {
        OpGroup::Relational.members()
    }
}

fn operand_text(cx: &ScanContext<'_, '_>, e: &Expr) -> String {
    let t = cx.text(e.span);
    if is_atomic(e) {
        t.into()
    } else {
        format!("({t})")
    }
}

pub fn bor(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        match &s.expr.kind {
            ExprKind::Binary {
                op,
                op_span,
                lhs,
                rhs,
            } => {
                let group = op.group();
                let alts: &[BinOp] = if group == OpGroup::Relational {
                    relational_alternatives(cx, lhs, rhs)
                } else {
                    group.members()
                };
                let crowded = needs_grouping(*op)
                    && [Some(&**lhs), Some(&**rhs), s.parent]
                        .into_iter()
                        .flatten()
                        .any(|n| binary_level(n) == Some(level(*op)));
                for &alt in alts.iter().filter(|&&a| a != *op) {
                    if level(alt) == level(*op) && !crowded {
                        out.push(cx.replace(OperatorId::BOR, s.callable, *op_span, alt.as_str().into()));
                    } else {
                        let text = format!(
                            "{} {} {}",
                            operand_text(cx, lhs),
                            alt.as_str(),
                            operand_text(cx, rhs)
                        );
                        let text = fit(&text, false, s.parent, s.expr);
                        out.push(cx.replace(OperatorId::BOR, s.callable, s.expr.span, text));
                    }
                }
            }
            ExprKind::Chain { operands, ops } => {
                for (i, (op, span)) in ops.iter().enumerate() {
                    let alts = relational_alternatives(cx, &operands[i], &operands[i + 1]);
                    for &alt in alts.iter().filter(|&&a| a != *op) {
                        out.push(cx.replace(OperatorId::BOR, s.callable, *span, alt.as_str().into()));
                    }
                }
            }
            _ => {}
        }
    }
    out
}

pub fn bbr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let eligible = match &s.expr.kind {
            ExprKind::Binary { op, .. } => {
                matches!(op.group(), OpGroup::Relational | OpGroup::Conditional)
            }
            ExprKind::Chain { .. } => true,
            _ => false,
        };
        if eligible {
            for lit in ["true", "false"] {
                out.push(cx.replace(OperatorId::BBR, s.callable, s.expr.span, lit.into()));
            }
        }
    }
    out
}

fn is_method_call(cx: &ScanContext<'_, '_>, e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Call { .. } => match cx.prog.binding(e) {
            Some(Binding::Callable(id)) => cx.prog.callable(*id).is_method(),
            _ => false,
        },
        ExprKind::New { .. } => true,
        _ => false,
    }
}

fn unary_operand_of(e: &Expr) -> Option<(UnOp, &Expr)> {
    match &e.kind {
        ExprKind::Unary { op, operand, .. } => Some((*op, operand)),
        _ => None,
    }
}

pub fn uoi(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let e = s.expr;
        if s.lhs_root
            || e.is_literal()
            || matches!(e.kind, ExprKind::Paren(_) | ExprKind::Opaque(_))
            || is_method_call(cx, e)
        {
            continue;
        }
        let op = match cx.prog.type_of(e) {
            TypeRef::Int | TypeRef::Nat | TypeRef::Real => UnOp::Neg,
            TypeRef::Bool | TypeRef::BitVector(_) => UnOp::Not,
            _ => continue,
        };
        if unary_operand_of(e).is_some_and(|(o, _)| o == op) {
            continue;
        }
        if s.parent
            .and_then(unary_operand_of)
            .is_some_and(|(o, _)| o == op)
        {
            continue;
        }
        let text = format!("{}({})", op.as_str(), cx.text(e.span));
        out.push(cx.replace(OperatorId::UOI, s.callable, e.span, text));
    }
    out
}

pub fn uod(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        if let Some((_, operand)) = unary_operand_of(s.expr) {
            let text = cx.text(operand.span).to_string();
            out.push(cx.replace(OperatorId::UOD, s.callable, s.expr.span, text));
        }
    }
    out
}

/// Value of a (possibly negated) numeric literal.
enum Numeric {
    Int(i128),
    Real(f64),
}

fn numeric_literal(e: &Expr) -> Option<Numeric> {
    match &e.kind {
        ExprKind::Lit(Literal::Int(t)) => int_value(t).map(Numeric::Int),
        ExprKind::Lit(Literal::Real(t)) => real_value(t).map(Numeric::Real),
        ExprKind::Unary {
            op: UnOp::Neg,
            operand,
            ..
        } => match numeric_literal(operand)? {
            Numeric::Int(v) => Some(Numeric::Int(-v)),
            Numeric::Real(v) => Some(Numeric::Real(-v)),
        },
        _ => None,
    }
}

fn literal_replacements(e: &Expr) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    match &e.kind {
        ExprKind::Lit(Literal::Bool(b)) => out.push((!b).to_string()),
        ExprKind::Lit(Literal::Str(t)) => {
            let empty = t == "\"\"" || t == "@\"\"";
            out.push(if empty { "\"A\"" } else { "\"\"" }.into());
        }
        ExprKind::Lit(Literal::Char(t)) => {
            out.push(if t == "'a'" { "'b'" } else { "'a'" }.into());
        }
        _ => match numeric_literal(e) {
            Some(Numeric::Int(v)) => {
                for c in [Some(0), Some(1), Some(-1), v.checked_add(1), v.checked_sub(1)]
                    .into_iter()
                    .flatten()
                {
                    if c != v && !out.contains(&c.to_string()) {
                        out.push(c.to_string());
                    }
                }
            }
            Some(Numeric::Real(v)) => {
                for (c, t) in [(0.0, "0.0"), (1.0, "1.0"), (-1.0, "-1.0")] {
                    if c != v {
                        out.push(t.into());
                    }
                }
            }
            None => {}
        },
    }
    out
}

pub fn lvr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        let e = s.expr;
        if !e.is_literal() || s.parent.is_some_and(|p| p.is_literal()) {
            continue;
        }
        for r in literal_replacements(e) {
            let text = fit(&r, !r.starts_with('-'), s.parent, e);
            out.push(cx.replace(OperatorId::LVR, s.callable, e.span, text));
        }
    }
    out
}

fn is_boolean_operator(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Binary { op, .. } => {
            matches!(op.group(), OpGroup::Relational | OpGroup::Conditional)
        }
        ExprKind::Chain { .. } => true,
        _ => false,
    }
}

pub fn evr(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        if s.position == Position::None {
            continue;
        }
        let inner = s.expr.strip_parens();
        if inner.is_literal()
            || is_method_call(cx, inner)
            || matches!(inner.kind, ExprKind::Opaque(_))
        {
            continue;
        }
        let values: &[&str] = match cx.prog.type_of(s.expr) {
            TypeRef::Int | TypeRef::Nat => &["0", "1", "-1"],
            TypeRef::Real => &["0.0"],
            TypeRef::Bool if !is_boolean_operator(inner) => &["true", "false"],
            _ => continue,
        };
        for v in values {
            let text = fit(v, !v.starts_with('-'), s.parent, s.expr);
            out.push(cx.replace(OperatorId::EVR, s.callable, s.expr.span, text));
        }
    }
    out
}

pub fn sld(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for s in &cx.exprs {
        if let ExprKind::Slice { lo, hi, .. } = &s.expr.kind {
            for bound in [lo, hi].into_iter().flatten() {
                out.push(cx.replace(OperatorId::SLD, s.callable, bound.span, String::new()));
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Collapse {
    Binary(BinOp, bool),
    Unary(UnOp),
}

/// Text of `e` with every matching operator node collapsed.
fn render(src: &str, e: &Expr, how: Collapse) -> String {
    match (&e.kind, how) {
        (ExprKind::Binary { op, lhs, rhs, .. }, Collapse::Binary(k, keep_left)) if *op == k => {
            return render(src, if keep_left { lhs } else { rhs }, how);
        }
        (ExprKind::Unary { op, operand, .. }, Collapse::Unary(k)) if *op == k => {
            return render(src, operand, how);
        }
        _ => {}
    }
    let mut out = String::new();
    let mut pos = e.span.start;
    for c in e.children() {
        if c.span.start < pos || c.span.end > e.span.end {
            return e.span.text(src).into();
        }
        out.push_str(&src[pos..c.span.start]);
        out.push_str(&render(src, c, how));
        pos = c.span.end;
    }
    out.push_str(&src[pos..e.span.end]);
    out
}

fn matches_collapse(e: &Expr, how: Collapse) -> bool {
    match (&e.kind, how) {
        (ExprKind::Binary { op, .. }, Collapse::Binary(k, _)) => *op == k,
        (ExprKind::Unary { op, .. }, Collapse::Unary(k)) => *op == k,
        _ => false,
    }
}

fn collapse_target(
    cx: &ScanContext<'_, '_>,
    callable: usize,
    sites: &[&ExprSite<'_>],
    how: Collapse,
    description: String,
) -> Option<MutationTarget> {
    let hits: Vec<&Expr> = sites
        .iter()
        .map(|s| s.expr)
        .filter(|e| matches_collapse(e, how))
        .collect();
    let edits: Vec<Edit> = hits
        .iter()
        .filter(|e| {
            !hits
                .iter()
                .any(|o| o.id != e.id && o.span.contains(&e.span))
        })
        .map(|e| Edit {
            span: e.span,
            replacement: render(cx.src, e, how),
        })
        .collect();
    cx.multi(OperatorId::ODL, callable, edits, description)
}

pub fn odl(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for idx in 0..cx.callables.len() {
        let sites: Vec<&ExprSite<'_>> = cx.exprs_of(idx).collect();
        let mut binops: Vec<BinOp> = Vec::new();
        let mut unops: Vec<UnOp> = Vec::new();
        for s in &sites {
            match &s.expr.kind {
                ExprKind::Binary { op, .. } if !binops.contains(op) => binops.push(*op),
                ExprKind::Unary { op, .. } if !unops.contains(op) => unops.push(*op),
                _ => {}
            }
        }
        for op in binops {
            for (keep_left, side) in [(true, "left"), (false, "right")] {
                let d = format!("delete every `{}`, keeping the {side} operand", op.as_str());
                out.extend(collapse_target(cx, idx, &sites, Collapse::Binary(op, keep_left), d));
            }
        }
        for op in unops {
            let d = format!("delete every unary `{}`", op.as_str());
            out.extend(collapse_target(cx, idx, &sites, Collapse::Unary(op), d));
        }
    }
    out
}

pub fn vdl(cx: &ScanContext<'_, '_>) -> Vec<MutationTarget> {
    let mut out = Vec::new();
    for st in &cx.stmts {
        let StmtKind::VarDecl { vars, .. } = &st.stmt.kind else {
            continue;
        };
        for v in vars {
            let Some(id) = cx.prog.local_var(&v.name) else {
                continue;
            };
            let uses: Vec<&ExprSite<'_>> = cx
                .exprs_of(st.callable)
                .filter(|s| matches!(s.expr.kind, ExprKind::Ident(_)) && cx.prog.var_of(s.expr) == Some(id))
                .collect();
            if uses.is_empty() {
                continue;
            }
            let mut edits: Vec<Edit> = Vec::new();
            let mut ok = true;
            for u in &uses {
                let Some(parent) = u.parent.filter(|_| !u.lhs_root) else {
                    ok = false;
                    break;
                };
                let ExprKind::Binary { lhs, rhs, .. } = &parent.kind else {
                    ok = false;
                    break;
                };
                let other = if lhs.id == u.expr.id { rhs } else { lhs };
                if edits.iter().any(|e| e.span.overlaps(&parent.span)) {
                    ok = false;
                    break;
                }
                edits.push(Edit {
                    span: parent.span,
                    replacement: cx.text(other.span).into(),
                });
            }
            if ok {
                let d = format!("delete variable `{}`", v.name.name);
                out.extend(cx.multi(OperatorId::VDL, st.callable, edits, d));
            }
        }
    }
    out
}
