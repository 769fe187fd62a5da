//! Rendering helpers shared by the operators.

use alloc::format;
use alloc::string::String;

use crate::resolve::TypeRef;
use crate::syntax::ast::*;

/// Binds at least as tightly as a postfix expression.
pub fn is_atomic(e: &Expr) -> bool {
    matches!(
        e.kind,
        ExprKind::Lit(_)
            | ExprKind::Ident(_)
            | ExprKind::This
            | ExprKind::Field { .. }
            | ExprKind::TupleIndex { .. }
            | ExprKind::Index { .. }
            | ExprKind::Update { .. }
            | ExprKind::Slice { .. }
            | ExprKind::Call { .. }
            | ExprKind::Apply { .. }
            | ExprKind::Display { .. }
            | ExprKind::MapDisplay { .. }
            | ExprKind::Paren(_)
            | ExprKind::Tuple(_)
            | ExprKind::Cardinality(_)
    )
}

/// `child` sits between delimiters of `parent`, so any expression fits there.
pub fn is_delimited(parent: Option<&Expr>, child: &Expr) -> bool {
    let Some(p) = parent else { return true };
    match &p.kind {
        ExprKind::Paren(_)
        | ExprKind::Call { .. }
        | ExprKind::Apply { .. }
        | ExprKind::Display { .. }
        | ExprKind::MapDisplay { .. }
        | ExprKind::Tuple(_)
        | ExprKind::New { .. }
        | ExprKind::Cardinality(_)
        | ExprKind::Update { .. } => !is_receiver(p, child),
        ExprKind::Slice { recv, .. } | ExprKind::Index { recv, .. } => !core::ptr::eq(&**recv, child),
        _ => false,
    }
}

fn is_receiver(p: &Expr, child: &Expr) -> bool {
    match &p.kind {
        ExprKind::Call { recv: Some(r), .. } => core::ptr::eq(&**r, child),
        ExprKind::Apply { func, .. } => core::ptr::eq(&**func, child),
        ExprKind::Update { recv, .. } => core::ptr::eq(&**recv, child),
        _ => false,
    }
}

/// `text` replacing `child`, parenthesized when it would not bind on its own.
pub fn fit(text: &str, atomic: bool, parent: Option<&Expr>, child: &Expr) -> String {
    if atomic || is_delimited(parent, child) {
        text.into()
    } else {
        format!("({text})")
    }
}

/// Zero value literal for MRR.
pub fn default_value(t: &TypeRef) -> Option<&'static str> {
    Some(match t {
        TypeRef::Int | TypeRef::Nat => "0",
        TypeRef::Bool => "false",
        TypeRef::Real => "0.0",
        TypeRef::String => "\"\"",
        TypeRef::Seq(e) if **e == TypeRef::Char => "\"\"",
        TypeRef::Seq(_) => "[]",
        TypeRef::Set(_) => "{}",
        TypeRef::Multiset(_) => "multiset{}",
        TypeRef::Map(_, _) => "map[]",
        _ => return None,
    })
}

pub fn int_value(lit: &str) -> Option<i128> {
    let digits: String = lit.chars().filter(|&c| c != '_').collect();
    match digits.strip_prefix("0x").or_else(|| digits.strip_prefix("0X")) {
        Some(hex) => i128::from_str_radix(hex, 16).ok(),
        None => digits.parse().ok(),
    }
}

pub fn real_value(lit: &str) -> Option<f64> {
    let digits: String = lit.chars().filter(|&c| c != '_').collect();
    digits.parse().ok()
}
