//! Per-operator target counts computed by a separate walk of the tree.

use std::collections::BTreeSet;

use mutdafny_core::resolve::{Binding, ResolvedProgram, TypeRef, VarKind};
use mutdafny_core::scan::OperatorId;
use mutdafny_core::syntax::ast::*;

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Value,
    Lhs,
    Other,
}

struct Node<'t> {
    e: &'t Expr,
    parent: Option<&'t Expr>,
    slot: Slot,
    fun: usize,
}

struct Fun<'t> {
    c: &'t Callable,
    owner: Option<&'t str>,
    in_class: bool,
}

#[derive(Default)]
struct Walk<'t> {
    funs: Vec<Fun<'t>>,
    nodes: Vec<Node<'t>>,
    stmts: Vec<(&'t Stmt, usize, bool)>,
    lists: Vec<(&'t [Stmt], usize)>,
}

impl<'t> Walk<'t> {
    fn decls(&mut self, ds: &'t [Decl], owner: Option<&'t str>, in_class: bool) {
        for d in ds {
            match d {
                Decl::Callable(c) => {
                    let usable = !c.modifiers.ghost
                        && c.kind != CallableKind::Lemma
                        && matches!(c.body, Some(CallableBody::Block(_)) | Some(CallableBody::Expr { .. }));
                    if !usable {
                        continue;
                    }
                    let f = self.funs.len();
                    self.funs.push(Fun { c, owner, in_class });
                    match &c.body {
                        Some(CallableBody::Block(b)) => self.list(&b.stmts, f),
                        Some(CallableBody::Expr { expr, .. }) => self.expr(expr, None, Slot::Value, f),
                        _ => {}
                    }
                }
                Decl::Class(k) => self.decls(&k.members, Some(&k.name.name), true),
                Decl::Datatype(k) => self.decls(&k.members, Some(&k.name.name), false),
                Decl::Module(m) => self.decls(&m.decls, None, false),
                _ => {}
            }
        }
    }

    fn list(&mut self, ss: &'t [Stmt], f: usize) {
        self.lists.push((ss, f));
        for s in ss {
            self.stmt(s, f, false);
        }
    }

    fn stmt(&mut self, s: &'t Stmt, f: usize, else_if: bool) {
        self.stmts.push((s, f, else_if));
        match &s.kind {
            StmtKind::VarDecl { init, .. } => init.iter().for_each(|e| self.expr(e, None, Slot::Value, f)),
            StmtKind::Assign { lhs, rhs } => {
                lhs.iter().for_each(|e| self.expr(e, None, Slot::Lhs, f));
                rhs.iter().for_each(|e| self.expr(e, None, Slot::Value, f));
            }
            StmtKind::Return(es) => es.iter().for_each(|e| self.expr(e, None, Slot::Value, f)),
            StmtKind::Call(e) => self.expr(e, None, Slot::Other, f),
            StmtKind::Print(es) => es.iter().for_each(|e| self.expr(e, None, Slot::Other, f)),
            StmtKind::If(i) => {
                self.expr(&i.guard, None, Slot::Other, f);
                self.list(&i.then_block.stmts, f);
                match &i.else_branch {
                    Some(ElseBranch::Block(b)) => self.list(&b.stmts, f),
                    Some(ElseBranch::If(n)) => self.stmt(n, f, true),
                    None => {}
                }
            }
            StmtKind::While { guard, body, .. } => {
                self.expr(guard, None, Slot::Other, f);
                if let Some(b) = body {
                    self.list(&b.stmts, f);
                }
            }
            StmtKind::For { lo, hi, body, .. } => {
                self.expr(lo, None, Slot::Other, f);
                self.expr(hi, None, Slot::Other, f);
                if let Some(b) = body {
                    self.list(&b.stmts, f);
                }
            }
            StmtKind::Match { scrutinee, cases } => {
                self.expr(scrutinee, None, Slot::Other, f);
                for c in cases {
                    self.list(&c.body, f);
                }
            }
            StmtKind::Block(b) => self.list(&b.stmts, f),
            _ => {}
        }
    }

    fn expr(&mut self, e: &'t Expr, parent: Option<&'t Expr>, slot: Slot, f: usize) {
        self.nodes.push(Node { e, parent, slot, fun: f });
        let args: Vec<*const Expr> = match &e.kind {
            ExprKind::Call { args, .. } | ExprKind::New { args: Some(args), .. } => {
                args.iter().map(|a| a as *const Expr).collect()
            }
            _ => Vec::new(),
        };
        for c in e.children() {
            let s = if args.contains(&(c as *const Expr)) { Slot::Value } else { Slot::Other };
            self.expr(c, Some(e), s, f);
        }
    }
}

fn is_method_call(p: &ResolvedProgram<'_>, e: &Expr) -> bool {
    match (&e.kind, p.binding(e)) {
        (ExprKind::New { .. }, _) => true,
        (ExprKind::Call { .. }, Some(Binding::Callable(id))) => p.callable(*id).kind.is_method_like(),
        _ => false,
    }
}

fn neg_literal(e: &Expr) -> bool {
    matches!(&e.kind, ExprKind::Unary { op: UnOp::Neg, operand, .. }
        if matches!(operand.kind, ExprKind::Lit(Literal::Int(_)) | ExprKind::Lit(Literal::Real(_))))
}

fn is_lit(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Lit(_)) || neg_literal(e)
}

fn relational_count(p: &ResolvedProgram<'_>, a: &Expr, b: &Expr, op: BinOp) -> usize {
    let t = match p.type_of(a) {
        TypeRef::Unknown => p.type_of(b),
        t => t,
    };
    let ordered = matches!(
        t,
        TypeRef::Int | TypeRef::Nat | TypeRef::Real | TypeRef::Char | TypeRef::BitVector(_)
            | TypeRef::String | TypeRef::Seq(_) | TypeRef::Set(_) | TypeRef::Multiset(_)
    );
    if t.is_unknown() || ordered {
        5
    } else if matches!(op, BinOp::Eq | BinOp::Neq) {
        1
    } else {
        2
    }
}

fn int_of(t: &str) -> i128 {
    let t: String = t.chars().filter(|c| *c != '_').collect();
    match t.strip_prefix("0x") {
        Some(h) => i128::from_str_radix(h, 16).unwrap(),
        None => t.parse().unwrap(),
    }
}

fn lvr_count(e: &Expr) -> usize {
    let (neg, inner) = match &e.kind {
        ExprKind::Unary { operand, .. } => (true, &**operand),
        _ => (false, e),
    };
    match &inner.kind {
        ExprKind::Lit(Literal::Bool(_)) | ExprKind::Lit(Literal::Str(_)) | ExprKind::Lit(Literal::Char(_)) => 1,
        ExprKind::Lit(Literal::Int(t)) => {
            let v = if neg { -int_of(t) } else { int_of(t) };
            let set: BTreeSet<i128> = [0, 1, -1, v + 1, v - 1].into_iter().collect();
            set.len() - usize::from(set.contains(&v))
        }
        ExprKind::Lit(Literal::Real(t)) => {
            let v: f64 = t.replace('_', "").parse().unwrap();
            let v = if neg { -v } else { v };
            3 - [0.0, 1.0, -1.0].iter().filter(|c| **c == v).count()
        }
        _ => 0,
    }
}

fn default_exists(t: &TypeRef) -> bool {
    matches!(
        t,
        TypeRef::Int | TypeRef::Nat | TypeRef::Bool | TypeRef::Real | TypeRef::String
            | TypeRef::Seq(_) | TypeRef::Set(_) | TypeRef::Multiset(_) | TypeRef::Map(_, _)
    )
}

fn prefixed(name: &str, prefix: &str) -> bool {
    name.to_ascii_lowercase().starts_with(prefix)
}

/// Number of other callables that may replace the callee of `e`.
fn replacements(p: &ResolvedProgram<'_>, e: &Expr, prefix: Option<&str>) -> usize {
    let (ExprKind::Call { .. }, Some(Binding::Callable(id))) = (&e.kind, p.binding(e)) else {
        return 0;
    };
    let me = p.callable(*id);
    if me.kind == CallableKind::Constructor || prefix.is_some_and(|x| !prefixed(&me.name, x)) {
        return 0;
    }
    let pool: Vec<_> = match &me.owner {
        Some(o) => p.symbols.all_members(o).into_iter().map(|c| p.callable(c)).collect(),
        None => p.symbols.callables.iter().filter(|c| c.owner.is_none()).collect(),
    };
    pool.into_iter()
        .filter(|c| c.name != me.name && c.kind != CallableKind::Constructor && !c.is_ghost)
        .filter(|c| prefix.is_none_or(|x| prefixed(&c.name, x)))
        .filter(|c| {
            c.kind.is_method_like() == me.kind.is_method_like()
                && c.params.len() == me.params.len()
                && c.returns.len() == me.returns.len()
                && c.params.iter().zip(&me.params).all(|(a, b)| a.same_as(b))
                && c.returns.iter().zip(&me.returns).all(|(a, b)| a.same_as(b))
        })
        .count()
}

fn single_result<'p>(p: &'p ResolvedProgram<'_>, e: &Expr) -> Option<&'p TypeRef> {
    match (&e.kind, p.binding(e)) {
        (ExprKind::Call { .. }, Some(Binding::Callable(id))) => match p.callable(*id).returns.as_slice() {
            [t] => Some(t),
            _ => None,
        },
        _ => None,
    }
}

fn var_names_of_type(p: &ResolvedProgram<'_>, e: &Expr, t: &TypeRef, exclude: &str) -> usize {
    let Some(scope) = p.scope_of(e) else { return 0 };
    p.scopes()
        .visible(scope)
        .into_iter()
        .filter(|v| {
            let v = p.var(*v);
            v.name != exclude && v.ty.same_as(t)
        })
        .count()
}

fn oracle(p: &ResolvedProgram<'_>, w: &Walk<'_>, op: OperatorId) -> usize {
    let src = p.source();
    let text = |e: &Expr| e.span.text(src);
    use OperatorId::*;
    match op {
        BOR => w
            .nodes
            .iter()
            .map(|n| match &n.e.kind {
                ExprKind::Binary { op, lhs, rhs, .. } => match op.group() {
                    OpGroup::Relational => relational_count(p, lhs, rhs, *op),
                    OpGroup::Membership => 0,
                    g => g.members().len() - 1,
                },
                ExprKind::Chain { operands, ops } => ops
                    .iter()
                    .enumerate()
                    .map(|(i, (o, _))| relational_count(p, &operands[i], &operands[i + 1], *o))
                    .sum(),
                _ => 0,
            })
            .sum(),
        BBR => {
            2 * w
                .nodes
                .iter()
                .filter(|n| match &n.e.kind {
                    ExprKind::Binary { op, .. } => {
                        matches!(op.group(), OpGroup::Relational | OpGroup::Conditional)
                    }
                    ExprKind::Chain { .. } => true,
                    _ => false,
                })
                .count()
        }
        UOI => w
            .nodes
            .iter()
            .filter(|n| {
                if n.slot == Slot::Lhs
                    || is_lit(n.e)
                    || is_method_call(p, n.e)
                    || matches!(n.e.kind, ExprKind::Paren(_) | ExprKind::Opaque(_))
                {
                    return false;
                }
                let want = match p.type_of(n.e) {
                    TypeRef::Int | TypeRef::Nat | TypeRef::Real => UnOp::Neg,
                    TypeRef::Bool | TypeRef::BitVector(_) => UnOp::Not,
                    _ => return false,
                };
                let same = |x: &Expr| matches!(x.kind, ExprKind::Unary { op, .. } if op == want);
                !same(n.e) && !n.parent.is_some_and(same)
            })
            .count(),
        UOD => w.nodes.iter().filter(|n| matches!(n.e.kind, ExprKind::Unary { .. })).count(),
        LVR => w
            .nodes
            .iter()
            .filter(|n| is_lit(n.e) && !n.parent.is_some_and(neg_literal))
            .map(|n| lvr_count(n.e))
            .sum(),
        EVR => w
            .nodes
            .iter()
            .filter(|n| n.slot == Slot::Value)
            .map(|n| {
                let inner = n.e.strip_parens();
                if is_lit(inner) || is_method_call(p, inner) || matches!(inner.kind, ExprKind::Opaque(_)) {
                    return 0;
                }
                match p.type_of(n.e) {
                    TypeRef::Int | TypeRef::Nat => 3,
                    TypeRef::Real => 1,
                    TypeRef::Bool => match &inner.kind {
                        ExprKind::Chain { .. } => 0,
                        ExprKind::Binary { op, .. }
                            if matches!(op.group(), OpGroup::Relational | OpGroup::Conditional) =>
                        {
                            0
                        }
                        _ => 2,
                    },
                    _ => 0,
                }
            })
            .sum(),
        MRR => w
            .stmts
            .iter()
            .filter(|(s, _, _)| {
                let e = match &s.kind {
                    StmtKind::VarDecl { init, .. } if init.len() == 1 => &init[0],
                    StmtKind::Assign { rhs, .. } if rhs.len() == 1 => &rhs[0],
                    _ => return false,
                };
                match (&e.kind, p.binding(e)) {
                    (ExprKind::Call { .. }, Some(Binding::Callable(id))) => {
                        let c = p.callable(*id);
                        c.kind.is_method_like() && !c.returns.is_empty() && c.returns.iter().all(default_exists)
                    }
                    _ => false,
                }
            })
            .count(),
        MAP => w
            .nodes
            .iter()
            .map(|n| match (single_result(p, n.e), &n.e.kind) {
                (Some(t), ExprKind::Call { args, .. }) => args.iter().filter(|a| p.type_of(a).same_as(t)).count(),
                _ => 0,
            })
            .sum(),
        CIR => {
            let displays = w
                .nodes
                .iter()
                .filter(|n| match &n.e.kind {
                    ExprKind::Display { elems, .. } => !elems.is_empty(),
                    ExprKind::MapDisplay { entries } => !entries.is_empty(),
                    _ => false,
                })
                .count();
            let nulls = w
                .stmts
                .iter()
                .filter(|(s, _, _)| match &s.kind {
                    StmtKind::VarDecl { vars, init } if vars.len() == 1 && init.len() == 1 => {
                        let nullable = matches!(&vars[0].ty, Some(TypeExpr { kind: TypeExprKind::Named { nullable: true, .. }, .. }));
                        nullable && matches!(&init[0].kind, ExprKind::New { dims, .. } if dims.is_empty())
                    }
                    _ => false,
                })
                .count();
            displays + nulls
        }
        LSR => w
            .stmts
            .iter()
            .filter(|(s, _, _)| matches!(s.kind, StmtKind::Break { .. } | StmtKind::Continue { .. }))
            .map(|(_, f, _)| {
                let c = w.funs[*f].c;
                let void = matches!(c.kind, CallableKind::Method | CallableKind::Constructor) && c.outs.is_empty();
                1 + usize::from(void)
            })
            .sum(),
        LBI => w
            .stmts
            .iter()
            .filter(|(s, _, _)| {
                matches!(s.kind, StmtKind::While { body: Some(_), .. } | StmtKind::For { body: Some(_), .. })
            })
            .count(),
        CBR => w
            .stmts
            .iter()
            .map(|(s, _, _)| {
                let StmtKind::Match { cases, .. } = &s.kind else { return 0 };
                let body = |c: &MatchCase| c.body_span.text(src).to_string();
                let wild = cases.iter().find(|c| c.pattern.wildcard).map(body);
                let first = cases.iter().find(|c| !c.pattern.wildcard).map(body);
                let (Some(wild), Some(first)) = (wild, first) else { return 0 };
                cases
                    .iter()
                    .filter(|c| body(c) != if c.pattern.wildcard { first.clone() } else { wild.clone() })
                    .count()
            })
            .sum(),
        SDL => {
            let stmts: usize = w
                .stmts
                .iter()
                .map(|(s, _, else_if)| match &s.kind {
                    StmtKind::VarDecl { .. }
                    | StmtKind::Assign { .. }
                    | StmtKind::Call(_)
                    | StmtKind::Print(_)
                    | StmtKind::Break { .. }
                    | StmtKind::Continue { .. }
                    | StmtKind::Return(_) => 1,
                    StmtKind::If(i) if i.else_branch.is_some() => 1,
                    StmtKind::If(_) => usize::from(!else_if),
                    _ => 0,
                })
                .sum();
            let bodies = w
                .funs
                .iter()
                .filter(|f| {
                    matches!(f.c.kind, CallableKind::Method | CallableKind::Constructor)
                        && f.c.outs.is_empty()
                        && matches!(&f.c.body, Some(CallableBody::Block(b)) if !b.stmts.is_empty())
                })
                .count();
            stmts + bodies
        }
        MNR => w
            .nodes
            .iter()
            .filter(|n| match (&n.e.kind, single_result(p, n.e)) {
                (ExprKind::Call { recv: Some(r), .. }, Some(t)) => p.type_of(r).same_as(t),
                _ => false,
            })
            .count(),
        VDL => w
            .stmts
            .iter()
            .filter_map(|(s, f, _)| match &s.kind {
                StmtKind::VarDecl { vars, .. } => Some((vars, *f)),
                _ => None,
            })
            .flat_map(|(vars, f)| vars.iter().map(move |v| (v, f)))
            .filter(|(v, f)| {
                let Some(id) = p.local_var(&v.name) else { return false };
                let uses: Vec<&Node> = w
                    .nodes
                    .iter()
                    .filter(|n| n.fun == *f && matches!(n.e.kind, ExprKind::Ident(_)) && p.var_of(n.e) == Some(id))
                    .collect();
                let mut parents: Vec<&Expr> = Vec::new();
                for u in &uses {
                    match u.parent {
                        Some(b @ Expr { kind: ExprKind::Binary { .. }, .. }) if u.slot != Slot::Lhs => parents.push(b),
                        _ => return false,
                    }
                }
                let disjoint = parents.iter().enumerate().all(|(i, a)| {
                    parents[i + 1..]
                        .iter()
                        .all(|b| a.span.end <= b.span.start || b.span.end <= a.span.start)
                });
                !uses.is_empty() && disjoint
            })
            .count(),
        SLD => w
            .nodes
            .iter()
            .map(|n| match &n.e.kind {
                ExprKind::Slice { lo, hi, .. } => usize::from(lo.is_some()) + usize::from(hi.is_some()),
                _ => 0,
            })
            .sum(),
        ODL => (0..w.funs.len())
            .map(|f| {
                let mut bins = BTreeSet::new();
                let mut uns = BTreeSet::new();
                for n in w.nodes.iter().filter(|n| n.fun == f) {
                    match &n.e.kind {
                        ExprKind::Binary { op, .. } => {
                            bins.insert(*op);
                        }
                        ExprKind::Unary { op, .. } => {
                            uns.insert(*op);
                        }
                        _ => {}
                    }
                }
                2 * bins.len() + uns.len()
            })
            .sum(),
        PRV => w
            .stmts
            .iter()
            .map(|(s, _, _)| {
                let (lhs_ty, rhs) = match &s.kind {
                    StmtKind::Assign { lhs, rhs } if lhs.len() == 1 && rhs.len() == 1 => (p.type_of(&lhs[0]).clone(), &rhs[0]),
                    StmtKind::VarDecl { vars, init } if vars.len() == 1 && init.len() == 1 => {
                        match p.local_var(&vars[0].name) {
                            Some(v) => (p.var(v).ty.clone(), &init[0]),
                            None => return 0,
                        }
                    }
                    _ => return 0,
                };
                let TypeRef::Trait(tr) = lhs_ty else { return 0 };
                let kids = p.children_of_trait(&tr);
                let Some(v) = p.var_of(rhs) else { return 0 };
                let TypeRef::Class { name: cur, .. } = &p.var(v).ty else { return 0 };
                if !kids.contains(&cur.as_str()) {
                    return 0;
                }
                let scope = p.scope_of(rhs).unwrap();
                p.scopes()
                    .visible(scope)
                    .into_iter()
                    .filter(|x| matches!(&p.var(*x).ty, TypeRef::Class { name, .. } if name != cur && kids.contains(&name.as_str())))
                    .count()
            })
            .sum(),
        THI => w
            .nodes
            .iter()
            .filter(|n| {
                let f = &w.funs[n.fun];
                let ExprKind::Ident(name) = &n.e.kind else { return false };
                let param = p.var_of(n.e).is_some_and(|v| p.var(v).kind == VarKind::Param);
                f.in_class
                    && !f.c.modifiers.is_static
                    && n.slot != Slot::Lhs
                    && param
                    && p.symbols.field(f.owner.unwrap(), name).is_some_and(|fi| !fi.is_static)
            })
            .count(),
        THD => w
            .nodes
            .iter()
            .filter(|n| match &n.e.kind {
                ExprKind::Field { recv, field } => {
                    n.slot != Slot::Lhs
                        && matches!(recv.kind, ExprKind::This)
                        && w.funs[n.fun].c.params.iter().any(|x| x.name.as_ref().is_some_and(|i| i.name == field.name))
                }
                _ => false,
            })
            .count(),
        AMR => w.nodes.iter().map(|n| replacements(p, n.e, Some("get"))).sum(),
        MMR => w.nodes.iter().map(|n| replacements(p, n.e, Some("set"))).sum(),
        MCR => w.nodes.iter().map(|n| replacements(p, n.e, None)).sum(),
        VER => w
            .nodes
            .iter()
            .filter(|n| n.slot != Slot::Lhs && matches!(n.e.kind, ExprKind::Ident(_)))
            .filter_map(|n| p.var_of(n.e).map(|v| (n, p.var(v))))
            .map(|(n, v)| var_names_of_type(p, n.e, &v.ty, &v.name))
            .sum(),
        FAR => w
            .nodes
            .iter()
            .map(|n| {
                let ExprKind::Field { recv, field } = &n.e.kind else { return 0 };
                if n.slot == Slot::Lhs || !matches!(p.binding(n.e), Some(Binding::Member { .. })) {
                    return 0;
                }
                let class = match p.type_of(recv) {
                    TypeRef::Class { name, .. } | TypeRef::Trait(name) => name.clone(),
                    _ => return 0,
                };
                let t = p.type_of(n.e);
                p.symbols
                    .all_fields(&class)
                    .into_iter()
                    .filter(|f| f.name != field.name && !f.ghost && !f.is_static && f.ty.same_as(t))
                    .count()
            })
            .sum(),
        DCR => w
            .nodes
            .iter()
            .map(|n| {
                if !matches!(n.e.kind, ExprKind::Call { .. } | ExprKind::Ident(_) | ExprKind::Field { .. }) {
                    return 0;
                }
                let Some(Binding::Ctor { datatype, index }) = p.binding(n.e) else { return 0 };
                let d = &p.symbols.datatypes[datatype];
                let me = &d.ctors[*index];
                d.ctors
                    .iter()
                    .filter(|c| {
                        c.name != me.name
                            && c.params.len() == me.params.len()
                            && c.params.iter().zip(&me.params).all(|(a, b)| a.1.same_as(&b.1))
                    })
                    .count()
            })
            .sum(),
        MVR => w
            .nodes
            .iter()
            .map(|n| match single_result(p, n.e) {
                Some(t) => var_names_of_type(p, n.e, t, ""),
                None => 0,
            })
            .sum(),
        TAR => w
            .nodes
            .iter()
            .map(|n| match &n.e.kind {
                ExprKind::TupleIndex { recv, index, .. } => match p.type_of(recv) {
                    TypeRef::Tuple(ts) if *index < ts.len() => {
                        ts.iter().filter(|t| t.same_as(&ts[*index])).count() - 1
                    }
                    _ => 0,
                },
                _ => 0,
            })
            .sum(),
        SAR => w
            .nodes
            .iter()
            .map(|n| {
                let args = match (&n.e.kind, p.binding(n.e)) {
                    (ExprKind::New { args: Some(a), .. }, _) => a,
                    (ExprKind::Call { args, .. }, Some(Binding::Callable(_) | Binding::Ctor { .. })) => args,
                    _ => return 0,
                };
                let mut k = 0;
                for i in 0..args.len() {
                    for j in i + 1..args.len() {
                        if p.type_of(&args[i]).same_as(p.type_of(&args[j])) && text(&args[i]) != text(&args[j]) {
                            k += 1;
                        }
                    }
                }
                k
            })
            .sum(),
        SWS => w
            .lists
            .iter()
            .map(|(ss, _)| {
                ss.windows(2)
                    .filter(|p2| {
                        !matches!(p2[0].kind, StmtKind::Opaque)
                            && !matches!(p2[1].kind, StmtKind::Opaque)
                            && p2[0].span.text(src) != p2[1].span.text(src)
                    })
                    .count()
            })
            .sum(),
        SWV => w
            .lists
            .iter()
            .map(|(ss, _)| {
                let decls: Vec<(&Expr, &TypeRef)> = ss
                    .iter()
                    .filter_map(|s| match &s.kind {
                        StmtKind::VarDecl { vars, init } if vars.len() == 1 && init.len() == 1 => {
                            Some((&init[0], &p.var(p.local_var(&vars[0].name)?).ty))
                        }
                        _ => None,
                    })
                    .collect();
                let mut k = 0;
                for i in 0..decls.len() {
                    for j in i + 1..decls.len() {
                        if decls[i].1.same_as(decls[j].1) && text(decls[i].0) != text(decls[j].0) {
                            k += 1;
                        }
                    }
                }
                k
            })
            .sum(),
        CBE => {
            let stmts: usize = w
                .stmts
                .iter()
                .map(|(s, _, else_if)| match &s.kind {
                    StmtKind::If(i) if !else_if => 1 + usize::from(i.else_branch.is_some()),
                    _ => 0,
                })
                .sum();
            let exprs = 2 * w.nodes.iter().filter(|n| matches!(n.e.kind, ExprKind::Ite { .. })).count();
            stmts + exprs
        }
    }
}

/// Expected number of targets of `op` in `program`.
pub fn expected(program: &ResolvedProgram<'_>, op: OperatorId) -> usize {
    let mut w = Walk::default();
    w.decls(&program.tree().decls, None, false);
    oracle(program, &w, op)
}
