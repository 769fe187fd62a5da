//! Name resolution and a light type assignment.
//!
//! Types come only from declarations, literals, operator result types and
//! callable signatures. Anything else is `TypeRef::Unknown`, which never
//! compares equal to another type and therefore never feeds a
//! type-constrained mutation.

mod scope;
mod types;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

pub use scope::{ScopeId, Scopes, VarId, VarInfo, VarKind};
pub use types::TypeRef;

use crate::span::SourceSpan;
use crate::syntax::ast::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CallableId(pub u32);

#[derive(Clone, Debug)]
pub struct FieldInfo {
    pub owner: Option<String>,
    pub name: String,
    pub ty: TypeRef,
    pub is_const: bool,
    pub is_static: bool,
    pub ghost: bool,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub name: String,
    pub is_trait: bool,
    pub extends: Vec<String>,
    pub fields: Vec<FieldInfo>,
    pub members: Vec<CallableId>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct CtorInfo {
    pub name: String,
    pub params: Vec<(Option<String>, TypeRef)>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct DatatypeInfo {
    pub name: String,
    pub ctors: Vec<CtorInfo>,
    pub members: Vec<CallableId>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct CallableSignature {
    pub owner: Option<String>,
    pub name: String,
    pub kind: CallableKind,
    pub params: Vec<TypeRef>,
    pub param_names: Vec<String>,
    pub returns: Vec<TypeRef>,
    pub is_ghost: bool,
    pub is_static: bool,
    pub has_body: bool,
    pub span: SourceSpan,
}

impl CallableSignature {
    pub fn is_method(&self) -> bool {
        self.kind.is_method_like()
    }

    /// The single return type, when there is exactly one.
    pub fn result_type(&self) -> Option<&TypeRef> {
        match self.returns.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    /// Same kind (method vs function) and element-wise equal parameter
    /// and return type lists.
    pub fn matches(&self, other: &CallableSignature) -> bool {
        fn same(a: &[TypeRef], b: &[TypeRef]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_as(y))
        }
        self.is_method() == other.is_method()
            && same(&self.params, &other.params)
            && same(&self.returns, &other.returns)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    pub classes: BTreeMap<String, ClassInfo>,
    pub datatypes: BTreeMap<String, DatatypeInfo>,
    pub callables: Vec<CallableSignature>,
    /// Module-level constants.
    pub consts: Vec<FieldInfo>,
    pub modules: BTreeSet<String>,
    class_order: Vec<String>,
}

impl SymbolTable {
    pub fn callable(&self, id: CallableId) -> &CallableSignature {
        &self.callables[id.0 as usize]
    }

    /// Classes and traits in declaration order.
    pub fn classes_in_order(&self) -> impl Iterator<Item = &ClassInfo> {
        self.class_order.iter().filter_map(|n| self.classes.get(n))
    }

    /// `class` followed by all traits it transitively extends.
    pub fn ancestors(&self, class: &str) -> Vec<&ClassInfo> {
        let mut out: Vec<&ClassInfo> = Vec::new();
        let mut todo = vec![class];
        while let Some(n) = todo.pop() {
            if let Some(c) = self.classes.get(n) {
                if out.iter().any(|o| o.name == c.name) {
                    continue;
                }
                out.push(c);
                for e in c.extends.iter().rev() {
                    todo.push(e);
                }
            }
        }
        out
    }

    /// Fields and constants of `class`, including inherited ones.
    pub fn all_fields(&self, class: &str) -> Vec<&FieldInfo> {
        let mut out: Vec<&FieldInfo> = Vec::new();
        for c in self.ancestors(class) {
            for f in &c.fields {
                if !out.iter().any(|o| o.name == f.name) {
                    out.push(f);
                }
            }
        }
        out
    }

    pub fn field(&self, class: &str, name: &str) -> Option<&FieldInfo> {
        self.all_fields(class).into_iter().find(|f| f.name == name)
    }

    /// Callable members of a class/trait/datatype, including inherited ones;
    /// an own member hides an inherited one with the same name.
    pub fn all_members(&self, owner: &str) -> Vec<CallableId> {
        if let Some(d) = self.datatypes.get(owner) {
            return d.members.clone();
        }
        let mut out: Vec<CallableId> = Vec::new();
        for c in self.ancestors(owner) {
            for &m in &c.members {
                let name = &self.callable(m).name;
                if !out.iter().any(|&o| &self.callable(o).name == name) {
                    out.push(m);
                }
            }
        }
        out
    }

    pub fn member(&self, owner: &str, name: &str) -> Option<CallableId> {
        self.all_members(owner)
            .into_iter()
            .find(|&m| self.callable(m).name == name)
    }

    pub fn top_level_callable(&self, name: &str) -> Option<CallableId> {
        self.callables
            .iter()
            .position(|c| c.owner.is_none() && c.name == name)
            .map(|i| CallableId(i as u32))
    }

    pub fn find_ctor(&self, name: &str) -> Option<(&DatatypeInfo, usize)> {
        self.datatypes
            .values()
            .find_map(|d| d.ctors.iter().position(|c| c.name == name).map(|i| (d, i)))
    }

    /// Classes whose `extends` list names `trait_name`, in declaration order.
    pub fn children_of_trait(&self, trait_name: &str) -> Vec<&str> {
        self.classes_in_order()
            .filter(|c| !c.is_trait && c.extends.iter().any(|e| e == trait_name))
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Other constructors of `datatype` whose parameter types equal those of `ctor`.
    pub fn sibling_constructors(&self, datatype: &str, ctor: &str) -> Vec<&str> {
        let Some(d) = self.datatypes.get(datatype) else {
            return Vec::new();
        };
        let Some(me) = d.ctors.iter().find(|c| c.name == ctor) else {
            return Vec::new();
        };
        d.ctors
            .iter()
            .filter(|c| {
                c.name != me.name
                    && c.params.len() == me.params.len()
                    && c.params
                        .iter()
                        .zip(&me.params)
                        .all(|((_, a), (_, b))| a.same_as(b))
            })
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// What a name in an expression refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Var(VarId),
    /// Field or constant; `owner` is `None` for module-level constants.
    Member {
        owner: Option<String>,
        name: String,
    },
    Callable(CallableId),
    Ctor {
        datatype: String,
        index: usize,
    },
    /// A class, trait, datatype or module name used as a qualifier.
    TypeName(String),
}

/// A syntax tree plus everything the resolver learned about it.
#[derive(Clone, Debug)]
pub struct ResolvedProgram<'t> {
    tree: &'t SyntaxTree,
    pub symbols: SymbolTable,
    scopes: Scopes,
    types: Vec<TypeRef>,
    bindings: Vec<Option<Binding>>,
    expr_scope: Vec<Option<ScopeId>>,
    callable_ids: BTreeMap<usize, CallableId>,
    local_vars: BTreeMap<usize, VarId>,
}

static UNKNOWN: TypeRef = TypeRef::Unknown;

impl<'t> ResolvedProgram<'t> {
    pub fn tree(&self) -> &'t SyntaxTree {
        self.tree
    }

    pub fn source(&self) -> &'t str {
        self.tree.source()
    }

    pub fn type_of(&self, e: &Expr) -> &TypeRef {
        self.types.get(e.id.0 as usize).unwrap_or(&UNKNOWN)
    }

    pub fn binding(&self, e: &Expr) -> Option<&Binding> {
        self.bindings.get(e.id.0 as usize).and_then(Option::as_ref)
    }

    /// Scope in effect where `e` is evaluated.
    pub fn scope_of(&self, e: &Expr) -> Option<ScopeId> {
        self.expr_scope.get(e.id.0 as usize).copied().flatten()
    }

    pub fn var(&self, id: VarId) -> &VarInfo {
        self.scopes.var(id)
    }

    pub fn scopes(&self) -> &Scopes {
        &self.scopes
    }

    pub fn callable(&self, id: CallableId) -> &CallableSignature {
        self.symbols.callable(id)
    }

    pub fn callable_id(&self, c: &Callable) -> Option<CallableId> {
        self.callable_ids.get(&c.span.start).copied()
    }

    /// The variable introduced by a declaring identifier (`var x`, pattern binders).
    pub fn local_var(&self, name: &Ident) -> Option<VarId> {
        self.local_vars.get(&name.span.start).copied()
    }

    /// Variable bound at an identifier use, if any.
    pub fn var_of(&self, e: &Expr) -> Option<VarId> {
        match self.binding(e) {
            Some(Binding::Var(v)) => Some(*v),
            _ => None,
        }
    }

    /// Names of variables visible at `scope` whose type equals `t`,
    /// excluding `exclude`, in declaration order. Variables declared without
    /// a value are only included once they have been assigned.
    pub fn variables_of_type(&self, scope: ScopeId, t: &TypeRef, exclude: &str) -> Vec<&str> {
        self.scopes
            .visible(scope)
            .into_iter()
            .map(|id| self.var(id))
            .filter(|v| v.name != exclude && v.ty.same_as(t))
            .map(|v| v.name.as_str())
            .collect()
    }

    pub fn sibling_constructors(&self, datatype: &str, ctor: &str) -> Vec<&str> {
        self.symbols.sibling_constructors(datatype, ctor)
    }

    pub fn children_of_trait(&self, trait_name: &str) -> Vec<&str> {
        self.symbols.children_of_trait(trait_name)
    }

    /// The trait-typed target and child-typed source of an assignment
    /// `parent := child`, when the statement has that shape.
    pub fn parent_assignment<'a>(&self, stmt: &'a Stmt) -> Option<(String, &'a Expr)> {
        let (lhs_ty, rhs) = match &stmt.kind {
            StmtKind::Assign { lhs, rhs } if lhs.len() == 1 && rhs.len() == 1 => {
                (self.type_of(&lhs[0]).clone(), &rhs[0])
            }
            StmtKind::VarDecl { vars, init } if vars.len() == 1 && init.len() == 1 => {
                let id = self.local_var(&vars[0].name)?;
                (self.var(id).ty.clone(), &init[0])
            }
            _ => return None,
        };
        let TypeRef::Trait(t) = lhs_ty else {
            return None;
        };
        let v = self.var_of(rhs)?;
        match &self.var(v).ty {
            TypeRef::Class { name, .. } if self.children_of_trait(&t).contains(&name.as_str()) => {
                Some((t, rhs))
            }
            _ => None,
        }
    }

    pub fn is_parent_assignment(&self, stmt: &Stmt) -> bool {
        self.parent_assignment(stmt).is_some()
    }
}

pub fn resolve(tree: &SyntaxTree) -> ResolvedProgram<'_> {
    let n = tree.expr_count();
    let mut r = Resolver {
        symbols: SymbolTable::default(),
        scopes: Scopes::default(),
        types: vec![TypeRef::Unknown; n],
        bindings: vec![None; n],
        expr_scope: vec![None; n],
        callable_ids: BTreeMap::new(),
        local_vars: BTreeMap::new(),
    };
    r.collect_names(&tree.decls);
    r.collect_members(&tree.decls, None);
    r.resolve_consts(&tree.decls, None);
    r.resolve_bodies(&tree.decls, None);
    ResolvedProgram {
        tree,
        symbols: r.symbols,
        scopes: r.scopes,
        types: r.types,
        bindings: r.bindings,
        expr_scope: r.expr_scope,
        callable_ids: r.callable_ids,
        local_vars: r.local_vars,
    }
}

#[derive(Clone)]
struct Ctx {
    owner: Option<String>,
    this_ty: TypeRef,
}

struct Resolver {
    symbols: SymbolTable,
    scopes: Scopes,
    types: Vec<TypeRef>,
    bindings: Vec<Option<Binding>>,
    expr_scope: Vec<Option<ScopeId>>,
    callable_ids: BTreeMap<usize, CallableId>,
    local_vars: BTreeMap<usize, VarId>,
}

fn last_segment(name: &str) -> &str {
    name.rsplit('.').next().unwrap_or(name)
}

impl Resolver {
    // ---- declarations ---------------------------------------------------

    fn collect_names(&mut self, decls: &[Decl]) {
        for d in decls {
            match d {
                Decl::Class(c) => {
                    let name = c.name.name.clone();
                    self.symbols.class_order.push(name.clone());
                    self.symbols.classes.insert(
                        name.clone(),
                        ClassInfo {
                            name,
                            is_trait: c.is_trait,
                            extends: c
                                .extends
                                .iter()
                                .map(|e| last_segment(&e.name).to_string())
                                .collect(),
                            fields: Vec::new(),
                            members: Vec::new(),
                            span: c.span,
                        },
                    );
                }
                Decl::Datatype(dt) => {
                    let name = dt.name.name.clone();
                    self.symbols.datatypes.insert(
                        name.clone(),
                        DatatypeInfo {
                            name,
                            ctors: Vec::new(),
                            members: Vec::new(),
                            span: dt.span,
                        },
                    );
                }
                Decl::Module(m) => {
                    for part in m.name.name.split('.') {
                        self.symbols.modules.insert(part.to_string());
                    }
                    self.collect_names(&m.decls);
                }
                _ => {}
            }
        }
    }

    fn type_of_expr(&self, t: &TypeExpr) -> TypeRef {
        match &t.kind {
            TypeExprKind::Tuple(ts) => TypeRef::Tuple(ts.iter().map(|t| self.type_of_expr(t)).collect()),
            TypeExprKind::Arrow => TypeRef::Unknown,
            TypeExprKind::Named {
                name,
                nullable,
                args,
            } => {
                let arg = |i: usize| {
                    args.get(i)
                        .map(|a| self.type_of_expr(a))
                        .unwrap_or(TypeRef::Unknown)
                };
                let base = last_segment(name);
                match base {
                    "bool" => TypeRef::Bool,
                    "int" => TypeRef::Int,
                    "nat" => TypeRef::Nat,
                    "real" => TypeRef::Real,
                    "char" => TypeRef::Char,
                    "string" => TypeRef::String,
                    "seq" => TypeRef::seq(arg(0)),
                    "set" => TypeRef::set(arg(0)),
                    "multiset" => TypeRef::Multiset(arg(0).into()),
                    "map" => TypeRef::Map(arg(0).into(), arg(1).into()),
                    "array" => TypeRef::Array(arg(0).into()),
                    _ if base.len() > 2
                        && base.starts_with("bv")
                        && base[2..].bytes().all(|b| b.is_ascii_digit()) =>
                    {
                        base[2..].parse().map(TypeRef::BitVector).unwrap_or(TypeRef::Unknown)
                    }
                    _ => {
                        if let Some(c) = self.symbols.classes.get(base) {
                            if c.is_trait {
                                TypeRef::Trait(c.name.clone())
                            } else {
                                TypeRef::Class {
                                    name: c.name.clone(),
                                    nullable: *nullable,
                                }
                            }
                        } else if self.symbols.datatypes.contains_key(base) {
                            TypeRef::Datatype(base.to_string())
                        } else {
                            TypeRef::Unknown
                        }
                    }
                }
            }
        }
    }

    fn this_type(&self, owner: &str) -> TypeRef {
        match self.symbols.classes.get(owner) {
            Some(c) if c.is_trait => TypeRef::Trait(c.name.clone()),
            Some(c) => TypeRef::Class {
                name: c.name.clone(),
                nullable: false,
            },
            None => TypeRef::Datatype(owner.to_string()),
        }
    }

    fn collect_members(&mut self, decls: &[Decl], owner: Option<&str>) {
        for d in decls {
            match d {
                Decl::Callable(c) => {
                    let sig = CallableSignature {
                        owner: owner.map(String::from),
                        name: c.name.name.clone(),
                        kind: c.kind,
                        params: c.params.iter().map(|p| self.type_of_expr(&p.ty)).collect(),
                        param_names: c
                            .params
                            .iter()
                            .map(|p| p.name.as_ref().map(|n| n.name.clone()).unwrap_or_default())
                            .collect(),
                        returns: if c.kind.is_method_like() {
                            c.outs.iter().map(|p| self.type_of_expr(&p.ty)).collect()
                        } else {
                            match &c.result {
                                Some(r) => vec![self.type_of_expr(&r.ty)],
                                None if c.kind == CallableKind::Predicate => vec![TypeRef::Bool],
                                None => vec![TypeRef::Unknown],
                            }
                        },
                        is_ghost: c.modifiers.ghost || c.kind == CallableKind::Lemma,
                        is_static: c.modifiers.is_static,
                        has_body: c.body.is_some(),
                        span: c.span,
                    };
                    self.symbols.callables.push(sig);
                    let id = CallableId(self.symbols.callables.len() as u32 - 1);
                    self.callable_ids.insert(c.span.start, id);
                    if let Some(o) = owner {
                        if let Some(ci) = self.symbols.classes.get_mut(o) {
                            ci.members.push(id);
                        } else if let Some(di) = self.symbols.datatypes.get_mut(o) {
                            di.members.push(id);
                        }
                    }
                }
                Decl::Class(c) => self.collect_members(&c.members, Some(&c.name.name)),
                Decl::Datatype(dt) => {
                    let ctors: Vec<CtorInfo> = dt
                        .ctors
                        .iter()
                        .map(|c| CtorInfo {
                            name: c.name.name.clone(),
                            params: c
                                .params
                                .iter()
                                .map(|p| (p.name.as_ref().map(|n| n.name.clone()), self.type_of_expr(&p.ty)))
                                .collect(),
                            span: c.span,
                        })
                        .collect();
                    if let Some(info) = self.symbols.datatypes.get_mut(&dt.name.name) {
                        info.ctors = ctors;
                    }
                    self.collect_members(&dt.members, Some(&dt.name.name));
                }
                Decl::Const(k) => {
                    let info = FieldInfo {
                        owner: owner.map(String::from),
                        name: k.name.name.clone(),
                        ty: k.ty.as_ref().map(|t| self.type_of_expr(t)).unwrap_or(TypeRef::Unknown),
                        is_const: true,
                        is_static: k.modifiers.is_static,
                        ghost: k.modifiers.ghost,
                        span: k.span,
                    };
                    self.add_field(owner, info);
                }
                Decl::Field(f) => {
                    for (name, ty) in &f.vars {
                        let info = FieldInfo {
                            owner: owner.map(String::from),
                            name: name.name.clone(),
                            ty: self.type_of_expr(ty),
                            is_const: false,
                            is_static: f.modifiers.is_static,
                            ghost: f.modifiers.ghost,
                            span: f.span,
                        };
                        self.add_field(owner, info);
                    }
                }
                Decl::Module(m) => self.collect_members(&m.decls, None),
                Decl::Opaque(_) => {}
            }
        }
    }

    fn add_field(&mut self, owner: Option<&str>, info: FieldInfo) {
        match owner.and_then(|o| self.symbols.classes.get_mut(o)) {
            Some(c) => c.fields.push(info),
            None if owner.is_none() => self.symbols.consts.push(info),
            None => {}
        }
    }

    fn ctx_for(&self, owner: Option<&str>) -> Ctx {
        Ctx {
            owner: owner.map(String::from),
            this_ty: owner.map(|o| self.this_type(o)).unwrap_or(TypeRef::Unknown),
        }
    }

    fn resolve_consts(&mut self, decls: &[Decl], owner: Option<&str>) {
        for d in decls {
            match d {
                Decl::Const(k) => {
                    if let Some(init) = &k.init {
                        let ctx = self.ctx_for(owner);
                        let root = self.scopes.root();
                        let t = self.expr(init, root, &ctx);
                        if k.ty.is_none() {
                            let slot = match owner.and_then(|o| self.symbols.classes.get_mut(o)) {
                                Some(c) => c.fields.iter_mut().find(|f| f.name == k.name.name),
                                None => self
                                    .symbols
                                    .consts
                                    .iter_mut()
                                    .find(|f| f.name == k.name.name),
                            };
                            if let Some(f) = slot {
                                f.ty = t;
                            }
                        }
                    }
                }
                Decl::Class(c) => self.resolve_consts(&c.members, Some(&c.name.name)),
                Decl::Datatype(dt) => self.resolve_consts(&dt.members, Some(&dt.name.name)),
                Decl::Module(m) => self.resolve_consts(&m.decls, None),
                _ => {}
            }
        }
    }

    fn resolve_bodies(&mut self, decls: &[Decl], owner: Option<&str>) {
        for d in decls {
            match d {
                Decl::Callable(c) => self.resolve_callable(c, owner),
                Decl::Class(c) => self.resolve_bodies(&c.members, Some(&c.name.name)),
                Decl::Datatype(dt) => self.resolve_bodies(&dt.members, Some(&dt.name.name)),
                Decl::Module(m) => self.resolve_bodies(&m.decls, None),
                _ => {}
            }
        }
    }

    fn declare(&mut self, scope: ScopeId, name: &Ident, ty: TypeRef, kind: VarKind, needs: bool) -> ScopeId {
        let (s, id) = self.scopes.declare(
            scope,
            VarInfo {
                name: name.name.clone(),
                ty,
                kind,
                span: name.span,
                needs_assignment: needs,
            },
        );
        self.local_vars.insert(name.span.start, id);
        s
    }

    fn resolve_callable(&mut self, c: &Callable, owner: Option<&str>) {
        let ctx = self.ctx_for(owner);
        let mut scope = self.scopes.root();
        for p in &c.params {
            if let Some(n) = &p.name {
                let t = self.type_of_expr(&p.ty);
                scope = self.declare(scope, n, t, VarKind::Param, false);
            }
        }
        for p in &c.outs {
            if let Some(n) = &p.name {
                let t = self.type_of_expr(&p.ty);
                scope = self.declare(scope, n, t, VarKind::OutParam, true);
            }
        }
        match &c.body {
            Some(CallableBody::Block(b)) => {
                self.block(&b.stmts, scope, &ctx);
            }
            Some(CallableBody::Expr { expr, .. }) => {
                self.expr(expr, scope, &ctx);
            }
            _ => {}
        }
    }

    // ---- statements -----------------------------------------------------

    fn block(&mut self, stmts: &[Stmt], mut scope: ScopeId, ctx: &Ctx) -> ScopeId {
        for s in stmts {
            scope = self.stmt(s, scope, ctx);
        }
        scope
    }

    fn stmt(&mut self, s: &Stmt, scope: ScopeId, ctx: &Ctx) -> ScopeId {
        match &s.kind {
            StmtKind::VarDecl { vars, init } => {
                let init_types: Vec<TypeRef> = init.iter().map(|e| self.expr(e, scope, ctx)).collect();
                let multi = if init.len() == 1 && vars.len() > 1 {
                    self.call_returns(&init[0])
                } else {
                    Vec::new()
                };
                let mut sc = scope;
                for (i, v) in vars.iter().enumerate() {
                    let ty = match &v.ty {
                        Some(t) => self.type_of_expr(t),
                        None if init.len() == vars.len() => init_types[i].clone(),
                        None => multi.get(i).cloned().unwrap_or(TypeRef::Unknown),
                    };
                    sc = self.declare(sc, &v.name, ty, VarKind::Local, init.is_empty());
                }
                sc
            }
            StmtKind::Assign { lhs, rhs } => {
                for e in rhs {
                    self.expr(e, scope, ctx);
                }
                for e in lhs {
                    self.expr(e, scope, ctx);
                }
                let mut sc = scope;
                for e in lhs {
                    if let Some(Binding::Var(v)) = self.bindings[e.id.0 as usize].clone() {
                        let name = self.scopes.var(v).name.clone();
                        sc = self.scopes.mark_assigned(sc, &name);
                    }
                }
                sc
            }
            StmtKind::Call(e) => {
                self.expr(e, scope, ctx);
                scope
            }
            StmtKind::If(i) => {
                self.if_stmt(i, scope, ctx);
                scope
            }
            StmtKind::While { guard, body, .. } => {
                self.expr(guard, scope, ctx);
                if let Some(b) = body {
                    self.block(&b.stmts, scope, ctx);
                }
                scope
            }
            StmtKind::For {
                index,
                index_ty,
                lo,
                hi,
                body,
                ..
            } => {
                self.expr(lo, scope, ctx);
                self.expr(hi, scope, ctx);
                let t = index_ty
                    .as_ref()
                    .map(|t| self.type_of_expr(t))
                    .unwrap_or(TypeRef::Int);
                let inner = self.declare(scope, index, t, VarKind::Bound, false);
                if let Some(b) = body {
                    self.block(&b.stmts, inner, ctx);
                }
                scope
            }
            StmtKind::Match { scrutinee, cases } => {
                let st = self.expr(scrutinee, scope, ctx);
                for c in cases {
                    let inner = self.bind_pattern(&c.pattern, &st, scope);
                    self.block(&c.body, inner, ctx);
                }
                scope
            }
            StmtKind::Return(es) | StmtKind::Print(es) => {
                for e in es {
                    self.expr(e, scope, ctx);
                }
                scope
            }
            StmtKind::Block(b) => {
                self.block(&b.stmts, scope, ctx);
                scope
            }
            StmtKind::Break { .. } | StmtKind::Continue { .. } | StmtKind::Opaque => scope,
        }
    }

    fn if_stmt(&mut self, i: &IfStmt, scope: ScopeId, ctx: &Ctx) {
        self.expr(&i.guard, scope, ctx);
        self.block(&i.then_block.stmts, scope, ctx);
        match &i.else_branch {
            Some(ElseBranch::Block(b)) => {
                self.block(&b.stmts, scope, ctx);
            }
            Some(ElseBranch::If(s)) => {
                self.stmt(s, scope, ctx);
            }
            None => {}
        }
    }

    fn bind_pattern(&mut self, p: &Pattern, scrutinee: &TypeRef, scope: ScopeId) -> ScopeId {
        let Some(head) = &p.ctor else {
            return scope;
        };
        let ctor_params: Option<Vec<TypeRef>> = {
            let own = match scrutinee {
                TypeRef::Datatype(d) => self
                    .symbols
                    .datatypes
                    .get(d)
                    .and_then(|d| d.ctors.iter().find(|c| c.name == head.name)),
                _ => None,
            };
            own.or_else(|| self.symbols.find_ctor(&head.name).map(|(d, i)| &d.ctors[i]))
                .map(|c| c.params.iter().map(|(_, t)| t.clone()).collect())
        };
        let mut sc = scope;
        match ctor_params {
            Some(params) => {
                for (i, b) in p.binders.iter().enumerate() {
                    if let Some(b) = b {
                        let t = params.get(i).cloned().unwrap_or(TypeRef::Unknown);
                        sc = self.declare(sc, b, t, VarKind::Bound, false);
                    }
                }
            }
            None if p.binders.is_empty() => {
                sc = self.declare(sc, head, scrutinee.clone(), VarKind::Bound, false);
            }
            None => {}
        }
        sc
    }

    // ---- expressions ----------------------------------------------------

    fn call_returns(&self, e: &Expr) -> Vec<TypeRef> {
        match self.bindings[e.id.0 as usize] {
            Some(Binding::Callable(id)) => self.symbols.callable(id).returns.clone(),
            _ => Vec::new(),
        }
    }

    fn set(&mut self, e: &Expr, t: TypeRef, b: Option<Binding>, scope: ScopeId) -> TypeRef {
        let i = e.id.0 as usize;
        self.types[i] = t.clone();
        self.bindings[i] = b;
        self.expr_scope[i] = Some(scope);
        t
    }

    fn member_ctx_lookup(&self, ctx: &Ctx, name: &str) -> Option<(Binding, TypeRef)> {
        if let Some(o) = &ctx.owner {
            if let Some(f) = self.symbols.field(o, name) {
                return Some((
                    Binding::Member {
                        owner: f.owner.clone(),
                        name: f.name.clone(),
                    },
                    f.ty.clone(),
                ));
            }
        }
        None
    }

    fn ident(&mut self, e: &Expr, name: &str, scope: ScopeId, ctx: &Ctx) -> TypeRef {
        if let Some(v) = self.scopes.lookup(scope, name) {
            let t = self.scopes.var(v).ty.clone();
            return self.set(e, t, Some(Binding::Var(v)), scope);
        }
        if let Some((b, t)) = self.member_ctx_lookup(ctx, name) {
            return self.set(e, t, Some(b), scope);
        }
        if let Some(k) = self.symbols.consts.iter().find(|k| k.name == name) {
            let (b, t) = (
                Binding::Member {
                    owner: None,
                    name: k.name.clone(),
                },
                k.ty.clone(),
            );
            return self.set(e, t, Some(b), scope);
        }
        if let Some((d, i)) = self.symbols.find_ctor(name) {
            let b = Binding::Ctor {
                datatype: d.name.clone(),
                index: i,
            };
            let t = TypeRef::Datatype(d.name.clone());
            return self.set(e, t, Some(b), scope);
        }
        if self.symbols.classes.contains_key(name)
            || self.symbols.datatypes.contains_key(name)
            || self.symbols.modules.contains(name)
        {
            return self.set(e, TypeRef::Unknown, Some(Binding::TypeName(name.into())), scope);
        }
        self.set(e, TypeRef::Unknown, None, scope)
    }

    fn callable_result(&self, b: &Binding) -> TypeRef {
        match b {
            Binding::Callable(id) => self
                .symbols
                .callable(*id)
                .result_type()
                .cloned()
                .unwrap_or(TypeRef::Unknown),
            Binding::Ctor { datatype, .. } => TypeRef::Datatype(datatype.clone()),
            _ => TypeRef::Unknown,
        }
    }

    fn lookup_in_owner(&self, owner: &str, name: &str) -> Option<Binding> {
        if let Some(d) = self.symbols.datatypes.get(owner) {
            if let Some(i) = d.ctors.iter().position(|c| c.name == name) {
                return Some(Binding::Ctor {
                    datatype: d.name.clone(),
                    index: i,
                });
            }
        }
        self.symbols.member(owner, name).map(Binding::Callable)
    }

    fn call(&mut self, e: &Expr, recv: Option<&Expr>, callee: &Ident, args: &[Expr], scope: ScopeId, ctx: &Ctx) -> TypeRef {
        for a in args {
            self.expr(a, scope, ctx);
        }
        let binding = match recv {
            None => ctx
                .owner
                .as_deref()
                .and_then(|o| self.symbols.member(o, &callee.name).map(Binding::Callable))
                .or_else(|| self.symbols.top_level_callable(&callee.name).map(Binding::Callable))
                .or_else(|| {
                    self.symbols.find_ctor(&callee.name).map(|(d, i)| Binding::Ctor {
                        datatype: d.name.clone(),
                        index: i,
                    })
                }),
            Some(r) => {
                let rt = self.expr(r, scope, ctx);
                match (self.bindings[r.id.0 as usize].clone(), rt) {
                    (Some(Binding::TypeName(n)), _) if self.symbols.modules.contains(&n) => self
                        .symbols
                        .top_level_callable(&callee.name)
                        .map(Binding::Callable)
                        .or_else(|| {
                            self.symbols.find_ctor(&callee.name).map(|(d, i)| Binding::Ctor {
                                datatype: d.name.clone(),
                                index: i,
                            })
                        }),
                    (Some(Binding::TypeName(n)), _) => self.lookup_in_owner(&n, &callee.name),
                    (_, TypeRef::Class { name, .. } | TypeRef::Trait(name) | TypeRef::Datatype(name)) => {
                        self.lookup_in_owner(&name, &callee.name)
                    }
                    _ => None,
                }
            }
        };
        let t = binding
            .as_ref()
            .map(|b| self.callable_result(b))
            .unwrap_or(TypeRef::Unknown);
        self.set(e, t, binding, scope)
    }

    fn field(&mut self, e: &Expr, recv: &Expr, field: &Ident, scope: ScopeId, ctx: &Ctx) -> TypeRef {
        let rt = self.expr(recv, scope, ctx);
        let name = field.name.as_str();
        if let Some(Binding::TypeName(n)) = self.bindings[recv.id.0 as usize].clone() {
            if let Some(d) = self.symbols.datatypes.get(&n) {
                if let Some(i) = d.ctors.iter().position(|c| c.name == name) {
                    let b = Binding::Ctor {
                        datatype: n.clone(),
                        index: i,
                    };
                    return self.set(e, TypeRef::Datatype(n), Some(b), scope);
                }
            }
            let found = if self.symbols.modules.contains(&n) {
                self.symbols.consts.iter().find(|k| k.name == name).cloned()
            } else {
                self.symbols.field(&n, name).cloned()
            };
            if let Some(f) = found {
                let b = Binding::Member {
                    owner: f.owner.clone(),
                    name: f.name.clone(),
                };
                return self.set(e, f.ty, Some(b), scope);
            }
            return self.set(e, TypeRef::Unknown, None, scope);
        }
        match rt {
            TypeRef::Class { name: c, .. } | TypeRef::Trait(c) => {
                if let Some(f) = self.symbols.field(&c, name).cloned() {
                    let b = Binding::Member {
                        owner: f.owner.clone(),
                        name: f.name.clone(),
                    };
                    return self.set(e, f.ty, Some(b), scope);
                }
                self.set(e, TypeRef::Unknown, None, scope)
            }
            TypeRef::Array(_) if name == "Length" || name == "Length0" => {
                self.set(e, TypeRef::Int, None, scope)
            }
            TypeRef::Map(k, v) => {
                let t = match name {
                    "Keys" => TypeRef::Set(k),
                    "Values" => TypeRef::Set(v),
                    _ => TypeRef::Unknown,
                };
                self.set(e, t, None, scope)
            }
            TypeRef::Datatype(d) => {
                let t = self.symbols.datatypes.get(&d).and_then(|info| {
                    if let Some(ctor) = name.strip_suffix('?') {
                        return info.ctors.iter().any(|c| c.name == ctor).then_some(TypeRef::Bool);
                    }
                    info.ctors
                        .iter()
                        .flat_map(|c| c.params.iter())
                        .find(|(n, _)| n.as_deref() == Some(name))
                        .map(|(_, t)| t.clone())
                });
                self.set(e, t.unwrap_or(TypeRef::Unknown), None, scope)
            }
            _ => self.set(e, TypeRef::Unknown, None, scope),
        }
    }

    fn expr(&mut self, e: &Expr, scope: ScopeId, ctx: &Ctx) -> TypeRef {
        match &e.kind {
            ExprKind::Lit(l) => {
                let t = match l {
                    Literal::Bool(_) => TypeRef::Bool,
                    Literal::Int(_) => TypeRef::Int,
                    Literal::Real(_) => TypeRef::Real,
                    Literal::Char(_) => TypeRef::Char,
                    Literal::Str(_) => TypeRef::String,
                    Literal::Null => TypeRef::Unknown,
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Ident(name) => self.ident(e, name, scope, ctx),
            ExprKind::This => {
                let t = ctx.this_ty.clone();
                self.set(e, t, None, scope)
            }
            ExprKind::Field { recv, field } => self.field(e, recv, field, scope, ctx),
            ExprKind::TupleIndex { recv, index, .. } => {
                let t = match self.expr(recv, scope, ctx) {
                    TypeRef::Tuple(ts) => ts.get(*index).cloned().unwrap_or(TypeRef::Unknown),
                    _ => TypeRef::Unknown,
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Index { recv, index } => {
                let rt = self.expr(recv, scope, ctx);
                self.expr(index, scope, ctx);
                let t = match rt {
                    TypeRef::Seq(t) | TypeRef::Array(t) => *t,
                    TypeRef::String => TypeRef::Char,
                    TypeRef::Map(_, v) => *v,
                    TypeRef::Multiset(_) => TypeRef::Int,
                    TypeRef::Set(_) => TypeRef::Bool,
                    _ => TypeRef::Unknown,
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Update { recv, index, value } => {
                let rt = self.expr(recv, scope, ctx);
                self.expr(index, scope, ctx);
                self.expr(value, scope, ctx);
                self.set(e, rt, None, scope)
            }
            ExprKind::Slice { recv, lo, hi } => {
                let rt = self.expr(recv, scope, ctx);
                for x in [lo, hi].into_iter().flatten() {
                    self.expr(x, scope, ctx);
                }
                let t = match rt {
                    TypeRef::Array(t) => TypeRef::Seq(t),
                    t @ (TypeRef::Seq(_) | TypeRef::String) => t,
                    _ => TypeRef::Unknown,
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Call { recv, callee, args } => {
                self.call(e, recv.as_deref(), callee, args, scope, ctx)
            }
            ExprKind::Apply { func, args } => {
                self.expr(func, scope, ctx);
                for a in args {
                    self.expr(a, scope, ctx);
                }
                self.set(e, TypeRef::Unknown, None, scope)
            }
            ExprKind::Binary { op, lhs, rhs, .. } => {
                let lt = self.expr(lhs, scope, ctx);
                let rt = self.expr(rhs, scope, ctx);
                let t = match op.group() {
                    OpGroup::Relational | OpGroup::Conditional | OpGroup::Membership => TypeRef::Bool,
                    _ => {
                        let base = if lt.is_unknown() { rt } else { lt };
                        base.arithmetic_result()
                    }
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Chain { operands, .. } => {
                for o in operands {
                    self.expr(o, scope, ctx);
                }
                self.set(e, TypeRef::Bool, None, scope)
            }
            ExprKind::Unary { op, operand, .. } => {
                let t = self.expr(operand, scope, ctx);
                let t = match op {
                    UnOp::Neg => t.arithmetic_result(),
                    UnOp::Not => t,
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Display { flavor, elems } => {
                let ts: Vec<TypeRef> = elems.iter().map(|x| self.expr(x, scope, ctx)).collect();
                let elem = ts.into_iter().next().unwrap_or(TypeRef::Unknown);
                let t = match flavor {
                    Collection::Seq => TypeRef::seq(elem),
                    Collection::Set => TypeRef::set(elem),
                    Collection::Multiset => TypeRef::Multiset(elem.into()),
                };
                self.set(e, t, None, scope)
            }
            ExprKind::MapDisplay { entries } => {
                let mut first = None;
                for (k, v) in entries {
                    let kt = self.expr(k, scope, ctx);
                    let vt = self.expr(v, scope, ctx);
                    first.get_or_insert((kt, vt));
                }
                let t = match first {
                    Some((k, v)) => TypeRef::Map(k.into(), v.into()),
                    None => TypeRef::Map(TypeRef::Unknown.into(), TypeRef::Unknown.into()),
                };
                self.set(e, t, None, scope)
            }
            ExprKind::New { ty, ctor, args, dims } => {
                for d in dims {
                    self.expr(d, scope, ctx);
                }
                for a in args.iter().flatten() {
                    self.expr(a, scope, ctx);
                }
                let base = self.type_of_expr(ty);
                let (t, b) = if !dims.is_empty() {
                    let t = if dims.len() == 1 {
                        TypeRef::Array(base.into())
                    } else {
                        TypeRef::Unknown
                    };
                    (t, None)
                } else {
                    let b = match &base {
                        TypeRef::Class { name, .. } => {
                            let ctor_name = ctor.as_ref().map(|c| c.name.as_str()).unwrap_or("constructor");
                            self.symbols.member(name, ctor_name).map(Binding::Callable)
                        }
                        _ => None,
                    };
                    let t = match base {
                        TypeRef::Class { name, .. } => TypeRef::Class {
                            name,
                            nullable: false,
                        },
                        other => other,
                    };
                    (t, b)
                };
                self.set(e, t, b, scope)
            }
            ExprKind::Ite { guard, then, els } => {
                self.expr(guard, scope, ctx);
                let a = self.expr(then, scope, ctx);
                let b = self.expr(els, scope, ctx);
                let t = if a.is_unknown() { b } else { a };
                self.set(e, t, None, scope)
            }
            ExprKind::Let { vars, init, body } => {
                let ts: Vec<TypeRef> = init.iter().map(|x| self.expr(x, scope, ctx)).collect();
                let mut sc = scope;
                for (i, v) in vars.iter().enumerate() {
                    let t = match &v.ty {
                        Some(t) => self.type_of_expr(t),
                        None => ts.get(i).cloned().unwrap_or(TypeRef::Unknown),
                    };
                    sc = self.declare(sc, &v.name, t, VarKind::Bound, false);
                }
                let t = self.expr(body, sc, ctx);
                self.set(e, t, None, scope)
            }
            ExprKind::Match { scrutinee, cases } => {
                let st = self.expr(scrutinee, scope, ctx);
                let mut result = TypeRef::Unknown;
                for c in cases {
                    let sc = self.bind_pattern(&c.pattern, &st, scope);
                    let t = self.expr(&c.body, sc, ctx);
                    if result.is_unknown() {
                        result = t;
                    }
                }
                self.set(e, result, None, scope)
            }
            ExprKind::Paren(inner) => {
                let t = self.expr(inner, scope, ctx);
                let b = self.bindings[inner.id.0 as usize].clone();
                self.set(e, t, b, scope)
            }
            ExprKind::Tuple(elems) => {
                let ts = elems.iter().map(|x| self.expr(x, scope, ctx)).collect();
                self.set(e, TypeRef::Tuple(ts), None, scope)
            }
            ExprKind::Cardinality(inner) => {
                self.expr(inner, scope, ctx);
                self.set(e, TypeRef::Int, None, scope)
            }
            ExprKind::Conversion { expr, ty, is_test } => {
                self.expr(expr, scope, ctx);
                let t = if *is_test {
                    TypeRef::Bool
                } else {
                    self.type_of_expr(ty)
                };
                self.set(e, t, None, scope)
            }
            ExprKind::Opaque(kind) => {
                let t = match kind {
                    OpaqueKind::Quantifier => TypeRef::Bool,
                    _ => TypeRef::Unknown,
                };
                self.set(e, t, None, scope)
            }
        }
    }
}
