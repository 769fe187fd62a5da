use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::types::TypeRef;
use crate::span::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScopeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Local,
    Param,
    OutParam,
    /// Loop index, pattern binder or let-bound name.
    Bound,
}

#[derive(Clone, Debug)]
pub struct VarInfo {
    pub name: String,
    pub ty: TypeRef,
    pub kind: VarKind,
    pub span: SourceSpan,
    /// Declared without a value (out-parameters, `var x: T;`).
    pub needs_assignment: bool,
}

#[derive(Clone, Debug)]
enum Entry {
    Root,
    Var(VarId),
    Assigned(String),
}

#[derive(Clone, Debug)]
struct Frame {
    parent: Option<ScopeId>,
    entry: Entry,
}

/// Persistent scope chains. Every declaration or assignment pushes a new
/// frame, so a `ScopeId` captured at an expression stays valid forever and
/// describes exactly what was visible there.
#[derive(Clone, Debug, Default)]
pub struct Scopes {
    frames: Vec<Frame>,
    vars: Vec<VarInfo>,
}

impl Scopes {
    pub fn root(&mut self) -> ScopeId {
        self.push(None, Entry::Root)
    }

    fn push(&mut self, parent: Option<ScopeId>, entry: Entry) -> ScopeId {
        self.frames.push(Frame { parent, entry });
        ScopeId(self.frames.len() as u32 - 1)
    }

    pub fn declare(&mut self, parent: ScopeId, var: VarInfo) -> (ScopeId, VarId) {
        self.vars.push(var);
        let id = VarId(self.vars.len() as u32 - 1);
        (self.push(Some(parent), Entry::Var(id)), id)
    }

    pub fn mark_assigned(&mut self, parent: ScopeId, name: &str) -> ScopeId {
        self.push(Some(parent), Entry::Assigned(name.into()))
    }

    pub fn var(&self, id: VarId) -> &VarInfo {
        &self.vars[id.0 as usize]
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    fn chain(&self, scope: ScopeId) -> impl Iterator<Item = &Frame> {
        let mut cur = Some(scope);
        core::iter::from_fn(move || {
            let f = &self.frames[cur?.0 as usize];
            cur = f.parent;
            Some(f)
        })
    }

    /// Innermost declaration of `name` visible from `scope`.
    pub fn lookup(&self, scope: ScopeId, name: &str) -> Option<VarId> {
        self.chain(scope).find_map(|f| match &f.entry {
            Entry::Var(id) if self.var(*id).name == name => Some(*id),
            _ => None,
        })
    }

    /// Whether `name` has a value at `scope` (declared with one, or assigned since).
    pub fn is_assigned(&self, scope: ScopeId, name: &str) -> bool {
        for f in self.chain(scope) {
            match &f.entry {
                Entry::Assigned(n) if n == name => return true,
                Entry::Var(id) if self.var(*id).name == name => {
                    return !self.var(*id).needs_assignment
                }
                _ => {}
            }
        }
        false
    }

    /// Visible, definitely-assigned variables in declaration order.
    pub fn visible(&self, scope: ScopeId) -> Vec<VarId> {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut assigned: BTreeSet<&str> = BTreeSet::new();
        let mut out = Vec::new();
        for f in self.chain(scope) {
            match &f.entry {
                Entry::Assigned(n) => {
                    assigned.insert(n.as_str());
                }
                Entry::Var(id) => {
                    let v = self.var(*id);
                    if seen.insert(v.name.as_str())
                        && (!v.needs_assignment || assigned.contains(v.name.as_str()))
                    {
                        out.push(*id);
                    }
                }
                Entry::Root => {}
            }
        }
        out.reverse();
        out
    }
}
