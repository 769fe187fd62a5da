use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Resolved type of an expression or declaration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeRef {
    Bool,
    Int,
    Nat,
    Real,
    Char,
    String,
    BitVector(u32),
    Seq(Box<TypeRef>),
    Set(Box<TypeRef>),
    Multiset(Box<TypeRef>),
    Map(Box<TypeRef>, Box<TypeRef>),
    Array(Box<TypeRef>),
    Tuple(Vec<TypeRef>),
    Class { name: String, nullable: bool },
    Trait(String),
    Datatype(String),
    Unknown,
}

impl TypeRef {
    pub fn seq(t: TypeRef) -> TypeRef {
        TypeRef::Seq(Box::new(t))
    }

    pub fn set(t: TypeRef) -> TypeRef {
        TypeRef::Set(Box::new(t))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TypeRef::Unknown)
    }

    /// True when the type mentions `Unknown` anywhere.
    pub fn has_unknown(&self) -> bool {
        match self {
            TypeRef::Unknown => true,
            TypeRef::Seq(t) | TypeRef::Set(t) | TypeRef::Multiset(t) | TypeRef::Array(t) => {
                t.has_unknown()
            }
            TypeRef::Map(k, v) => k.has_unknown() || v.has_unknown(),
            TypeRef::Tuple(ts) => ts.iter().any(TypeRef::has_unknown),
            _ => false,
        }
    }

    fn normalized(&self) -> TypeRef {
        match self {
            TypeRef::String => TypeRef::seq(TypeRef::Char),
            TypeRef::Seq(t) => TypeRef::seq(t.normalized()),
            TypeRef::Set(t) => TypeRef::set(t.normalized()),
            TypeRef::Multiset(t) => TypeRef::Multiset(Box::new(t.normalized())),
            TypeRef::Array(t) => TypeRef::Array(Box::new(t.normalized())),
            TypeRef::Map(k, v) => TypeRef::Map(Box::new(k.normalized()), Box::new(v.normalized())),
            TypeRef::Tuple(ts) => TypeRef::Tuple(ts.iter().map(TypeRef::normalized).collect()),
            other => other.clone(),
        }
    }

    /// Structural "same type" test used by every type-constrained operator.
    /// `Unknown` is never the same as anything, and `string` equals `seq<char>`.
    pub fn same_as(&self, other: &TypeRef) -> bool {
        !self.has_unknown() && !other.has_unknown() && self.normalized() == other.normalized()
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, TypeRef::Int | TypeRef::Nat | TypeRef::Real)
    }

    pub fn is_integral(&self) -> bool {
        matches!(self, TypeRef::Int | TypeRef::Nat)
    }

    /// Types on which `<`, `<=`, `>`, `>=` are defined.
    pub fn is_ordered(&self) -> bool {
        matches!(
            self,
            TypeRef::Int
                | TypeRef::Nat
                | TypeRef::Real
                | TypeRef::Char
                | TypeRef::BitVector(_)
                | TypeRef::String
                | TypeRef::Seq(_)
                | TypeRef::Set(_)
                | TypeRef::Multiset(_)
        )
    }

    /// Result type of arithmetic on a value of this type (`nat + nat` is `int`).
    pub fn arithmetic_result(&self) -> TypeRef {
        match self {
            TypeRef::Nat => TypeRef::Int,
            other => other.clone(),
        }
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Bool => f.write_str("bool"),
            TypeRef::Int => f.write_str("int"),
            TypeRef::Nat => f.write_str("nat"),
            TypeRef::Real => f.write_str("real"),
            TypeRef::Char => f.write_str("char"),
            TypeRef::String => f.write_str("string"),
            TypeRef::BitVector(w) => write!(f, "bv{w}"),
            TypeRef::Seq(t) => write!(f, "seq<{t}>"),
            TypeRef::Set(t) => write!(f, "set<{t}>"),
            TypeRef::Multiset(t) => write!(f, "multiset<{t}>"),
            TypeRef::Map(k, v) => write!(f, "map<{k}, {v}>"),
            TypeRef::Array(t) => write!(f, "array<{t}>"),
            TypeRef::Tuple(ts) => {
                f.write_str("(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            TypeRef::Class { name, nullable } => {
                write!(f, "{name}{}", if *nullable { "?" } else { "" })
            }
            TypeRef::Trait(n) | TypeRef::Datatype(n) => f.write_str(n),
            TypeRef::Unknown => f.write_str("?"),
        }
    }
}
