//! Parsing, name resolution and mutation-target discovery for Dafny programs.
//!
//! Everything here is pure text-in, text-out; running a verifier lives in the
//! `mutdafny` crate.
#![no_std]

extern crate alloc;

pub mod span;
pub mod syntax;
pub mod resolve;
pub mod scan;
pub mod mutate;
pub mod score;
