//! Command line, verifier integration and reports for mutdafny.

pub mod campaign;
pub mod cli;
pub mod output;
pub mod report;
pub mod verifier;
