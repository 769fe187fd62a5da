pub mod ast;
pub mod lexer;
mod parser;
mod print;

pub use parser::{is_keyword, parse_program, ParseError, SyntaxError};
pub use print::{print_program, splice, SpliceError};
