//! Syntax of While: source and runtime statements, the surface parser, the
//! canonical printer and evaluation contexts.

mod ast;
pub mod context;
mod lexer;
mod parser;
mod pretty;

pub use ast::*;
pub use context::{decompose, plug, EvalContext, Frame, HoleSort};
pub use lexer::is_reserved;
pub use parser::{parse_expr, parse_program, ParseError};
pub use pretty::{pretty, pretty_aexp, pretty_bexp, pretty_expr};

/// True iff no runtime-only constructor occurs in `s`.
pub fn is_source_form(s: &Stmt) -> bool {
    s.is_source_form()
}
