//! The While language: a small imperative language with blocks, dynamically
//! scoped procedures, interleaved parallel composition and atomic regions.
//!
//! - [`syntax`]: AST, parser, printer, evaluation contexts
//! - [`env`]: leveled variable and procedure stores
//! - [`semantics`]: the one-step reduction relation
//! - [`explorer`]: scheduled runs, exhaustive reduction graphs, DOT/JSON export
//! - [`typesys`]: the type checker and its derivation trees

pub mod env;
pub mod explorer;
pub mod semantics;
pub mod syntax;
pub mod typesys;

pub use semantics::{successors, Configuration, Rule, Step};
pub use syntax::{parse_program, pretty, Stmt};
