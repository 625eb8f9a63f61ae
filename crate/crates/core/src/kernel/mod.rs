//! Syntax of types, casts and terms: binding, substitution, well-formedness,
//! contractiveness, erasure, and the concrete grammar.

mod parse;
mod print;
mod terms;
mod types;

pub use parse::{parse_cast, parse_term, parse_type, ParseError};
pub use print::{type_to_string, CastDisplay, TermDisplay};
pub use terms::{fresh_name, Cast, CastEnv, Term, TermCtx};
pub use types::{well_formed, Binder, Symbol, TyVar, Type, TypeCtx};
