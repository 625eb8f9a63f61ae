//! Full iso-recursive types.
//!
//! Casts `cast<c>(e)` generalize `fold`/`unfold` so that every equi-recursive
//! type equality has a computationally irrelevant witness. The crate provides
//! the cast calculus and its typing ([`castcalc`]), a decision procedure for
//! equi-recursive equality that synthesizes those witnesses ([`equiv`]), a
//! small-step evaluator with push rules ([`eval`]), elaboration from
//! equi-recursive programs ([`elaborate`]), iso- and equi-recursive Amber
//! subtyping ([`subtype`]), and an independent tree-model test harness
//! ([`harness`]).

pub mod castcalc;
pub mod elaborate;
pub mod equiv;
pub mod eval;
pub mod harness;
pub mod kernel;
pub mod subtype;

pub use kernel::{parse_cast, parse_term, parse_type, Cast, Symbol, Term, Type};
