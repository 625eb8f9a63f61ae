//! Algorithmic equi-recursive typing that elaborates into the cast calculus,
//! and a lockstep driver comparing the two reduction relations.

use thiserror::Error;

use crate::equiv::{self, head_normalize, EquivError};
use crate::eval::{step_equi, step_iso, EvalError, Trace};
use crate::kernel::{Symbol, Term, TermCtx, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("unbound variable {0}")]
    UnboundVar(Symbol),
    #[error("applying a term of non-function type {0}")]
    NotAFunction(Type),
    #[error("argument of type {arg} does not match parameter type {dom}")]
    ArgMismatch { arg: Type, dom: Type },
    #[error("expected type {expected}, found {found}")]
    TypeMismatch { found: Type, expected: Type },
    #[error("annotation is not contractive: {0}")]
    NotContractive(Type),
    #[error("annotation is not a closed type: {0}")]
    IllFormedAnnotation(Type),
    #[error("Top is not available without subtyping: {0}")]
    TopNotAllowed(Type),
    #[error("input already contains casts")]
    CastInInput,
    #[error("no elaboration found for {found} <= {expected} (search depth {depth})")]
    ElaborationIncomplete { found: Type, expected: Type, depth: usize },
    #[error(transparent)]
    Equiv(#[from] EquivError),
}

/// How an elaborated term of one type is adapted to an expected type.
pub trait Coercion {
    fn allows_top(&self) -> bool;
    /// `Ok(None)` when the types are simply unrelated.
    fn coerce(&self, e: Term, from: &Type, to: &Type) -> Result<Option<Term>, ElabError>;
}

/// Equality only: a synthesized cast, omitted for alpha-equal types.
#[derive(Debug, Clone, Copy, Default)]
pub struct EqualityCoercion;

impl Coercion for EqualityCoercion {
    fn allows_top(&self) -> bool {
        false
    }

    fn coerce(&self, e: Term, from: &Type, to: &Type) -> Result<Option<Term>, ElabError> {
        if from == to {
            return Ok(Some(e));
        }
        match equiv::synthesize_cast(from, to) {
            Ok(c) => Ok(Some(Term::cast_unless_id(c, e))),
            Err(EquivError::NotEqual { .. }) => Ok(None),
            Err(err) => Err(err.into()),
        }
    }
}

fn check_annotation(rules: &impl Coercion, t: &Type) -> Result<(), ElabError> {
    if !t.is_closed() || !t.is_locally_closed() {
        return Err(ElabError::IllFormedAnnotation(t.clone()));
    }
    if !t.is_contractive() {
        return Err(ElabError::NotContractive(t.clone()));
    }
    if !rules.allows_top() && t.contains_top() {
        return Err(ElabError::TopNotAllowed(t.clone()));
    }
    Ok(())
}

pub fn infer_with(rules: &impl Coercion, ctx: &TermCtx, e: &Term) -> Result<(Type, Term), ElabError> {
    match e {
        Term::Int(_) => Ok((Type::Int, e.clone())),
        Term::Var(x) => ctx
            .lookup(x)
            .map(|t| (t.clone(), e.clone()))
            .ok_or_else(|| ElabError::UnboundVar(x.clone())),
        Term::Abs(x, annot, body) => {
            check_annotation(rules, annot)?;
            let inner = ctx.extended(x.clone(), annot.clone());
            let (cod, body2) = infer_with(rules, &inner, body)?;
            Ok((
                Type::arrow(annot.clone(), cod),
                Term::Abs(x.clone(), annot.clone(), Box::new(body2)),
            ))
        }
        Term::App(f, a) => {
            let (ft, f2) = infer_with(rules, ctx, f)?;
            let hn = head_normalize(&ft)?;
            let Some((dom, cod)) = hn.head.as_arrow() else {
                return Err(ElabError::NotAFunction(ft));
            };
            let f2 = Term::cast_unless_id(hn.pre, f2);
            let (at, a2) = infer_with(rules, ctx, a)?;
            let a2 = rules
                .coerce(a2, &at, dom)?
                .ok_or_else(|| ElabError::ArgMismatch {
                    arg: at.clone(),
                    dom: dom.clone(),
                })?;
            Ok((cod.clone(), Term::app(f2, a2)))
        }
        Term::Cast(..) => Err(ElabError::CastInInput),
    }
}

pub fn check_with(rules: &impl Coercion, ctx: &TermCtx, e: &Term, b: &Type) -> Result<Term, ElabError> {
    check_annotation(rules, b)?;
    let (a, e2) = infer_with(rules, ctx, e)?;
    rules
        .coerce(e2, &a, b)?
        .ok_or_else(|| ElabError::TypeMismatch {
            found: a,
            expected: b.clone(),
        })
}

/// `ctx |-e e : A ▷ e'`.
pub fn infer_elab(ctx: &TermCtx, e: &Term) -> Result<(Type, Term), ElabError> {
    infer_with(&EqualityCoercion, ctx, e)
}

/// Elaborates `e` at the expected type `b`.
pub fn check_elab(ctx: &TermCtx, e: &Term, b: &Type) -> Result<Term, ElabError> {
    check_with(&EqualityCoercion, ctx, e, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("ill-typed input: {0}")]
    IllTyped(#[from] ElabError),
    #[error("elaboration does not erase to the input")]
    NotAnElaboration,
    #[error("after equi step {equi_step}, no matching iso term within fuel (at {iso_term})")]
    NoMatchWithinFuel { equi_step: usize, iso_term: Term },
    #[error("at equi step {equi_step}, iso term {iso_term} erases to neither side of the step")]
    Mismatch { equi_step: usize, iso_term: Term },
    #[error("iso side stuck at {iso_term} (equi step {equi_step})")]
    IsoStuck { equi_step: usize, iso_term: Term },
    #[error("equi side stuck at {0}")]
    EquiStuck(Term),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub equi: Trace,
    pub iso: Trace,
    /// Both sides reached values (false when the equi fuel ran out first).
    pub completed: bool,
}

/// Runs the cast-free term `equi` and its elaboration `iso` side by side:
/// every equi step must be matched by iso steps whose erasures stay on the
/// two ends of that step.
pub fn simulate_pair(
    equi: &Term,
    iso: &Term,
    equi_fuel: usize,
    iso_fuel: usize,
) -> Result<SimulationReport, SimError> {
    if iso.erase() != *equi {
        return Err(SimError::NotAnElaboration);
    }
    let mut et = Trace::new(equi.clone());
    let mut it = Trace::new(iso.clone());
    let mut iso_cur = iso.clone();
    let mut used = 0usize;

    let mut advance = |target: &Term,
                       from: &Term,
                       equi_step: usize,
                       iso_cur: &mut Term,
                       it: &mut Trace,
                       until_value: bool|
     -> Result<(), SimError> {
        loop {
            let er = iso_cur.erase();
            let done = if until_value {
                iso_cur.is_value()
            } else {
                er == *target
            };
            if done {
                return Ok(());
            }
            if er != *target && er != *from {
                return Err(SimError::Mismatch {
                    equi_step,
                    iso_term: iso_cur.clone(),
                });
            }
            if used >= iso_fuel {
                return Err(SimError::NoMatchWithinFuel {
                    equi_step,
                    iso_term: iso_cur.clone(),
                });
            }
            let Some(s) = step_iso(iso_cur) else {
                return Err(SimError::IsoStuck {
                    equi_step,
                    iso_term: iso_cur.clone(),
                });
            };
            used += 1;
            *iso_cur = s.term.clone();
            it.steps.push(s);
        }
    };

    let mut cur = equi.clone();
    for i in 0..equi_fuel {
        let Some(s) = step_equi(&cur)? else { break };
        advance(&s.term, &cur, i + 1, &mut iso_cur, &mut it, false)?;
        cur = s.term.clone();
        et.steps.push(s);
    }
    if !cur.is_value() {
        if step_equi(&cur)?.is_none() {
            return Err(SimError::EquiStuck(cur));
        }
        return Ok(SimulationReport {
            equi: et,
            iso: it,
            completed: false,
        });
    }
    let n = et.len();
    advance(&cur, &cur, n, &mut iso_cur, &mut it, true)?;
    if iso_cur.erase() != cur {
        return Err(SimError::Mismatch {
            equi_step: n,
            iso_term: iso_cur,
        });
    }
    Ok(SimulationReport {
        equi: et,
        iso: it,
        completed: true,
    })
}

/// Elaborates a closed cast-free term and simulates it; the iso side gets
/// a hundred times the equi fuel.
pub fn simulate(e: &Term, fuel: usize) -> Result<SimulationReport, SimError> {
    let (_, iso) = infer_elab(&TermCtx::new(), e)?;
    simulate_pair(e, &iso, fuel, fuel.saturating_mul(100))
}
