//! The full iso-recursive cast calculus: cast reversal, cast substitution,
//! forward cast application (`A ~> B : c` with `B` computed from `A`) and
//! term typing.
//!
//! Every cast constructor except an unannotated `fix` determines its output
//! type from its input type. For an unannotated `fix` the target is a
//! placeholder solved by first-order unification against the constraints
//! that `fold`/`unfold`/cast-variable leaves impose.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::kernel::{
    fresh_name, well_formed, Cast, CastEnv, Symbol, Term, TermCtx, Type, TypeCtx,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CastError {
    #[error("cast {cast} expects source {expected}, got {found}")]
    CastSourceMismatch {
        cast: String,
        expected: String,
        found: String,
    },
    #[error("arrow cast {cast} applied to non-arrow type {found}")]
    NotAnArrow { cast: String, found: String },
    #[error("cannot resolve the target of {cast}: {reason}")]
    UnresolvedFixTarget { cast: String, reason: String },
    #[error("unbound cast variable {0}")]
    UnboundCastVar(Symbol),
    #[error("fix body must be an arrow cast: {0}")]
    FixBodyNotArrow(String),
    #[error("cast variable {var} is not guarded by an arrow cast in {cast}")]
    UnguardedFixVar { var: Symbol, cast: String },
    #[error("ill-formed type {0}")]
    IllFormed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable {0}")]
    UnboundVar(Symbol),
    #[error("applying a term of non-arrow type {0}")]
    AppOfNonArrow(Type),
    #[error("argument of type {arg} does not match domain {dom}")]
    ArgTypeMismatch { arg: Type, dom: Type },
    #[error("argument of type {arg} is not an iso-recursive subtype of {dom}")]
    SubtypeMismatch { arg: Type, dom: Type },
    #[error("annotation {0} is not a closed type")]
    IllFormedAnnotation(Type),
    #[error("Top is not allowed without subtyping: {0}")]
    TopNotAllowed(Type),
    #[error(transparent)]
    Cast(#[from] CastError),
}

/// How unannotated `fix` bodies are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FixPolicy {
    /// Any body whose bound variable only occurs under an arrow cast.
    #[default]
    Guarded,
    /// Only `fix i. c1 -> c2`.
    ArrowBodyOnly,
}

/// `reverse(c)`: a witness of `B ~> A` from a witness of `A ~> B`.
pub fn reverse(c: &Cast) -> Cast {
    match c {
        Cast::Var(_) | Cast::Id => c.clone(),
        Cast::Fold(t) => Cast::Unfold(t.clone()),
        Cast::Unfold(t) => Cast::Fold(t.clone()),
        Cast::Arrow(a, b) => Cast::arrow(reverse(a), reverse(b)),
        Cast::Seq(a, b) => Cast::seq(reverse(b), reverse(a)),
        Cast::Fix {
            var,
            declared,
            body,
        } => Cast::Fix {
            var: var.clone(),
            declared: declared.as_ref().map(|(s, t)| (t.clone(), s.clone())),
            body: Box::new(reverse(body)),
        },
    }
}

/// Capture-avoiding `c[var := with]`.
pub fn subst_cast(c: &Cast, var: &Symbol, with: &Cast) -> Cast {
    let fv = with.free_vars();
    subst_cast_with(c, var, with, &fv)
}

fn subst_cast_with(c: &Cast, var: &Symbol, with: &Cast, fv: &BTreeSet<Symbol>) -> Cast {
    match c {
        Cast::Var(v) if v == var => with.clone(),
        Cast::Var(_) | Cast::Id | Cast::Fold(_) | Cast::Unfold(_) => c.clone(),
        Cast::Arrow(a, b) => Cast::arrow(
            subst_cast_with(a, var, with, fv),
            subst_cast_with(b, var, with, fv),
        ),
        Cast::Seq(a, b) => Cast::seq(
            subst_cast_with(a, var, with, fv),
            subst_cast_with(b, var, with, fv),
        ),
        Cast::Fix { var: bound, .. } if bound == var => c.clone(),
        Cast::Fix {
            var: bound,
            declared,
            body,
        } => {
            let (bound, body) = if fv.contains(bound) {
                let mut avoid = fv.clone();
                body.all_vars(&mut avoid);
                avoid.insert(var.clone());
                let fresh = fresh_name(bound, &avoid);
                let renamed = subst_cast(body, bound, &Cast::Var(fresh.clone()));
                (fresh, renamed)
            } else {
                (bound.clone(), (**body).clone())
            };
            Cast::Fix {
                var: bound,
                declared: declared.clone(),
                body: Box::new(subst_cast_with(&body, var, with, fv)),
            }
        }
    }
}

/// Whether every free occurrence of `var` in `c` sits under an arrow cast.
pub fn is_guarded(c: &Cast, var: &Symbol) -> bool {
    match c {
        Cast::Var(v) => v != var,
        Cast::Id | Cast::Fold(_) | Cast::Unfold(_) | Cast::Arrow(..) => true,
        Cast::Seq(a, b) => is_guarded(a, var) && is_guarded(b, var),
        Cast::Fix { var: bound, body, .. } => bound == var || is_guarded(body, var),
    }
}

/// A type that may still contain unification placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Ty(Type),
    Hole(usize),
    Arrow(Box<Pattern>, Box<Pattern>),
}

/// Placeholder bindings for [`Pattern`]s.
#[derive(Default, Debug)]
pub struct Unifier {
    slots: Vec<Option<Pattern>>,
}

impl Unifier {
    pub fn fresh(&mut self) -> Pattern {
        self.slots.push(None);
        Pattern::Hole(self.slots.len() - 1)
    }

    /// Follows bound holes and splits ground arrows into pattern arrows.
    pub fn walk(&self, p: &Pattern) -> Pattern {
        match p {
            Pattern::Hole(h) => match &self.slots[*h] {
                Some(bound) => self.walk(bound),
                None => p.clone(),
            },
            Pattern::Ty(Type::Arrow(a, b)) => Pattern::Arrow(
                Box::new(Pattern::Ty((**a).clone())),
                Box::new(Pattern::Ty((**b).clone())),
            ),
            _ => p.clone(),
        }
    }

    fn occurs(&self, h: usize, p: &Pattern) -> bool {
        match self.walk(p) {
            Pattern::Hole(k) => k == h,
            Pattern::Ty(_) => false,
            Pattern::Arrow(a, b) => self.occurs(h, &a) || self.occurs(h, &b),
        }
    }

    pub fn bind(&mut self, h: usize, p: Pattern) -> bool {
        if self.occurs(h, &p) {
            return false;
        }
        self.slots[h] = Some(p);
        true
    }

    pub fn unify(&mut self, a: &Pattern, b: &Pattern) -> bool {
        let (a, b) = (self.walk(a), self.walk(b));
        match (a, b) {
            (Pattern::Hole(x), Pattern::Hole(y)) if x == y => true,
            (Pattern::Hole(x), other) | (other, Pattern::Hole(x)) => self.bind(x, other),
            (Pattern::Ty(s), Pattern::Ty(t)) => s == t,
            (Pattern::Arrow(a1, a2), Pattern::Arrow(b1, b2)) => {
                self.unify(&a1, &b1) && self.unify(&a2, &b2)
            }
            _ => false,
        }
    }

    /// The ground type of `p`, if every placeholder in it is solved.
    pub fn resolve(&self, p: &Pattern) -> Option<Type> {
        match self.walk(p) {
            Pattern::Ty(t) => Some(t),
            Pattern::Hole(_) => None,
            Pattern::Arrow(a, b) => Some(Type::arrow(self.resolve(&a)?, self.resolve(&b)?)),
        }
    }

    fn show(&self, p: &Pattern) -> String {
        match self.walk(p) {
            Pattern::Ty(t) => t.to_string(),
            Pattern::Hole(h) => format!("?{h}"),
            Pattern::Arrow(a, b) => {
                let dom = self.show(&a);
                let atomic = match self.walk(&a) {
                    Pattern::Ty(t) => !t.is_mu(),
                    Pattern::Hole(_) => true,
                    Pattern::Arrow(..) => false,
                };
                if atomic {
                    format!("{dom} -> {}", self.show(&b))
                } else {
                    format!("({dom}) -> {}", self.show(&b))
                }
            }
        }
    }
}

/// Forward application of casts to (partially known) types.
pub struct CastChecker<'a> {
    ctx: &'a TypeCtx,
    policy: FixPolicy,
    env: Vec<(Symbol, Pattern, Pattern)>,
    pub unifier: Unifier,
}

impl<'a> CastChecker<'a> {
    pub fn new(ctx: &'a TypeCtx, cast_env: &CastEnv, policy: FixPolicy) -> Self {
        CastChecker {
            ctx,
            policy,
            env: cast_env
                .iter()
                .map(|(v, a, b)| (v.clone(), Pattern::Ty(a.clone()), Pattern::Ty(b.clone())))
                .collect(),
            unifier: Unifier::default(),
        }
    }

    fn annotation(&self, t: &Type) -> Result<(), CastError> {
        if well_formed(self.ctx, t) {
            Ok(())
        } else {
            Err(CastError::IllFormed(t.to_string()))
        }
    }

    fn mismatch(&self, c: &Cast, expected: &Pattern, found: &Pattern) -> CastError {
        CastError::CastSourceMismatch {
            cast: c.to_string(),
            expected: self.unifier.show(expected),
            found: self.unifier.show(found),
        }
    }

    pub fn apply(&mut self, c: &Cast, input: &Pattern) -> Result<Pattern, CastError> {
        match c {
            Cast::Id => Ok(input.clone()),
            Cast::Fold(t) => {
                self.annotation(t)?;
                let unfolded = t
                    .unfold()
                    .ok_or_else(|| CastError::IllFormed(format!("fold[{t}] needs a mu type")))?;
                let expected = Pattern::Ty(unfolded);
                if !self.unifier.unify(input, &expected) {
                    return Err(self.mismatch(c, &expected, input));
                }
                Ok(Pattern::Ty(t.clone()))
            }
            Cast::Unfold(t) => {
                self.annotation(t)?;
                let unfolded = t
                    .unfold()
                    .ok_or_else(|| CastError::IllFormed(format!("unfold[{t}] needs a mu type")))?;
                let expected = Pattern::Ty(t.clone());
                if !self.unifier.unify(input, &expected) {
                    return Err(self.mismatch(c, &expected, input));
                }
                Ok(Pattern::Ty(unfolded))
            }
            Cast::Arrow(c1, c2) => {
                let (dom, cod) = match self.unifier.walk(input) {
                    Pattern::Arrow(a, b) => (*a, *b),
                    Pattern::Hole(h) => {
                        let (a, b) = (self.unifier.fresh(), self.unifier.fresh());
                        self.unifier
                            .bind(h, Pattern::Arrow(Box::new(a.clone()), Box::new(b.clone())));
                        (a, b)
                    }
                    Pattern::Ty(t) => {
                        return Err(CastError::NotAnArrow {
                            cast: c.to_string(),
                            found: t.to_string(),
                        })
                    }
                };
                let dom_out = self.apply(c1, &dom)?;
                let cod_out = self.apply(c2, &cod)?;
                Ok(Pattern::Arrow(Box::new(dom_out), Box::new(cod_out)))
            }
            Cast::Seq(c1, c2) => {
                let mid = self.apply(c1, input)?;
                self.apply(c2, &mid)
            }
            Cast::Var(v) => {
                let (source, target) = self
                    .env
                    .iter()
                    .rev()
                    .find(|(w, _, _)| w == v)
                    .map(|(_, s, t)| (s.clone(), t.clone()))
                    .ok_or_else(|| CastError::UnboundCastVar(v.clone()))?;
                if !self.unifier.unify(input, &source) {
                    return Err(self.mismatch(c, &source, input));
                }
                Ok(target)
            }
            Cast::Fix {
                var,
                declared,
                body,
            } => {
                match self.policy {
                    FixPolicy::ArrowBodyOnly if !matches!(**body, Cast::Arrow(..)) => {
                        return Err(CastError::FixBodyNotArrow(c.to_string()))
                    }
                    _ if !is_guarded(body, var) => {
                        return Err(CastError::UnguardedFixVar {
                            var: var.clone(),
                            cast: c.to_string(),
                        })
                    }
                    _ => {}
                }
                let (source, target) = match declared {
                    Some((s, t)) => {
                        self.annotation(s)?;
                        self.annotation(t)?;
                        let s = Pattern::Ty(s.clone());
                        if !self.unifier.unify(input, &s) {
                            return Err(self.mismatch(c, &s, input));
                        }
                        (s, Pattern::Ty(t.clone()))
                    }
                    None => (input.clone(), self.unifier.fresh()),
                };
                self.env.push((var.clone(), source.clone(), target.clone()));
                let out = self.apply(body, &source);
                self.env.pop();
                let out = out?;
                if !self.unifier.unify(&out, &target) {
                    return Err(CastError::UnresolvedFixTarget {
                        cast: c.to_string(),
                        reason: format!(
                            "body produces {} but the fixpoint needs {}",
                            self.unifier.show(&out),
                            self.unifier.show(&target)
                        ),
                    });
                }
                Ok(target)
            }
        }
    }

    fn ground(&self, c: &Cast, p: &Pattern) -> Result<Type, CastError> {
        self.unifier
            .resolve(p)
            .ok_or_else(|| CastError::UnresolvedFixTarget {
                cast: c.to_string(),
                reason: format!("placeholder left in {}", self.unifier.show(p)),
            })
    }
}

/// The unique `B` with `ctx; env |- a ~> B : c`.
pub fn apply_cast_with(
    ctx: &TypeCtx,
    env: &CastEnv,
    c: &Cast,
    a: &Type,
    policy: FixPolicy,
) -> Result<Type, CastError> {
    if !well_formed(ctx, a) {
        return Err(CastError::IllFormed(a.to_string()));
    }
    let mut checker = CastChecker::new(ctx, env, policy);
    let out = checker.apply(c, &Pattern::Ty(a.clone()))?;
    checker.ground(c, &out)
}

pub fn apply_cast(ctx: &TypeCtx, env: &CastEnv, c: &Cast, a: &Type) -> Result<Type, CastError> {
    apply_cast_with(ctx, env, c, a, FixPolicy::default())
}

pub fn check_cast(ctx: &TypeCtx, env: &CastEnv, c: &Cast, a: &Type, b: &Type) -> bool {
    well_formed(ctx, b) && apply_cast(ctx, env, c, a).is_ok_and(|out| out == *b)
}

/// Closed-context shorthand for [`check_cast`].
pub fn check_closed(c: &Cast, a: &Type, b: &Type) -> bool {
    check_cast(&TypeCtx::new(), &CastEnv::new(), c, a, b)
}

/// The most general `(source, target)` a closed cast accepts, as patterns
/// over a shared unifier.
pub fn principal_signature(c: &Cast) -> Result<(Pattern, Pattern, Unifier), CastError> {
    let ctx = TypeCtx::new();
    let mut checker = CastChecker::new(&ctx, &CastEnv::new(), FixPolicy::default());
    let input = checker.unifier.fresh();
    let out = checker.apply(c, &input)?;
    Ok((input, out, checker.unifier))
}

/// The judgement-specific parts of term typing: how arguments meet domains
/// and how casts act on their input.
pub trait TypingRules {
    fn allows_top(&self) -> bool;
    fn check_arg(&self, arg: &Type, dom: &Type) -> Result<(), TypeError>;
    fn cast_output(&self, c: &Cast, input: &Type) -> Result<Type, CastError>;
}

/// Plain full iso-recursive typing: alpha-equal arguments, exact casts.
#[derive(Debug, Clone, Copy, Default)]
pub struct IsoRules {
    pub policy: FixPolicy,
}

impl TypingRules for IsoRules {
    fn allows_top(&self) -> bool {
        false
    }

    fn check_arg(&self, arg: &Type, dom: &Type) -> Result<(), TypeError> {
        if arg == dom {
            Ok(())
        } else {
            Err(TypeError::ArgTypeMismatch {
                arg: arg.clone(),
                dom: dom.clone(),
            })
        }
    }

    fn cast_output(&self, c: &Cast, input: &Type) -> Result<Type, CastError> {
        apply_cast_with(&TypeCtx::new(), &CastEnv::new(), c, input, self.policy)
    }
}

fn check_annotation(rules: &impl TypingRules, t: &Type) -> Result<(), TypeError> {
    if !t.is_closed() || !t.is_locally_closed() {
        return Err(TypeError::IllFormedAnnotation(t.clone()));
    }
    if !rules.allows_top() && t.contains_top() {
        return Err(TypeError::TopNotAllowed(t.clone()));
    }
    Ok(())
}

fn check_cast_annotations(rules: &impl TypingRules, c: &Cast) -> Result<(), TypeError> {
    match c {
        Cast::Var(_) | Cast::Id => Ok(()),
        Cast::Fold(t) | Cast::Unfold(t) => check_annotation(rules, t),
        Cast::Arrow(a, b) | Cast::Seq(a, b) => {
            check_cast_annotations(rules, a)?;
            check_cast_annotations(rules, b)
        }
        Cast::Fix { declared, body, .. } => {
            if let Some((s, t)) = declared {
                check_annotation(rules, s)?;
                check_annotation(rules, t)?;
            }
            check_cast_annotations(rules, body)
        }
    }
}

/// Syntax-directed typing parameterized by the judgement rules.
pub fn type_of_with(rules: &impl TypingRules, ctx: &TermCtx, e: &Term) -> Result<Type, TypeError> {
    match e {
        Term::Int(_) => Ok(Type::Int),
        Term::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| TypeError::UnboundVar(x.clone())),
        Term::Abs(x, annot, body) => {
            check_annotation(rules, annot)?;
            let inner = ctx.extended(x.clone(), annot.clone());
            let cod = type_of_with(rules, &inner, body)?;
            Ok(Type::arrow(annot.clone(), cod))
        }
        Term::App(f, a) => {
            let ft = type_of_with(rules, ctx, f)?;
            let Some((dom, cod)) = ft.as_arrow() else {
                return Err(TypeError::AppOfNonArrow(ft));
            };
            let at = type_of_with(rules, ctx, a)?;
            rules.check_arg(&at, dom)?;
            Ok(cod.clone())
        }
        Term::Cast(c, body) => {
            check_cast_annotations(rules, c)?;
            let input = type_of_with(rules, ctx, body)?;
            Ok(rules.cast_output(c, &input)?)
        }
    }
}

/// `ctx |- e : A` in the full iso-recursive calculus.
pub fn type_of(ctx: &TermCtx, e: &Term) -> Result<Type, TypeError> {
    type_of_with(&IsoRules::default(), ctx, e)
}
