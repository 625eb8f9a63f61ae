use std::collections::BTreeSet;
use std::fmt;

use super::types::{Symbol, Type};

/// Cast operators. A `Fix` may carry the `(source, target)` pair it was
/// synthesized for; parsed casts usually omit it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Cast {
    Var(Symbol),
    Id,
    Fold(Type),
    Unfold(Type),
    Arrow(Box<Cast>, Box<Cast>),
    Seq(Box<Cast>, Box<Cast>),
    Fix {
        var: Symbol,
        declared: Option<(Type, Type)>,
        body: Box<Cast>,
    },
}

impl Cast {
    pub fn var(name: &str) -> Cast {
        Cast::Var(Symbol::new(name))
    }

    pub fn arrow(dom: Cast, cod: Cast) -> Cast {
        Cast::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn seq(first: Cast, second: Cast) -> Cast {
        Cast::Seq(Box::new(first), Box::new(second))
    }

    /// Sequencing that drops identity casts on either side.
    pub fn then(self, next: Cast) -> Cast {
        match (self, next) {
            (Cast::Id, c) | (c, Cast::Id) => c,
            (a, b) => Cast::seq(a, b),
        }
    }

    pub fn fix(var: &str, body: Cast) -> Cast {
        Cast::Fix {
            var: Symbol::new(var),
            declared: None,
            body: Box::new(body),
        }
    }

    pub fn fix_declared(var: &str, source: Type, target: Type, body: Cast) -> Cast {
        Cast::Fix {
            var: Symbol::new(var),
            declared: Some((source, target)),
            body: Box::new(body),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Cast::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Cast::Id | Cast::Fold(_) | Cast::Unfold(_) => {}
            Cast::Arrow(a, b) | Cast::Seq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Cast::Fix { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn mentions(&self, v: &Symbol) -> bool {
        self.free_vars().contains(v)
    }

    pub fn size(&self) -> usize {
        match self {
            Cast::Var(_) | Cast::Id | Cast::Fold(_) | Cast::Unfold(_) => 1,
            Cast::Arrow(a, b) | Cast::Seq(a, b) => 1 + a.size() + b.size(),
            Cast::Fix { body, .. } => 1 + body.size(),
        }
    }

    pub(crate) fn all_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Cast::Var(v) => {
                out.insert(v.clone());
            }
            Cast::Id | Cast::Fold(_) | Cast::Unfold(_) => {}
            Cast::Arrow(a, b) | Cast::Seq(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Cast::Fix { var, body, .. } => {
                out.insert(var.clone());
                body.all_vars(out);
            }
        }
    }
}

impl fmt::Debug for Cast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::CastDisplay::annotated(self))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Symbol),
    Int(i64),
    App(Box<Term>, Box<Term>),
    Abs(Symbol, Type, Box<Term>),
    Cast(Cast, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::new(name))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: &str, annot: Type, body: Term) -> Term {
        Term::Abs(Symbol::new(x), annot, Box::new(body))
    }

    pub fn cast(c: Cast, e: Term) -> Term {
        Term::Cast(c, Box::new(e))
    }

    /// Wraps in a cast unless the cast is the identity.
    pub fn cast_unless_id(c: Cast, e: Term) -> Term {
        match c {
            Cast::Id => e,
            c => Term::cast(c, e),
        }
    }

    pub fn is_value(&self) -> bool {
        match self {
            Term::Int(_) | Term::Abs(..) => true,
            Term::Cast(Cast::Fold(_) | Cast::Arrow(..), v) => v.is_value(),
            _ => false,
        }
    }

    pub fn has_casts(&self) -> bool {
        match self {
            Term::Var(_) | Term::Int(_) => false,
            Term::App(a, b) => a.has_casts() || b.has_casts(),
            Term::Abs(_, _, b) => b.has_casts(),
            Term::Cast(..) => true,
        }
    }

    /// Removes every cast.
    pub fn erase(&self) -> Term {
        match self {
            Term::Var(_) | Term::Int(_) => self.clone(),
            Term::App(a, b) => Term::app(a.erase(), b.erase()),
            Term::Abs(x, t, b) => Term::Abs(x.clone(), t.clone(), Box::new(b.erase())),
            Term::Cast(_, e) => e.erase(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Int(_) => 1,
            Term::App(a, b) => 1 + a.size() + b.size(),
            Term::Abs(_, _, b) => 1 + b.size(),
            Term::Cast(_, e) => 1 + e.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Int(_) => {}
            Term::App(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Abs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::Cast(_, e) => e.collect_free(bound, out),
        }
    }

    /// Capture-avoiding substitution `self[x := with]`.
    pub fn subst(&self, x: &Symbol, with: &Term) -> Term {
        let fv = with.free_vars();
        self.subst_with(x, with, &fv)
    }

    fn subst_with(&self, x: &Symbol, with: &Term, fv: &BTreeSet<Symbol>) -> Term {
        match self {
            Term::Var(y) if y == x => with.clone(),
            Term::Var(_) | Term::Int(_) => self.clone(),
            Term::App(a, b) => Term::app(a.subst_with(x, with, fv), b.subst_with(x, with, fv)),
            Term::Cast(c, e) => Term::cast(c.clone(), e.subst_with(x, with, fv)),
            Term::Abs(y, t, b) if y == x => Term::Abs(y.clone(), t.clone(), b.clone()),
            Term::Abs(y, t, b) => {
                if fv.contains(y) {
                    let mut avoid = fv.clone();
                    avoid.extend(b.free_vars());
                    avoid.insert(x.clone());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = b.subst(y, &Term::Var(fresh.clone()));
                    Term::Abs(fresh, t.clone(), Box::new(renamed.subst_with(x, with, fv)))
                } else {
                    Term::Abs(y.clone(), t.clone(), Box::new(b.subst_with(x, with, fv)))
                }
            }
        }
    }
}

/// Appends primes to `base` until it avoids `taken`.
pub fn fresh_name(base: &Symbol, taken: &BTreeSet<Symbol>) -> Symbol {
    let mut candidate = format!("{}'", base);
    while taken.contains(&Symbol::new(&candidate)) {
        candidate.push('\'');
    }
    Symbol::from(candidate)
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Typing context: an ordered map from term variables to types. Extending
/// with a variable that is already bound replaces the older binding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermCtx(Vec<(Symbol, Type)>);

impl TermCtx {
    pub fn new() -> Self {
        TermCtx(Vec::new())
    }

    pub fn lookup(&self, x: &Symbol) -> Option<&Type> {
        self.0.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn extend(&mut self, x: Symbol, t: Type) {
        self.0.retain(|(y, _)| *y != x);
        self.0.push((x, t));
    }

    pub fn extended(&self, x: Symbol, t: Type) -> TermCtx {
        let mut out = self.clone();
        out.extend(x, t);
        out
    }

    pub fn with(mut self, x: &str, t: Type) -> Self {
        self.extend(Symbol::new(x), t);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Type)> {
        self.0.iter().map(|(x, t)| (x, t))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Cast variable assumptions `i : A ~> B`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CastEnv(Vec<(Symbol, Type, Type)>);

impl CastEnv {
    pub fn new() -> Self {
        CastEnv(Vec::new())
    }

    pub fn lookup(&self, v: &Symbol) -> Option<(&Type, &Type)> {
        self.0
            .iter()
            .rev()
            .find(|(w, _, _)| w == v)
            .map(|(_, a, b)| (a, b))
    }

    pub fn extend(&mut self, v: Symbol, source: Type, target: Type) {
        self.0.retain(|(w, _, _)| *w != v);
        self.0.push((v, source, target));
    }

    pub fn with(mut self, v: &str, source: Type, target: Type) -> Self {
        self.extend(Symbol::new(v), source, target);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Type, &Type)> {
        self.0.iter().map(|(v, a, b)| (v, a, b))
    }
}
