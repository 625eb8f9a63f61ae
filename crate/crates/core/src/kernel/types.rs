//! Recursive types in locally nameless form.
//!
//! Bound variables are de Bruijn indices counted from the nearest enclosing
//! `mu`; free variables are named. A `mu` keeps the binder name it was written
//! with only as a printing hint, so the derived `Eq` and `Hash` are exactly
//! alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// An interned-by-sharing identifier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Name hint carried by a `mu` binder. Ignored by equality and hashing.
#[derive(Clone)]
pub struct Binder(pub Symbol);

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TyVar {
    /// de Bruijn index; 0 is the innermost enclosing `mu`.
    Bound(u32),
    Free(Symbol),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Int,
    Top,
    Var(TyVar),
    Arrow(Arc<Type>, Arc<Type>),
    Mu(Binder, Arc<Type>),
}

impl Type {
    pub fn var(name: &str) -> Type {
        Type::Var(TyVar::Free(Symbol::new(name)))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `mu name. body`, where `name` occurs free in `body`.
    pub fn mu(name: &str, body: Type) -> Type {
        let sym = Symbol::new(name);
        let closed = body.close(&sym, 0);
        Type::Mu(Binder(sym), Arc::new(closed))
    }

    pub fn is_mu(&self) -> bool {
        matches!(self, Type::Mu(..))
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Number of AST nodes, binders included.
    pub fn size(&self) -> usize {
        match self {
            Type::Int | Type::Top | Type::Var(_) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Mu(_, b) => 1 + b.size(),
        }
    }

    pub fn contains_top(&self) -> bool {
        match self {
            Type::Top => true,
            Type::Int | Type::Var(_) => false,
            Type::Arrow(a, b) => a.contains_top() || b.contains_top(),
            Type::Mu(_, b) => b.contains_top(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Type::Var(TyVar::Free(s)) => {
                out.insert(s.clone());
            }
            Type::Arrow(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Type::Mu(_, b) => b.collect_free(out),
            _ => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when no bound index escapes its binders.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Type, depth: u32) -> bool {
            match t {
                Type::Var(TyVar::Bound(i)) => *i < depth,
                Type::Arrow(a, b) => go(a, depth) && go(b, depth),
                Type::Mu(_, b) => go(b, depth + 1),
                _ => true,
            }
        }
        go(self, 0)
    }

    /// Capture-avoiding substitution `self[var := with]`. `with` must be
    /// locally closed, which makes capture impossible.
    pub fn subst(&self, var: &Symbol, with: &Type) -> Type {
        match self {
            Type::Var(TyVar::Free(s)) if s == var => with.clone(),
            Type::Int | Type::Top | Type::Var(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.subst(var, with), b.subst(var, with)),
            Type::Mu(n, b) => Type::Mu(n.clone(), Arc::new(b.subst(var, with))),
        }
    }

    /// Instantiate the outermost dangling index of a `mu` body with `with`.
    pub fn open(&self, with: &Type) -> Type {
        self.open_at(0, with)
    }

    fn open_at(&self, depth: u32, with: &Type) -> Type {
        match self {
            Type::Var(TyVar::Bound(i)) if *i == depth => with.clone(),
            Type::Int | Type::Top | Type::Var(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.open_at(depth, with), b.open_at(depth, with)),
            Type::Mu(n, b) => Type::Mu(n.clone(), Arc::new(b.open_at(depth + 1, with))),
        }
    }

    /// Abstract free `var` into the index bound at `depth`.
    pub fn close(&self, var: &Symbol, depth: u32) -> Type {
        match self {
            Type::Var(TyVar::Free(s)) if s == var => Type::Var(TyVar::Bound(depth)),
            Type::Int | Type::Top | Type::Var(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.close(var, depth), b.close(var, depth)),
            Type::Mu(n, b) => Type::Mu(n.clone(), Arc::new(b.close(var, depth + 1))),
        }
    }

    /// One-step unfolding `mu a. B  ~>  B[a := mu a. B]`.
    pub fn unfold(&self) -> Option<Type> {
        match self {
            Type::Mu(_, body) => Some(body.open(self)),
            _ => None,
        }
    }

    /// Every `mu a. B` subterm must not reach `a` through `mu` binders alone.
    pub fn is_contractive(&self) -> bool {
        match self {
            Type::Int | Type::Top | Type::Var(_) => true,
            Type::Arrow(a, b) => a.is_contractive() && b.is_contractive(),
            Type::Mu(_, body) => {
                let mut chain = 0u32;
                let mut cur: &Type = body;
                while let Type::Mu(_, inner) = cur {
                    chain += 1;
                    cur = inner;
                }
                if matches!(cur, Type::Var(TyVar::Bound(i)) if *i == chain) {
                    return false;
                }
                body.is_contractive()
            }
        }
    }

    /// Whether the bound index at `depth` occurs in the body.
    pub fn mentions_bound(&self, depth: u32) -> bool {
        match self {
            Type::Var(TyVar::Bound(i)) => *i == depth,
            Type::Int | Type::Top | Type::Var(_) => false,
            Type::Arrow(a, b) => a.mentions_bound(depth) || b.mentions_bound(depth),
            Type::Mu(_, b) => b.mentions_bound(depth + 1),
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Type contexts: ordered, duplicate-free sets of type variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeCtx(Vec<Symbol>);

impl TypeCtx {
    pub fn new() -> Self {
        TypeCtx(Vec::new())
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        self.0.contains(v)
    }

    /// Adds `v`; a no-op when already present.
    pub fn extend(&mut self, v: Symbol) {
        if !self.contains(&v) {
            self.0.push(v);
        }
    }

    pub fn with(mut self, v: &str) -> Self {
        self.extend(Symbol::new(v));
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter()
    }
}

/// Every free variable of `t` is in `ctx` and no index dangles.
pub fn well_formed(ctx: &TypeCtx, t: &Type) -> bool {
    t.is_locally_closed() && t.free_vars().iter().all(|v| ctx.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn free_vars_examples() {
        assert!(ty("Int").free_vars().is_empty());
        assert!(ty("mu a. Int -> a").free_vars().is_empty());
        let fv: Vec<_> = ty("mu a. a -> b").free_vars().into_iter().collect();
        assert_eq!(fv, vec![Symbol::new("b")]);
    }

    #[test]
    fn subst_unfolding_example() {
        let rec = ty("mu a. Int -> a");
        let out = ty("Int -> a").subst(&Symbol::new("a"), &rec);
        assert_eq!(out, ty("Int -> (mu a. Int -> a)"));
        assert_eq!(rec.unfold().unwrap(), out);
        assert_eq!(ty("Int").subst(&Symbol::new("a"), &rec), Type::Int);
    }

    #[test]
    fn subst_avoids_capture() {
        // (mu b. a -> b)[a := b] keeps the substituted b free.
        let t = ty("mu b. a -> b").subst(&Symbol::new("a"), &Type::var("b"));
        let Type::Mu(_, body) = &t else { panic!() };
        assert_eq!(**body, Type::arrow(Type::var("b"), Type::Var(TyVar::Bound(0))));
        assert_eq!(t.to_string(), "mu b'. b -> b'");
    }

    #[test]
    fn alpha_equivalence() {
        assert_eq!(ty("mu a. Int -> a"), ty("mu b. Int -> b"));
        assert_ne!(ty("mu a. Int -> a"), ty("mu a. Int -> Int -> a"));
        assert_ne!(ty("Int -> Int"), ty("Int"));
    }

    #[test]
    fn well_formedness() {
        assert!(well_formed(&TypeCtx::new(), &ty("mu a. Int -> a")));
        assert!(!well_formed(&TypeCtx::new(), &ty("a")));
        assert!(well_formed(&TypeCtx::new().with("a"), &ty("a -> Int")));
    }

    #[test]
    fn contractiveness() {
        assert!(ty("mu a. Int -> a").is_contractive());
        assert!(!ty("mu a. a").is_contractive());
        assert!(!ty("mu a. mu b. a").is_contractive());
        assert!(!ty("mu a. mu b. b").is_contractive());
        assert!(ty("mu a. mu b. Int -> a").is_contractive());
        assert!(ty("mu a. Top").is_contractive());
    }
}
