//! Recursive subtyping: the iso-recursive Amber rules, coinductive
//! equi-recursive subtyping, the search that splits an equi-recursive
//! subtyping into equality / iso-subtyping / equality, and the typing and
//! elaboration judgements that use them.

use std::cell::Cell;
use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::castcalc::{
    apply_cast_with, principal_signature, type_of_with, CastError, FixPolicy, Pattern, TypeError,
    TypingRules, Unifier,
};
use crate::elaborate::{check_with, infer_with, Coercion, ElabError};
use crate::equiv::{self, head_normalize, EquivError};
use crate::kernel::{Binder, Cast, CastEnv, Symbol, Term, TermCtx, TyVar, Type, TypeCtx};

pub const DEFAULT_DEPTH: usize = 2;

/// Assumed variable pairs `(left, right)` from enclosing `mu`s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarPairEnv(Vec<(Symbol, Symbol)>);

impl VarPairEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, left: &str, right: &str) -> Self {
        self.0.push((Symbol::new(left), Symbol::new(right)));
        self
    }

    pub fn contains(&self, left: &Symbol, right: &Symbol) -> bool {
        self.0.iter().any(|(l, r)| l == left && r == right)
    }

    pub fn pairs(&self) -> &[(Symbol, Symbol)] {
        &self.0
    }
}

struct IsoSub {
    env: Vec<(Symbol, Symbol)>,
    counter: Cell<usize>,
}

impl IsoSub {
    fn fresh(&self, side: &str) -> Symbol {
        let n = self.counter.get() + 1;
        self.counter.set(n);
        Symbol::from(format!("%{side}{n}"))
    }

    fn sub(&mut self, a: &Type, b: &Type) -> bool {
        match (a, b) {
            (_, Type::Top) | (Type::Int, Type::Int) => true,
            (Type::Var(TyVar::Free(x)), Type::Var(TyVar::Free(y))) => {
                self.env.iter().any(|(l, r)| l == x && r == y)
            }
            (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => self.sub(b1, a1) && self.sub(a2, b2),
            (Type::Mu(_, ab), Type::Mu(_, bb)) => {
                if a == b {
                    return true;
                }
                let (l, r) = (self.fresh("l"), self.fresh("r"));
                let ao = ab.open(&Type::Var(TyVar::Free(l.clone())));
                let bo = bb.open(&Type::Var(TyVar::Free(r.clone())));
                self.env.push((l, r));
                let ok = self.sub(&ao, &bo);
                self.env.pop();
                ok
            }
            _ => false,
        }
    }
}

/// `env |- a <=i b` by the Amber rules (self before rec).
pub fn sub_iso(env: &VarPairEnv, a: &Type, b: &Type) -> bool {
    IsoSub {
        env: env.0.clone(),
        counter: Cell::new(0),
    }
    .sub(a, b)
}

/// Closed shorthand for [`sub_iso`].
pub fn sub_iso_closed(a: &Type, b: &Type) -> bool {
    sub_iso(&VarPairEnv::new(), a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubError {
    #[error("type is not contractive: {0}")]
    NotContractive(Type),
    #[error("type is not closed: {0}")]
    NotClosed(Type),
    #[error("{lhs} is not an equi-recursive subtype of {rhs}")]
    NotSubtype { lhs: Type, rhs: Type },
    #[error("no decomposition found within depth {depth}")]
    SearchExhausted { depth: usize },
}

fn check_closed_contractive(t: &Type) -> Result<(), SubError> {
    if !t.is_closed() || !t.is_locally_closed() {
        return Err(SubError::NotClosed(t.clone()));
    }
    if !t.is_contractive() {
        return Err(SubError::NotContractive(t.clone()));
    }
    Ok(())
}

fn sub_equi_go(a: &Type, b: &Type, assumed: &mut HashSet<(Type, Type)>) -> bool {
    if a == b {
        return true;
    }
    let ha = head_normalize(a).expect("contractive").head;
    let hb = head_normalize(b).expect("contractive").head;
    match (&ha, &hb) {
        (_, Type::Top) | (Type::Int, Type::Int) => true,
        (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => {
            if !assumed.insert((ha.clone(), hb.clone())) {
                return true;
            }
            sub_equi_go(b1, a1, assumed) && sub_equi_go(a2, b2, assumed)
        }
        _ => false,
    }
}

/// `|- a <=e b` for closed contractive types.
pub fn sub_equi(a: &Type, b: &Type) -> Result<bool, SubError> {
    check_closed_contractive(a)?;
    check_closed_contractive(b)?;
    // Failure anywhere fails the whole judgement, so one assumption set
    // shared across branches is sound.
    Ok(sub_equi_go(a, b, &mut HashSet::new()))
}

/// `a ≐ c1 <=i c2 ≐ b`, with the casts for the two equalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub c1: Type,
    pub c2: Type,
    pub cast_in: Cast,
    pub cast_out: Cast,
}

struct Namer(usize);

impl Namer {
    fn fresh(&mut self) -> Symbol {
        self.0 += 1;
        Symbol::from(format!("%x{}", self.0))
    }
}

/// Types one rewrite away from `t`, where a rewrite picks a `mu` anywhere
/// and either unfolds it (`mu a. B` to `B[a := mu a. B]`) or unrolls its
/// body once in place (`mu a. B` to `mu a. B[a := B]`). Both preserve the
/// infinite unfolding.
pub fn expansions(t: &Type) -> Vec<Type> {
    let mut out = Vec::new();
    expand_into(t, &mut Namer(0), &mut out);
    out
}

fn expand_into(t: &Type, namer: &mut Namer, out: &mut Vec<Type>) {
    match t {
        Type::Arrow(a, b) => {
            let mut inner = Vec::new();
            expand_into(a, namer, &mut inner);
            out.extend(inner.drain(..).map(|a2| Type::Arrow(Arc::new(a2), b.clone())));
            expand_into(b, namer, &mut inner);
            out.extend(inner.into_iter().map(|b2| Type::Arrow(a.clone(), Arc::new(b2))));
        }
        Type::Mu(hint, body) => {
            out.push(t.unfold().expect("mu unfolds"));
            let x = namer.fresh();
            let opened = body.open(&Type::Var(TyVar::Free(x.clone())));
            let rolled = opened.subst(&x, &opened);
            out.push(Type::Mu(hint.clone(), Arc::new(rolled.close(&x, 0))));
            let mut inner = Vec::new();
            expand_into(&opened, namer, &mut inner);
            out.extend(
                inner
                    .into_iter()
                    .map(|b2| Type::Mu(hint.clone(), Arc::new(b2.close(&x, 0)))),
            );
        }
        _ => {}
    }
}

/// Candidates reachable in exactly `k` rewrites for each `k <= depth`,
/// without repeats across levels.
pub fn expansion_levels(t: &Type, depth: usize) -> Vec<Vec<Type>> {
    let mut seen: HashSet<Type> = HashSet::from([t.clone()]);
    let mut levels = vec![vec![t.clone()]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in levels.last().unwrap() {
            for e in expansions(c) {
                if seen.insert(e.clone()) {
                    next.push(e);
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Searches candidate pairs in order of total rewrites for one satisfying
/// all three side conditions.
pub fn decompose(a: &Type, b: &Type, depth: usize) -> Result<Decomposition, SubError> {
    if !sub_equi(a, b)? {
        return Err(SubError::NotSubtype {
            lhs: a.clone(),
            rhs: b.clone(),
        });
    }
    let la = expansion_levels(a, depth);
    let lb = expansion_levels(b, depth);
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for total in 0..=2 * depth {
        for i in 0..=total.min(depth) {
            if total - i <= depth {
                queue.push_back((i, total - i));
            }
        }
    }
    for (i, j) in queue {
        for c1 in &la[i] {
            for c2 in &lb[j] {
                if !sub_iso_closed(c1, c2) {
                    continue;
                }
                let (Ok(cast_in), Ok(cast_out)) =
                    (equiv::cast_between(a, c1), equiv::cast_between(c2, b))
                else {
                    continue;
                };
                return Ok(Decomposition {
                    c1: c1.clone(),
                    c2: c2.clone(),
                    cast_in,
                    cast_out,
                });
            }
        }
    }
    Err(SubError::SearchExhausted { depth })
}

// An arrow pair being unrolled, with the mu variables standing for it.
struct Open {
    key: (Type, Type, bool),
    left: Symbol,
    right: Symbol,
    used: bool,
}

struct Synchronizer {
    stack: Vec<Open>,
    counter: usize,
}

impl Synchronizer {
    // Returns (left part, right part) for the subtrees at one position;
    // `positive` is false under an odd number of arrow domains.
    fn go(&mut self, s: &Type, t: &Type, positive: bool) -> Option<(Type, Type)> {
        let hs = head_normalize(s).ok()?.head;
        let ht = head_normalize(t).ok()?.head;
        if positive && ht == Type::Top {
            return Some((s.clone(), Type::Top));
        }
        if !positive && hs == Type::Top {
            return Some((Type::Top, t.clone()));
        }
        match (&hs, &ht) {
            (Type::Int, Type::Int) => Some((Type::Int, Type::Int)),
            (Type::Top, Type::Top) => Some((Type::Top, Type::Top)),
            (Type::Arrow(s1, s2), Type::Arrow(t1, t2)) => {
                let key = (hs.clone(), ht.clone(), positive);
                if let Some(open) = self.stack.iter_mut().find(|o| o.key == key) {
                    open.used = true;
                    return Some((
                        Type::Var(TyVar::Free(open.left.clone())),
                        Type::Var(TyVar::Free(open.right.clone())),
                    ));
                }
                self.counter += 1;
                let (x, y) = (
                    Symbol::from(format!("%s{}", self.counter)),
                    Symbol::from(format!("%t{}", self.counter)),
                );
                self.stack.push(Open {
                    key,
                    left: x.clone(),
                    right: y.clone(),
                    used: false,
                });
                let parts = self
                    .go(s1, t1, !positive)
                    .and_then(|d| Some((d, self.go(s2, t2, positive)?)));
                let used = self.stack.pop().expect("pushed above").used;
                let ((d1, d2), (e1, e2)) = parts?;
                let (l, r) = (Type::arrow(d1, e1), Type::arrow(d2, e2));
                if used {
                    let hint = Binder(Symbol::new("a"));
                    Some((
                        Type::Mu(hint.clone(), Arc::new(l.close(&x, 0))),
                        Type::Mu(hint, Arc::new(r.close(&y, 0))),
                    ))
                } else {
                    Some((l, r))
                }
            }
            _ => None,
        }
    }
}

/// Builds a decomposition directly instead of searching: both sides are
/// unrolled along the product of the two trees, with a `mu` at the same
/// position on each side wherever the product loops. The result is
/// checked against the three side conditions before it is returned.
pub fn decompose_synchronized(a: &Type, b: &Type) -> Result<Decomposition, SubError> {
    if !sub_equi(a, b)? {
        return Err(SubError::NotSubtype {
            lhs: a.clone(),
            rhs: b.clone(),
        });
    }
    let exhausted = SubError::SearchExhausted { depth: 0 };
    let mut sync = Synchronizer {
        stack: Vec::new(),
        counter: 0,
    };
    let (c1, c2) = sync.go(a, b, true).ok_or(exhausted.clone())?;
    if !sub_iso_closed(&c1, &c2) {
        return Err(exhausted);
    }
    match (equiv::cast_between(a, &c1), equiv::cast_between(&c2, b)) {
        (Ok(cast_in), Ok(cast_out)) => Ok(Decomposition {
            c1,
            c2,
            cast_in,
            cast_out,
        }),
        _ => Err(exhausted),
    }
}

/// Typing with subsumption: arguments may be iso-subtypes of the domain,
/// and a cast accepts any iso-subtype of a source it can be used at.
#[derive(Debug, Clone, Copy, Default)]
pub struct SubRules {
    pub policy: FixPolicy,
}

// Match `input` against the cast source pattern, treating ground parts up
// to iso-subtyping (flipped under arrow domains) and binding holes.
fn sub_match(u: &mut Unifier, pat: &Pattern, input: &Type, covariant: bool) -> bool {
    if let Some(t) = u.resolve(pat) {
        return if covariant {
            sub_iso_closed(input, &t)
        } else {
            sub_iso_closed(&t, input)
        };
    }
    match u.walk(pat) {
        Pattern::Hole(h) => u.bind(h, Pattern::Ty(input.clone())),
        Pattern::Ty(t) => {
            if covariant {
                sub_iso_closed(input, &t)
            } else {
                sub_iso_closed(&t, input)
            }
        }
        Pattern::Arrow(p1, p2) => match input {
            Type::Arrow(a1, a2) => {
                sub_match(u, &p1, a1, !covariant) && sub_match(u, &p2, a2, covariant)
            }
            _ => false,
        },
    }
}

/// Output type of `c` applied to something of type `input`, allowing the
/// input to be subsumed first.
pub fn cast_output_sub(c: &Cast, input: &Type, policy: FixPolicy) -> Result<Type, CastError> {
    let exact = apply_cast_with(&TypeCtx::new(), &CastEnv::new(), c, input, policy);
    let Err(err) = exact else { return exact };
    let Ok((src, tgt, mut u)) = principal_signature(c) else {
        return Err(err);
    };
    if !sub_match(&mut u, &src, input, true) {
        return Err(err);
    }
    u.resolve(&tgt).ok_or(err)
}

impl TypingRules for SubRules {
    fn allows_top(&self) -> bool {
        true
    }

    fn check_arg(&self, arg: &Type, dom: &Type) -> Result<(), TypeError> {
        if sub_iso_closed(arg, dom) {
            Ok(())
        } else {
            Err(TypeError::SubtypeMismatch {
                arg: arg.clone(),
                dom: dom.clone(),
            })
        }
    }

    fn cast_output(&self, c: &Cast, input: &Type) -> Result<Type, CastError> {
        cast_output_sub(c, input, self.policy)
    }
}

/// Typing in the calculus with iso-recursive subtyping.
pub fn type_of_sub(ctx: &TermCtx, e: &Term) -> Result<Type, TypeError> {
    type_of_with(&SubRules::default(), ctx, e)
}

/// Coercion sites try bare subsumption, then an equality cast, then a
/// cast / subsume / cast decomposition (bounded search first, then the
/// synchronized construction).
#[derive(Debug, Clone, Copy)]
pub struct SubCoercion {
    pub depth: usize,
}

impl Default for SubCoercion {
    fn default() -> Self {
        SubCoercion {
            depth: DEFAULT_DEPTH,
        }
    }
}

impl Coercion for SubCoercion {
    fn allows_top(&self) -> bool {
        true
    }

    fn coerce(&self, e: Term, from: &Type, to: &Type) -> Result<Option<Term>, ElabError> {
        if sub_iso_closed(from, to) {
            return Ok(Some(e));
        }
        match equiv::synthesize_cast(from, to) {
            Ok(c) => return Ok(Some(Term::cast_unless_id(c, e))),
            Err(EquivError::NotEqual { .. }) => {}
            Err(err) => return Err(err.into()),
        }
        let found = decompose(from, to, self.depth).or_else(|err| match err {
            SubError::SearchExhausted { .. } => decompose_synchronized(from, to)
                .map_err(|_| SubError::SearchExhausted { depth: self.depth }),
            other => Err(other),
        });
        match found {
            Ok(d) => Ok(Some(Term::cast_unless_id(
                d.cast_out,
                Term::cast_unless_id(d.cast_in, e),
            ))),
            Err(SubError::NotSubtype { .. }) => Ok(None),
            Err(SubError::SearchExhausted { depth }) => Err(ElabError::ElaborationIncomplete {
                found: from.clone(),
                expected: to.clone(),
                depth,
            }),
            Err(SubError::NotContractive(t)) => Err(ElabError::NotContractive(t)),
            Err(SubError::NotClosed(t)) => Err(ElabError::IllFormedAnnotation(t)),
        }
    }
}

pub fn infer_elab_sub(ctx: &TermCtx, e: &Term) -> Result<(Type, Term), ElabError> {
    infer_with(&SubCoercion::default(), ctx, e)
}

pub fn check_elab_sub(ctx: &TermCtx, e: &Term, b: &Type) -> Result<Term, ElabError> {
    check_with(&SubCoercion::default(), ctx, e, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::castcalc::check_closed;
    use crate::kernel::{parse_term, parse_type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn term(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    const FIG_A: &str = "Int -> (mu a. Top -> a)";
    const FIG_B: &str = "mu a. Int -> Top -> a";

    #[test]
    fn amber_examples() {
        assert!(sub_iso_closed(&ty("mu a. Top -> a"), &ty("mu a. Top -> a")));
        let env = VarPairEnv::new().with("a", "b");
        assert!(sub_iso(&env, &ty("Top -> Top -> a"), &ty("Int -> Top -> b")));
        assert!(!sub_iso(&env, &ty("Top -> Top -> b"), &ty("Int -> Top -> a")));
        assert!(!sub_iso_closed(&ty("mu a. Int -> a"), &ty("mu a. Int -> Int -> a")));
        assert!(sub_iso_closed(&ty("mu a. Top -> a"), &ty("mu a. Int -> a")));
        assert!(!sub_iso_closed(&ty("mu a. a -> Int"), &ty("mu a. a -> Top")));
        assert!(sub_iso_closed(&ty("mu a. a -> Int"), &ty("mu a. a -> Int")));
        assert!(sub_iso_closed(&Type::Int, &Type::Top));
        assert!(!sub_iso_closed(&Type::Top, &Type::Int));
    }

    #[test]
    fn equi_examples() {
        assert!(sub_equi(&ty(FIG_A), &ty(FIG_B)).unwrap());
        assert!(sub_equi(&ty("mu a. Int -> a"), &ty("mu a. Int -> Int -> a")).unwrap());
        assert!(!sub_equi(&ty("mu a. Int -> a"), &ty("mu a. (Int -> Int) -> a")).unwrap());
        // Contravariance sends the comparison back through Top <= Int.
        assert!(!sub_equi(&ty("mu a. a -> Int"), &ty("mu a. a -> Top")).unwrap());
        assert!(sub_equi(&ty("mu a. Top -> a"), &ty("mu a. Int -> Int -> a")).unwrap());
        assert!(matches!(
            sub_equi(&ty("mu a. a"), &Type::Int),
            Err(SubError::NotContractive(_))
        ));
    }

    #[test]
    fn top_stream_decomposition() {
        let d = decompose(&ty(FIG_A), &ty(FIG_B), 2).unwrap();
        assert_eq!(d.c1, ty("Int -> Top -> (mu a. Top -> Top -> a)"));
        assert_eq!(d.c2, ty("Int -> Top -> (mu a. Int -> Top -> a)"));
        assert!(check_closed(&d.cast_in, &ty(FIG_A), &d.c1));
        assert!(check_closed(&d.cast_out, &d.c2, &ty(FIG_B)));
        assert!(matches!(
            decompose(&ty(FIG_A), &ty(FIG_B), 1),
            Err(SubError::SearchExhausted { depth: 1 })
        ));
    }

    #[test]
    fn decompose_small_cases() {
        let a = ty("mu a. Int -> a");
        let d = decompose(&a, &a, 1).unwrap();
        assert_eq!((d.c1, d.c2, d.cast_in, d.cast_out), (a.clone(), a.clone(), Cast::Id, Cast::Id));
        let b = ty("mu a. Int -> Int -> a");
        let d = decompose(&a, &b, 2).unwrap();
        assert!(equiv::equal(&a, &d.c1).unwrap() && equiv::equal(&d.c2, &b).unwrap());
        assert!(sub_iso_closed(&d.c1, &d.c2));
        assert!(matches!(
            decompose(&Type::Top, &Type::Int, 2),
            Err(SubError::NotSubtype { .. })
        ));
    }

    #[test]
    fn synchronized_construction() {
        let a = ty("Top -> Top -> Top -> mu a. Top -> Top -> a");
        let b = ty("mu a. Int -> Int -> a");
        assert!(decompose(&a, &b, 2).is_err());
        let d = decompose_synchronized(&a, &b).unwrap();
        assert!(equiv::equal(&a, &d.c1).unwrap() && equiv::equal(&d.c2, &b).unwrap());
        assert!(sub_iso_closed(&d.c1, &d.c2));
        assert!(check_closed(&d.cast_in, &a, &d.c1));

        // Negative recursion still lines up: the loop is entered with the
        // same polarity it is left with.
        let d = decompose_synchronized(&ty("mu a. a -> Int"), &ty("(mu a. a -> Int) -> Top")).unwrap();
        assert!(sub_iso_closed(&d.c1, &d.c2));
        assert!(decompose_synchronized(&Type::Top, &Type::Int).is_err());
    }

    #[test]
    fn expansions_preserve_the_tree() {
        let t = ty(FIG_A);
        for c in expansion_levels(&t, 2).concat() {
            assert!(equiv::equal(&t, &c).unwrap(), "{c}");
        }
        let nested = ty("mu a. (mu b. a -> b) -> a");
        for c in expansion_levels(&nested, 2).concat() {
            assert!(c.is_closed() && c.is_locally_closed() && c.is_contractive(), "{c}");
            assert!(equiv::equal(&nested, &c).unwrap(), "{c}");
        }
    }

    #[test]
    fn sub_typing_examples() {
        let ctx = TermCtx::new();
        assert_eq!(type_of_sub(&ctx, &term("(\\x: Top. 1) (\\y: Int. y)")).unwrap(), Type::Int);
        assert!(matches!(
            type_of_sub(&ctx, &term("(\\x: Int. x) (\\y: Int. y)")),
            Err(TypeError::SubtypeMismatch { .. })
        ));
        // A ground arrow source still accepts Top in its (contravariant) domain.
        let c = crate::kernel::parse_cast("fold[mu a. (a -> Top) -> Top]").unwrap();
        assert_eq!(
            cast_output_sub(&c, &ty("Top -> mu a. Top -> a"), FixPolicy::default()).unwrap(),
            ty("mu a. (a -> Top) -> Top")
        );
        // unfold[mu a. Int -> a] over a folded mu a. Top -> a.
        let e = term("cast<unfold[mu a. Int -> a]>(cast<fold[mu a. Top -> a]>(v))");
        let ctx = ctx.with("v", ty("Top -> mu a. Top -> a"));
        assert_eq!(type_of_sub(&ctx, &e).unwrap(), ty("Int -> mu a. Int -> a"));
    }

    #[test]
    fn sub_elaboration_examples() {
        let ctx = TermCtx::new().with("e", ty(FIG_A));
        let out = check_elab_sub(&ctx, &term("e"), &ty(FIG_B)).unwrap();
        let Term::Cast(_, inner) = &out else { panic!("{out}") };
        assert!(matches!(&**inner, Term::Cast(..)));
        assert_eq!(type_of_sub(&ctx, &out).unwrap(), ty(FIG_B));
        assert_eq!(out.erase(), term("e"));

        assert_eq!(check_elab_sub(&TermCtx::new(), &Term::Int(1), &Type::Top).unwrap(), Term::Int(1));

        let ctx = TermCtx::new().with("e", ty("mu a. Int -> a"));
        let out = check_elab_sub(&ctx, &term("e"), &ty("mu a. Int -> Int -> a")).unwrap();
        let Term::Cast(_, inner) = &out else { panic!("{out}") };
        assert_eq!(**inner, term("e"));
    }
}
