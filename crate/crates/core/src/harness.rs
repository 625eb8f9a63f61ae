//! Independent oracles, exhaustive type enumeration, random well-typed term
//! generation, and the differential suites built from them.
//!
//! The oracles work on finite automata for the infinite trees that recursive
//! types denote. They only use kernel syntax (`unfold`, `is_contractive`) and
//! share nothing with the algorithms in `equiv` and `subtype`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::castcalc::{check_closed, reverse, type_of};
use crate::equiv;
use crate::kernel::{parse_type, Binder, Cast, Symbol, Term, TermCtx, TyVar, Type};
use crate::subtype::{self, expansion_levels, sub_iso_closed, type_of_sub};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("type is not contractive: {0}")]
    NotContractive(Type),
    #[error("type is not closed: {0}")]
    NotClosed(Type),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Int,
    Top,
    Arrow(usize, usize),
}

/// States are indices; `labels[s]` gives the node kind and, for arrows, the
/// successor states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeAutomaton {
    pub labels: Vec<Label>,
    pub start: usize,
}

impl TypeAutomaton {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn strip_mus(t: &Type) -> Type {
    let mut cur = t.clone();
    while let Some(next) = cur.unfold() {
        cur = next;
    }
    cur
}

/// Builds the automaton whose states are the head-normal forms reachable
/// from `t`.
pub fn to_automaton(t: &Type) -> Result<TypeAutomaton, HarnessError> {
    if !t.is_closed() || !t.is_locally_closed() {
        return Err(HarnessError::NotClosed(t.clone()));
    }
    if !t.is_contractive() {
        return Err(HarnessError::NotContractive(t.clone()));
    }
    let mut ids: HashMap<Type, usize> = HashMap::new();
    let mut labels: Vec<Option<Label>> = Vec::new();
    let mut pending: VecDeque<(usize, Type)> = VecDeque::new();
    let mut intern = |ty: &Type, labels: &mut Vec<Option<Label>>, pending: &mut VecDeque<(usize, Type)>| {
        let hn = strip_mus(ty);
        *ids.entry(hn.clone()).or_insert_with(|| {
            labels.push(None);
            pending.push_back((labels.len() - 1, hn));
            labels.len() - 1
        })
    };
    let start = intern(t, &mut labels, &mut pending);
    while let Some((id, hn)) = pending.pop_front() {
        let label = match &hn {
            Type::Int => Label::Int,
            Type::Top => Label::Top,
            Type::Arrow(a, b) => {
                let da = intern(a, &mut labels, &mut pending);
                let db = intern(b, &mut labels, &mut pending);
                Label::Arrow(da, db)
            }
            _ => return Err(HarnessError::NotClosed(t.clone())),
        };
        labels[id] = Some(label);
    }
    Ok(TypeAutomaton {
        labels: labels.into_iter().map(|l| l.expect("every state labelled")).collect(),
        start,
    })
}

/// Tree equality by bisimulation on the product automaton.
pub fn automata_equal(x: &TypeAutomaton, y: &TypeAutomaton) -> bool {
    let mut seen = HashSet::new();
    let mut todo = vec![(x.start, y.start)];
    while let Some((p, q)) = todo.pop() {
        if !seen.insert((p, q)) {
            continue;
        }
        match (x.labels[p], y.labels[q]) {
            (Label::Int, Label::Int) | (Label::Top, Label::Top) => {}
            (Label::Arrow(pd, pc), Label::Arrow(qd, qc)) => {
                todo.push((pd, qd));
                todo.push((pc, qc));
            }
            _ => return false,
        }
    }
    true
}

/// Tree subtyping: the largest simulation with Top absorbing everything and
/// arrow domains compared contravariantly.
pub fn automata_sub(x: &TypeAutomaton, y: &TypeAutomaton) -> bool {
    // (left is in x, left state, right state); contravariance swaps sides.
    let mut seen = HashSet::new();
    let mut todo = vec![(true, x.start, y.start)];
    while let Some((x_left, p, q)) = todo.pop() {
        if !seen.insert((x_left, p, q)) {
            continue;
        }
        let (lp, lq) = if x_left {
            (x.labels[p], y.labels[q])
        } else {
            (y.labels[p], x.labels[q])
        };
        match (lp, lq) {
            (_, Label::Top) | (Label::Int, Label::Int) => {}
            (Label::Arrow(pd, pc), Label::Arrow(qd, qc)) => {
                todo.push((!x_left, qd, pd));
                todo.push((x_left, pc, qc));
            }
            _ => return false,
        }
    }
    true
}

pub fn oracle_equal(a: &Type, b: &Type) -> Result<bool, HarnessError> {
    Ok(automata_equal(&to_automaton(a)?, &to_automaton(b)?))
}

pub fn oracle_sub(a: &Type, b: &Type) -> Result<bool, HarnessError> {
    Ok(automata_sub(&to_automaton(a)?, &to_automaton(b)?))
}

/// All closed contractive types up to a size, in size order.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub types: Vec<Type>,
    /// Closed candidates dropped for not being contractive.
    pub non_contractive: usize,
}

struct Enumerator {
    with_top: bool,
    memo: HashMap<(usize, u32), Arc<Vec<Type>>>,
}

impl Enumerator {
    // Locally nameless terms of exactly `size` nodes with `depth` binders in scope.
    fn exact(&mut self, size: usize, depth: u32) -> Arc<Vec<Type>> {
        if let Some(v) = self.memo.get(&(size, depth)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.push(Type::Int);
            if self.with_top {
                out.push(Type::Top);
            }
            out.extend((0..depth).map(|i| Type::Var(TyVar::Bound(i))));
        } else {
            for left in 1..size - 1 {
                let ls = self.exact(left, depth);
                let rs = self.exact(size - 1 - left, depth);
                for l in ls.iter() {
                    for r in rs.iter() {
                        out.push(Type::Arrow(Arc::new(l.clone()), Arc::new(r.clone())));
                    }
                }
            }
            let binder = Binder(Symbol::new(["a", "b", "c", "d", "e"][depth as usize % 5]));
            for body in self.exact(size - 1, depth + 1).iter() {
                out.push(Type::Mu(binder.clone(), Arc::new(body.clone())));
            }
        }
        let out = Arc::new(out);
        self.memo.insert((size, depth), out.clone());
        out
    }
}

pub fn enumerate_types(max_size: usize, with_top: bool) -> Enumeration {
    let mut en = Enumerator {
        with_top,
        memo: HashMap::new(),
    };
    let mut types = Vec::new();
    let mut non_contractive = 0;
    for size in 1..=max_size {
        for t in en.exact(size, 0).iter() {
            if t.is_contractive() {
                types.push(t.clone());
            } else {
                non_contractive += 1;
            }
        }
    }
    Enumeration {
        types,
        non_contractive,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenMode {
    Iso,
    Equi,
    IsoSub,
    EquiSub,
}

impl GenMode {
    pub fn subtyping(self) -> bool {
        matches!(self, GenMode::IsoSub | GenMode::EquiSub)
    }

    pub fn erased(self) -> bool {
        matches!(self, GenMode::Equi | GenMode::EquiSub)
    }
}

const POOL: &[&str] = &[
    "Int",
    "Int -> Int",
    "(Int -> Int) -> Int",
    "mu a. Int -> a",
    "mu a. Int -> Int -> a",
    "Int -> (mu a. Int -> a)",
    "Int -> Int -> (mu a. Int -> a)",
    "(mu a. Int -> a) -> Int",
    "mu a. a -> Int",
    "(mu a. a -> Int) -> Int",
    "mu a. (a -> Int) -> Int",
    "Int -> Int -> Int",
];

const SUB_POOL: &[&str] = &[
    "Top",
    "Top -> Int",
    "Int -> Top",
    "Top -> Top",
    "mu a. Top -> a",
    "mu a. Int -> Top -> a",
    "Int -> (mu a. Top -> a)",
    "(Top -> Int) -> Int",
    "mu a. a -> Top",
    "mu a. Top -> Top -> a",
];

/// The types generated terms are built around.
pub fn type_pool(subtyping: bool) -> Vec<Type> {
    let extra: &[&str] = if subtyping { SUB_POOL } else { &[] };
    POOL.iter()
        .chain(extra)
        .map(|s| parse_type(s).expect("pool types parse"))
        .collect()
}

/// A closed diverging term of type `b`, built from self-application through
/// `mu r. r -> b`.
pub fn omega(b: &Type) -> Term {
    let r = Type::mu("r", Type::arrow(Type::var("r"), b.clone()));
    let half = Term::abs(
        "s",
        r.clone(),
        Term::app(Term::cast(Cast::Unfold(r.clone()), Term::var("s")), Term::var("s")),
    );
    Term::app(half.clone(), Term::cast(Cast::Fold(r), half))
}

struct Generator {
    rng: ChaCha8Rng,
    sub: bool,
    pool: Vec<Type>,
    fresh: usize,
}

impl Generator {
    fn name(&mut self) -> Symbol {
        self.fresh += 1;
        Symbol::from(format!("x{}", self.fresh))
    }

    fn fits(&self, have: &Type, want: &Type) -> bool {
        have == want || (self.sub && sub_iso_closed(have, want))
    }

    fn type_in(&self, ctx: &TermCtx, e: &Term) -> Option<Type> {
        if self.sub {
            type_of_sub(ctx, e).ok()
        } else {
            type_of(ctx, e).ok()
        }
    }

    /// A small inhabitant; types already under construction are filled
    /// with a diverging term, which only ever sits under a lambda.
    fn base(&mut self, ctx: &TermCtx, t: &Type, visiting: &mut Vec<Type>) -> Term {
        if let Some((x, _)) = ctx.iter().find(|(_, u)| *u == t) {
            return Term::Var(x.clone());
        }
        if visiting.contains(t) {
            return omega(t);
        }
        visiting.push(t.clone());
        let out = match t {
            Type::Int | Type::Top => Term::Int(self.rng.gen_range(0..10)),
            Type::Arrow(a, b) => {
                let x = self.name();
                let inner = ctx.extended(x.clone(), (**a).clone());
                let body = self.base(&inner, b, visiting);
                Term::Abs(x, (**a).clone(), Box::new(body))
            }
            Type::Mu(..) => {
                let unfolded = t.unfold().expect("mu");
                Term::cast(Cast::Fold(t.clone()), self.base(ctx, &unfolded, visiting))
            }
            Type::Var(_) => unreachable!("generated types are closed"),
        };
        visiting.pop();
        out
    }

    fn equal_types(&mut self, t: &Type) -> Vec<Type> {
        let mut out: Vec<Type> = expansion_levels(t, 2).into_iter().skip(1).flatten().collect();
        out.extend(
            self.pool
                .iter()
                .filter(|p| *p != t && equiv::equal(p, t).unwrap_or(false))
                .cloned(),
        );
        out.retain(|s| s.size() <= 14);
        out
    }

    fn term(&mut self, ctx: &TermCtx, t: &Type, budget: usize) -> Term {
        if budget <= 1 {
            return self.base(ctx, t, &mut Vec::new());
        }
        let vars: Vec<Symbol> = ctx
            .iter()
            .filter(|(_, u)| self.fits(u, t))
            .map(|(x, _)| x.clone())
            .collect();
        let mut choices = vec![(0u8, 3u32)];
        if !vars.is_empty() {
            choices.push((1, 2));
        }
        if budget >= 3 {
            choices.push((2, 4));
        }
        choices.push((3, 2));
        let pick = choices
            .choose_weighted(&mut self.rng, |c| c.1)
            .expect("non-empty")
            .0;
        match pick {
            1 => Term::Var(vars.choose(&mut self.rng).expect("non-empty").clone()),
            2 => self.application(ctx, t, budget),
            3 => self.cast(ctx, t, budget),
            _ => self.intro(ctx, t, budget),
        }
    }

    fn intro(&mut self, ctx: &TermCtx, t: &Type, budget: usize) -> Term {
        match t {
            Type::Int => Term::Int(self.rng.gen_range(-5..50)),
            Type::Top => {
                let any = self.pool.choose(&mut self.rng).expect("pool").clone();
                if any == Type::Top {
                    Term::Int(7)
                } else {
                    self.term(ctx, &any, budget - 1)
                }
            }
            Type::Arrow(a, b) => {
                let x = self.name();
                let inner = ctx.extended(x.clone(), (**a).clone());
                let body = self.term(&inner, b, budget - 1);
                Term::Abs(x, (**a).clone(), Box::new(body))
            }
            Type::Mu(..) => {
                let unfolded = t.unfold().expect("mu");
                Term::cast(Cast::Fold(t.clone()), self.term(ctx, &unfolded, budget - 1))
            }
            Type::Var(_) => unreachable!("generated types are closed"),
        }
    }

    fn application(&mut self, ctx: &TermCtx, t: &Type, budget: usize) -> Term {
        let s = self.pool.choose(&mut self.rng).expect("pool").clone();
        let arg_ty = if self.sub {
            let below: Vec<Type> = self
                .pool
                .iter()
                .filter(|p| sub_iso_closed(p, &s))
                .cloned()
                .collect();
            below.choose(&mut self.rng).cloned().unwrap_or_else(|| s.clone())
        } else {
            s.clone()
        };
        let left = self.rng.gen_range(1..budget - 1);
        let f = self.term(ctx, &Type::arrow(s, t.clone()), left);
        let a = self.term(ctx, &arg_ty, budget - 1 - left);
        let e = Term::app(f, a);
        self.checked(ctx, t, e, budget)
    }

    fn cast(&mut self, ctx: &TermCtx, t: &Type, budget: usize) -> Term {
        let candidates = self.equal_types(t);
        let Some(s) = candidates.choose(&mut self.rng).cloned() else {
            return self.intro(ctx, t, budget);
        };
        let c = equiv::synthesize_cast(&s, t).expect("candidates are equal to the target");
        let inner = self.term(ctx, &s, budget - 1);
        let e = Term::cast_unless_id(c, inner);
        self.checked(ctx, t, e, budget)
    }

    // Subsumption can make a composite land outside the target; fall back
    // to a direct introduction when it does.
    fn checked(&mut self, ctx: &TermCtx, t: &Type, e: Term, budget: usize) -> Term {
        if !self.sub {
            return e;
        }
        match self.type_in(ctx, &e) {
            Some(u) if self.fits(&u, t) => e,
            _ => self.intro(ctx, t, budget),
        }
    }
}

/// A closed term and the type it was generated against. In iso modes the
/// term has exactly that type (or a subtype of it under subtyping); in equi
/// modes it is the erasure of such a term.
pub fn generate_typed(seed: u64, size: usize, mode: GenMode) -> (Term, Type) {
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        sub: mode.subtyping(),
        pool: type_pool(mode.subtyping()),
        fresh: 0,
    };
    let t = g.pool.choose(&mut g.rng).expect("pool").clone();
    let e = g.term(&TermCtx::new(), &t, size.max(1));
    let e = if mode.erased() { e.erase() } else { e };
    (e, t)
}

pub fn generate_well_typed(seed: u64, size: usize, mode: GenMode) -> Term {
    generate_typed(seed, size, mode).0
}

/// One differential disagreement or failed property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub kind: String,
    pub lhs: String,
    pub rhs: String,
    pub algorithmic: String,
    pub oracle: String,
}

impl Finding {
    pub fn new(kind: &str, lhs: impl fmt::Display, rhs: impl fmt::Display, alg: impl fmt::Display, oracle: impl fmt::Display) -> Self {
        Finding {
            kind: kind.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            algorithmic: alg.to_string(),
            oracle: oracle.to_string(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Types contain spaces, so they are bracketed to keep one field each.
        write!(
            f,
            "{} [{}] [{}] {} {}",
            self.kind, self.lhs, self.rhs, self.algorithmic, self.oracle
        )
    }
}

pub fn write_findings(path: &Path, findings: &[Finding]) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    for f in findings {
        writeln!(file, "{f}")?;
    }
    file.flush()
}

#[derive(Debug, Clone, Default)]
pub struct EqualitySuite {
    pub types: usize,
    pub pairs: usize,
    pub equal_pairs: usize,
    pub casts_checked: usize,
    pub findings: Vec<Finding>,
}

/// equalE against the bisimulation oracle on every ordered pair, plus cast
/// validity, reversal and involution on every positive.
pub fn equality_suite(max_size: usize) -> EqualitySuite {
    let types = enumerate_types(max_size, false).types;
    let autos: Vec<TypeAutomaton> = types
        .iter()
        .map(|t| to_automaton(t).expect("enumerated types are closed and contractive"))
        .collect();
    let chunks = std::thread::available_parallelism().map_or(4, |n| n.get()).max(1);
    let idx: Vec<usize> = (0..types.len()).collect();
    let parts: Vec<EqualitySuite> = std::thread::scope(|s| {
        let handles: Vec<_> = idx
            .chunks(types.len().div_ceil(chunks).max(1))
            .map(|rows| {
                let (types, autos) = (&types, &autos);
                s.spawn(move || {
                    let mut r = EqualitySuite::default();
                    for &i in rows {
                        for j in 0..types.len() {
                            let (a, b) = (&types[i], &types[j]);
                            r.pairs += 1;
                            let oracle = automata_equal(&autos[i], &autos[j]);
                            let alg = equiv::synthesize_cast(a, b);
                            if alg.is_ok() != oracle {
                                r.findings.push(Finding::new("equal", a, b, alg.is_ok(), oracle));
                                continue;
                            }
                            let Ok(c) = alg else { continue };
                            r.equal_pairs += 1;
                            r.casts_checked += 1;
                            if !check_closed(&c, a, b) {
                                r.findings.push(Finding::new("cast", a, b, &c, true));
                            }
                            let back = reverse(&c);
                            if !check_closed(&back, b, a) {
                                r.findings.push(Finding::new("reverse", a, b, &back, true));
                            }
                            if reverse(&back) != c {
                                r.findings.push(Finding::new("involution", a, b, &c, true));
                            }
                        }
                    }
                    r
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut total = EqualitySuite {
        types: types.len(),
        ..Default::default()
    };
    for p in parts {
        total.pairs += p.pairs;
        total.equal_pairs += p.equal_pairs;
        total.casts_checked += p.casts_checked;
        total.findings.extend(p.findings);
    }
    total
}

#[derive(Debug, Clone, Default)]
pub struct SubtypingSuite {
    pub types: usize,
    pub pairs: usize,
    pub iso_related: usize,
    pub equi_related: usize,
    pub triples_checked: usize,
    pub findings: Vec<Finding>,
}

/// Reflexivity, transitivity and unfolding-invariance of iso-subtyping,
/// inclusion in equi-subtyping, and equi-subtyping against the
/// simulation oracle.
pub fn subtyping_suite(max_size: usize) -> SubtypingSuite {
    let types = enumerate_types(max_size, true).types;
    let n = types.len();
    let autos: Vec<TypeAutomaton> = types
        .iter()
        .map(|t| to_automaton(t).expect("enumerated types are closed and contractive"))
        .collect();
    let chunks = std::thread::available_parallelism().map_or(4, |n| n.get()).max(1);
    let rows: Vec<usize> = (0..n).collect();
    let results: Vec<(Vec<Vec<bool>>, SubtypingSuite)> = std::thread::scope(|s| {
        let handles: Vec<_> = rows
            .chunks(n.div_ceil(chunks).max(1))
            .map(|part| {
                let (types, autos) = (&types, &autos);
                s.spawn(move || {
                    let mut r = SubtypingSuite::default();
                    let mut m = Vec::new();
                    for &i in part {
                        let a = &types[i];
                        let mut row = Vec::with_capacity(types.len());
                        for (j, b) in types.iter().enumerate() {
                            r.pairs += 1;
                            let iso = sub_iso_closed(a, b);
                            let equi = subtype::sub_equi(a, b).expect("closed contractive");
                            let oracle = automata_sub(&autos[i], &autos[j]);
                            r.iso_related += iso as usize;
                            r.equi_related += equi as usize;
                            if i == j && !iso {
                                r.findings.push(Finding::new("reflexivity", a, b, iso, true));
                            }
                            if iso && !equi {
                                r.findings.push(Finding::new("inclusion", a, b, equi, true));
                            }
                            if equi != oracle {
                                r.findings.push(Finding::new("sub-equi", a, b, equi, oracle));
                            }
                            if iso {
                                if let (Some(ua), Some(ub)) = (a.unfold(), b.unfold()) {
                                    if !sub_iso_closed(&ua, &ub) {
                                        r.findings.push(Finding::new("unfolding", a, b, false, true));
                                    }
                                }
                            }
                            row.push(iso);
                        }
                        m.push(row);
                    }
                    (m, r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut total = SubtypingSuite {
        types: n,
        ..Default::default()
    };
    let mut matrix = Vec::with_capacity(n);
    for (m, r) in results {
        matrix.extend(m);
        total.pairs += r.pairs;
        total.iso_related += r.iso_related;
        total.equi_related += r.equi_related;
        total.findings.extend(r.findings);
    }
    let succ: Vec<Vec<usize>> = matrix
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect())
        .collect();
    for i in 0..n {
        for &j in &succ[i] {
            for &k in &succ[j] {
                total.triples_checked += 1;
                if !matrix[i][k] {
                    total
                        .findings
                        .push(Finding::new("transitivity", &types[i], &types[k], false, true));
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn automaton_sizes() {
        assert_eq!(to_automaton(&ty("mu a. Int -> a")).unwrap().len(), 2);
        assert_eq!(to_automaton(&Type::Int).unwrap().len(), 1);
        assert_eq!(to_automaton(&ty("mu a. Int -> Int -> a")).unwrap().len(), 3);
        assert!(to_automaton(&ty("mu a. a")).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert!(oracle_equal(&ty("mu a. Int -> a"), &ty("mu a. Int -> Int -> a")).unwrap());
        assert!(!oracle_equal(&ty("mu a. Int -> a"), &ty("mu a. (Int -> Int) -> a")).unwrap());
        assert!(oracle_sub(&ty("Int -> (mu a. Top -> a)"), &ty("mu a. Int -> Top -> a")).unwrap());
        assert!(oracle_sub(&ty("mu a. a -> Int"), &Type::Top).unwrap());
        assert!(!oracle_sub(&Type::Top, &Type::Int).unwrap());
        assert!(!oracle_sub(&ty("mu a. a -> Int"), &ty("mu a. a -> Top")).unwrap());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_types(1, false).types, vec![Type::Int]);
        let four = enumerate_types(4, false).types;
        assert!(four.contains(&ty("mu a. Int -> a")));
        assert!(four.contains(&ty("mu a. a -> Int")));
        assert!(!four.contains(&ty("mu a. a")));
    }

    #[test]
    fn omega_is_typed() {
        let b = ty("mu a. Int -> a");
        assert_eq!(type_of(&TermCtx::new(), &omega(&b)).unwrap(), b);
    }

    #[test]
    fn finding_line_format() {
        let f = Finding::new("equal", ty("Int"), ty("Int -> Int"), false, true);
        assert_eq!(f.to_string(), "equal [Int] [Int -> Int] false true");
    }
}
