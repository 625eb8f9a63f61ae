//! Call-by-value small-step reduction with push rules for casts, the
//! cast-free equi-recursive fragment, and fuel-bounded drivers.

use std::fmt;

use thiserror::Error;

use crate::castcalc::{reverse, subst_cast};
use crate::kernel::{Cast, Term};

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Beta,
    Appl,
    Appr,
    Cast,
    CastId,
    CastArr,
    CastSeq,
    CastElim,
    CastFix,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Beta => "Red-beta",
            Rule::Appl => "Red-appl",
            Rule::Appr => "Red-appr",
            Rule::Cast => "Red-cast",
            Rule::CastId => "Red-cast-id",
            Rule::CastArr => "Red-cast-arr",
            Rule::CastSeq => "Red-cast-seq",
            Rule::CastElim => "Red-castelim",
            Rule::CastFix => "Red-cast-fix",
        }
    }

    /// Rules that leave the erasure of a term unchanged.
    pub fn is_cast_rule(self) -> bool {
        !matches!(self, Rule::Beta | Rule::Appl | Rule::Appr)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("cast found in an equi-recursive term: {0}")]
    CastInEquiTerm(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Iso,
    Equi,
}

/// One reduction step. `rule` is the rule applied at the redex; `path`
/// lists the congruence rules used to reach it, outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub path: Vec<Rule>,
    pub term: Term,
    /// Set when an unfold cancelled a fold with a different annotation.
    pub mismatched_elim: bool,
}

impl Step {
    /// Congruences followed by the redex rule.
    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.path.iter().copied().chain(std::iter::once(self.rule))
    }
}

struct Redex {
    term: Term,
    rule: Rule,
    path: Vec<Rule>,
    mismatched: bool,
}

impl Redex {
    fn leaf(term: Term, rule: Rule) -> Self {
        Redex {
            term,
            rule,
            path: Vec::new(),
            mismatched: false,
        }
    }

    fn wrap(mut self, congruence: Rule, rebuild: impl FnOnce(Term) -> Term) -> Self {
        self.path.push(congruence);
        self.term = rebuild(self.term);
        self
    }
}

fn step_rec(e: &Term, casts: bool) -> Option<Redex> {
    match e {
        Term::App(f, a) => {
            if !f.is_value() {
                let r = step_rec(f, casts)?;
                return Some(r.wrap(Rule::Appl, |f2| Term::app(f2, (**a).clone())));
            }
            if !a.is_value() {
                let r = step_rec(a, casts)?;
                return Some(r.wrap(Rule::Appr, |a2| Term::app((**f).clone(), a2)));
            }
            match &**f {
                Term::Abs(x, _, body) => Some(Redex::leaf(body.subst(x, a), Rule::Beta)),
                Term::Cast(Cast::Arrow(c1, c2), v1) if casts => {
                    let arg = Term::cast(reverse(c1), (**a).clone());
                    let out = Term::cast((**c2).clone(), Term::app((**v1).clone(), arg));
                    Some(Redex::leaf(out, Rule::CastArr))
                }
                _ => None,
            }
        }
        Term::Cast(c, inner) if casts => {
            if !inner.is_value() {
                let r = step_rec(inner, casts)?;
                return Some(r.wrap(Rule::Cast, |i2| Term::cast(c.clone(), i2)));
            }
            let v = (**inner).clone();
            match c {
                Cast::Id => Some(Redex::leaf(v, Rule::CastId)),
                Cast::Seq(c1, c2) => Some(Redex::leaf(
                    Term::cast((**c2).clone(), Term::cast((**c1).clone(), v)),
                    Rule::CastSeq,
                )),
                Cast::Unfold(a) => match v {
                    Term::Cast(Cast::Fold(b), v0) => {
                        let mut r = Redex::leaf(*v0, Rule::CastElim);
                        r.mismatched = *a != b;
                        Some(r)
                    }
                    _ => None,
                },
                Cast::Fix { var, body, .. } => {
                    let unrolled = subst_cast(body, var, c);
                    Some(Redex::leaf(Term::cast(unrolled, v), Rule::CastFix))
                }
                Cast::Fold(_) | Cast::Arrow(..) | Cast::Var(_) => None,
            }
        }
        _ => None,
    }
}

fn finish(r: Redex) -> Step {
    let mut path = r.path;
    path.reverse();
    Step {
        rule: r.rule,
        path,
        term: r.term,
        mismatched_elim: r.mismatched,
    }
}

/// One full iso-recursive step, or `None` on values and stuck terms.
pub fn step_iso(e: &Term) -> Option<Step> {
    step_rec(e, true).map(finish)
}

/// One step of the cast-free fragment (beta and its congruences only).
pub fn step_equi(e: &Term) -> Result<Option<Step>, EvalError> {
    if e.has_casts() {
        return Err(EvalError::CastInEquiTerm(e.clone()));
    }
    Ok(step_rec(e, false).map(finish))
}

pub fn step(e: &Term, mode: Mode) -> Result<Option<Step>, EvalError> {
    match mode {
        Mode::Iso => Ok(step_iso(e)),
        Mode::Equi => step_equi(e),
    }
}

/// The initial term and every step taken from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Term,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn new(initial: Term) -> Self {
        Trace {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn last(&self) -> &Term {
        self.steps.last().map_or(&self.initial, |s| &s.term)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.steps.iter().map(|s| s.rule)
    }

    /// Every term in order, starting with the initial one.
    pub fn terms(&self) -> impl Iterator<Item = &Term> + '_ {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.term))
    }

    /// `<rule> |- <term>` per line, starting with `init`.
    pub fn render(&self, annotated: bool) -> String {
        let show = |t: &Term| {
            if annotated {
                crate::kernel::TermDisplay::annotated(t).to_string()
            } else {
                t.to_string()
            }
        };
        let mut out = format!("init |- {}\n", show(&self.initial));
        for s in &self.steps {
            out.push_str(&format!("{} |- {}\n", s.rule, show(&s.term)));
        }
        out
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(Term, Trace),
    FuelExhausted(Term, Trace),
    Stuck(Term, Trace),
}

impl EvalOutcome {
    pub fn term(&self) -> &Term {
        match self {
            EvalOutcome::Value(t, _) | EvalOutcome::FuelExhausted(t, _) | EvalOutcome::Stuck(t, _) => t,
        }
    }

    pub fn trace(&self) -> &Trace {
        match self {
            EvalOutcome::Value(_, tr) | EvalOutcome::FuelExhausted(_, tr) | EvalOutcome::Stuck(_, tr) => tr,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, EvalOutcome::Value(..))
    }

    pub fn is_stuck(&self) -> bool {
        matches!(self, EvalOutcome::Stuck(..))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EvalOutcome::Value(..) => "value",
            EvalOutcome::FuelExhausted(..) => "fuel-exhausted",
            EvalOutcome::Stuck(..) => "stuck",
        }
    }
}

/// Lazily produces successive steps; stops at values and stuck terms.
pub struct Steps {
    current: Term,
    mode: Mode,
    error: Option<EvalError>,
}

impl Steps {
    pub fn current(&self) -> &Term {
        &self.current
    }

    pub fn error(&self) -> Option<&EvalError> {
        self.error.as_ref()
    }
}

impl Iterator for Steps {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        if self.error.is_some() {
            return None;
        }
        match step(&self.current, self.mode) {
            Ok(Some(s)) => {
                self.current = s.term.clone();
                Some(s)
            }
            Ok(None) => None,
            Err(e) => {
                self.error = Some(e);
                None
            }
        }
    }
}

pub fn steps(e: &Term, mode: Mode) -> Steps {
    Steps {
        current: e.clone(),
        mode,
        error: None,
    }
}

/// Runs at most `fuel` steps and classifies where evaluation ended.
pub fn evaluate(e: &Term, mode: Mode, fuel: usize) -> Result<EvalOutcome, EvalError> {
    let mut trace = Trace::new(e.clone());
    let mut it = steps(e, mode);
    for s in it.by_ref().take(fuel) {
        trace.steps.push(s);
    }
    if let Some(err) = it.error {
        return Err(err);
    }
    let last = trace.last().clone();
    Ok(if last.is_value() {
        EvalOutcome::Value(last, trace)
    } else if step(&last, mode)?.is_some() {
        EvalOutcome::FuelExhausted(last, trace)
    } else {
        EvalOutcome::Stuck(last, trace)
    })
}
