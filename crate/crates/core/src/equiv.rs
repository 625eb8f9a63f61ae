//! Equi-recursive type equality, decided by synthesizing a cast witness.
//!
//! The search follows the inductive presentation of equality in which every
//! comparison of two arrow types is recorded as an assumption that may be
//! used (by cast variable) while comparing their components. A successful
//! search yields a closed cast `c` with `. ; . |- A ~> B : c`.

use std::collections::HashMap;

use thiserror::Error;

use crate::castcalc::reverse;
use crate::kernel::{Cast, Symbol, TyVar, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("types are not equal: {lhs} vs {rhs}")]
    NotEqual { lhs: Type, rhs: Type },
    #[error("type is not contractive: {0}")]
    NotContractive(Type),
    #[error("type is not closed: {0}")]
    NotClosed(Type),
}

/// A type with its top-level `mu` binders unfolded away, plus the casts that
/// move between the original and the head-normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadNormal {
    pub head: Type,
    /// `original ~> head`, a chain of unfolds (or `id`).
    pub pre: Cast,
    /// `head ~> original`, the reverse chain of folds.
    pub post: Cast,
}

fn unfold_head(t: &Type) -> HeadNormal {
    let mut cur = t.clone();
    let mut pre = Cast::Id;
    while let Some(next) = cur.unfold() {
        pre = pre.then(Cast::Unfold(cur));
        cur = next;
    }
    let post = reverse(&pre);
    HeadNormal {
        head: cur,
        pre,
        post,
    }
}

/// Unfold top-level `mu`s until the head is `Int`, `Top`, an arrow, or a
/// variable.
pub fn head_normalize(t: &Type) -> Result<HeadNormal, EquivError> {
    if !t.is_contractive() {
        return Err(EquivError::NotContractive(t.clone()));
    }
    Ok(unfold_head(t))
}

/// Assumptions made while comparing arrow types: a head-normal pair and the
/// cast variable standing for its (pending) proof. Entries live exactly as
/// long as the comparison that introduced them.
#[derive(Debug, Default, Clone)]
pub struct AssumptionTable {
    entries: Vec<(Type, Type, Symbol, bool)>,
    peak: usize,
}

impl AssumptionTable {
    fn lookup(&mut self, a: &Type, b: &Type) -> Option<Symbol> {
        let entry = self
            .entries
            .iter_mut()
            .rev()
            .find(|(x, y, _, _)| x == a && y == b)?;
        entry.3 = true;
        Some(entry.2.clone())
    }

    fn push(&mut self, a: Type, b: Type, var: Symbol) {
        self.entries.push((a, b, var, false));
        self.peak = self.peak.max(self.entries.len());
    }

    fn pop(&mut self) -> bool {
        self.entries.pop().is_some_and(|e| e.3)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest number of simultaneous assumptions seen.
    pub fn peak(&self) -> usize {
        self.peak
    }
}

/// Per-call synthesis state.
#[derive(Debug, Default)]
pub struct Synthesizer {
    table: AssumptionTable,
    counter: usize,
    // Finished, closed witnesses for head-normal pairs.
    proven: HashMap<(Type, Type), Cast>,
}

impl Synthesizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&self) -> &AssumptionTable {
        &self.table
    }

    fn fresh(&mut self) -> Symbol {
        self.counter += 1;
        Symbol::from(format!("i{}", self.counter))
    }

    /// Synthesizes `a ~> b`. Inputs must be contractive; open types are
    /// accepted here so that variable heads can be compared.
    pub fn synthesize(&mut self, a: &Type, b: &Type) -> Result<Cast, EquivError> {
        if a == b {
            return Ok(Cast::Id);
        }
        let ha = unfold_head(a);
        let hb = unfold_head(b);
        let core = self.heads(&ha.head, &hb.head)?;
        Ok(ha.pre.then(core).then(hb.post))
    }

    fn heads(&mut self, a: &Type, b: &Type) -> Result<Cast, EquivError> {
        if a == b {
            return Ok(Cast::Id);
        }
        match (a, b) {
            (Type::Int, Type::Int) | (Type::Top, Type::Top) => Ok(Cast::Id),
            (Type::Var(TyVar::Free(x)), Type::Var(TyVar::Free(y))) if x == y => Ok(Cast::Id),
            (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => {
                if let Some(var) = self.table.lookup(a, b) {
                    return Ok(Cast::Var(var));
                }
                let key = (a.clone(), b.clone());
                if let Some(done) = self.proven.get(&key) {
                    return Ok(done.clone());
                }
                let var = self.fresh();
                self.table.push(a.clone(), b.clone(), var.clone());
                let parts = self
                    .synthesize(a1, b1)
                    .and_then(|c1| Ok((c1, self.synthesize(a2, b2)?)));
                let used = self.table.pop();
                let (c1, c2) = parts?;
                let body = Cast::arrow(c1, c2);
                let cast = if used {
                    Cast::Fix {
                        var,
                        declared: Some((a.clone(), b.clone())),
                        body: Box::new(body),
                    }
                } else {
                    body
                };
                if cast.free_vars().is_empty() {
                    self.proven.insert(key, cast.clone());
                }
                Ok(cast)
            }
            _ => Err(EquivError::NotEqual {
                lhs: a.clone(),
                rhs: b.clone(),
            }),
        }
    }
}

fn check_inputs(a: &Type, b: &Type) -> Result<(), EquivError> {
    for t in [a, b] {
        if !t.is_closed() || !t.is_locally_closed() {
            return Err(EquivError::NotClosed(t.clone()));
        }
        if !t.is_contractive() {
            return Err(EquivError::NotContractive(t.clone()));
        }
    }
    Ok(())
}

/// A closed cast witnessing `a ≐ b`.
pub fn synthesize_cast(a: &Type, b: &Type) -> Result<Cast, EquivError> {
    check_inputs(a, b)?;
    Synthesizer::new().synthesize(a, b)
}

/// Decides `a ≐ b` for closed contractive types.
pub fn equal(a: &Type, b: &Type) -> Result<bool, EquivError> {
    match synthesize_cast(a, b) {
        Ok(_) => Ok(true),
        Err(EquivError::NotEqual { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Closed types are compared directly; no cast is produced when they are
/// already alpha-equivalent.
pub fn cast_between(a: &Type, b: &Type) -> Result<Cast, EquivError> {
    if a == b {
        Ok(Cast::Id)
    } else {
        synthesize_cast(a, b)
    }
}
