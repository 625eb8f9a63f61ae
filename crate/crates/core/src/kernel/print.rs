//! Printing in the concrete grammar with minimal parentheses.
//!
//! `mu`, `\x: T.` and `fix i.` all extend as far right as possible, so they
//! only need parentheses when something follows them.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::terms::{Cast, Term};
use super::types::{Symbol, TyVar, Type};

fn pick_binder(hint: &Symbol, scope: &[Symbol], free: &BTreeSet<Symbol>) -> Symbol {
    let clash = |s: &Symbol| scope.contains(s) || free.contains(s);
    if !clash(hint) {
        return hint.clone();
    }
    let mut candidate = format!("{}'", hint);
    while clash(&Symbol::new(&candidate)) {
        candidate.push('\'');
    }
    Symbol::from(candidate)
}

fn write_type(
    out: &mut String,
    t: &Type,
    scope: &mut Vec<Symbol>,
    free: &BTreeSet<Symbol>,
    arrow_left: bool,
) {
    match t {
        Type::Int => out.push_str("Int"),
        Type::Top => out.push_str("Top"),
        Type::Var(TyVar::Free(s)) => out.push_str(s.as_str()),
        Type::Var(TyVar::Bound(i)) => {
            let idx = scope.len().checked_sub(1 + *i as usize);
            match idx {
                Some(k) => out.push_str(scope[k].as_str()),
                None => {
                    let _ = write!(out, "#{}", i);
                }
            }
        }
        Type::Arrow(a, b) => {
            if arrow_left {
                out.push('(');
            }
            write_type(out, a, scope, free, true);
            out.push_str(" -> ");
            write_type(out, b, scope, free, false);
            if arrow_left {
                out.push(')');
            }
        }
        Type::Mu(hint, body) => {
            if arrow_left {
                out.push('(');
            }
            let name = pick_binder(&hint.0, scope, free);
            out.push_str("mu ");
            out.push_str(name.as_str());
            out.push_str(". ");
            scope.push(name);
            write_type(out, body, scope, free, false);
            scope.pop();
            if arrow_left {
                out.push(')');
            }
        }
    }
}

pub fn type_to_string(t: &Type) -> String {
    let mut out = String::new();
    write_type(&mut out, t, &mut Vec::new(), &t.free_vars(), false);
    out
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&type_to_string(self))
    }
}

// Cast levels: 0 = sequence, 1 = arrow, 2 = atom.
fn write_cast(out: &mut String, c: &Cast, level: u8, rightmost: bool, annotated: bool) {
    match c {
        Cast::Var(v) => out.push_str(v.as_str()),
        Cast::Id => out.push_str("id"),
        Cast::Fold(t) => {
            out.push_str("fold[");
            out.push_str(&type_to_string(t));
            out.push(']');
        }
        Cast::Unfold(t) => {
            out.push_str("unfold[");
            out.push_str(&type_to_string(t));
            out.push(']');
        }
        Cast::Arrow(a, b) => {
            let paren = level > 1;
            if paren {
                out.push('(');
            }
            write_cast(out, a, 2, false, annotated);
            out.push_str(" -> ");
            write_cast(out, b, 1, rightmost || paren, annotated);
            if paren {
                out.push(')');
            }
        }
        Cast::Seq(a, b) => {
            let paren = level > 0;
            if paren {
                out.push('(');
            }
            write_cast(out, a, 0, false, annotated);
            out.push_str(" ; ");
            write_cast(out, b, 1, rightmost || paren, annotated);
            if paren {
                out.push(')');
            }
        }
        Cast::Fix {
            var,
            declared,
            body,
        } => {
            let paren = !(rightmost && level <= 1);
            if paren {
                out.push('(');
            }
            out.push_str("fix ");
            out.push_str(var.as_str());
            if let (true, Some((s, t))) = (annotated, declared) {
                out.push_str(" : ");
                out.push_str(&type_to_string(s));
                out.push_str(" => ");
                out.push_str(&type_to_string(t));
                out.push(' ');
            }
            out.push_str(". ");
            write_cast(out, body, 0, true, annotated);
            if paren {
                out.push(')');
            }
        }
    }
}

/// Display adapter choosing whether `fix` annotations are shown.
pub struct CastDisplay<'a> {
    cast: &'a Cast,
    annotated: bool,
}

impl<'a> CastDisplay<'a> {
    pub fn annotated(cast: &'a Cast) -> Self {
        CastDisplay {
            cast,
            annotated: true,
        }
    }

    pub fn plain(cast: &'a Cast) -> Self {
        CastDisplay {
            cast,
            annotated: false,
        }
    }
}

impl fmt::Display for CastDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_cast(&mut out, self.cast, 0, true, self.annotated);
        f.write_str(&out)
    }
}

impl fmt::Display for Cast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        CastDisplay::plain(self).fmt(f)
    }
}

// Term levels: 0 = lambda / application, 1 = application head, 2 = atom.
fn write_term(out: &mut String, e: &Term, level: u8, rightmost: bool, annotated: bool) {
    match e {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Int(n) => {
            let _ = write!(out, "{}", n);
        }
        Term::App(f, a) => {
            let paren = level > 1;
            if paren {
                out.push('(');
            }
            write_term(out, f, 1, false, annotated);
            out.push(' ');
            write_term(out, a, 2, rightmost || paren, annotated);
            if paren {
                out.push(')');
            }
        }
        Term::Abs(x, t, body) => {
            let paren = !rightmost;
            if paren {
                out.push('(');
            }
            out.push('\\');
            out.push_str(x.as_str());
            out.push_str(": ");
            out.push_str(&type_to_string(t));
            out.push_str(". ");
            write_term(out, body, 0, true, annotated);
            if paren {
                out.push(')');
            }
        }
        Term::Cast(c, inner) => {
            out.push_str("cast<");
            write_cast(out, c, 0, true, annotated);
            out.push_str(">(");
            write_term(out, inner, 0, true, annotated);
            out.push(')');
        }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    annotated: bool,
}

impl<'a> TermDisplay<'a> {
    pub fn annotated(term: &'a Term) -> Self {
        TermDisplay {
            term,
            annotated: true,
        }
    }

    pub fn plain(term: &'a Term) -> Self {
        TermDisplay {
            term,
            annotated: false,
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_term(&mut out, self.term, 0, true, self.annotated);
        f.write_str(&out)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TermDisplay::plain(self).fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use crate::kernel::{parse_cast, parse_term, parse_type};

    #[test]
    fn minimal_type_parens() {
        let cases = [
            ("Int -> Int -> Int", "Int -> Int -> Int"),
            ("(Int -> Int) -> Int", "(Int -> Int) -> Int"),
            ("Int -> (mu a. Top -> a)", "Int -> mu a. Top -> a"),
            ("(mu a. a -> Int) -> Int", "(mu a. a -> Int) -> Int"),
            ("mu a. (mu b. b -> a) -> Int", "mu a. (mu b. b -> a) -> Int"),
        ];
        for (src, want) in cases {
            assert_eq!(parse_type(src).unwrap().to_string(), want);
        }
    }

    #[test]
    fn minimal_cast_parens() {
        let cases = [
            ("id -> fold[mu a. Int -> a]", "id -> fold[mu a. Int -> a]"),
            ("(id ; id) -> id", "(id ; id) -> id"),
            ("id ; id ; id", "id ; id ; id"),
            ("id ; (id ; id)", "id ; (id ; id)"),
            ("(fix i. id -> i) ; id", "(fix i. id -> i) ; id"),
            ("id ; fix i. id -> i", "id ; fix i. id -> i"),
            ("(id -> id) -> id", "(id -> id) -> id"),
            ("id -> (fix i. id -> i)", "id -> fix i. id -> i"),
            ("(id -> fix i. i) -> id", "(id -> fix i. i) -> id"),
        ];
        for (src, want) in cases {
            assert_eq!(parse_cast(src).unwrap().to_string(), want, "{src}");
        }
    }

    #[test]
    fn minimal_term_parens() {
        let cases = [
            ("f x y", "f x y"),
            ("f (x y)", "f (x y)"),
            ("(\\x: Int. x) 1", "(\\x: Int. x) 1"),
            ("f (\\x: Int. x)", "f \\x: Int. x"),
            ("f (\\x: Int. x) 1", "f (\\x: Int. x) 1"),
            ("cast<id -> fold[mu a. Int -> a]>(v) 1", "cast<id -> fold[mu a. Int -> a]>(v) 1"),
            ("\\x: mu a. Int -> a. x", "\\x: mu a. Int -> a. x"),
        ];
        for (src, want) in cases {
            assert_eq!(parse_term(src).unwrap().to_string(), want, "{src}");
        }
    }

    #[test]
    fn annotated_fix_round_trips() {
        let src = "fix i : Int -> (mu a. Int -> a) => Int -> Int . id -> i";
        let c = parse_cast(src).unwrap();
        let shown = super::CastDisplay::annotated(&c).to_string();
        assert_eq!(parse_cast(&shown).unwrap(), c);
        assert_eq!(c.to_string(), "fix i. id -> i");
    }
}
