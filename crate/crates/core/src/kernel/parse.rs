//! Recursive-descent parser for types, casts and terms.
//!
//! ```text
//! type ::= 'mu' ident '.' type | atom ('->' type)?
//! atom ::= 'Int' | 'Top' | ident | '(' type ')'
//! cast ::= arr (';' arr)*
//! arr  ::= 'fix' ident (':' type '=>' type)? '.' cast | catom ('->' arr)?
//! term ::= '\' ident ':' type '.' term | tatom+ ('\' ...)?
//! ```
//! `#` starts a line comment. The Unicode spellings `λ`, `μ`, `→`, `⊤`
//! and `⇒` are accepted as well.

use thiserror::Error;

use super::terms::{Cast, Term};
use super::types::{Binder, Symbol, TyVar, Type};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Arrow,
    FatArrow,
    Dot,
    Colon,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Lambda,
    Eof,
}

const KEYWORDS: &[&str] = &["mu", "Int", "Top", "cast", "id", "fold", "unfold", "fix"];

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok| out.push(Lexed { tok, line: tl, col: tc });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let mut width = 1;
        match c {
            '-' if next == Some('>') => {
                push(Tok::Arrow);
                width = 2;
            }
            '=' if next == Some('>') => {
                push(Tok::FatArrow);
                width = 2;
            }
            '→' => push(Tok::Arrow),
            '⇒' => push(Tok::FatArrow),
            '.' => push(Tok::Dot),
            ':' => push(Tok::Colon),
            ';' => push(Tok::Semi),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '[' => push(Tok::LBracket),
            ']' => push(Tok::RBracket),
            '<' => push(Tok::Lt),
            '>' => push(Tok::Gt),
            '\\' | 'λ' => push(Tok::Lambda),
            'μ' => push(Tok::Ident("mu".into())),
            '⊤' => push(Tok::Ident("Top".into())),
            _ if c.is_ascii_digit() || (c == '-' && next.is_some_and(|d| d.is_ascii_digit())) => {
                let start = i;
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[start..j].iter().collect();
                let n = text.parse::<i64>().map_err(|e| ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("bad integer literal {text}: {e}"),
                })?;
                push(Tok::Int(n));
                width = j - start;
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                push(Tok::Ident(chars[start..j].iter().collect()));
                width = j - start;
            }
            _ => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
        i += width;
        col += width;
    }
    out.push(Lexed {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    // Type variables bound by enclosing `mu`s, innermost last.
    scope: Vec<Symbol>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let l = &self.toks[self.pos];
        Err(ParseError {
            line: l.line,
            col: l.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<Symbol, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Symbol::from(s))
            }
            other => self.error(format!("expected {what}, found {other:?}")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected trailing {:?}", self.peek()))
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        if self.is_kw("mu") {
            self.bump();
            let name = self.ident("type variable")?;
            self.expect(Tok::Dot, "'.'")?;
            self.scope.push(name.clone());
            let body = self.ty();
            self.scope.pop();
            return Ok(Type::Mu(Binder(name), Arc::new(body?)));
        }
        let lhs = self.ty_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Int" => {
                self.bump();
                Ok(Type::Int)
            }
            Tok::Ident(s) if s == "Top" => {
                self.bump();
                Ok(Type::Top)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Tok::Ident(_) => {
                let name = self.ident("type")?;
                match self.scope.iter().rev().position(|s| *s == name) {
                    Some(i) => Ok(Type::Var(TyVar::Bound(i as u32))),
                    None => Ok(Type::Var(TyVar::Free(name))),
                }
            }
            other => self.error(format!("expected a type, found {other:?}")),
        }
    }

    fn mu_type(&mut self, what: &str) -> Result<Type, ParseError> {
        self.expect(Tok::LBracket, "'['")?;
        let t = self.ty()?;
        self.expect(Tok::RBracket, "']'")?;
        if !t.is_mu() {
            return self.error(format!("{what} annotation must be a recursive type, got {t}"));
        }
        Ok(t)
    }

    fn cast(&mut self) -> Result<Cast, ParseError> {
        let mut lhs = self.cast_arrow()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.cast_arrow()?;
            lhs = Cast::seq(lhs, rhs);
        }
        Ok(lhs)
    }

    fn cast_arrow(&mut self) -> Result<Cast, ParseError> {
        if self.is_kw("fix") {
            self.bump();
            let var = self.ident("cast variable")?;
            let declared = if *self.peek() == Tok::Colon {
                self.bump();
                let s = self.ty()?;
                self.expect(Tok::FatArrow, "'=>'")?;
                let t = self.ty()?;
                Some((s, t))
            } else {
                None
            };
            self.expect(Tok::Dot, "'.'")?;
            let body = self.cast()?;
            return Ok(Cast::Fix {
                var,
                declared,
                body: Box::new(body),
            });
        }
        let lhs = self.cast_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.cast_arrow()?;
            return Ok(Cast::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn cast_atom(&mut self) -> Result<Cast, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "id" => {
                self.bump();
                Ok(Cast::Id)
            }
            Tok::Ident(s) if s == "fold" => {
                self.bump();
                Ok(Cast::Fold(self.mu_type("fold")?))
            }
            Tok::Ident(s) if s == "unfold" => {
                self.bump();
                Ok(Cast::Unfold(self.mu_type("unfold")?))
            }
            Tok::LParen => {
                self.bump();
                let c = self.cast()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(c)
            }
            Tok::Ident(_) => Ok(Cast::Var(self.ident("cast")?)),
            other => self.error(format!("expected a cast, found {other:?}")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let mut head = self.term_atom()?;
        loop {
            match self.peek() {
                Tok::Lambda => {
                    let arg = self.lambda()?;
                    return Ok(Term::app(head, arg));
                }
                Tok::Ident(s) if s == "cast" || !KEYWORDS.contains(&s.as_str()) => {}
                Tok::Int(_) | Tok::LParen => {}
                _ => return Ok(head),
            }
            let arg = self.term_atom()?;
            head = Term::app(head, arg);
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "'\\'")?;
        let x = self.ident("variable")?;
        self.expect(Tok::Colon, "':'")?;
        let t = self.ty()?;
        self.expect(Tok::Dot, "'.'")?;
        let body = self.term()?;
        Ok(Term::Abs(x, t, Box::new(body)))
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "cast" => {
                self.bump();
                self.expect(Tok::Lt, "'<'")?;
                let c = self.cast()?;
                self.expect(Tok::Gt, "'>'")?;
                self.expect(Tok::LParen, "'('")?;
                let e = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Term::cast(c, e))
            }
            Tok::Ident(_) => Ok(Term::Var(self.ident("term")?)),
            other => self.error(format!("expected a term, found {other:?}")),
        }
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_cast(src: &str) -> Result<Cast, ParseError> {
    let mut p = Parser::new(src)?;
    let c = p.cast()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.term()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_associate_right() {
        let t = parse_type("Int -> Int -> Int").unwrap();
        assert_eq!(t, Type::arrow(Type::Int, Type::arrow(Type::Int, Type::Int)));
    }

    #[test]
    fn mu_extends_right() {
        let t = parse_type("mu a. Int -> a").unwrap();
        assert_eq!(t, Type::mu("a", Type::arrow(Type::Int, Type::var("a"))));
    }

    #[test]
    fn unicode_spellings() {
        assert_eq!(
            parse_type("μα.⊤ → α").unwrap(),
            parse_type("mu a. Top -> a").unwrap()
        );
        assert_eq!(
            parse_term("λx: Int. x").unwrap(),
            parse_term("\\x: Int. x").unwrap()
        );
    }

    #[test]
    fn seq_is_left_assoc_and_looser_than_arrow() {
        let c = parse_cast("id ; id -> id ; id").unwrap();
        let want = Cast::seq(Cast::seq(Cast::Id, Cast::arrow(Cast::Id, Cast::Id)), Cast::Id);
        assert_eq!(c, want);
    }

    #[test]
    fn application_is_left_assoc() {
        let e = parse_term("f x y").unwrap();
        assert_eq!(
            e,
            Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y"))
        );
    }

    #[test]
    fn comments_and_negatives() {
        let e = parse_term("# leading comment\nf -3 # trailing\n").unwrap();
        assert_eq!(e, Term::app(Term::var("f"), Term::Int(-3)));
    }

    #[test]
    fn fold_requires_mu() {
        assert!(parse_cast("fold[Int]").is_err());
        assert!(parse_cast("unfold[Int -> Int]").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_type("Int ->").is_err());
        assert!(parse_term("\\x. x").is_err());
        assert!(parse_term("cast<id>1").is_err());
        assert!(parse_type("Int Int").is_err());
        assert!(parse_term("mu").is_err());
    }
}
