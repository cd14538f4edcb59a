//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! phi  := imp
//! imp  := or ("->" imp)?
//! or   := and ("|" and)*
//! and  := un ("&" un)*
//! un   := ("~" | "[]" | "<>" | "[T]" | "<T>" | "[R]" | "<R>" | "@" IDENT) un | atom
//! atom := "t(" ("0"|"1"|"?") ")" | "H(" IDENT "," IDENT ")" | "B(" IDENT "," IDENT ")"
//!       | MACRO "(" args ")" | IDENT | "(" phi ")"
//! ```
//!
//! Macros are expanded while parsing, so the result is always a core formula.

use std::fmt;

use crate::model::{is_ident_char, Val};

use super::{Arena, Builder, ExpandError, Expander, NamedContext, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, msg: String },
    Arity { pos: usize, name: String, got: usize, expected: &'static str },
    Expand { pos: usize, source: ExpandError },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, msg } => write!(f, "syntax error at offset {pos}: {msg}"),
            ParseError::Arity { pos, name, got, expected } => {
                write!(f, "at offset {pos}: {name} takes {expected} argument(s), got {got}")
            }
            ParseError::Expand { pos, source } => write!(f, "at offset {pos}: {source}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Question,
    Not,
    And,
    Or,
    Arrow,
    Box,
    Diamond,
    TBox,
    TDiamond,
    RBox,
    RDiamond,
    At,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Question => "?",
            Tok::Not => "~",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Arrow => "->",
            Tok::Box => "[]",
            Tok::Diamond => "<>",
            Tok::TBox => "[T]",
            Tok::TDiamond => "<T>",
            Tok::RBox => "[R]",
            Tok::RDiamond => "<R>",
            Tok::At => "@",
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    const FIXED: [(&str, Tok); 13] = [
        ("->", Tok::Arrow),
        ("[]", Tok::Box),
        ("<>", Tok::Diamond),
        ("[T]", Tok::TBox),
        ("<T>", Tok::TDiamond),
        ("[R]", Tok::RBox),
        ("<R>", Tok::RDiamond),
        ("(", Tok::LParen),
        (")", Tok::RParen),
        (",", Tok::Comma),
        ("~", Tok::Not),
        ("&", Tok::And),
        ("|", Tok::Or),
    ];
    let mut out = Vec::new();
    let mut pos = 0;
    'outer: while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        for (lit, tok) in &FIXED {
            if rest.starts_with(lit) {
                out.push((pos, tok.clone()));
                pos += lit.len();
                continue 'outer;
            }
        }
        match c {
            '?' => {
                out.push((pos, Tok::Question));
                pos += 1;
            }
            '@' => {
                out.push((pos, Tok::At));
                pos += 1;
            }
            c if is_ident_char(c) => {
                let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
                out.push((pos, Tok::Ident(rest[..len].to_string())));
                pos += len;
            }
            other => {
                return Err(ParseError::Syntax { pos, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

/// A macro argument: either a bare identifier or a formula.
enum Arg<F> {
    Ident(String),
    Formula(F),
}

struct Parser<'p, 'a, B: Builder> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    ex: &'p mut Expander<'a, B>,
}

const NULLARY: [&str; 2] = ["Incuriam", "Overruled"];
const MACROS: [&str; 19] = [
    "Fhat",
    "Phat",
    "Lower",
    "Higher",
    "SameCourt",
    "Supporting",
    "PBinding",
    "PwOver",
    "POverruling",
    "POverrulingAll",
    "Against",
    "According",
    "AccordingAll",
    "Iota",
    "Binding",
    "BestBinding",
    "Cl",
    "Incuriam",
    "Overruled",
];

/// Whether `word` is reserved when it stands in atom position.
pub(crate) fn is_keyword(word: &str) -> bool {
    NULLARY.contains(&word)
}

impl<B: Builder> Parser<'_, '_, B> {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.1.clone());
        self.i += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.i += 1;
                Ok(())
            }
            Some(t) => self.err(format!("expected {tok}, found {t}")),
            None => self.err(format!("expected {tok}, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            Some(t) => self.err(format!("expected identifier, found {t}")),
            None => self.err("expected identifier, found end of input"),
        }
    }

    fn formula(&mut self) -> Result<B::F, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.i += 1;
            let rhs = self.formula()?;
            return Ok(self.ex.builder().implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<B::F, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.i += 1;
            let rhs = self.conjunction()?;
            acc = self.ex.builder().or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<B::F, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.i += 1;
            let rhs = self.unary()?;
            acc = self.ex.builder().and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<B::F, ParseError> {
        let op = match self.peek() {
            Some(Tok::Not | Tok::Box | Tok::Diamond | Tok::TBox | Tok::TDiamond | Tok::RBox | Tok::RDiamond) => {
                self.bump().unwrap()
            }
            Some(Tok::At) => {
                self.i += 1;
                let n = self.ident()?;
                let body = self.unary()?;
                return Ok(self.ex.at(&n, body));
            }
            _ => return self.primary(),
        };
        let x = self.unary()?;
        let a = self.ex.builder();
        Ok(match op {
            Tok::Not => a.not(x),
            Tok::Box => a.boxed(x),
            Tok::Diamond => a.diamond(x),
            Tok::TBox => a.tbox(x),
            Tok::TDiamond => a.tdiamond(x),
            Tok::RBox => a.rbox(x),
            Tok::RDiamond => a.rdiamond(x),
            _ => unreachable!(),
        })
    }

    fn primary(&mut self) -> Result<B::F, ParseError> {
        let start = self.pos();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(word)) => {
                let called = self.peek2() == Some(&Tok::LParen);
                self.i += 1;
                match word.as_str() {
                    "t" if called => {
                        self.i += 1;
                        let v = match self.bump() {
                            Some(Tok::Ident(d)) if d == "0" => Val::Zero,
                            Some(Tok::Ident(d)) if d == "1" => Val::One,
                            Some(Tok::Question) => Val::Unknown,
                            _ => return Err(ParseError::Syntax { pos: start, msg: "t( expects 0, 1 or ?".into() }),
                        };
                        self.expect(Tok::RParen)?;
                        Ok(self.ex.builder().dec(v))
                    }
                    "H" | "B" if called => {
                        self.i += 1;
                        let a = self.ident()?;
                        self.expect(Tok::Comma)?;
                        let b = self.ident()?;
                        self.expect(Tok::RParen)?;
                        Ok(if word == "H" { self.ex.builder().h(&a, &b) } else { self.ex.builder().b(&a, &b) })
                    }
                    w if NULLARY.contains(&w) => {
                        if called {
                            self.i += 1;
                            self.expect(Tok::RParen)?;
                        }
                        self.expand(start, w, Vec::new())
                    }
                    w if called && MACROS.contains(&w) => {
                        self.i += 1;
                        let args = self.args()?;
                        self.expand(start, w, args)
                    }
                    _ => Ok(self.ex.builder().atom(&word)),
                }
            }
            Some(t) => self.err(format!("unexpected {t}")),
            None => self.err("unexpected end of input"),
        }
    }

    /// Parses a comma-separated argument list after the opening parenthesis.
    fn args(&mut self) -> Result<Vec<Arg<B::F>>, ParseError> {
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.i += 1;
            return Ok(args);
        }
        loop {
            let bare =
                matches!(self.peek(), Some(Tok::Ident(_))) && matches!(self.peek2(), Some(Tok::Comma | Tok::RParen));
            let arg = match self.peek() {
                Some(Tok::Ident(w)) if bare && !is_keyword(w) => Arg::Ident(self.ident()?),
                _ => Arg::Formula(self.formula()?),
            };
            args.push(arg);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => return Ok(args),
                _ => {
                    self.i -= 1;
                    return self.err("expected `,` or `)` in argument list");
                }
            }
        }
    }

    fn expand(&mut self, pos: usize, name: &str, args: Vec<Arg<B::F>>) -> Result<B::F, ParseError> {
        let got = args.len();
        let arity = |expected: &'static str| ParseError::Arity { pos, name: name.to_string(), got, expected };
        let wrap = |source: ExpandError| ParseError::Expand { pos, source };
        let mut names = Vec::new();
        let mut formula = None;
        // leading identifiers are names/courts, a trailing one may also be a formula (an atom)
        let names_only = matches!(name, "PwOver" | "Iota" | "Cl");
        for (k, a) in args.into_iter().enumerate() {
            match a {
                Arg::Ident(s) if k + 1 < got || names_only => names.push(s),
                Arg::Ident(s) => {
                    formula = Some(self.ex.builder().atom(&s));
                    names.push(s);
                }
                Arg::Formula(f) if k + 1 == got => formula = Some(f),
                Arg::Formula(_) => {
                    return Err(ParseError::Syntax { pos, msg: format!("argument {} of {name} must be a name", k + 1) })
                }
            }
        }
        let ex = &mut *self.ex;
        let phi = || {
            formula.ok_or_else(|| ParseError::Syntax { pos, msg: format!("last argument of {name} must be a formula") })
        };
        let name_at = |k: usize| -> Result<&str, ParseError> {
            names
                .get(k)
                .map(String::as_str)
                .ok_or_else(|| ParseError::Syntax { pos, msg: format!("argument {} of {name} must be a name", k + 1) })
        };
        Ok(match (name, got) {
            ("Fhat", 1) => ex.fhat_any(phi()?),
            ("Fhat", 2) => ex.fhat(name_at(0)?, phi()?),
            ("Fhat", _) => return Err(arity("1 or 2")),
            ("Phat", 1) => ex.phat_any(phi()?),
            ("Phat", 3) => ex.phat(name_at(0)?, name_at(1)?, phi()?),
            ("Phat", _) => return Err(arity("1 or 3")),
            ("Lower", 1) => ex.lower(phi()?),
            ("Higher", 1) => ex.higher(phi()?),
            ("SameCourt", 1) => ex.same_court(phi()?),
            ("AccordingAll", 1) => ex.according_all(phi()?),
            ("POverrulingAll", 1) => ex.poverruling_all(phi()?),
            ("Lower" | "Higher" | "SameCourt" | "AccordingAll" | "POverrulingAll", _) => return Err(arity("1")),
            ("Against", 1) => ex.against_any(phi()?),
            ("POverruling", 1) => ex.poverruling_any(phi()?),
            ("Against", 3) => ex.against(name_at(0)?, name_at(1)?, phi()?),
            ("POverruling", 3) => ex.poverruling(name_at(0)?, name_at(1)?, phi()?),
            ("Against" | "POverruling", _) => return Err(arity("1 or 3")),
            ("Supporting", 3) => ex.supporting(name_at(0)?, name_at(1)?, phi()?),
            ("PBinding", 3) => ex.pbinding(name_at(0)?, name_at(1)?, phi()?),
            ("According", 3) => ex.according(name_at(0)?, name_at(1)?, phi()?),
            ("Supporting" | "PBinding" | "According", _) => return Err(arity("3")),
            ("PwOver", 1) => ex.pw_over(name_at(0)?),
            ("PwOver", _) => return Err(arity("1")),
            ("Iota", 1) => {
                let level: usize = name_at(0)?
                    .parse()
                    .map_err(|_| ParseError::Syntax { pos, msg: "Iota expects a positive integer level".into() })?;
                ex.iota(level).map_err(wrap)?
            }
            ("Iota", _) => return Err(arity("1")),
            ("Incuriam", 0) => ex.incuriam().map_err(wrap)?,
            ("Overruled", 0) => ex.overruled().map_err(wrap)?,
            ("Binding", 2) => ex.binding(name_at(0)?, phi()?).map_err(wrap)?,
            ("BestBinding", 2) => ex.best_binding(name_at(0)?, phi()?).map_err(wrap)?,
            ("Binding" | "BestBinding", _) => return Err(arity("2")),
            ("Cl", 2) => {
                let o = match name_at(1)? {
                    "0" => Val::Zero,
                    "1" => Val::One,
                    _ => return Err(ParseError::Syntax { pos, msg: "Cl expects outcome 0 or 1".into() }),
                };
                ex.cl(name_at(0)?, o).map_err(wrap)?
            }
            ("Cl", _) => return Err(arity("2")),
            _ => unreachable!("macro table and expansion table disagree on {name}"),
        })
    }
}

/// Parses `text` with a fresh [`Expander`] using the default configuration.
pub fn parse(arena: &mut Arena, ctx: &NamedContext, text: &str) -> Result<NodeId, ParseError> {
    let mut ex = Expander::new(arena, ctx);
    parse_with(&mut ex, text)
}

/// Parses `text`, expanding macros through `ex` (and reusing its caches).
pub fn parse_with<B: Builder>(ex: &mut Expander<'_, B>, text: &str) -> Result<B::F, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, end: text.len(), ex };
    let f = p.formula()?;
    if let Some(t) = p.peek() {
        let t = t.clone();
        return p.err(format!("unexpected {t} after complete formula"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Node;

    fn ctx() -> NamedContext {
        NamedContext::new(vec!["n1".into(), "n2".into()], vec!["c0".into(), "c1".into()])
    }

    #[test]
    fn at_operator() {
        let c = ctx();
        let mut a = Arena::new();
        let f = parse(&mut a, &c, "@n1 t(1)").unwrap();
        let n1 = a.atom("n1");
        let one = a.dec(Val::One);
        let nd = a.not(one);
        let conj = a.and(n1, nd);
        let imp = a.not(conj);
        assert_eq!(f, a.boxed(imp));
    }

    #[test]
    fn core_connectives() {
        let c = ctx();
        let mut a = Arena::new();
        let f = parse(&mut a, &c, "t(1) & ~t(0)").unwrap();
        let one = a.dec(Val::One);
        let zero = a.dec(Val::Zero);
        let nz = a.not(zero);
        assert_eq!(f, a.and(one, nz));
    }

    #[test]
    fn precedence_and_associativity() {
        let c = ctx();
        let mut a = Arena::new();
        let f = parse(&mut a, &c, "p | q & r -> s -> u").unwrap();
        let g = parse(&mut a, &c, "((p | (q & r)) -> (s -> u))").unwrap();
        assert_eq!(f, g);
        let f = parse(&mut a, &c, "~[]p & <T>q").unwrap();
        let g = parse(&mut a, &c, "(~([]p)) & (<T>q)").unwrap();
        assert_eq!(f, g);
        let f = parse(&mut a, &c, "p & q & r").unwrap();
        let g = parse(&mut a, &c, "(p & q) & r").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn fhat_matches_expander() {
        let c = ctx();
        let mut a = Arena::new();
        let f = parse(&mut a, &c, "Fhat(n1, t(0))").unwrap();
        let mut ex = Expander::new(&mut a, &c);
        let z = ex.builder().dec(Val::Zero);
        assert_eq!(f, ex.fhat("n1", z));
    }

    #[test]
    fn names_with_stars_and_relations() {
        let c = ctx();
        let mut a = Arena::new();
        let f = parse(&mut a, &c, "PBinding(n*, n5, t(0)) & H(c0,c1) & B(c1, c1)").unwrap();
        assert!(matches!(a.node(f), Node::And(..)));
        let g = parse(&mut a, &c, "Lower(n2)").unwrap();
        let mut ex = Expander::new(&mut a, &c);
        let n2 = ex.builder().atom("n2");
        assert_eq!(g, ex.lower(n2));
    }

    #[test]
    fn errors_have_positions() {
        let c = ctx();
        let mut a = Arena::new();
        match parse(&mut a, &c, "p & ") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse(&mut a, &c, "p $ q") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(&mut a, &c, "Supporting(n1, p)"), Err(ParseError::Arity { got: 2, .. })));
        assert!(matches!(parse(&mut a, &c, "t(2)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse(&mut a, &c, "(p"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse(&mut a, &c, "p q"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse(&mut a, &c, "Iota(0)"), Err(ParseError::Expand { source: ExpandError::ZeroIota, .. })));
    }

    #[test]
    fn nullary_macros_with_and_without_parens() {
        let c = ctx();
        let mut a = Arena::new();
        let x = parse(&mut a, &c, "Incuriam").unwrap();
        let y = parse(&mut a, &c, "Incuriam()").unwrap();
        assert_eq!(x, y);
        let cl = parse(&mut a, &c, "Cl(n1, 0)").unwrap();
        assert!(cl.index() > x.index());
    }

    #[test]
    fn plain_identifier_named_like_relation() {
        let c = ctx();
        let mut a = Arena::new();
        let f = parse(&mut a, &c, "H & B & t").unwrap();
        let h = a.atom("H");
        let b = a.atom("B");
        let t = a.atom("t");
        let hb = a.and(h, b);
        assert_eq!(f, a.and(hb, t));
    }
}
