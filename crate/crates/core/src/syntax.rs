//! Text syntax for formulas, sequents and one-sided sequents.
//!
//! ```text
//! formula  := impl
//! impl     := atomf ("->" impl)?          right associative
//! atomf    := ATOM | "(" formula ")"
//! sequent  := [formula ("," formula)*] "=>" formula
//! nnf      := "~"? ATOM | "(" nnf ("&" | "|") nnf ")"
//! onesided := [nnf ("," nnf)*]
//! ATOM     := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Printing of formulas and sequents lives in their `Display` impls.

use std::fmt;

use thiserror::Error;

use crate::formula::{Atom, Formula, Sequent};
use crate::onesided::{Nnf, OneSidedSequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: Location,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Arrow,
    Turnstile,
    LParen,
    RParen,
    Comma,
    Tilde,
    Amp,
    Bar,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Atom(a) => write!(f, "atom `{a}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Turnstile => f.write_str("`=>`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Location)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = Location { line, column };
        let err = |message: String| ParseError {
            location: here,
            message,
        };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    name.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Atom(name), here));
            continue;
        }
        chars.next();
        column += 1;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '-' | '=' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    column += 1;
                    if c == '-' {
                        Tok::Arrow
                    } else {
                        Tok::Turnstile
                    }
                } else {
                    return Err(err(format!("expected `{c}>`")));
                }
            }
            _ => return Err(err(format!("unexpected character {c:?}"))),
        };
        out.push((tok, here));
    }
    out.push((Tok::Eof, Location { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Location)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn location(&self) -> Location {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            location: self.location(),
            message: format!("expected {expected}, found {}", self.peek()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.to_string())
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.atomic_formula()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.formula()?;
            Ok(Formula::imp(left, right))
        } else {
            Ok(left)
        }
    }

    fn atomic_formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Atom(name) => {
                self.bump();
                Ok(Formula::Atom(atom(&name)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.error("formula"),
        }
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let mut ante = Vec::new();
        if *self.peek() != Tok::Turnstile {
            ante.push(self.formula()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                ante.push(self.formula()?);
            }
        }
        if *self.peek() != Tok::Turnstile {
            return self.error("`,` or `=>`");
        }
        self.bump();
        let succ = self.formula()?;
        Ok(Sequent::new(ante, succ))
    }

    fn nnf(&mut self) -> Result<Nnf, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                match self.bump() {
                    Tok::Atom(name) => Ok(Nnf::Lit(atom(&name), false)),
                    _ => {
                        self.pos -= 1;
                        self.error("atom after `~`")
                    }
                }
            }
            Tok::Atom(name) => {
                self.bump();
                Ok(Nnf::Lit(atom(&name), true))
            }
            Tok::LParen => {
                self.bump();
                let left = self.nnf()?;
                let conj = match self.peek() {
                    Tok::Amp => true,
                    Tok::Bar => false,
                    _ => return self.error("`&` or `|`"),
                };
                self.bump();
                let right = self.nnf()?;
                self.expect(Tok::RParen)?;
                Ok(if conj {
                    Nnf::And(Box::new(left), Box::new(right))
                } else {
                    Nnf::Or(Box::new(left), Box::new(right))
                })
            }
            _ => self.error("negation-normal formula"),
        }
    }
}

fn atom(name: &str) -> Atom {
    Atom::new(name).expect("lexer only produces valid atom names")
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_nnf(text: &str) -> Result<Nnf, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.nnf()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_one_sided(text: &str) -> Result<OneSidedSequent, ParseError> {
    let mut p = Parser::new(text)?;
    let mut items = Vec::new();
    if *p.peek() != Tok::Eof {
        items.push(p.nnf()?);
        while *p.peek() == Tok::Comma {
            p.bump();
            items.push(p.nnf()?);
        }
    }
    p.finish()?;
    Ok(OneSidedSequent::new(items))
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn print_sequent(s: &Sequent) -> String {
    s.to_string()
}
