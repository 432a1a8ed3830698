//! Concrete syntax.
//!
//! ```text
//! formula := imp ( "<->" formula )?
//! imp     := or ( "->" imp )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | "K{a}" unary | "Ky{a}" unary | "Kyr{a}(" formula "," formula ")"
//!          | "[" formula "]" unary | "<" formula ">" unary
//!          | atom | "top" | "bot" | "(" formula ")"
//! ```
//!
//! Unicode spellings (`¬ ∧ ∨ → ↔ ⊤ ⊥ ⟨ ⟩`) are accepted as well.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    Top,
    Bot,
    K,
    Ky,
    Kyr,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Lt,
    Gt,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::Not => "~",
        Tok::And => "&",
        Tok::Or => "|",
        Tok::Imp => "->",
        Tok::Iff => "<->",
        Tok::Top => "top",
        Tok::Bot => "bot",
        Tok::K => "K",
        Tok::Ky => "Ky",
        Tok::Kyr => "Kyr",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Lt => "<",
        Tok::Gt => ">",
        Tok::Comma => ",",
        Tok::Ident(_) | Tok::Eof => "",
    }
}

const SYMBOLS: &[(&str, Tok)] = &[
    ("<->", Tok::Iff),
    ("->", Tok::Imp),
    ("/\\", Tok::And),
    ("\\/", Tok::Or),
    ("~", Tok::Not),
    ("!", Tok::Not),
    ("¬", Tok::Not),
    ("&", Tok::And),
    ("∧", Tok::And),
    ("|", Tok::Or),
    ("∨", Tok::Or),
    ("→", Tok::Imp),
    ("↔", Tok::Iff),
    ("⊤", Tok::Top),
    ("⊥", Tok::Bot),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("[", Tok::LBrack),
    ("]", Tok::RBrack),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("<", Tok::Lt),
    ("⟨", Tok::Lt),
    (">", Tok::Gt),
    ("⟩", Tok::Gt),
    (",", Tok::Comma),
];

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let mut i = 0;
        'outer: while i < src.len() {
            let rest = &src[i..];
            let c = rest.chars().next().unwrap_or(' ');
            if c.is_whitespace() {
                i += c.len_utf8();
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let len = rest.find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_')).unwrap_or(rest.len());
                let word = &rest[..len];
                let tok = match word {
                    "K" => Tok::K,
                    "Ky" => Tok::Ky,
                    "Kyr" => Tok::Kyr,
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    w if w.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_') => {
                        Tok::Ident(w.to_string())
                    }
                    w => return Err(error_at(src, i, format!("unknown operator token `{w}`"))),
                };
                lx.toks.push((tok, i));
                i += len;
                continue;
            }
            for (sym, tok) in SYMBOLS {
                if rest.starts_with(sym) {
                    lx.toks.push((tok.clone(), i));
                    i += sym.len();
                    continue 'outer;
                }
            }
            return Err(error_at(src, i, format!("unknown operator token `{c}`")));
        }
        lx.toks.push((Tok::Eof, lx.src.len()));
        Ok(lx.toks)
    }
}

fn error_at(src: &str, offset: usize, message: String) -> ParseError {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    ParseError { offset, line, column, message }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(error_at(self.src, self.offset(), msg.into()))
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{}`, found {}", symbol(&want), self.peek()))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn agent(&mut self) -> Result<Arc<str>, ParseError> {
        self.expect(Tok::LBrace)?;
        let name = match self.bump() {
            Tok::Ident(s) => s,
            other => {
                self.pos -= 1;
                return self.fail(format!("expected agent name, found {other}"));
            }
        };
        self.expect(Tok::RBrace)?;
        Ok(Arc::from(name.as_str()))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::K => {
                self.bump();
                let a = self.agent()?;
                Ok(Formula::K(a, Arc::new(self.unary()?)))
            }
            Tok::Ky => {
                self.bump();
                let a = self.agent()?;
                Ok(Formula::Ky(a, Arc::new(self.unary()?)))
            }
            Tok::Kyr => {
                self.bump();
                let a = self.agent()?;
                self.expect(Tok::LParen)?;
                let cond = self.formula()?;
                self.expect(Tok::Comma)?;
                let body = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::KyR(a, Arc::new(cond), Arc::new(body)))
            }
            Tok::LBrack => {
                self.bump();
                let ann = self.formula()?;
                self.expect(Tok::RBrack)?;
                Ok(Formula::announce(ann, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let ann = self.formula()?;
                self.expect(Tok::Gt)?;
                Ok(Formula::diamond(ann, self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::bot())
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::atom(&name))
            }
            other => self.fail(format!("expected a formula, found {other}")),
        }
    }
}

/// Parses a formula; derived connectives are expanded into the core constructors.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    if text.trim().is_empty() {
        return Err(error_at(text, 0, "empty formula".into()));
    }
    let toks = Lexer::run(text)?;
    let mut p = Parser { src: text, toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.fail(format!("unexpected {}", p.peek()));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
