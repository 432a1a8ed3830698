use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Name;

/// Element of the explanation set: the self-evident explanation `e`, a named
/// base explanation, or the combination `(s.t)` of two explanations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExplanationTerm {
    SelfEvident,
    Base(Name),
    Combine(Arc<ExplanationTerm>, Arc<ExplanationTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad explanation term `{text}` at byte {offset}: {message}")]
pub struct TermParseError {
    pub text: String,
    pub offset: usize,
    pub message: &'static str,
}

impl ExplanationTerm {
    pub fn base(name: &str) -> ExplanationTerm {
        if name == "e" {
            ExplanationTerm::SelfEvident
        } else {
            ExplanationTerm::Base(Arc::from(name))
        }
    }

    pub fn combine(l: &ExplanationTerm, r: &ExplanationTerm) -> ExplanationTerm {
        ExplanationTerm::Combine(Arc::new(l.clone()), Arc::new(r.clone()))
    }

    pub fn parse(text: &str) -> Result<ExplanationTerm, TermParseError> {
        let toks = tokens(text);
        let mut pos = 0;
        let t = parse_term(text, &toks, &mut pos)?;
        if pos != toks.len() {
            return Err(term_err(text, &toks, pos, "trailing input"));
        }
        Ok(t)
    }
}

/// Punctuation characters and whole identifiers, each with its byte offset.
fn tokens(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut prev_ident = false;
    for (i, c) in text.char_indices() {
        let ident = c.is_ascii_alphanumeric() || c == '_';
        if ident && prev_ident {
            out.last_mut().expect("identifier in progress").1.push(c);
        } else if !c.is_whitespace() {
            out.push((i, c.to_string()));
        }
        prev_ident = ident;
    }
    out
}

fn term_err(text: &str, toks: &[(usize, String)], pos: usize, message: &'static str) -> TermParseError {
    TermParseError { text: text.to_string(), offset: toks.get(pos).map(|t| t.0).unwrap_or(text.len()), message }
}

fn parse_term(text: &str, toks: &[(usize, String)], pos: &mut usize) -> Result<ExplanationTerm, TermParseError> {
    let tok = toks.get(*pos).map(|t| t.1.as_str());
    match tok {
        Some("(") => {
            *pos += 1;
            let l = parse_term(text, toks, pos)?;
            match toks.get(*pos).map(|t| t.1.as_str()) {
                Some(".") | Some("·") => *pos += 1,
                _ => return Err(term_err(text, toks, *pos, "expected `.`")),
            }
            let r = parse_term(text, toks, pos)?;
            match toks.get(*pos).map(|t| t.1.as_str()) {
                Some(")") => *pos += 1,
                _ => return Err(term_err(text, toks, *pos, "expected `)`")),
            }
            Ok(ExplanationTerm::Combine(Arc::new(l), Arc::new(r)))
        }
        Some(name) if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
            *pos += 1;
            Ok(ExplanationTerm::base(name))
        }
        _ => Err(term_err(text, toks, *pos, "expected a term")),
    }
}

impl fmt::Display for ExplanationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExplanationTerm::SelfEvident => f.write_str("e"),
            ExplanationTerm::Base(n) => f.write_str(n),
            ExplanationTerm::Combine(l, r) => write!(f, "({l}.{r})"),
        }
    }
}

impl fmt::Debug for ExplanationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
