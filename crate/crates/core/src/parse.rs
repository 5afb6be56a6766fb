//! Parser for the ASCII concrete syntax of formulas, sequents, and
//! T-sequents. The printer in `formula` emits exactly this syntax, and
//! parsing printed output reproduces the original term.
//!
//! ```text
//! formula  := implies
//! implies  := or ( "->" implies )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | "D" "{" agents "}" unary
//!           | "<" "D" "{" agents "}" ">" unary | atom
//! atom     := "false" | "true" | ident | "(" formula ")"
//! agents   := ident ( "," ident )*
//! ident    := [A-Za-z0-9_]+
//! sequent  := multiset? "=>" multiset?
//! tsequent := multiset? "|" sequent
//! multiset := formula ( "," formula )*
//! ```
//!
//! In a T-sequent the store separator is the first `|` outside parentheses
//! and braces; store members must be boxed, so the separator is unambiguous.

use std::fmt;

use thiserror::Error;

use crate::formula::{AgentUniverse, Formula, Group};
use crate::multiset::FormulaMultiset;
use crate::sequents::{Sequent, TSequent};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        Self { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    FatArrow,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Lt,
    Gt,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "`{name}`"),
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::FatArrow => "`=>`",
            Tok::Comma => "`,`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
        };
        f.write_str(s)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Rewrites Unicode operator spellings to their ASCII forms. Error offsets
/// for such input refer to the rewritten text.
fn normalize_unicode(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '¬' => out.push('~'),
            '∧' => out.push('&'),
            '∨' => out.push('|'),
            '→' => out.push_str("->"),
            '⇒' => out.push_str("=>"),
            '⊥' => out.push_str(" false "),
            '⊤' => out.push_str(" true "),
            '⟨' | '〈' => out.push('<'),
            '⟩' | '〉' => out.push('>'),
            other => out.push(other),
        }
    }
    out
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    if !text.is_ascii() {
        return tokenize_owned(&normalize_unicode(text));
    }
    tokenize_owned(text)
}

fn tokenize_owned(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Arrow));
                i += 2;
                continue;
            }
            '=' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::FatArrow));
                i += 2;
                continue;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < bytes.len() && is_ident_char(bytes[i] as char) {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ParseError::new(i, format!("unexpected character `{other}`")));
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    universe: Option<&'a AgentUniverse>,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [(usize, Tok)], end: usize, universe: Option<&'a AgentUniverse>) -> Self {
        Self { toks, pos: 0, end, universe }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::new(self.here(), format!("expected {want}, found {t}"))),
            None => Err(ParseError::new(self.end, format!("expected {want}, found end of input"))),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::new(self.here(), format!("unexpected {t} after complete input"))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.or_chain()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn or_chain(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and_chain()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let next = self.and_chain()?;
            acc = Formula::or(acc, next);
        }
        Ok(acc)
    }

    fn and_chain(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let next = self.unary()?;
            acc = Formula::and(acc, next);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(name)) if name == "D" && self.toks.get(self.pos + 1).map(|(_, t)| t) == Some(&Tok::LBrace) => {
                self.pos += 1;
                let group = self.group()?;
                Ok(Formula::dist(group, self.unary()?))
            }
            Some(Tok::Lt) => {
                self.pos += 1;
                let at = self.here();
                match self.bump() {
                    Some(Tok::Ident(name)) if name == "D" => {}
                    _ => return Err(ParseError::new(at, "expected `D` after `<`")),
                }
                let group = self.group()?;
                self.expect(&Tok::Gt)?;
                Ok(Formula::dia(group, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.bump().cloned() {
            Some(Tok::Ident(name)) => match name.as_str() {
                "false" => Ok(Formula::bottom()),
                "true" => Ok(Formula::top()),
                _ => Ok(Formula::var(name)),
            },
            Some(Tok::LParen) => {
                let inner = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => Err(ParseError::new(at, format!("expected a formula, found {t}"))),
            None => Err(ParseError::new(at, "expected a formula, found end of input")),
        }
    }

    fn group(&mut self) -> Result<Group, ParseError> {
        let open_at = self.here();
        self.expect(&Tok::LBrace)?;
        let mut members = Vec::new();
        loop {
            let at = self.here();
            match self.bump().cloned() {
                Some(Tok::Ident(name)) => members.push((at, name)),
                Some(t) => return Err(ParseError::new(at, format!("expected an agent name, found {t}"))),
                None => return Err(ParseError::new(at, "expected an agent name, found end of input")),
            }
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                _ => {
                    let at = self.here();
                    return Err(ParseError::new(at, "expected `,` or `}` in agent group"));
                }
            }
        }
        if let Some(universe) = self.universe {
            for (at, name) in &members {
                if !universe.contains(name) {
                    return Err(ParseError::new(*at, format!("unknown agent name `{name}`")));
                }
            }
        }
        Group::new(members.into_iter().map(|(_, name)| name))
            .map_err(|e| ParseError::new(open_at, e.to_string()))
    }

    /// `formula ("," formula)*`, or nothing when the next token (or the end)
    /// cannot begin a formula member.
    fn multiset(&mut self, stop: &[Tok]) -> Result<FormulaMultiset, ParseError> {
        let mut m = FormulaMultiset::new();
        let at_stop = |t: Option<&Tok>| match t {
            None => true,
            Some(t) => stop.contains(t),
        };
        if at_stop(self.peek()) {
            return Ok(m);
        }
        loop {
            m.insert(self.formula()?);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(m)
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let antecedent = self.multiset(&[Tok::FatArrow])?;
        self.expect(&Tok::FatArrow)?;
        let succedent = self.multiset(&[])?;
        Ok(Sequent::new(antecedent, succedent))
    }
}

fn parse_with<T>(
    text: &str,
    universe: Option<&AgentUniverse>,
    f: impl FnOnce(&mut Parser<'_>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser::new(&toks, text.len(), universe);
    let value = f(&mut parser)?;
    parser.expect_end()?;
    Ok(value)
}

/// Parses a formula, checking every agent name against the universe.
pub fn parse_formula(text: &str, universe: &AgentUniverse) -> Result<Formula, ParseError> {
    parse_with(text, Some(universe), |p| p.formula())
}

/// Parses a formula without an agent-universe check.
pub fn parse_formula_unchecked(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, None, |p| p.formula())
}

/// Parses `Γ => Δ`, either side possibly empty.
pub fn parse_sequent(text: &str, universe: &AgentUniverse) -> Result<Sequent, ParseError> {
    parse_with(text, Some(universe), |p| p.sequent())
}

/// Parses a sequent without an agent-universe check.
pub fn parse_sequent_unchecked(text: &str) -> Result<Sequent, ParseError> {
    parse_with(text, None, |p| p.sequent())
}

/// Parses `Σ | Γ => Δ`. The store separator bar is required even when the
/// store is empty, and store members must be boxed formulas.
pub fn parse_tsequent(text: &str, universe: &AgentUniverse) -> Result<TSequent, ParseError> {
    parse_tsequent_inner(text, Some(universe))
}

/// Parses a T-sequent without an agent-universe check.
pub fn parse_tsequent_unchecked(text: &str) -> Result<TSequent, ParseError> {
    parse_tsequent_inner(text, None)
}

fn parse_tsequent_inner(text: &str, universe: Option<&AgentUniverse>) -> Result<TSequent, ParseError> {
    let toks = tokenize(text)?;
    let mut depth = 0usize;
    let mut split = None;
    for (i, (_, tok)) in toks.iter().enumerate() {
        match tok {
            Tok::LParen | Tok::LBrace => depth += 1,
            Tok::RParen | Tok::RBrace => depth = depth.saturating_sub(1),
            Tok::Pipe if depth == 0 => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    let Some(split) = split else {
        return Err(ParseError::new(
            text.len(),
            "T-sequent requires a `|` between the store and the antecedent",
        ));
    };

    let mut store_parser = Parser::new(&toks[..split], text.len(), universe);
    let store = store_parser.multiset(&[])?;
    store_parser.expect_end()?;

    let mut body_parser = Parser::new(&toks[split + 1..], text.len(), universe);
    let body = body_parser.sequent()?;
    body_parser.expect_end()?;

    TSequent::new(store, body.antecedent, body.succedent)
        .map_err(|e| ParseError::new(0, e.to_string()))
}
