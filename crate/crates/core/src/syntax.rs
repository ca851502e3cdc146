//! Lexer and recursive-descent parser shared by the text formats: terms,
//! formulas, problem files and model files.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! formula  := ("forall" | "exists") ident+ "." formula | implies
//! implies  := disj ("->" formula)?
//! disj     := conj ("|" conj)*
//! conj     := unary ("&" unary)*
//! unary    := "~" unary | "(" formula ")" | "$true" | "$false" | atom
//! atom     := ident "(" term ("," term)* ")"
//! term     := ident ("(" term ("," term)* ")")?
//! ```
//!
//! Inside a formula an identifier in term position is a variable when bound
//! by an enclosing quantifier (or declared by the caller), else a constant.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{Formula, PredicateSymbol};
use crate::terms::{Name, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Slash,
    Equals,
    Tilde,
    Amp,
    Bar,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

pub fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes `text`; `line` and `col0` locate its first character in the
/// enclosing file (1-based).
pub fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut ln = line;
    let mut line_start = 0usize;
    let mut first_line = true;
    while i < chars.len() {
        let c = chars[i];
        let col = if first_line { col0 + i - line_start } else { i - line_start + 1 };
        if c == '\n' {
            ln += 1;
            i += 1;
            line_start = i;
            first_line = false;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '/' => Some(Tok::Slash),
            '=' => Some(Tok::Equals),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, ln, col));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, ln, col));
            i += 2;
        } else if is_ident_char(c) || c == '$' {
            let start = i;
            i += 1;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), ln, col));
        } else {
            return Err(SyntaxError {
                line: ln,
                col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Token cursor with position-aware diagnostics.
pub struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    pub fn new(text: &str, line: usize, col0: usize) -> Result<Parser, SyntaxError> {
        let toks = lex(text, line, col0)?;
        let end = match text.rfind('\n') {
            Some(i) => (line + text.matches('\n').count(), text[i + 1..].chars().count() + 1),
            None => (line, col0 + text.chars().count()),
        };
        Ok(Parser { toks, pos: 0, end })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.0)
    }

    /// Position of the next token (or of the end of input).
    pub fn location(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = self.location();
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !s.starts_with('$') => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn number(&mut self) -> Result<usize, SyntaxError> {
        let loc = self.error("");
        let s = self.ident()?;
        s.parse().map_err(|_| SyntaxError {
            message: format!("expected a number, found `{s}`"),
            ..loc
        })
    }

    pub fn finish(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// Parses a term; identifiers in `vars` (or `bound`) become variables.
    pub fn term(&mut self, vars: &BTreeSet<Name>, bound: &[Name]) -> Result<Term, SyntaxError> {
        let name = self.ident()?;
        if self.eat(&Tok::LParen) {
            let mut args = vec![self.term(vars, bound)?];
            while self.eat(&Tok::Comma) {
                args.push(self.term(vars, bound)?);
            }
            self.expect(&Tok::RParen)?;
            return Ok(Term::app(name, args));
        }
        if bound.iter().any(|b| **b == *name) || vars.contains(name.as_str()) {
            Ok(Term::var(name))
        } else {
            Ok(Term::constant(name))
        }
    }

    pub fn formula(&mut self, vars: &BTreeSet<Name>, bound: &mut Vec<Name>) -> Result<Formula, SyntaxError> {
        let quant = match self.peek() {
            Some(Tok::Ident(s)) if s == "forall" || s == "exists" => Some(s == "forall"),
            _ => None,
        };
        if let Some(universal) = quant {
            self.pos += 1;
            let mut names = vec![Name::from(self.ident()?)];
            while let Some(Tok::Ident(_)) = self.peek() {
                names.push(Name::from(self.ident()?));
            }
            self.expect(&Tok::Dot)?;
            let depth = bound.len();
            bound.extend(names.iter().cloned());
            let body = self.formula(vars, bound);
            bound.truncate(depth);
            let body = body?;
            return Ok(if universal {
                Formula::forall(names, body)
            } else {
                Formula::exists(names, body)
            });
        }
        let lhs = self.disjunction(vars, bound)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula(vars, bound)?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self, vars: &BTreeSet<Name>, bound: &mut Vec<Name>) -> Result<Formula, SyntaxError> {
        let mut parts = vec![self.conjunction(vars, bound)?];
        while self.eat(&Tok::Bar) {
            parts.push(self.conjunction(vars, bound)?);
        }
        Ok(Formula::or(parts))
    }

    fn conjunction(&mut self, vars: &BTreeSet<Name>, bound: &mut Vec<Name>) -> Result<Formula, SyntaxError> {
        let mut parts = vec![self.unary(vars, bound)?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary(vars, bound)?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self, vars: &BTreeSet<Name>, bound: &mut Vec<Name>) -> Result<Formula, SyntaxError> {
        if self.eat(&Tok::Tilde) {
            return Ok(self.unary(vars, bound)?.not());
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula(vars, bound)?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        match self.peek() {
            Some(Tok::Ident(s)) if s == "$true" => {
                self.pos += 1;
                return Ok(Formula::truth());
            }
            Some(Tok::Ident(s)) if s == "$false" => {
                self.pos += 1;
                return Ok(Formula::falsity());
            }
            _ => {}
        }
        let name = self.ident()?;
        self.expect(&Tok::LParen)?;
        let mut args = vec![self.term(vars, bound)?];
        while self.eat(&Tok::Comma) {
            args.push(self.term(vars, bound)?);
        }
        self.expect(&Tok::RParen)?;
        let pred = PredicateSymbol::new(name, args.len());
        Ok(Formula::Atom(pred, args))
    }
}

/// Parses a term in which the identifiers in `vars` denote variables.
pub fn parse_term(text: &str, vars: &BTreeSet<Name>) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, 1, 1)?;
    let t = p.term(vars, &[])?;
    p.finish()?;
    Ok(t)
}

pub fn parse_ground_term(text: &str) -> Result<Term, SyntaxError> {
    parse_term(text, &BTreeSet::new())
}

/// Parses a formula; only quantifier-bound identifiers are variables.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_with_vars(text, &BTreeSet::new())
}

/// Parses a formula in which `vars` are additionally free variables.
pub fn parse_formula_with_vars(text: &str, vars: &BTreeSet<Name>) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, 1, 1)?;
    let f = p.formula(vars, &mut Vec::new())?;
    p.finish()?;
    Ok(f)
}
