//! The line-based problem file format.
//!
//! ```text
//! Ops f:1 s:1 a:0
//! Vars x
//! TRS
//!   f(x) -> f(s(s(x)))
//! Initial basis
//!   f(a)
//! Unsafe automaton
//!   States q0 q1
//!   Final q1
//!   Transitions
//!     a -> q0
//!     s(q0) -> q1
//!     f(q1) -> q1
//! Options
//!   strategy any
//!   reflexivity on
//! ```
//!
//! `#` starts a comment. A transition whose left side is a single state is
//! an epsilon transition.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::automaton::{State, TreeAutomaton, Transition};
use crate::logic::Formula;
use crate::syntax::{Parser, SyntaxError, Tok};
use crate::terms::{Name, RewriteRule, Symbol, Term, Trs, Vocabulary};
use crate::translate::{CongruenceOmission, TermSet, TranslationOptions, VerificationProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("`{name}` has arity {declared} but is applied to {found} arguments")]
    ArityMismatch { name: Name, declared: usize, found: usize },
    #[error("the left-hand side of a rule cannot be a variable")]
    VariableLhs,
    #[error("right-hand side variables not on the left: {0}")]
    ExtraRhsVariables(String),
    #[error("`{name}` is declared as {first} and as {second}")]
    NameClash { name: Name, first: &'static str, second: &'static str },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("unknown state `{0}`")]
    UnknownState(Name),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ProblemError {
    pub line: usize,
    pub col: usize,
    pub kind: ProblemErrorKind,
}

impl From<SyntaxError> for ProblemError {
    fn from(e: SyntaxError) -> Self {
        ProblemError {
            line: e.line,
            col: e.col,
            kind: ProblemErrorKind::Syntax(e.message),
        }
    }
}

fn error_at((line, col): (usize, usize), kind: ProblemErrorKind) -> ProblemError {
    ProblemError { line, col, kind }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SectionKind {
    Ops,
    Vars,
    Trs,
    Initial,
    Unsafe,
    Options,
}

impl SectionKind {
    fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "Ops" => SectionKind::Ops,
            "Vars" => SectionKind::Vars,
            "TRS" => SectionKind::Trs,
            "Initial" => SectionKind::Initial,
            "Unsafe" => SectionKind::Unsafe,
            "Options" => SectionKind::Options,
            _ => return None,
        })
    }
}

/// A non-empty line with the column its text starts at.
#[derive(Clone, Debug)]
struct Line {
    no: usize,
    col: usize,
    text: String,
}

impl Line {
    fn loc(&self) -> (usize, usize) {
        (self.no, self.col)
    }

    fn parser(&self) -> Result<Parser, ProblemError> {
        Ok(Parser::new(&self.text, self.no, self.col)?)
    }

    fn first_word(&self) -> (&str, Line) {
        let word_end = self.text.find(char::is_whitespace).unwrap_or(self.text.len());
        let rest = &self.text[word_end..];
        let trimmed = rest.trim_start();
        let skipped = self.text[..word_end].chars().count() + (rest.chars().count() - trimmed.chars().count());
        let rest = Line {
            no: self.no,
            col: self.col + skipped,
            text: trimmed.trim_end().to_string(),
        };
        (&self.text[..word_end], rest)
    }
}

struct Section {
    kind: SectionKind,
    header: Line,
    /// `automaton` or `basis` for term-set sections.
    mode: Option<String>,
    lines: Vec<Line>,
}

/// Non-blank lines with comments stripped.
fn content_lines(text: &str) -> Vec<Line> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        out.push(Line {
            no: i + 1,
            col: content.chars().count() - trimmed.chars().count() + 1,
            text: trimmed.trim_end().to_string(),
        });
    }
    out
}

fn split_sections(text: &str) -> Result<Vec<Section>, ProblemError> {
    let mut sections: Vec<Section> = Vec::new();
    for line in content_lines(text) {
        let (word, rest) = line.first_word();
        if let Some(kind) = SectionKind::from_keyword(word) {
            if let Some(prev) = sections.iter().find(|s| s.kind == kind) {
                return Err(error_at(
                    line.loc(),
                    ProblemErrorKind::Invalid(format!(
                        "section `{word}` already given on line {}",
                        prev.header.no
                    )),
                ));
            }
            let mut section = Section {
                kind,
                header: line.clone(),
                mode: None,
                lines: Vec::new(),
            };
            let mut rest = rest;
            if matches!(kind, SectionKind::Initial | SectionKind::Unsafe) {
                let (mode, after) = rest.first_word();
                if mode != "automaton" && mode != "basis" {
                    return Err(error_at(
                        rest.loc(),
                        ProblemErrorKind::Invalid(format!("expected `automaton` or `basis` after `{word}`")),
                    ));
                }
                section.mode = Some(mode.to_string());
                rest = after;
            }
            if !rest.text.is_empty() {
                section.lines.push(rest);
            }
            sections.push(section);
        } else {
            match sections.last_mut() {
                Some(s) => s.lines.push(line),
                None => {
                    return Err(error_at(
                        line.loc(),
                        ProblemErrorKind::Invalid(format!("expected a section header, found `{word}`")),
                    ))
                }
            }
        }
    }
    Ok(sections)
}

/// Names in use and what they were declared as.
struct Scope {
    vocabulary: Vocabulary,
    vars: BTreeSet<Name>,
}

impl Scope {
    fn kind_of(&self, name: &str) -> Option<&'static str> {
        if self.vocabulary.contains_name(name) {
            Some("a function symbol")
        } else if self.vars.contains(name) {
            Some("a variable")
        } else {
            None
        }
    }

    /// A term whose symbols are checked against the vocabulary, with the
    /// position of the offending symbol on failure.
    fn term(&self, p: &mut Parser) -> Result<Term, ProblemError> {
        let loc = p.location();
        let name = p.ident()?;
        let mut args = Vec::new();
        if p.eat(&Tok::LParen) {
            args.push(self.term(p)?);
            while p.eat(&Tok::Comma) {
                args.push(self.term(p)?);
            }
            p.expect(&Tok::RParen)?;
        }
        if self.vars.contains(name.as_str()) {
            if !args.is_empty() {
                return Err(error_at(
                    loc,
                    ProblemErrorKind::Syntax(format!("variable `{name}` cannot take arguments")),
                ));
            }
            return Ok(Term::var(name));
        }
        match self.vocabulary.arity(&name) {
            None => Err(error_at(loc, ProblemErrorKind::UnknownSymbol(name.into()))),
            Some(a) if a != args.len() => Err(error_at(
                loc,
                ProblemErrorKind::ArityMismatch {
                    name: name.into(),
                    declared: a,
                    found: args.len(),
                },
            )),
            Some(_) => Ok(Term::app(name, args)),
        }
    }

    fn line_term(&self, line: &Line) -> Result<Term, ProblemError> {
        let mut p = line.parser()?;
        let t = self.term(&mut p)?;
        p.finish()?;
        Ok(t)
    }
}

fn parse_ops(section: &Section) -> Result<Vocabulary, ProblemError> {
    let mut vocab = Vocabulary::new();
    for line in &section.lines {
        let mut p = line.parser()?;
        while !p.at_end() {
            let loc = p.location();
            let name = p.ident()?;
            p.expect(&Tok::Colon)?;
            let arity = p.number()?;
            if let Some(prev) = vocab.arity(&name) {
                let kind = if prev == arity {
                    ProblemErrorKind::Invalid(format!("symbol `{name}` declared twice"))
                } else {
                    ProblemErrorKind::ArityMismatch {
                        name: name.into(),
                        declared: prev,
                        found: arity,
                    }
                };
                return Err(error_at(loc, kind));
            }
            vocab.insert(Symbol::new(name, arity)).expect("checked above");
        }
    }
    if vocab.is_empty() {
        return Err(error_at(
            section.header.loc(),
            ProblemErrorKind::Invalid("the vocabulary is empty".into()),
        ));
    }
    Ok(vocab)
}

fn parse_names(lines: &[Line]) -> Result<Vec<(Name, (usize, usize))>, ProblemError> {
    let mut out = Vec::new();
    for line in lines {
        let mut p = line.parser()?;
        while !p.at_end() {
            let loc = p.location();
            out.push((Name::from(p.ident()?), loc));
        }
    }
    Ok(out)
}

fn parse_rule(scope: &Scope, line: &Line) -> Result<RewriteRule, ProblemError> {
    let mut p = line.parser()?;
    let lhs_loc = p.location();
    let lhs = scope.term(&mut p)?;
    p.expect(&Tok::Arrow)?;
    let rhs_loc = p.location();
    let rhs = scope.term(&mut p)?;
    p.finish()?;
    if lhs.is_var() {
        return Err(error_at(lhs_loc, ProblemErrorKind::VariableLhs));
    }
    let extra: Vec<String> = rhs.vars().difference(&lhs.vars()).map(|v| v.to_string()).collect();
    if !extra.is_empty() {
        return Err(error_at(rhs_loc, ProblemErrorKind::ExtraRhsVariables(extra.join(", "))));
    }
    Ok(RewriteRule::new(lhs, rhs).expect("checked above"))
}

fn parse_automaton(scope: &Scope, section: &Section) -> Result<TreeAutomaton, ProblemError> {
    enum Part {
        None,
        States,
        Final,
        Transitions,
    }
    let mut part = Part::None;
    let (mut states_lines, mut final_lines, mut transition_lines) = (Vec::new(), Vec::new(), Vec::new());
    let mut seen_states = false;
    for line in &section.lines {
        let (word, rest) = line.first_word();
        let next = match word {
            "States" => Some(Part::States),
            "Final" => Some(Part::Final),
            "Transitions" => Some(Part::Transitions),
            _ => None,
        };
        let content = match next {
            Some(p) => {
                seen_states |= matches!(p, Part::States);
                part = p;
                rest
            }
            None => line.clone(),
        };
        if content.text.is_empty() {
            continue;
        }
        match part {
            Part::None => {
                return Err(error_at(
                    content.loc(),
                    ProblemErrorKind::Invalid("expected `States`, `Final` or `Transitions`".into()),
                ))
            }
            Part::States => states_lines.push(content),
            Part::Final => final_lines.push(content),
            Part::Transitions => transition_lines.push(content),
        }
    }
    if !seen_states {
        return Err(error_at(
            section.header.loc(),
            ProblemErrorKind::Invalid("automaton without a `States` line".into()),
        ));
    }
    let mut states = BTreeSet::new();
    for (name, loc) in parse_names(&states_lines)? {
        if let Some(kind) = scope.kind_of(&name) {
            return Err(error_at(
                loc,
                ProblemErrorKind::NameClash { name, first: kind, second: "a state" },
            ));
        }
        states.insert(State::new(name));
    }
    let known = |name: Name, loc| {
        let q = State::new(name.clone());
        if states.contains(&q) {
            Ok(q)
        } else {
            Err(error_at(loc, ProblemErrorKind::UnknownState(name)))
        }
    };
    let finals = parse_names(&final_lines)?
        .into_iter()
        .map(|(n, loc)| known(n, loc))
        .collect::<Result<Vec<_>, _>>()?;
    let mut transitions = Vec::new();
    for line in &transition_lines {
        let mut p = line.parser()?;
        let loc = p.location();
        let name = p.ident()?;
        let mut args = Vec::new();
        if p.eat(&Tok::LParen) {
            loop {
                let aloc = p.location();
                args.push(known(p.ident()?.into(), aloc)?);
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
            p.expect(&Tok::RParen)?;
        }
        p.expect(&Tok::Arrow)?;
        let tloc = p.location();
        let target = known(p.ident()?.into(), tloc)?;
        p.finish()?;
        let source = State::new(name.as_str());
        let t = if args.is_empty() && states.contains(&source) {
            Transition::epsilon(source, target)
        } else {
            match scope.vocabulary.arity(&name) {
                None => return Err(error_at(loc, ProblemErrorKind::UnknownSymbol(name.into()))),
                Some(a) if a != args.len() => {
                    return Err(error_at(
                        loc,
                        ProblemErrorKind::ArityMismatch {
                            name: name.into(),
                            declared: a,
                            found: args.len(),
                        },
                    ))
                }
                Some(a) => Transition::normalized(Symbol::new(name, a), args, target),
            }
        };
        transitions.push(t);
    }
    TreeAutomaton::new(scope.vocabulary.clone(), states, finals, transitions)
        .map_err(|e| error_at(section.header.loc(), ProblemErrorKind::Invalid(e.to_string())))
}

/// Parses a standalone automaton (`States`, `Final` and `Transitions`
/// lines) over `vocabulary`.
pub fn parse_automaton_text(text: &str, vocabulary: &Vocabulary) -> Result<TreeAutomaton, ProblemError> {
    let section = Section {
        kind: SectionKind::Initial,
        header: Line { no: 1, col: 1, text: String::new() },
        mode: None,
        lines: content_lines(text),
    };
    let scope = Scope {
        vocabulary: vocabulary.clone(),
        vars: BTreeSet::new(),
    };
    parse_automaton(&scope, &section)
}

/// Prints an automaton in the form [`parse_automaton_text`] reads.
pub fn print_automaton(a: &TreeAutomaton) -> String {
    let names = |qs: &BTreeSet<State>| qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("States {}\nFinal {}\nTransitions\n", names(a.states()), names(a.finals()));
    for t in a.transitions() {
        out.push_str(&format!("  {t}\n"));
    }
    out
}

fn parse_term_set(scope: &Scope, section: &Section) -> Result<TermSet, ProblemError> {
    if section.mode.as_deref() == Some("automaton") {
        return Ok(TermSet::Automaton(parse_automaton(scope, section)?));
    }
    let terms = section.lines.iter().map(|l| scope.line_term(l)).collect::<Result<Vec<_>, _>>()?;
    Ok(TermSet::Basis(terms))
}

fn on_off(value: &Line) -> Result<bool, ProblemError> {
    match value.text.as_str() {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(error_at(
            value.loc(),
            ProblemErrorKind::Invalid(format!("expected `on` or `off`, found `{other}`")),
        )),
    }
}

/// Checks that every symbol of the goal is a declared function symbol or a
/// state, and every predicate is the reachability predicate.
fn check_goal(formula: &Formula, scope: &Scope, states: &BTreeSet<Name>, loc: (usize, usize)) -> Result<(), ProblemError> {
    for s in formula.function_symbols() {
        let ok = match scope.vocabulary.arity(s.name()) {
            Some(a) => a == s.arity(),
            None => s.is_constant() && states.contains(s.name()),
        };
        if !ok {
            return Err(error_at(loc, ProblemErrorKind::UnknownSymbol(s.name().clone())));
        }
    }
    for p in formula.predicates() {
        if &**p.name() != crate::translate::REACH {
            return Err(error_at(loc, ProblemErrorKind::UnknownSymbol(p.name().clone())));
        }
    }
    Ok(())
}

fn all_states(set: &TermSet) -> BTreeSet<Name> {
    set.as_automaton()
        .map(|a| a.states().iter().map(|q| q.name().clone()).collect())
        .unwrap_or_default()
}

/// Parses a problem file, reporting the first error with its position.
pub fn parse_problem(text: &str) -> Result<VerificationProblem, ProblemError> {
    let sections = split_sections(text)?;
    let get = |kind| sections.iter().find(|s| s.kind == kind);
    let missing = |what: &str| error_at((1, 1), ProblemErrorKind::Invalid(format!("missing `{what}` section")));

    let vocabulary = parse_ops(get(SectionKind::Ops).ok_or_else(|| missing("Ops"))?)?;
    let mut scope = Scope {
        vocabulary,
        vars: BTreeSet::new(),
    };
    if let Some(s) = get(SectionKind::Vars) {
        for (name, loc) in parse_names(&s.lines)? {
            if let Some(kind) = scope.kind_of(&name) {
                return Err(error_at(
                    loc,
                    ProblemErrorKind::NameClash { name, first: kind, second: "a variable" },
                ));
            }
            scope.vars.insert(name);
        }
    }

    let rules = match get(SectionKind::Trs) {
        Some(s) => s.lines.iter().map(|l| parse_rule(&scope, l)).collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let trs = Trs::new(scope.vocabulary.clone(), rules).expect("rules checked against the vocabulary");
    let initial = parse_term_set(&scope, get(SectionKind::Initial).ok_or_else(|| missing("Initial"))?)?;
    let unsafe_terms = parse_term_set(&scope, get(SectionKind::Unsafe).ok_or_else(|| missing("Unsafe"))?)?;

    let mut problem = VerificationProblem::new(trs, initial, unsafe_terms);
    let states: BTreeSet<Name> = all_states(&problem.initial)
        .into_iter()
        .chain(all_states(&problem.unsafe_terms))
        .collect();
    let mut options = TranslationOptions::default();
    for line in get(SectionKind::Options).map(|s| s.lines.as_slice()).unwrap_or(&[]) {
        let (key, value) = line.first_word();
        let invalid = |msg: String| error_at(value.loc(), ProblemErrorKind::Invalid(msg));
        match key {
            "strategy" => problem.strategy = value.text.parse().map_err(invalid)?,
            "reflexivity" => options.include_reflexivity = on_off(&value)?,
            "monadic" => options.monadic = on_off(&value)?,
            "omit-congruence" => {
                let mut p = value.parser()?;
                while !p.at_end() {
                    let loc = p.location();
                    let name = p.ident()?;
                    let pos = if p.eat(&Tok::Colon) { Some(p.number()?) } else { None };
                    let arity = scope
                        .vocabulary
                        .arity(&name)
                        .ok_or_else(|| error_at(loc, ProblemErrorKind::UnknownSymbol(name.as_str().into())))?;
                    if arity == 0 || pos.is_some_and(|p| p == 0 || p > arity) {
                        return Err(error_at(
                            loc,
                            ProblemErrorKind::Invalid(format!("`{name}` has no argument position to omit")),
                        ));
                    }
                    options.omitted_congruence.insert(CongruenceOmission {
                        symbol: name.into(),
                        position: pos,
                    });
                }
            }
            "goal" => {
                let mut p = value.parser()?;
                let f = p.formula(&scope.vars, &mut Vec::new())?;
                p.finish()?;
                check_goal(&f, &scope, &states, value.loc())?;
                problem.raw_goal = Some(f);
            }
            other => {
                return Err(error_at(
                    line.loc(),
                    ProblemErrorKind::Invalid(format!("unknown option `{other}`")),
                ))
            }
        }
    }
    problem.options = options;
    Ok(problem)
}

/// Prints a problem in the file format; parsing the output gives back an
/// equal problem.
pub fn print_problem(problem: &VerificationProblem) -> String {
    ProblemDisplay(problem).to_string()
}

struct ProblemDisplay<'a>(&'a VerificationProblem);

fn print_term_set(f: &mut fmt::Formatter<'_>, header: &str, set: &TermSet) -> fmt::Result {
    match set {
        TermSet::Basis(terms) => {
            writeln!(f, "{header} basis")?;
            for t in terms {
                writeln!(f, "  {t}")?;
            }
        }
        TermSet::Automaton(a) => {
            writeln!(f, "{header} automaton")?;
            let names = |qs: &BTreeSet<State>| qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(f, "  States {}", names(a.states()))?;
            writeln!(f, "  Final {}", names(a.finals()))?;
            writeln!(f, "  Transitions")?;
            for t in a.transitions() {
                writeln!(f, "    {t}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for ProblemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        let ops: Vec<String> = p.vocabulary().symbols().map(|s| s.to_string()).collect();
        writeln!(f, "Ops {}", ops.join(" "))?;

        let mut vars: BTreeSet<Name> = BTreeSet::new();
        for r in p.trs.rules() {
            vars.extend(r.lhs().vars());
        }
        for set in [&p.initial, &p.unsafe_terms] {
            if let TermSet::Basis(ts) = set {
                vars.extend(ts.iter().flat_map(Term::vars));
            }
        }
        if let Some(g) = &p.raw_goal {
            vars.extend(g.free_vars());
        }
        if !vars.is_empty() {
            let vars: Vec<&str> = vars.iter().map(|v| &**v).collect();
            writeln!(f, "Vars {}", vars.join(" "))?;
        }

        writeln!(f, "TRS")?;
        for r in p.trs.rules() {
            writeln!(f, "  {r}")?;
        }
        print_term_set(f, "Initial", &p.initial)?;
        print_term_set(f, "Unsafe", &p.unsafe_terms)?;

        let onoff = |b: bool| if b { "on" } else { "off" };
        writeln!(f, "Options")?;
        writeln!(f, "  strategy {}", p.strategy)?;
        writeln!(f, "  reflexivity {}", onoff(p.options.include_reflexivity))?;
        writeln!(f, "  monadic {}", onoff(p.options.monadic))?;
        if !p.options.omitted_congruence.is_empty() {
            let omitted: Vec<String> = p.options.omitted_congruence.iter().map(|o| o.to_string()).collect();
            writeln!(f, "  omit-congruence {}", omitted.join(" "))?;
        }
        if let Some(g) = &p.raw_goal {
            writeln!(f, "  goal {g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Strategy;

    const INTRO: &str = "\
# the introductory example
Ops f:1 s:1 a:0
Vars x
TRS
  f(x) -> f(s(s(x)))
Initial basis
  f(a)
Unsafe basis
  f(s(a))
";

    fn kind(text: &str) -> (usize, usize, ProblemErrorKind) {
        let e = parse_problem(text).unwrap_err();
        (e.line, e.col, e.kind)
    }

    #[test]
    fn parses_basis_problem() {
        let p = parse_problem(INTRO).unwrap();
        assert_eq!(p.trs.rules().len(), 1);
        assert_eq!(p.initial, TermSet::Basis(vec![Term::app("f", vec![Term::constant("a")])]));
        assert_eq!(p.strategy, Strategy::Any);
        assert_eq!(p.options, TranslationOptions::default());
        assert_eq!(parse_problem(&print_problem(&p)), Ok(p));
    }

    #[test]
    fn parses_automata_and_options() {
        let text = "\
Ops a:0 f:1 g:2
Vars x y
TRS
  f(x) -> g(x,x)
Initial automaton
  States p q
  Final q
  Transitions
    a -> p
    p -> q       # epsilon
Unsafe automaton
  States q r
  Final r
  Transitions
    g(q,q) -> r
Options
  strategy outermost
  reflexivity off
  omit-congruence g:2 f
  goal exists x. R(x,r)
";
        let p = parse_problem(text).unwrap();
        let a = p.initial.as_automaton().unwrap();
        assert!(a.has_epsilon());
        assert_eq!(a.finals().len(), 1);
        assert_eq!(p.strategy, Strategy::Outermost);
        assert!(!p.options.include_reflexivity);
        assert!(p.options.omits("g", 2) && !p.options.omits("g", 1) && p.options.omits("f", 1));
        assert_eq!(p.raw_goal.as_ref().unwrap().to_string(), "exists x. R(x,r)");
        assert_eq!(parse_problem(&print_problem(&p)), Ok(p));
    }

    #[test]
    fn distinct_diagnostics() {
        let base = "Ops f:1 g:1 a:0\nVars x y\nTRS\n";
        let tail = "Initial basis\n  a\nUnsafe basis\n  a\n";

        let (l, c, k) = kind(&format!("{base}  x -> f(x)\n{tail}"));
        assert_eq!((l, c, k), (4, 3, ProblemErrorKind::VariableLhs));

        let (l, c, k) = kind(&format!("{base}  f(x) -> g(y)\n{tail}"));
        assert_eq!((l, c, k), (4, 11, ProblemErrorKind::ExtraRhsVariables("y".into())));

        let (l, c, k) = kind(&format!("{base}  f(x) -> f(a,a)\n{tail}"));
        assert_eq!(
            (l, c, k),
            (4, 11, ProblemErrorKind::ArityMismatch { name: "f".into(), declared: 1, found: 2 })
        );

        let (l, c, k) = kind(&format!("{base}  f(x) -> h(x)\n{tail}"));
        assert_eq!((l, c, k), (4, 11, ProblemErrorKind::UnknownSymbol("h".into())));

        let (l, _, k) = kind("Ops f:1 a:0\nVars a\nInitial basis\n a\nUnsafe basis\n a\n");
        assert_eq!(l, 2);
        assert!(matches!(k, ProblemErrorKind::NameClash { .. }));

        let (l, c, k) = kind("Ops f:1 a:0\nInitial automaton\n  States f q\nUnsafe basis\n a\n");
        assert_eq!((l, c), (3, 10));
        assert!(matches!(k, ProblemErrorKind::NameClash { .. }));

        let (l, c, k) = kind(&format!("{base}  f(x) -> f(x\n{tail}"));
        assert_eq!((l, c), (4, 14));
        assert!(matches!(k, ProblemErrorKind::Syntax(_)));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(kind("TRS\n").2, ProblemErrorKind::Invalid(_)));
        assert!(matches!(kind("Ops a:0\nOps b:0\n").2, ProblemErrorKind::Invalid(_)));
        assert!(matches!(kind("  a -> b\n").2, ProblemErrorKind::Invalid(_)));
        assert!(matches!(kind("Ops a:0\nInitial sets\n").2, ProblemErrorKind::Invalid(_)));
        assert!(matches!(
            kind("Ops a:0\nInitial automaton\n  Final q\nUnsafe basis\n a\n").2,
            ProblemErrorKind::Invalid(_)
        ));
        assert!(matches!(
            kind("Ops a:0\nInitial automaton\n  States p\n  Final q\nUnsafe basis\n a\n").2,
            ProblemErrorKind::UnknownState(_)
        ));
        assert!(matches!(
            kind("Ops a:0\nInitial basis\n a\nUnsafe basis\n a\nOptions\n  colour red\n").2,
            ProblemErrorKind::Invalid(_)
        ));
        assert!(matches!(
            kind("Ops a:0 f:1\nInitial basis\n a\nUnsafe basis\n a\nOptions\n  omit-congruence f:2\n").2,
            ProblemErrorKind::Invalid(_)
        ));
        assert!(matches!(
            kind("Ops a:0\nInitial basis\n a\nUnsafe basis\n a\nOptions\n  goal P(a)\n").2,
            ProblemErrorKind::UnknownSymbol(_)
        ));
        assert!(matches!(kind("Ops a:0 a:1\n").2, ProblemErrorKind::ArityMismatch { .. }));
    }

    #[test]
    fn standalone_automaton_round_trips() {
        let vocab = parse_problem(INTRO).unwrap().vocabulary().clone();
        let text = "States p0 p1 # parity\nFinal p1\nTransitions\n  a -> p0\n  s(p0) -> p1\n  s(p1) -> p0\n  p1 -> p0\n";
        let a = parse_automaton_text(text, &vocab).unwrap();
        assert_eq!(a.transition_count(), 4);
        assert!(a.has_epsilon());
        assert_eq!(parse_automaton_text(&print_automaton(&a), &vocab).unwrap(), a);
        let err = parse_automaton_text("States p0\nTransitions\n  g -> p0\n", &vocab).unwrap_err();
        assert_eq!((err.line, err.col), (3, 3));
        let err = parse_automaton_text("States s\n", &vocab).unwrap_err();
        assert!(matches!(err.kind, ProblemErrorKind::NameClash { .. }));
    }
}
