//! First-order formulas over a functional vocabulary plus predicate symbols.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::terms::{Name, Substitution, Symbol, Term, TermError, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("predicate `{name}` has arity {arity} but was given {given} arguments")]
    AtomArity {
        name: Name,
        arity: usize,
        given: usize,
    },
    #[error("formula `{formula}` has free variables {vars:?}")]
    NotClosed { formula: String, vars: Vec<Name> },
    #[error("predicate `{0}` is not declared in the theory")]
    UnknownPredicate(Name),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateSymbol {
    name: Name,
    arity: usize,
}

impl PredicateSymbol {
    pub fn new(name: impl Into<Name>, arity: usize) -> Self {
        PredicateSymbol {
            name: name.into(),
            arity,
        }
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// A first-order formula. `And(vec![])` is true and `Or(vec![])` is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(PredicateSymbol, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Name, Box<Formula>),
    Exists(Name, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: PredicateSymbol, args: Vec<Term>) -> Result<Formula, LogicError> {
        if pred.arity != args.len() {
            return Err(LogicError::AtomArity {
                name: pred.name,
                arity: pred.arity,
                given: args.len(),
            });
        }
        Ok(Formula::Atom(pred, args))
    }

    pub fn truth() -> Formula {
        Formula::And(Vec::new())
    }

    pub fn falsity() -> Formula {
        Formula::Or(Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    /// Conjunction; a single conjunct is returned unchanged.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        }
    }

    /// Disjunction; a single disjunct is returned unchanged.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        }
    }

    pub fn implies(self, conclusion: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(conclusion))
    }

    /// `∀v1 ... ∀vn. body`, outermost quantifier first.
    pub fn forall(vars: impl IntoIterator<Item = Name>, body: Formula) -> Formula {
        let vars: Vec<Name> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::ForAll(v, Box::new(acc)))
    }

    pub fn exists(vars: impl IntoIterator<Item = Name>, body: Formula) -> Formula {
        let vars: Vec<Name> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::Exists(v, Box::new(acc)))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            Formula::Atom(_, args) => {
                let mut vs = Vec::new();
                args.iter().for_each(|a| a.collect_vars(&mut vs));
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Prefixes a universal quantifier for every free variable, in
    /// first-occurrence order. Closed formulas are returned unchanged.
    pub fn universal_closure(&self) -> Sentence {
        Sentence(Formula::forall(self.free_vars(), self.clone()))
    }

    pub fn existential_closure(&self) -> Sentence {
        Sentence(Formula::exists(self.free_vars(), self.clone()))
    }

    /// Function symbols occurring anywhere in the formula.
    pub fn function_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |_, args| args.iter().for_each(|a| a.collect_symbols(&mut out)));
        out
    }

    pub fn predicates(&self) -> BTreeSet<PredicateSymbol> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |p, _| {
            out.insert(p.clone());
        });
        out
    }

    pub fn visit_atoms(&self, visit: &mut impl FnMut(&PredicateSymbol, &[Term])) {
        match self {
            Formula::Atom(p, args) => visit(p, args),
            Formula::Not(f) => f.visit_atoms(visit),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit_atoms(visit)),
            Formula::Implies(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
            Formula::ForAll(_, f) | Formula::Exists(_, f) => f.visit_atoms(visit),
        }
    }

    /// Capture-avoiding substitution of free variables.
    pub fn substitute(&self, subst: &Substitution) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| subst.apply(a)).collect())
            }
            Formula::Not(f) => f.substitute(subst).not(),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(subst)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(subst)).collect()),
            Formula::Implies(a, b) => a.substitute(subst).implies(b.substitute(subst)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let mut inner: Substitution = subst
                    .iter()
                    .filter(|(k, _)| *k != v)
                    .map(|(k, t)| (k.clone(), t.clone()))
                    .collect();
                let captured = inner.iter().any(|(_, t)| t.vars().contains(v));
                let var = if captured {
                    let taken: BTreeSet<Name> = inner
                        .iter()
                        .flat_map(|(_, t)| t.vars())
                        .chain(body.free_vars())
                        .collect();
                    let fresh = (1..)
                        .map(|i| Name::from(format!("{v}{i}")))
                        .find(|n| !taken.contains(n))
                        .unwrap();
                    inner.insert(v.clone(), Term::Var(fresh.clone()));
                    fresh
                } else {
                    v.clone()
                };
                let body = Box::new(body.substitute(&inner));
                match self {
                    Formula::ForAll(..) => Formula::ForAll(var, body),
                    _ => Formula::Exists(var, body),
                }
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::ForAll(..) | Formula::Exists(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(fs) if fs.len() == 1 => fs[0].level(),
            Formula::And(fs) if fs.len() == 1 => fs[0].level(),
            Formula::Or(fs) if fs.len() > 1 => 2,
            Formula::And(fs) if fs.len() > 1 => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Atom(p, args) => {
                write!(f, "{}(", p.name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(inner) => {
                f.write_str("~")?;
                inner.write_at(f, 4)
            }
            Formula::And(fs) if fs.is_empty() => f.write_str("$true"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("$false"),
            Formula::And(fs) | Formula::Or(fs) if fs.len() == 1 => fs[0].write_at(f, min_level),
            Formula::And(fs) => write_joined(f, fs, " & ", 4),
            Formula::Or(fs) => write_joined(f, fs, " | ", 3),
            Formula::Implies(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)
            }
            Formula::ForAll(..) | Formula::Exists(..) => {
                let universal = matches!(self, Formula::ForAll(..));
                f.write_str(if universal { "forall" } else { "exists" })?;
                let mut cur = self;
                loop {
                    match (cur, universal) {
                        (Formula::ForAll(v, body), true) | (Formula::Exists(v, body), false) => {
                            write!(f, " {v}")?;
                            cur = body;
                        }
                        _ => break,
                    }
                }
                f.write_str(". ")?;
                cur.write_at(f, 0)
            }
        }
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, parts: &[Formula], sep: &str, min: u8) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        p.write_at(f, min)?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// A closed formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence(Formula);

impl Sentence {
    pub fn new(formula: Formula) -> Result<Sentence, LogicError> {
        let vars = formula.free_vars();
        if !vars.is_empty() {
            return Err(LogicError::NotClosed {
                formula: formula.to_string(),
                vars,
            });
        }
        Ok(Sentence(formula))
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub fn negate(&self) -> Sentence {
        Sentence(self.0.clone().not())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite set of sentences over declared function and predicate symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    vocabulary: Vocabulary,
    predicates: BTreeSet<PredicateSymbol>,
    sentences: Vec<Sentence>,
}

impl Theory {
    pub fn new(vocabulary: Vocabulary, predicates: impl IntoIterator<Item = PredicateSymbol>) -> Self {
        Theory {
            vocabulary,
            predicates: predicates.into_iter().collect(),
            sentences: Vec::new(),
        }
    }

    /// Appends `sentence` unless already present. Returns whether it was added.
    pub fn push(&mut self, sentence: Sentence) -> Result<bool, LogicError> {
        self.check(sentence.formula())?;
        if self.sentences.contains(&sentence) {
            return Ok(false);
        }
        self.sentences.push(sentence);
        Ok(true)
    }

    /// Checks that `formula` only uses declared symbols.
    pub fn check(&self, formula: &Formula) -> Result<(), LogicError> {
        for p in formula.predicates() {
            if !self.predicates.contains(&p) {
                return Err(LogicError::UnknownPredicate(p.name));
            }
        }
        let mut result = Ok(());
        formula.visit_atoms(&mut |_, args| {
            for a in args {
                if result.is_ok() {
                    result = self.vocabulary.check_term(a);
                }
            }
        });
        Ok(result?)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn predicates(&self) -> &BTreeSet<PredicateSymbol> {
        &self.predicates
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}
