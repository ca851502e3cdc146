//! First-order encodings of rewriting systems, automata and safety problems.
//!
//! A binary predicate `R` stands for reachability. Rules become atoms
//! `R(l, r)`, automaton transitions become atoms `R(c, q)`, and
//! transitivity and congruence axioms close `R` the way rewriting is closed.
//! The goal sentence says that some initial term reaches some unsafe term;
//! a finite model of the theory in which the goal is false proves safety.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::automaton::TreeAutomaton;
use crate::logic::{Formula, LogicError, PredicateSymbol, Sentence, Theory};
use crate::terms::{Name, Strategy, Symbol, Term, TermError, Trs, Vocabulary};

/// Name of the reachability predicate.
pub const REACH: &str = "R";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("state `{0}` clashes with a function symbol of the same name")]
    StateClash(Name),
    #[error("initial term `{0}` must be ground for the monadic translation")]
    NonGroundInitial(Term),
    #[error("the monadic translation requires the outermost strategy")]
    MonadicRequiresOutermost,
    #[error("the monadic translation requires initial and unsafe sets given as term bases")]
    MonadicRequiresBasis,
    #[error("raw goal: {0}")]
    RawGoal(LogicError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Suppresses congruence axioms for one symbol, at one 1-based argument
/// position or at all of them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CongruenceOmission {
    pub symbol: Name,
    pub position: Option<usize>,
}

impl CongruenceOmission {
    pub fn all(symbol: impl Into<Name>) -> Self {
        CongruenceOmission {
            symbol: symbol.into(),
            position: None,
        }
    }

    pub fn at(symbol: impl Into<Name>, position: usize) -> Self {
        CongruenceOmission {
            symbol: symbol.into(),
            position: Some(position),
        }
    }
}

impl fmt::Display for CongruenceOmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) => write!(f, "{}:{p}", self.symbol),
            None => write!(f, "{}", self.symbol),
        }
    }
}

impl std::str::FromStr for CongruenceOmission {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if !s.is_empty() => Ok(CongruenceOmission::all(s)),
            Some((sym, pos)) if !sym.is_empty() => pos
                .parse::<usize>()
                .ok()
                .filter(|&p| p >= 1)
                .map(|p| CongruenceOmission::at(sym, p))
                .ok_or_else(|| format!("bad argument position in `{s}`")),
            _ => Err(format!("bad congruence omission `{s}` (expected sym or sym:pos)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationOptions {
    pub include_reflexivity: bool,
    pub omitted_congruence: BTreeSet<CongruenceOmission>,
    pub monadic: bool,
}

impl Default for TranslationOptions {
    fn default() -> Self {
        TranslationOptions {
            include_reflexivity: true,
            omitted_congruence: BTreeSet::new(),
            monadic: false,
        }
    }
}

impl TranslationOptions {
    pub fn omits(&self, symbol: &str, position: usize) -> bool {
        self.omitted_congruence
            .iter()
            .any(|o| &*o.symbol == symbol && o.position.map_or(true, |p| p == position))
    }
}

/// Why a sentence is part of a translated theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    RuleAtom,
    Transitivity,
    Congruence,
    Reflexivity,
    AutomatonTransition,
    /// Monadic translation: an initial term is reachable.
    InitialTerm,
    /// Monadic translation: `R(l) -> R(r)` for a rule.
    RuleImplication,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::RuleAtom => "rule-atom",
            Provenance::Transitivity => "transitivity",
            Provenance::Congruence => "congruence",
            Provenance::Reflexivity => "reflexivity",
            Provenance::AutomatonTransition => "automaton-transition",
            Provenance::InitialTerm => "initial-term",
            Provenance::RuleImplication => "rule-implication",
        })
    }
}

/// A theory whose sentences carry a provenance tag each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedTheory {
    pub theory: Theory,
    pub provenance: Vec<Provenance>,
}

impl TaggedTheory {
    fn new(vocabulary: Vocabulary, predicate: PredicateSymbol) -> Self {
        TaggedTheory {
            theory: Theory::new(vocabulary, [predicate]),
            provenance: Vec::new(),
        }
    }

    fn push(&mut self, sentence: Sentence, tag: Provenance) -> Result<(), LogicError> {
        if self.theory.push(sentence)? {
            self.provenance.push(tag);
        }
        Ok(())
    }

    /// Number of sentences tagged `tag`.
    pub fn count(&self, tag: Provenance) -> usize {
        self.provenance.iter().filter(|&&t| t == tag).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sentence, Provenance)> {
        self.theory.sentences().iter().zip(self.provenance.iter().copied())
    }

    /// Union in order, dropping sentences already present.
    fn merge(parts: Vec<TaggedTheory>) -> Result<TaggedTheory, TranslateError> {
        let mut vocabulary = Vocabulary::new();
        let mut predicates = BTreeSet::new();
        for p in &parts {
            vocabulary = vocabulary.union(p.theory.vocabulary())?;
            predicates.extend(p.theory.predicates().iter().cloned());
        }
        let mut out = TaggedTheory {
            theory: Theory::new(vocabulary, predicates),
            provenance: Vec::new(),
        };
        for p in parts {
            for (s, tag) in p.iter() {
                out.push(s.clone(), tag)?;
            }
        }
        Ok(out)
    }
}

/// Initial or unsafe terms: a regular language or the ground instances of a
/// finite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermSet {
    Automaton(TreeAutomaton),
    Basis(Vec<Term>),
}

impl TermSet {
    pub fn as_automaton(&self) -> Option<&TreeAutomaton> {
        match self {
            TermSet::Automaton(a) => Some(a),
            TermSet::Basis(_) => None,
        }
    }

    pub fn as_basis(&self) -> Option<&[Term]> {
        match self {
            TermSet::Basis(b) => Some(b),
            TermSet::Automaton(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationProblem {
    pub trs: Trs,
    pub initial: TermSet,
    pub unsafe_terms: TermSet,
    pub strategy: Strategy,
    pub options: TranslationOptions,
    /// Replaces the generated goal; existentially closed before use.
    pub raw_goal: Option<Formula>,
}

impl VerificationProblem {
    pub fn new(trs: Trs, initial: TermSet, unsafe_terms: TermSet) -> Self {
        VerificationProblem {
            trs,
            initial,
            unsafe_terms,
            strategy: Strategy::Any,
            options: TranslationOptions::default(),
            raw_goal: None,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        self.trs.vocabulary()
    }

    /// Translation matching the problem's shape and options.
    pub fn translate(&self) -> Result<TranslationResult, TranslateError> {
        let mut result = if self.options.monadic {
            if self.strategy != Strategy::Outermost {
                return Err(TranslateError::MonadicRequiresOutermost);
            }
            let (TermSet::Basis(init), TermSet::Basis(bad)) = (&self.initial, &self.unsafe_terms)
            else {
                return Err(TranslateError::MonadicRequiresBasis);
            };
            build_monadic_outermost(init, &self.trs, bad)?
        } else {
            build_binary(&self.initial, &self.trs, &self.unsafe_terms, &self.options)?
        };
        if let Some(raw) = &self.raw_goal {
            let goal = raw.existential_closure();
            result.theory.theory.check(goal.formula()).map_err(TranslateError::RawGoal)?;
            result.goal = goal;
        }
        Ok(result)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationResult {
    pub theory: TaggedTheory,
    /// Existentially closed; says that an unsafe term is reachable.
    pub goal: Sentence,
}

impl TranslationResult {
    pub fn theory(&self) -> &Theory {
        &self.theory.theory
    }

    /// The theory followed by the negated goal: the input of model search.
    pub fn search_sentences(&self) -> Vec<Sentence> {
        let mut out = self.theory.theory.sentences().to_vec();
        out.push(self.goal.negate());
        out
    }
}

fn binary_reach() -> PredicateSymbol {
    PredicateSymbol::new(REACH, 2)
}

fn unary_reach() -> PredicateSymbol {
    PredicateSymbol::new(REACH, 1)
}

fn reach2(a: Term, b: Term) -> Formula {
    Formula::Atom(binary_reach(), vec![a, b])
}

fn reach1(a: Term) -> Formula {
    Formula::Atom(unary_reach(), vec![a])
}

/// Variable names that cannot be confused with any symbol of `vocabulary`
/// or any name in `taken`.
struct FreshNames<'a> {
    vocabulary: &'a Vocabulary,
    taken: BTreeSet<Name>,
}

impl<'a> FreshNames<'a> {
    fn new(vocabulary: &'a Vocabulary) -> Self {
        FreshNames {
            vocabulary,
            taken: BTreeSet::new(),
        }
    }

    fn reserve(&mut self, names: impl IntoIterator<Item = Name>) {
        self.taken.extend(names);
    }

    fn fresh(&mut self, base: &str) -> Name {
        let ok = |n: &str, taken: &BTreeSet<Name>| {
            !self.vocabulary.contains_name(n) && !taken.contains(n)
        };
        let name: Name = if ok(base, &self.taken) {
            base.into()
        } else {
            (1..)
                .map(|i| format!("{base}{i}"))
                .find(|n| ok(n, &self.taken))
                .unwrap()
                .into()
        };
        self.taken.insert(name.clone());
        name
    }
}

/// Rule atoms, transitivity, optional reflexivity and congruence axioms.
pub fn translate_trs(trs: &Trs, options: &TranslationOptions) -> Result<TaggedTheory, TranslateError> {
    let vocab = trs.vocabulary();
    let mut out = TaggedTheory::new(vocab.clone(), binary_reach());
    for rule in trs.rules() {
        let atom = reach2(rule.lhs().clone(), rule.rhs().clone());
        out.push(atom.universal_closure(), Provenance::RuleAtom)?;
    }

    let mut names = FreshNames::new(vocab);
    let x = Term::Var(names.fresh("x"));
    let y = Term::Var(names.fresh("y"));
    let z = Term::Var(names.fresh("z"));
    let trans = Formula::and(vec![reach2(x.clone(), y.clone()), reach2(y.clone(), z.clone())])
        .implies(reach2(x.clone(), z.clone()));
    out.push(trans.universal_closure(), Provenance::Transitivity)?;

    if options.include_reflexivity {
        out.push(reach2(x.clone(), x.clone()).universal_closure(), Provenance::Reflexivity)?;
    }

    let max_arity = vocab.functions().map(|f| f.arity()).max().unwrap_or(0);
    let others: Vec<Term> = if max_arity <= 2 {
        vec![z]
    } else {
        (1..max_arity).map(|i| Term::Var(names.fresh(&format!("z{i}")))).collect()
    };
    for f in vocab.functions() {
        for pos in 1..=f.arity() {
            if options.omits(f.name(), pos) {
                continue;
            }
            let mut fill = others.iter().cloned();
            let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
            for i in 1..=f.arity() {
                if i == pos {
                    lhs.push(x.clone());
                    rhs.push(y.clone());
                } else {
                    let w = fill.next().expect("enough context variables");
                    lhs.push(w.clone());
                    rhs.push(w);
                }
            }
            let axiom = reach2(x.clone(), y.clone()).implies(reach2(
                Term::App(f.clone(), lhs),
                Term::App(f.clone(), rhs),
            ));
            out.push(axiom.universal_closure(), Provenance::Congruence)?;
        }
    }
    Ok(out)
}

/// One ground atom `R(c, q)` per transition `c -> q`.
pub fn translate_automaton(automaton: &TreeAutomaton) -> Result<TaggedTheory, TranslateError> {
    let mut vocab = automaton.vocabulary().clone();
    for q in automaton.states() {
        if vocab.contains_name(q.name()) {
            return Err(TranslateError::StateClash(q.name().clone()));
        }
        vocab.insert(Symbol::new(q.name().clone(), 0))?;
    }
    let mut out = TaggedTheory::new(vocab, binary_reach());
    for t in automaton.transitions() {
        let atom = reach2(t.lhs_term(), Term::constant(t.target().name().clone()));
        out.push(Sentence::new(atom)?, Provenance::AutomatonTransition)?;
    }
    Ok(out)
}

/// How a side of the goal pins down its term: by membership in a final state
/// or by being an instance of a basis term.
enum Side {
    State(Name),
    Pattern(Term),
}

fn sides(set: &TermSet) -> Vec<Side> {
    match set {
        TermSet::Automaton(a) => a.finals().iter().map(|q| Side::State(q.name().clone())).collect(),
        TermSet::Basis(b) => b.iter().cloned().map(Side::Pattern).collect(),
    }
}

/// Goal and theory for any combination of automaton and basis sides.
pub fn build_binary(
    initial: &TermSet,
    trs: &Trs,
    unsafe_terms: &TermSet,
    options: &TranslationOptions,
) -> Result<TranslationResult, TranslateError> {
    let mut parts = vec![translate_trs(trs, options)?];
    for set in [initial, unsafe_terms] {
        if let TermSet::Automaton(a) = set {
            parts.push(translate_automaton(a)?);
        }
    }
    let theory = TaggedTheory::merge(parts)?;

    let mut names = FreshNames::new(theory.theory.vocabulary());
    for set in [initial, unsafe_terms] {
        if let TermSet::Basis(b) = set {
            names.reserve(b.iter().flat_map(Term::vars));
        }
    }
    let x = Term::Var(names.fresh("x"));
    let y = Term::Var(names.fresh("y"));

    let mut disjuncts = Vec::new();
    for i in sides(initial) {
        for u in sides(unsafe_terms) {
            let d = match (&i, &u) {
                (Side::State(qi), Side::State(qu)) => Formula::and(vec![
                    reach2(x.clone(), Term::constant(qi.clone())),
                    reach2(x.clone(), y.clone()),
                    reach2(y.clone(), Term::constant(qu.clone())),
                ]),
                (Side::State(qi), Side::Pattern(t2)) => Formula::and(vec![
                    reach2(x.clone(), Term::constant(qi.clone())),
                    reach2(x.clone(), t2.clone()),
                ]),
                (Side::Pattern(t1), Side::State(qu)) => Formula::and(vec![
                    reach2(t1.clone(), y.clone()),
                    reach2(y.clone(), Term::constant(qu.clone())),
                ]),
                (Side::Pattern(t1), Side::Pattern(t2)) => {
                    reach2(t1.clone(), rename_apart(t2, &t1.vars(), &names))
                }
            };
            disjuncts.push(d);
        }
    }
    let goal = Formula::or(disjuncts).existential_closure();
    theory.theory.check(goal.formula())?;
    Ok(TranslationResult { theory, goal })
}

/// Renames the variables of `t` that occur in `avoid`.
fn rename_apart(t: &Term, avoid: &BTreeSet<Name>, names: &FreshNames<'_>) -> Term {
    let mut taken: BTreeSet<Name> = avoid.iter().cloned().chain(t.vars()).collect();
    let mut map: BTreeMap<Name, Name> = BTreeMap::new();
    t.map_vars(&mut |v| {
        if !avoid.contains(v) {
            return v.clone();
        }
        map.entry(v.clone())
            .or_insert_with(|| {
                let n: Name = (1..)
                    .map(|i| format!("{v}{i}"))
                    .find(|n| !taken.contains(n.as_str()) && !names.vocabulary.contains_name(n))
                    .unwrap()
                    .into();
                taken.insert(n.clone());
                n
            })
            .clone()
    })
}

/// Problem with initial and unsafe sets given by tree automata.
pub fn build_basic(
    initial: &TreeAutomaton,
    trs: &Trs,
    unsafe_terms: &TreeAutomaton,
    options: &TranslationOptions,
) -> Result<TranslationResult, TranslateError> {
    build_binary(
        &TermSet::Automaton(initial.clone()),
        trs,
        &TermSet::Automaton(unsafe_terms.clone()),
        options,
    )
}

/// Problem with initial and unsafe sets given as ground instances of finite
/// term bases. Each disjunct `R(t1, t2)` has `t2` renamed apart from `t1`.
pub fn build_finitely_based(
    initial: &[Term],
    trs: &Trs,
    unsafe_terms: &[Term],
    options: &TranslationOptions,
) -> Result<TranslationResult, TranslateError> {
    build_binary(
        &TermSet::Basis(initial.to_vec()),
        trs,
        &TermSet::Basis(unsafe_terms.to_vec()),
        options,
    )
}

/// Unary encoding for root-only rewriting: `R(t)` means `t` is reachable.
/// No congruence or transitivity axioms are generated.
pub fn build_monadic_outermost(
    initial: &[Term],
    trs: &Trs,
    unsafe_terms: &[Term],
) -> Result<TranslationResult, TranslateError> {
    let vocab = trs.vocabulary();
    let mut theory = TaggedTheory::new(vocab.clone(), unary_reach());
    for t in initial {
        if !t.is_ground() {
            return Err(TranslateError::NonGroundInitial(t.clone()));
        }
        vocab.check_term(t)?;
        theory.push(Sentence::new(reach1(t.clone()))?, Provenance::InitialTerm)?;
    }
    for rule in trs.rules() {
        let f = reach1(rule.lhs().clone()).implies(reach1(rule.rhs().clone()));
        theory.push(f.universal_closure(), Provenance::RuleImplication)?;
    }
    let goal = Formula::or(unsafe_terms.iter().cloned().map(reach1).collect()).existential_closure();
    theory.theory.check(goal.formula())?;
    Ok(TranslationResult { theory, goal })
}
