//! Ranked vocabularies, first-order terms, substitutions and rewriting.
//!
//! Rewriting is only defined on ground terms here: every consumer in this
//! crate rewrites concrete states of a system, never open terms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Interned identifier shared by symbols, variables and states.
pub type Name = Arc<str>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("term `{0}` is not ground")]
    NotGround(Term),
    #[error("left-hand side of rule `{0}` is a variable")]
    VariableLhs(String),
    #[error("rule `{rule}` introduces variables {vars:?} not bound by its left-hand side")]
    UnboundRhsVariables { rule: String, vars: Vec<Name> },
    #[error("symbol `{name}` used with arity {found} but declared with arity {declared}")]
    ArityMismatch {
        name: Name,
        declared: usize,
        found: usize,
    },
    #[error("symbol `{0}` is not declared in the vocabulary")]
    UnknownSymbol(Name),
    #[error("a vocabulary must contain at least one symbol")]
    EmptyVocabulary,
}

/// A function symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Name,
    arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<Name>, arity: usize) -> Self {
        Symbol {
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

    pub fn is_constant(&self) -> bool {
        self.arity == 0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.arity)
    }
}

/// A finite ranked alphabet. Names are unique; the arity of a name is fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: BTreeMap<Name, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a non-empty vocabulary, rejecting a name declared with two arities.
    pub fn from_symbols(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self, TermError> {
        let mut vocab = Vocabulary::new();
        for s in symbols {
            vocab.insert(s)?;
        }
        if vocab.is_empty() {
            return Err(TermError::EmptyVocabulary);
        }
        Ok(vocab)
    }

    pub fn insert(&mut self, symbol: Symbol) -> Result<(), TermError> {
        match self.symbols.get(&symbol.name) {
            Some(&declared) if declared != symbol.arity => Err(TermError::ArityMismatch {
                name: symbol.name,
                declared,
                found: symbol.arity,
            }),
            _ => {
                self.symbols.insert(symbol.name, symbol.arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.symbols
            .get_key_value(name)
            .map(|(n, &a)| Symbol::new(n.clone(), a))
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.arity(&symbol.name) == Some(symbol.arity)
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// Symbols in name order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols
            .iter()
            .map(|(n, &a)| Symbol::new(n.clone(), a))
    }

    pub fn constants(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(Symbol::is_constant)
    }

    /// Symbols of arity at least one.
    pub fn functions(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(|s| !s.is_constant())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn union(&self, other: &Vocabulary) -> Result<Vocabulary, TermError> {
        let mut out = self.clone();
        for s in other.symbols() {
            out.insert(s)?;
        }
        Ok(out)
    }

    /// Checks that every symbol of `term` is declared with the arity it is used at.
    pub fn check_term(&self, term: &Term) -> Result<(), TermError> {
        match term {
            Term::Var(_) => Ok(()),
            Term::App(sym, args) => {
                match self.arity(sym.name()) {
                    None => return Err(TermError::UnknownSymbol(sym.name().clone())),
                    Some(declared) if declared != sym.arity() => {
                        return Err(TermError::ArityMismatch {
                            name: sym.name().clone(),
                            declared,
                            found: sym.arity(),
                        })
                    }
                    Some(_) => {}
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

/// A first-order term. The arity of an application's symbol always equals
/// the number of its arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Name),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<Name>) -> Term {
        Term::App(Symbol::new(name, 0), Vec::new())
    }

    /// Application whose symbol arity is taken from the argument count.
    pub fn app(name: impl Into<Name>, args: Vec<Term>) -> Term {
        let arity = args.len();
        Term::App(Symbol::new(name, arity), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Root symbol, if the term is an application.
    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(s, _) => Some(s),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Variables in order of first occurrence (left to right, depth first).
    pub fn vars_in_order(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        self.vars_in_order().into_iter().collect()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Height of the tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// All symbols occurring in the term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    pub(crate) fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        if let Term::App(s, args) = self {
            out.insert(s.clone());
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    pub fn subterm(&self, position: &[usize]) -> Option<&Term> {
        match position.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.subterm(rest),
        }
    }

    /// Copy of `self` with the subterm at `position` replaced.
    pub fn replace_at(&self, position: &[usize], replacement: Term) -> Option<Term> {
        match position.split_first() {
            None => Some(replacement),
            Some((&i, rest)) => match self {
                Term::App(s, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, replacement)?;
                    Some(Term::App(s.clone(), args))
                }
                _ => None,
            },
        }
    }

    /// Positions of all nodes in pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (i, a) in self.args().iter().enumerate() {
            for mut p in a.positions() {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    /// Renames every variable through `rename`.
    pub fn map_vars(&self, rename: &mut impl FnMut(&Name) -> Name) -> Term {
        match self {
            Term::Var(v) => Term::Var(rename(v)),
            Term::App(s, args) => {
                Term::App(s.clone(), args.iter().map(|a| a.map_vars(rename)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{}", s.name()),
            Term::App(s, args) => {
                write!(f, "{}(", s.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Finite map from variables to terms, applied homomorphically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: impl Into<Name>, term: Term) -> Option<Term> {
        self.map.insert(var.into(), term)
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, term: &Term) -> Term {
        match term {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| term.clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }
}

impl FromIterator<(Name, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

pub fn apply_substitution(term: &Term, subst: &Substitution) -> Term {
    subst.apply(term)
}

/// Matches `pattern` against the ground term `subject`, extending `subst`.
/// Non-linear patterns require equal instances for repeated variables.
pub fn match_into(pattern: &Term, subject: &Term, subst: &mut Substitution) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => match subst.get(v) {
            Some(bound) => bound == subject,
            None => {
                subst.insert(v.clone(), subject.clone());
                true
            }
        },
        (Term::App(f, fargs), Term::App(g, gargs)) => {
            f == g
                && fargs
                    .iter()
                    .zip(gargs)
                    .all(|(p, s)| match_into(p, s, subst))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    match_into(pattern, subject, &mut subst).then_some(subst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    lhs: Term,
    rhs: Term,
}

impl RewriteRule {
    pub fn new(lhs: Term, rhs: Term) -> Result<Self, TermError> {
        if lhs.is_var() {
            return Err(TermError::VariableLhs(format!("{lhs} -> {rhs}")));
        }
        let bound = lhs.vars();
        let unbound: Vec<Name> = rhs
            .vars_in_order()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect();
        if !unbound.is_empty() {
            return Err(TermError::UnboundRhsVariables {
                rule: format!("{lhs} -> {rhs}"),
                vars: unbound,
            });
        }
        Ok(RewriteRule { lhs, rhs })
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Where a redex may occur.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Any position.
    #[default]
    Any,
    /// Root position only.
    Outermost,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(Strategy::Any),
            "outermost" => Ok(Strategy::Outermost),
            other => Err(format!("unknown strategy `{other}` (expected any|outermost)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Any => "any",
            Strategy::Outermost => "outermost",
        })
    }
}

/// A term-rewriting system over a fixed vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trs {
    vocabulary: Vocabulary,
    rules: Vec<RewriteRule>,
}

impl Trs {
    pub fn new(vocabulary: Vocabulary, rules: Vec<RewriteRule>) -> Result<Self, TermError> {
        for r in &rules {
            vocabulary.check_term(r.lhs())?;
            vocabulary.check_term(r.rhs())?;
        }
        Ok(Trs { vocabulary, rules })
    }

    /// A system with no rules.
    pub fn empty(vocabulary: Vocabulary) -> Self {
        Trs {
            vocabulary,
            rules: Vec::new(),
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Contracta of `term` at its root position.
    fn root_rewrites(&self, term: &Term, out: &mut BTreeSet<Term>) {
        for rule in &self.rules {
            if let Some(subst) = match_term(rule.lhs(), term) {
                out.insert(subst.apply(rule.rhs()));
            }
        }
    }

    fn all_rewrites(&self, term: &Term, out: &mut BTreeSet<Term>) {
        self.root_rewrites(term, out);
        if let Term::App(sym, args) = term {
            for (i, arg) in args.iter().enumerate() {
                let mut inner = BTreeSet::new();
                self.all_rewrites(arg, &mut inner);
                for replacement in inner {
                    let mut new_args = args.clone();
                    new_args[i] = replacement;
                    out.insert(Term::App(sym.clone(), new_args));
                }
            }
        }
    }

    pub fn successors(&self, term: &Term, strategy: Strategy) -> Result<BTreeSet<Term>, TermError> {
        match strategy {
            Strategy::Any => one_step_successors(term, self),
            Strategy::Outermost => outermost_successors(term, self),
        }
    }
}

fn require_ground(term: &Term) -> Result<(), TermError> {
    if term.is_ground() {
        Ok(())
    } else {
        Err(TermError::NotGround(term.clone()))
    }
}

/// Every term obtained by rewriting one redex anywhere in `term`.
pub fn one_step_successors(term: &Term, trs: &Trs) -> Result<BTreeSet<Term>, TermError> {
    require_ground(term)?;
    let mut out = BTreeSet::new();
    trs.all_rewrites(term, &mut out);
    Ok(out)
}

/// Every term obtained by rewriting `term` at its root.
pub fn outermost_successors(term: &Term, trs: &Trs) -> Result<BTreeSet<Term>, TermError> {
    require_ground(term)?;
    let mut out = BTreeSet::new();
    trs.root_rewrites(term, &mut out);
    Ok(out)
}

/// Result of a bounded breadth-first exploration.
#[derive(Clone, Debug)]
pub struct Reachable {
    /// Each discovered term with the term it was first reached from.
    parents: BTreeMap<Term, Option<Term>>,
    pruned: bool,
    truncated: bool,
}

impl Reachable {
    pub fn contains(&self, term: &Term) -> bool {
        self.parents.contains_key(term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.parents.keys()
    }

    pub fn into_set(self) -> BTreeSet<Term> {
        self.parents.into_keys().collect()
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// True when some successor was dropped for exceeding the size cap.
    pub fn pruned(&self) -> bool {
        self.pruned
    }

    /// True when the depth bound cut off a non-empty frontier.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// True when the exploration found the whole reachable set.
    pub fn is_complete(&self) -> bool {
        !self.pruned && !self.truncated
    }

    /// Rewrite sequence from a start term to `target`, both ends included.
    pub fn trace_to(&self, target: &Term) -> Option<Vec<Term>> {
        let mut trace = vec![target.clone()];
        let mut cur = self.parents.get(target)?;
        while let Some(p) = cur {
            trace.push(p.clone());
            cur = &self.parents[p];
        }
        trace.reverse();
        Some(trace)
    }
}

/// Terms reachable from `start` in at most `depth` steps, ignoring any term
/// with more than `size_cap` nodes.
pub fn bounded_reachable(
    start: &Term,
    trs: &Trs,
    depth: usize,
    size_cap: usize,
    strategy: Strategy,
) -> Result<Reachable, TermError> {
    bounded_reachable_from(std::iter::once(start.clone()), trs, depth, size_cap, strategy)
}

/// Multi-source variant of [`bounded_reachable`]; start terms are always included.
pub fn bounded_reachable_from(
    starts: impl IntoIterator<Item = Term>,
    trs: &Trs,
    depth: usize,
    size_cap: usize,
    strategy: Strategy,
) -> Result<Reachable, TermError> {
    let mut parents = BTreeMap::new();
    let mut frontier = VecDeque::new();
    for t in starts {
        require_ground(&t)?;
        if !parents.contains_key(&t) {
            parents.insert(t.clone(), None);
            frontier.push_back(t);
        }
    }
    let mut pruned = false;
    let mut truncated = false;
    for level in 0..=depth {
        let mut next = VecDeque::new();
        while let Some(t) = frontier.pop_front() {
            let succ = trs.successors(&t, strategy)?;
            if level == depth {
                if succ.iter().any(|s| !parents.contains_key(s)) {
                    truncated = true;
                }
                continue;
            }
            for s in succ {
                if s.size() > size_cap {
                    pruned = true;
                    continue;
                }
                if !parents.contains_key(&s) {
                    parents.insert(s.clone(), Some(t.clone()));
                    next.push_back(s);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Reachable {
        parents,
        pruned,
        truncated,
    })
}

/// Whether `to` is a one-step successor of `from` under `strategy`.
pub fn is_rewrite_step(from: &Term, to: &Term, trs: &Trs, strategy: Strategy) -> bool {
    trs.successors(from, strategy)
        .map(|s| s.contains(to))
        .unwrap_or(false)
}

/// All ground terms over `vocabulary` of depth at most `max_depth`, in
/// canonical order.
pub fn enumerate_ground_terms(vocabulary: &Vocabulary, max_depth: usize) -> BTreeSet<Term> {
    let mut terms: BTreeSet<Term> = vocabulary.constants().map(|c| Term::App(c, vec![])).collect();
    for _ in 0..max_depth {
        let pool: Vec<Term> = terms.iter().cloned().collect();
        let mut next = terms.clone();
        for f in vocabulary.functions() {
            for args in tuples(&pool, f.arity()) {
                next.insert(Term::App(f.clone(), args));
            }
        }
        terms = next;
    }
    terms
}

/// Cartesian power `pool^n` in lexicographic order.
pub(crate) fn tuples<T: Clone>(pool: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }
    fn v(n: &str) -> Term {
        Term::var(n)
    }
    fn f(n: &str, args: Vec<Term>) -> Term {
        Term::app(n, args)
    }
    fn s(t: Term) -> Term {
        f("s", vec![t])
    }

    fn intro_trs() -> Trs {
        let vocab = Vocabulary::from_symbols([
            Symbol::new("f", 1),
            Symbol::new("s", 1),
            Symbol::new("a", 0),
        ])
        .unwrap();
        let rule = RewriteRule::new(f("f", vec![v("x")]), f("f", vec![s(s(v("x")))])).unwrap();
        Trs::new(vocab, vec![rule]).unwrap()
    }

    fn readers_writers() -> Trs {
        let vocab = Vocabulary::from_symbols([
            Symbol::new("0", 0),
            Symbol::new("s", 1),
            Symbol::new("state", 2),
        ])
        .unwrap();
        let st = |a, b| f("state", vec![a, b]);
        let rules = vec![
            RewriteRule::new(st(c("0"), c("0")), st(c("0"), s(c("0")))).unwrap(),
            RewriteRule::new(st(v("x"), c("0")), st(s(v("x")), c("0"))).unwrap(),
            RewriteRule::new(st(v("x"), s(v("y"))), st(v("x"), v("y"))).unwrap(),
            RewriteRule::new(st(s(v("x")), v("y")), st(v("x"), v("y"))).unwrap(),
        ];
        Trs::new(vocab, rules).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let mut sub = Substitution::new();
        sub.insert("x", s(c("a")));
        assert_eq!(sub.apply(&f("f", vec![v("x")])), f("f", vec![s(c("a"))]));
        assert_eq!(Substitution::new().apply(&v("x")), v("x"));

        let mut sub = Substitution::new();
        sub.insert("x", c("0"));
        sub.insert("y", s(c("0")));
        assert_eq!(
            apply_substitution(&f("plus", vec![v("x"), v("y")]), &sub),
            f("plus", vec![c("0"), s(c("0"))])
        );
    }

    #[test]
    fn one_step_examples() {
        let trs = intro_trs();
        let succ = one_step_successors(&f("f", vec![c("a")]), &trs).unwrap();
        assert_eq!(succ, BTreeSet::from([f("f", vec![s(s(c("a")))])]));

        let empty = Trs::empty(trs.vocabulary().clone());
        assert!(one_step_successors(&f("f", vec![c("a")]), &empty)
            .unwrap()
            .is_empty());

        assert!(matches!(
            one_step_successors(&f("f", vec![v("x")]), &trs),
            Err(TermError::NotGround(_))
        ));
    }

    #[test]
    fn outermost_examples() {
        let trs = readers_writers();
        let st = |a, b| f("state", vec![a, b]);
        let got = outermost_successors(&st(c("0"), c("0")), &trs).unwrap();
        assert_eq!(
            got,
            BTreeSet::from([st(c("0"), s(c("0"))), st(s(c("0")), c("0"))])
        );
        let got = outermost_successors(&st(s(c("0")), s(c("0"))), &trs).unwrap();
        assert_eq!(
            got,
            BTreeSet::from([st(s(c("0")), c("0")), st(c("0"), s(c("0")))])
        );

        let vocab = Vocabulary::from_symbols([
            Symbol::new("f", 1),
            Symbol::new("s", 1),
            Symbol::new("a", 0),
            Symbol::new("b", 0),
        ])
        .unwrap();
        let ab = Trs::new(vocab, vec![RewriteRule::new(c("a"), c("b")).unwrap()]).unwrap();
        let t = f("f", vec![s(c("a"))]);
        assert!(outermost_successors(&t, &ab).unwrap().is_empty());
        assert_eq!(one_step_successors(&t, &ab).unwrap().len(), 1);
    }

    #[test]
    fn bounded_reachability_examples() {
        let trs = readers_writers();
        let st = |a, b| f("state", vec![a, b]);
        let r = bounded_reachable(&st(c("0"), c("0")), &trs, 2, 10, Strategy::Outermost).unwrap();
        assert!(r.contains(&st(s(s(c("0"))), c("0"))));

        let t = f("f", vec![c("a")]);
        let r = bounded_reachable(&t, &intro_trs(), 0, usize::MAX, Strategy::Any).unwrap();
        assert_eq!(r.into_set(), BTreeSet::from([t.clone()]));

        let r = bounded_reachable(&t, &intro_trs(), 6, 20, Strategy::Any).unwrap();
        assert!(!r.contains(&f("f", vec![s(c("a"))])));
        assert!(r.contains(&f("f", vec![s(s(s(s(c("a")))))])));
        assert!(!r.pruned());
        assert!(r.truncated());
        let r = bounded_reachable(&t, &intro_trs(), 6, 8, Strategy::Any).unwrap();
        assert!(r.pruned());
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn traces_replay() {
        let trs = readers_writers();
        let st = |a, b| f("state", vec![a, b]);
        let r = bounded_reachable(&st(c("0"), c("0")), &trs, 3, 20, Strategy::Outermost).unwrap();
        let target = st(s(s(c("0"))), c("0"));
        let trace = r.trace_to(&target).unwrap();
        assert_eq!(trace.first(), Some(&st(c("0"), c("0"))));
        for w in trace.windows(2) {
            assert!(is_rewrite_step(&w[0], &w[1], &trs, Strategy::Outermost));
        }
    }

    #[test]
    fn rule_well_formedness() {
        assert!(matches!(
            RewriteRule::new(v("x"), f("f", vec![v("x")])),
            Err(TermError::VariableLhs(_))
        ));
        assert!(matches!(
            RewriteRule::new(f("f", vec![v("x")]), f("g", vec![v("y")])),
            Err(TermError::UnboundRhsVariables { .. })
        ));
    }

    #[test]
    fn vocabulary_rejects_arity_conflicts() {
        let mut vocab = Vocabulary::new();
        vocab.insert(Symbol::new("f", 1)).unwrap();
        assert!(vocab.insert(Symbol::new("f", 2)).is_err());
        assert!(vocab.check_term(&f("f", vec![c("a"), c("a")])).is_err());
        assert!(matches!(
            vocab.check_term(&c("zz")),
            Err(TermError::UnknownSymbol(_))
        ));
        assert_eq!(Vocabulary::from_symbols([]), Err(TermError::EmptyVocabulary));
    }

    #[test]
    fn ground_term_enumeration_counts() {
        let vocab = Vocabulary::from_symbols([
            Symbol::new("f", 1),
            Symbol::new("a", 0),
            Symbol::new("b", 0),
        ])
        .unwrap();
        // 2 leaves, then f over everything so far: 2, 4, 6, ...
        assert_eq!(enumerate_ground_terms(&vocab, 0).len(), 2);
        assert_eq!(enumerate_ground_terms(&vocab, 1).len(), 4);
        assert_eq!(enumerate_ground_terms(&vocab, 3).len(), 8);
    }
}
