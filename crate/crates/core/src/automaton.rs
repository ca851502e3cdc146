//! Bottom-up finite tree automata with normalized and epsilon transitions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::terms::{tuples, Name, Symbol, Term, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("final state `{0}` is not a state of the automaton")]
    UnknownFinalState(State),
    #[error("transition `{0}` mentions an undeclared state")]
    UnknownState(String),
    #[error("transition `{0}` uses a symbol outside the vocabulary")]
    UnknownSymbol(String),
    #[error("term `{0}` is not a ground term over the automaton's vocabulary")]
    BadInput(Term),
    #[error("automata have different vocabularies")]
    VocabularyMismatch,
}

/// An automaton state. States are treated as fresh constants in the
/// first-order translation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(Name);

impl State {
    pub fn new(name: impl Into<Name>) -> Self {
        State(name.into())
    }

    pub fn name(&self) -> &Name {
        &self.0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transition {
    /// `f(q1, ..., qn) -> q`
    Normalized {
        symbol: Symbol,
        args: Vec<State>,
        target: State,
    },
    /// `q -> q'`
    Epsilon { source: State, target: State },
}

impl Transition {
    pub fn normalized(symbol: Symbol, args: Vec<State>, target: State) -> Self {
        Transition::Normalized {
            symbol,
            args,
            target,
        }
    }

    pub fn epsilon(source: State, target: State) -> Self {
        Transition::Epsilon { source, target }
    }

    pub fn target(&self) -> &State {
        match self {
            Transition::Normalized { target, .. } | Transition::Epsilon { target, .. } => target,
        }
    }

    /// The left-hand side as a configuration: a term whose leaves are state
    /// constants.
    pub fn lhs_term(&self) -> Term {
        match self {
            Transition::Normalized { symbol, args, .. } => Term::App(
                symbol.clone(),
                args.iter().map(|q| Term::constant(q.name().clone())).collect(),
            ),
            Transition::Epsilon { source, .. } => Term::constant(source.name().clone()),
        }
    }

    fn states(&self) -> impl Iterator<Item = &State> {
        let (args, extra): (&[State], &State) = match self {
            Transition::Normalized { args, target, .. } => (args, target),
            Transition::Epsilon { source, target } => (std::slice::from_ref(source), target),
        };
        args.iter().chain(std::iter::once(extra))
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs_term(), self.target())
    }
}

/// A (bottom-up, non-deterministic, finite) tree automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomaton {
    vocabulary: Vocabulary,
    states: BTreeSet<State>,
    finals: BTreeSet<State>,
    transitions: BTreeSet<Transition>,
}

impl TreeAutomaton {
    pub fn new(
        vocabulary: Vocabulary,
        states: impl IntoIterator<Item = State>,
        finals: impl IntoIterator<Item = State>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, AutomatonError> {
        let states: BTreeSet<State> = states.into_iter().collect();
        let finals: BTreeSet<State> = finals.into_iter().collect();
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        if let Some(q) = finals.iter().find(|q| !states.contains(*q)) {
            return Err(AutomatonError::UnknownFinalState(q.clone()));
        }
        for t in &transitions {
            if t.states().any(|q| !states.contains(q)) {
                return Err(AutomatonError::UnknownState(t.to_string()));
            }
            if let Transition::Normalized { symbol, .. } = t {
                if !vocabulary.contains(symbol) {
                    return Err(AutomatonError::UnknownSymbol(t.to_string()));
                }
            }
        }
        Ok(TreeAutomaton {
            vocabulary,
            states,
            finals,
            transitions,
        })
    }

    /// Like [`TreeAutomaton::new`], taking the state set to be everything the
    /// transitions and final states mention.
    pub fn from_transitions(
        vocabulary: Vocabulary,
        finals: impl IntoIterator<Item = State>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, AutomatonError> {
        let finals: Vec<State> = finals.into_iter().collect();
        let transitions: Vec<Transition> = transitions.into_iter().collect();
        let states: BTreeSet<State> = transitions
            .iter()
            .flat_map(|t| t.states().cloned())
            .chain(finals.iter().cloned())
            .collect();
        Self::new(vocabulary, states, finals, transitions)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn transitions(&self) -> impl Iterator<Item = &Transition> {
        self.transitions.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// Renames states through `rename`, which must be injective.
    pub fn rename_states(&self, rename: impl Fn(&State) -> State) -> TreeAutomaton {
        let map_t = |t: &Transition| match t {
            Transition::Normalized {
                symbol,
                args,
                target,
            } => Transition::normalized(
                symbol.clone(),
                args.iter().map(&rename).collect(),
                rename(target),
            ),
            Transition::Epsilon { source, target } => {
                Transition::epsilon(rename(source), rename(target))
            }
        };
        TreeAutomaton {
            vocabulary: self.vocabulary.clone(),
            states: self.states.iter().map(&rename).collect(),
            finals: self.finals.iter().map(&rename).collect(),
            transitions: self.transitions.iter().map(map_t).collect(),
        }
    }

    /// Same automaton over a larger alphabet.
    pub fn with_vocabulary(&self, vocabulary: Vocabulary) -> Result<TreeAutomaton, AutomatonError> {
        Self::new(
            vocabulary,
            self.states.iter().cloned(),
            self.finals.iter().cloned(),
            self.transitions.iter().cloned(),
        )
    }

    /// For every state, the states reachable from it by epsilon transitions
    /// (including itself).
    pub fn epsilon_closure(&self) -> BTreeMap<State, BTreeSet<State>> {
        let mut succ: BTreeMap<&State, Vec<&State>> = BTreeMap::new();
        for t in &self.transitions {
            if let Transition::Epsilon { source, target } = t {
                succ.entry(source).or_default().push(target);
            }
        }
        self.states
            .iter()
            .map(|q| {
                let mut seen = BTreeSet::from([q.clone()]);
                let mut stack = vec![q];
                while let Some(p) = stack.pop() {
                    for &r in succ.get(p).map(Vec::as_slice).unwrap_or(&[]) {
                        if seen.insert(r.clone()) {
                            stack.push(r);
                        }
                    }
                }
                (q.clone(), seen)
            })
            .collect()
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions
            .iter()
            .any(|t| matches!(t, Transition::Epsilon { .. }))
    }

    /// Language-preserving automaton without epsilon transitions.
    pub fn without_epsilon(&self) -> TreeAutomaton {
        if !self.has_epsilon() {
            return self.clone();
        }
        let closure = self.epsilon_closure();
        let transitions = self
            .transitions
            .iter()
            .filter_map(|t| match t {
                Transition::Normalized {
                    symbol,
                    args,
                    target,
                } => Some(closure[target].iter().map(move |q| {
                    Transition::normalized(symbol.clone(), args.clone(), q.clone())
                })),
                Transition::Epsilon { .. } => None,
            })
            .flatten()
            .collect();
        TreeAutomaton {
            vocabulary: self.vocabulary.clone(),
            states: self.states.clone(),
            finals: self.finals.clone(),
            transitions,
        }
    }

    /// Normalized transitions grouped by symbol, with epsilon closure folded in.
    fn rules_by_symbol(&self) -> HashMap<Symbol, Vec<(Vec<State>, State)>> {
        let mut by_symbol: HashMap<Symbol, Vec<(Vec<State>, State)>> = HashMap::new();
        for t in self.without_epsilon().transitions {
            if let Transition::Normalized {
                symbol,
                args,
                target,
            } = t
            {
                by_symbol.entry(symbol).or_default().push((args, target));
            }
        }
        by_symbol
    }

    /// `{q | t =>* q}`.
    pub fn reachable_states(&self, term: &Term) -> Result<BTreeSet<State>, AutomatonError> {
        let rules = self.rules_by_symbol();
        self.run(term, &rules)
    }

    fn run(
        &self,
        term: &Term,
        rules: &HashMap<Symbol, Vec<(Vec<State>, State)>>,
    ) -> Result<BTreeSet<State>, AutomatonError> {
        let Term::App(sym, args) = term else {
            return Err(AutomatonError::BadInput(term.clone()));
        };
        if !self.vocabulary.contains(sym) {
            return Err(AutomatonError::BadInput(term.clone()));
        }
        let children = args
            .iter()
            .map(|a| self.run(a, rules))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(rules
            .get(sym)
            .map(|rs| {
                rs.iter()
                    .filter(|(qs, _)| qs.iter().zip(&children).all(|(q, c)| c.contains(q)))
                    .map(|(_, q)| q.clone())
                    .collect()
            })
            .unwrap_or_default())
    }

    pub fn accepts(&self, term: &Term) -> Result<bool, AutomatonError> {
        Ok(self
            .reachable_states(term)?
            .iter()
            .any(|q| self.finals.contains(q)))
    }

    pub fn accepts_in(&self, term: &Term, state: &State) -> Result<bool, AutomatonError> {
        Ok(self.reachable_states(term)?.contains(state))
    }

    /// Subset construction: an epsilon-free, deterministic and complete
    /// automaton over the same vocabulary. The empty subset is kept as an
    /// explicit non-final sink.
    pub fn determinize(&self) -> TreeAutomaton {
        self.subset_construction().to_automaton()
    }

    pub fn subset_construction(&self) -> DeterministicAutomaton {
        let rules = self.rules_by_symbol();
        let symbols: Vec<Symbol> = self.vocabulary.symbols().collect();
        let mut subsets: Vec<BTreeSet<State>> = vec![BTreeSet::new()];
        let mut index: HashMap<BTreeSet<State>, usize> = HashMap::from([(BTreeSet::new(), 0)]);
        let mut table: BTreeMap<(Symbol, Vec<usize>), usize> = BTreeMap::new();
        loop {
            let known = subsets.len();
            let ids: Vec<usize> = (0..known).collect();
            for sym in &symbols {
                for tuple in tuples(&ids, sym.arity()) {
                    let key = (sym.clone(), tuple);
                    if table.contains_key(&key) {
                        continue;
                    }
                    let target: BTreeSet<State> = rules
                        .get(sym)
                        .into_iter()
                        .flatten()
                        .filter(|(qs, _)| {
                            qs.iter()
                                .zip(&key.1)
                                .all(|(q, &i)| subsets[i].contains(q))
                        })
                        .map(|(_, q)| q.clone())
                        .collect();
                    let id = *index.entry(target.clone()).or_insert_with(|| {
                        subsets.push(target);
                        subsets.len() - 1
                    });
                    table.insert(key, id);
                }
            }
            if subsets.len() == known {
                break;
            }
        }
        let finals = subsets
            .iter()
            .map(|s| s.iter().any(|q| self.finals.contains(q)))
            .collect();
        DeterministicAutomaton {
            vocabulary: self.vocabulary.clone(),
            subsets,
            finals,
            table,
        }
    }

    /// Automaton recognizing the intersection of both languages. Only pairs of
    /// states reachable bottom-up are kept.
    pub fn product(&self, other: &TreeAutomaton) -> Result<TreeAutomaton, AutomatonError> {
        if self.vocabulary != other.vocabulary {
            return Err(AutomatonError::VocabularyMismatch);
        }
        let left = self.rules_by_symbol();
        let right = other.rules_by_symbol();
        let pair = |p: &State, q: &State| State::new(format!("({p},{q})"));
        let mut reached: BTreeSet<(State, State)> = BTreeSet::new();
        let mut transitions = BTreeSet::new();
        loop {
            let before = reached.len();
            for sym in self.vocabulary.symbols() {
                let (Some(ls), Some(rs)) = (left.get(&sym), right.get(&sym)) else {
                    continue;
                };
                for (largs, lq) in ls {
                    for (rargs, rq) in rs {
                        let args: Vec<(State, State)> =
                            largs.iter().cloned().zip(rargs.iter().cloned()).collect();
                        if args.iter().all(|a| reached.contains(a)) {
                            transitions.insert(Transition::normalized(
                                sym.clone(),
                                args.iter().map(|(p, q)| pair(p, q)).collect(),
                                pair(lq, rq),
                            ));
                            reached.insert((lq.clone(), rq.clone()));
                        }
                    }
                }
            }
            if reached.len() == before {
                break;
            }
        }
        let finals = reached
            .iter()
            .filter(|(p, q)| self.finals.contains(p) && other.finals.contains(q))
            .map(|(p, q)| pair(p, q));
        TreeAutomaton::new(
            self.vocabulary.clone(),
            reached.iter().map(|(p, q)| pair(p, q)),
            finals,
            transitions,
        )
    }

    /// States `q` with a non-empty `L(A, q)`.
    pub fn inhabited_states(&self) -> BTreeSet<State> {
        let mut reached = BTreeSet::new();
        loop {
            let before = reached.len();
            for t in &self.transitions {
                let ready = match t {
                    Transition::Normalized { args, .. } => args.iter().all(|q| reached.contains(q)),
                    Transition::Epsilon { source, .. } => reached.contains(source),
                };
                if ready {
                    reached.insert(t.target().clone());
                }
            }
            if reached.len() == before {
                return reached;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        let inhabited = self.inhabited_states();
        !self.finals.iter().any(|q| inhabited.contains(q))
    }

    /// `{t ∈ L(A) | depth(t) <= max_depth}`; constants have depth 0.
    pub fn enumerate_language(&self, max_depth: usize) -> BTreeSet<Term> {
        self.enumerate_by_state(max_depth)
            .into_iter()
            .filter(|(q, _)| self.finals.contains(q))
            .flat_map(|(_, ts)| ts)
            .collect()
    }

    /// `L(A, q)` restricted to depth at most `max_depth`, for every state.
    pub fn enumerate_by_state(&self, max_depth: usize) -> BTreeMap<State, BTreeSet<Term>> {
        let rules = self.rules_by_symbol();
        let mut lang: BTreeMap<State, BTreeSet<Term>> = BTreeMap::new();
        for level in 0..=max_depth {
            let mut next = lang.clone();
            for (sym, rs) in &rules {
                if level == 0 && sym.arity() > 0 {
                    continue;
                }
                for (args, target) in rs {
                    let pools: Vec<Vec<Term>> = args
                        .iter()
                        .map(|q| lang.get(q).map(|s| s.iter().cloned().collect()).unwrap_or_default())
                        .collect();
                    for combo in product_of(&pools) {
                        next.entry(target.clone())
                            .or_default()
                            .insert(Term::App(sym.clone(), combo));
                    }
                }
            }
            if next == lang {
                break;
            }
            lang = next;
        }
        lang
    }

    /// Syntactic check: no epsilon transitions and exactly one transition for
    /// every symbol and tuple of states.
    pub fn is_deterministic_complete(&self) -> bool {
        if self.has_epsilon() {
            return false;
        }
        let states: Vec<State> = self.states.iter().cloned().collect();
        let mut count: HashMap<(&Symbol, &[State]), usize> = HashMap::new();
        for t in &self.transitions {
            if let Transition::Normalized { symbol, args, .. } = t {
                *count.entry((symbol, args.as_slice())).or_default() += 1;
            }
        }
        self.vocabulary.symbols().all(|sym| {
            tuples(&states, sym.arity())
                .iter()
                .all(|tuple| count.get(&(&sym, tuple.as_slice())) == Some(&1))
        })
    }
}

/// Cartesian product of term pools.
fn product_of(pools: &[Vec<Term>]) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for pool in pools {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Result of the subset construction in indexed form. Index 0 is the sink
/// (the empty subset).
#[derive(Clone, Debug)]
pub struct DeterministicAutomaton {
    vocabulary: Vocabulary,
    subsets: Vec<BTreeSet<State>>,
    finals: Vec<bool>,
    table: BTreeMap<(Symbol, Vec<usize>), usize>,
}

impl DeterministicAutomaton {
    pub const SINK: usize = 0;

    pub fn state_count(&self) -> usize {
        self.subsets.len()
    }

    pub fn subset(&self, id: usize) -> &BTreeSet<State> {
        &self.subsets[id]
    }

    pub fn is_final(&self, id: usize) -> bool {
        self.finals[id]
    }

    /// Target of `symbol(args)`; total on the vocabulary.
    pub fn step(&self, symbol: &Symbol, args: &[usize]) -> Option<usize> {
        self.table.get(&(symbol.clone(), args.to_vec())).copied()
    }

    pub fn run(&self, term: &Term) -> Option<usize> {
        let Term::App(sym, args) = term else {
            return None;
        };
        let ids = args.iter().map(|a| self.run(a)).collect::<Option<Vec<_>>>()?;
        self.step(sym, &ids)
    }

    pub fn state_name(&self, id: usize) -> State {
        let inner: Vec<String> = self.subsets[id].iter().map(|q| q.to_string()).collect();
        State::new(format!("{{{}}}", inner.join(",")))
    }

    pub fn to_automaton(&self) -> TreeAutomaton {
        let names: Vec<State> = (0..self.subsets.len()).map(|i| self.state_name(i)).collect();
        let transitions = self.table.iter().map(|((sym, args), &t)| {
            Transition::normalized(
                sym.clone(),
                args.iter().map(|&i| names[i].clone()).collect(),
                names[t].clone(),
            )
        });
        let finals = names
            .iter()
            .zip(&self.finals)
            .filter(|(_, &f)| f)
            .map(|(n, _)| n.clone());
        TreeAutomaton::new(self.vocabulary.clone(), names.clone(), finals, transitions)
            .expect("subset construction produces a well-formed automaton")
    }
}
