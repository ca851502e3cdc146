//! Countermodels built directly from an automaton that overapproximates the
//! reachable terms.
//!
//! Each domain element is a triple of states of the determinized initial,
//! overapproximating and unsafe automata. Function symbols act componentwise
//! and `R` is the least relation closed under the theory's Horn clauses.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::automaton::{AutomatonError, DeterministicAutomaton, State, Transition, TreeAutomaton};
use crate::model::{first_violation, tuple_at, FiniteModel, ModelError, Violation};
use crate::terms::{bounded_reachable, Name, Strategy, Symbol, Term, TermError, Trs, Vocabulary};
use crate::translate::{build_basic, TranslateError, TranslationOptions, TranslationResult, REACH};

/// Largest reachable-term size explored when checking coverage.
pub const COVERAGE_SIZE_CAP: usize = 64;

/// Upper bound on table entries and fixpoint seeds the construction will
/// materialize.
pub const WORK_LIMIT: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("automaton: {0}")]
    Automaton(#[from] AutomatonError),
    #[error("term: {0}")]
    Term(#[from] TermError),
    #[error("translation: {0}")]
    Translate(#[from] TranslateError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("product domain too large ({0} table entries)")]
    TooLarge(usize),
    #[error("product model rejected: {violation}")]
    GateFailure {
        violation: Violation,
        rejected: Box<ProductModel>,
    },
}

/// Evidence that an automaton covers the reachable terms and avoids the
/// unsafe ones.
#[derive(Clone, Debug)]
pub struct CompletionCertificate {
    pub a_star: TreeAutomaton,
    pub coverage_depth: usize,
    /// Exact: the intersection with the unsafe language is empty.
    pub disjointness: bool,
    /// A rewrite sequence from an initial term to a term outside the
    /// automaton's language, if one was found.
    pub coverage_counterexample: Option<Vec<Term>>,
    /// Number of distinct reachable terms tested for membership.
    pub terms_checked: usize,
    /// True when every exploration finished before the depth and size bounds.
    pub exhaustive: bool,
}

impl CompletionCertificate {
    pub fn holds(&self) -> bool {
        self.disjointness && self.coverage_counterexample.is_none()
    }
}

fn shared_vocabulary<'a>(parts: impl IntoIterator<Item = &'a Vocabulary>) -> Result<Vocabulary, WitnessError> {
    let mut v = Vocabulary::new();
    for p in parts {
        v = v.union(p)?;
    }
    Ok(v)
}

/// Checks that `a_star` avoids `L(a_u)` (exactly) and contains every term
/// reachable from `L(a_i)` (up to `depth` for both the initial terms and the
/// number of rewrite steps).
pub fn check_hypotheses(
    a_i: &TreeAutomaton,
    a_u: &TreeAutomaton,
    a_star: &TreeAutomaton,
    trs: &Trs,
    depth: usize,
) -> Result<CompletionCertificate, WitnessError> {
    let vocab = shared_vocabulary([a_i.vocabulary(), a_u.vocabulary(), a_star.vocabulary(), trs.vocabulary()])?;
    let a_i = a_i.with_vocabulary(vocab.clone())?;
    let a_u = a_u.with_vocabulary(vocab.clone())?;
    let star = a_star.with_vocabulary(vocab.clone())?;
    let disjointness = star.product(&a_u)?.is_empty();

    let mut seen = BTreeSet::new();
    let mut counterexample = None;
    let mut exhaustive = true;
    'outer: for t0 in a_i.enumerate_language(depth) {
        let reach = bounded_reachable(&t0, trs, depth, COVERAGE_SIZE_CAP, Strategy::Any)?;
        exhaustive &= reach.is_complete();
        for t in reach.terms() {
            if !seen.insert(t.clone()) {
                continue;
            }
            if !star.accepts(t)? {
                counterexample = reach.trace_to(t);
                break 'outer;
            }
        }
    }
    Ok(CompletionCertificate {
        a_star: a_star.clone(),
        coverage_depth: depth,
        disjointness,
        coverage_counterexample: counterexample,
        terms_checked: seen.len(),
        exhaustive,
    })
}

/// Finite algebra on indices `0..size`. `labels[e]` are the component
/// states of element `e`.
#[derive(Clone, Debug)]
struct Algebra {
    size: usize,
    constants: BTreeMap<Name, usize>,
    functions: BTreeMap<Name, (usize, Vec<usize>)>,
    labels: Vec<[usize; 3]>,
}

impl Algebra {
    fn apply(&self, name: &str, args: &[usize]) -> usize {
        if args.is_empty() {
            return self.constants[name];
        }
        let (_, table) = &self.functions[name];
        table[args.iter().fold(0, |acc, &a| acc * self.size + a)]
    }

    fn eval(&self, t: &Term, env: &BTreeMap<Name, usize>) -> usize {
        match t {
            Term::Var(v) => env[v],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval(a, env)).collect();
                self.apply(f.name(), &vals)
            }
        }
    }

    /// Least set containing the constants and closed under the functions.
    fn realizable(&self) -> Vec<bool> {
        let mut keep = vec![false; self.size];
        for &c in self.constants.values() {
            keep[c] = true;
        }
        loop {
            let mut changed = false;
            for (arity, table) in self.functions.values() {
                for (i, &v) in table.iter().enumerate() {
                    if !keep[v] && tuple_at(self.size, *arity, i).iter().all(|&a| keep[a]) {
                        keep[v] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return keep;
            }
        }
    }

    fn restrict(&self, keep: &[bool]) -> Algebra {
        let old: Vec<usize> = (0..self.size).filter(|&e| keep[e]).collect();
        let mut new_index = vec![usize::MAX; self.size];
        for (i, &e) in old.iter().enumerate() {
            new_index[e] = i;
        }
        let size = old.len();
        let functions = self
            .functions
            .iter()
            .map(|(name, (arity, _))| {
                let values = (0..size.pow(*arity as u32))
                    .map(|i| {
                        let args: Vec<usize> = tuple_at(size, *arity, i).iter().map(|&a| old[a]).collect();
                        new_index[self.apply(name, &args)]
                    })
                    .collect();
                (name.clone(), (*arity, values))
            })
            .collect();
        Algebra {
            size,
            constants: self.constants.iter().map(|(n, &v)| (n.clone(), new_index[v])).collect(),
            functions,
            labels: old.iter().map(|&e| self.labels[e]).collect(),
        }
    }
}

/// Least binary relation on the algebra that contains the rule instances,
/// the automaton transitions and (optionally) the identity, and is closed
/// under congruence and transitivity.
fn least_reach(
    alg: &Algebra,
    trs: &Trs,
    transitions: &[(Term, Term)],
    options: &TranslationOptions,
) -> Result<Vec<Vec<usize>>, WitnessError> {
    let n = alg.size;
    let mut rel = Closure {
        n,
        holds: vec![false; n * n],
        succ: vec![Vec::new(); n],
        pred: vec![Vec::new(); n],
        queue: VecDeque::new(),
    };
    if options.include_reflexivity {
        for d in 0..n {
            rel.add(d, d);
        }
    }
    for rule in trs.rules() {
        let vars: Vec<Name> = rule.lhs().vars().into_iter().collect();
        let count = n
            .checked_pow(vars.len() as u32)
            .filter(|&c| c <= WORK_LIMIT)
            .ok_or(WitnessError::TooLarge(usize::MAX))?;
        for i in 0..count {
            let env: BTreeMap<Name, usize> = vars.iter().cloned().zip(tuple_at(n, vars.len(), i)).collect();
            rel.add(alg.eval(rule.lhs(), &env), alg.eval(rule.rhs(), &env));
        }
    }
    let empty = BTreeMap::new();
    for (lhs, q) in transitions {
        rel.add(alg.eval(lhs, &empty), alg.eval(q, &empty));
    }

    let contexts: Vec<(&Name, usize, usize)> = alg
        .functions
        .iter()
        .flat_map(|(name, (arity, _))| {
            (1..=*arity)
                .filter(|&p| !options.omits(name, p))
                .map(move |p| (name, *arity, p - 1))
        })
        .collect();
    while let Some((a, b)) = rel.queue.pop_front() {
        for &(name, arity, pos) in &contexts {
            for i in 0..n.pow(arity as u32 - 1) {
                let mut args = tuple_at(n, arity - 1, i);
                args.insert(pos, a);
                let left = alg.apply(name, &args);
                args[pos] = b;
                let right = alg.apply(name, &args);
                rel.add(left, right);
            }
        }
        for c in rel.succ[b].clone() {
            rel.add(a, c);
        }
        for z in rel.pred[a].clone() {
            rel.add(z, b);
        }
    }
    Ok(rel.succ)
}

struct Closure {
    n: usize,
    holds: Vec<bool>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    queue: VecDeque<(usize, usize)>,
}

impl Closure {
    fn add(&mut self, a: usize, b: usize) {
        if !self.holds[a * self.n + b] {
            self.holds[a * self.n + b] = true;
            self.succ[a].push(b);
            self.pred[b].push(a);
            self.queue.push_back((a, b));
        }
    }
}

/// A countermodel assembled from three automata, with the component states
/// of every element.
#[derive(Clone, Debug)]
pub struct ProductModel {
    pub model: FiniteModel,
    pub translation: TranslationResult,
    /// True when the full triple domain failed and the model was rebuilt on
    /// the elements denoted by ground terms.
    pub restricted: bool,
    components: [DeterministicAutomaton; 3],
    labels: Vec<[usize; 3]>,
}

impl ProductModel {
    /// Subsets of initial, overapproximating and unsafe states making up
    /// `element`; the empty set stands for "no state".
    pub fn components(&self, element: usize) -> [&BTreeSet<State>; 3] {
        let l = self.labels[element];
        [0, 1, 2].map(|k| self.components[k].subset(l[k]))
    }

    /// Element whose components are the runs of the three automata on `term`.
    pub fn element_of(&self, term: &Term) -> Option<usize> {
        let mut key = [0; 3];
        for k in 0..3 {
            key[k] = self.components[k].run(term)?;
        }
        self.labels.iter().position(|l| *l == key)
    }

    pub fn label(&self, element: usize) -> String {
        let l = self.labels[element];
        let parts: Vec<String> = (0..3).map(|k| self.components[k].state_name(l[k]).to_string()).collect();
        format!("<{}>", parts.join(", "))
    }
}

/// Adds a nullary symbol for each state, read as that state itself.
fn reading_states(a: &TreeAutomaton, vocab: &Vocabulary) -> Result<TreeAutomaton, WitnessError> {
    let own = a.states().iter().map(|q| Transition::normalized(Symbol::new(q.name().clone(), 0), vec![], q.clone()));
    let transitions: Vec<Transition> = a.transitions().cloned().chain(own).collect();
    Ok(TreeAutomaton::new(vocab.clone(), a.states().iter().cloned(), a.finals().iter().cloned(), transitions)?)
}

fn full_algebra(components: &[DeterministicAutomaton; 3], vocab: &Vocabulary) -> Result<Algebra, WitnessError> {
    let dims = components.each_ref().map(|c| c.state_count());
    let size = dims[0] * dims[1] * dims[2];
    let labels: Vec<[usize; 3]> = (0..size)
        .map(|e| [e / (dims[1] * dims[2]), (e / dims[2]) % dims[1], e % dims[2]])
        .collect();
    let index = |l: [usize; 3]| (l[0] * dims[1] + l[1]) * dims[2] + l[2];
    let step = |sym: &Symbol, args: &[usize]| -> usize {
        let label = [0, 1, 2].map(|k| {
            let parts: Vec<usize> = args.iter().map(|&a| labels[a][k]).collect();
            components[k].step(sym, &parts).unwrap_or(DeterministicAutomaton::SINK)
        });
        index(label)
    };
    let mut constants = BTreeMap::new();
    let mut functions = BTreeMap::new();
    for sym in vocab.symbols() {
        if sym.is_constant() {
            constants.insert(sym.name().clone(), step(&sym, &[]));
            continue;
        }
        let entries = size
            .checked_pow(sym.arity() as u32)
            .filter(|&c| c <= WORK_LIMIT)
            .ok_or(WitnessError::TooLarge(usize::MAX))?;
        let values = (0..entries).map(|i| step(&sym, &tuple_at(size, sym.arity(), i))).collect();
        functions.insert(sym.name().clone(), (sym.arity(), values));
    }
    Ok(Algebra { size, constants, functions, labels })
}

fn to_model(alg: &Algebra, reach: &[Vec<usize>]) -> Result<FiniteModel, WitnessError> {
    let mut model = FiniteModel::new(alg.size)?;
    for (name, &v) in &alg.constants {
        model.set_constant(name.clone(), v)?;
    }
    for (name, (arity, values)) in &alg.functions {
        model.set_function(name.clone(), *arity, values.clone())?;
    }
    let pairs = reach.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| vec![a, b]));
    model.set_relation(REACH, 2, pairs)?;
    Ok(model)
}

/// Builds the product countermodel for the problem with initial automaton
/// `a_i` and unsafe automaton `a_u`, and checks it against the translated
/// theory and goal. If the full triple domain fails the check, the model is
/// rebuilt on its term-denoted elements and checked again.
pub fn product_countermodel(
    a_i: &TreeAutomaton,
    a_u: &TreeAutomaton,
    a_star: &TreeAutomaton,
    trs: &Trs,
    options: &TranslationOptions,
) -> Result<ProductModel, WitnessError> {
    let vocab = shared_vocabulary([a_i.vocabulary(), a_u.vocabulary(), a_star.vocabulary(), trs.vocabulary()])?;
    let a_i = a_i.with_vocabulary(vocab.clone())?;
    let a_u = a_u.with_vocabulary(vocab.clone())?;
    let trs = Trs::new(vocab.clone(), trs.rules().to_vec())?;
    let translation = build_basic(&a_i, &trs, &a_u, options)?;
    let full = translation.theory().vocabulary().clone();

    let components = [
        reading_states(&a_i, &full)?.subset_construction(),
        a_star.with_vocabulary(full.clone())?.subset_construction(),
        reading_states(&a_u, &full)?.subset_construction(),
    ];
    let transitions: Vec<(Term, Term)> = a_i
        .transitions()
        .chain(a_u.transitions())
        .map(|t| (t.lhs_term(), Term::constant(t.target().name().clone())))
        .collect();

    let alg = full_algebra(&components, &full)?;
    let reach = least_reach(&alg, &trs, &transitions, options)?;
    let model = to_model(&alg, &reach)?;
    let theory = translation.theory();
    let Some(_) = first_violation(&model, theory, &translation.goal) else {
        return Ok(ProductModel { model, translation, restricted: false, components, labels: alg.labels });
    };

    let small = alg.restrict(&alg.realizable());
    let reach = least_reach(&small, &trs, &transitions, options)?;
    let model = to_model(&small, &reach)?;
    let violation = first_violation(&model, theory, &translation.goal);
    let pm = ProductModel { model, translation, restricted: true, components, labels: small.labels };
    match violation {
        None => Ok(pm),
        Some(violation) => Err(WitnessError::GateFailure { violation, rejected: Box::new(pm) }),
    }
}
