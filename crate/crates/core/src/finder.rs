//! Finite model search by grounding to SAT.
//!
//! For each domain size, in increasing order, every sentence is instantiated
//! over the domain and encoded as clauses. Function symbols get one
//! propositional variable per (argument tuple, value) pair with an
//! exactly-one constraint, predicates one variable per argument tuple.
//! Nested terms get auxiliary value variables that are only bounded from
//! below, so they can always be set to the true value of the term.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::logic::{Formula, PredicateSymbol, Sentence};
use crate::model::{check_countermodel, first_violation, FiniteModel, Violation};
use crate::sat::{Budget, Cnf, Lit, SatResult, Var};
use crate::terms::{Name, Symbol, Term, Vocabulary};
use crate::translate::{TranslateError, TranslationResult, VerificationProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinderError {
    #[error("`{name}` is used with arities {first} and {second}")]
    InconsistentArity { name: Name, first: usize, second: usize },
    #[error("sentence has free variable `{0}`")]
    FreeVariable(Name),
    #[error("internal error: found model fails the input: {0}")]
    GateFailure(String),
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_domain_size: usize,
    pub time_budget: Duration,
    pub symmetry_breaking: bool,
    /// Explore sizes one at a time. When false, consecutive sizes are
    /// searched on parallel threads; the reported result is the same.
    pub deterministic_order: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_domain_size: 6,
            time_budget: Duration::from_secs(60),
            symmetry_breaking: true,
            deterministic_order: true,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<(), FinderError> {
        if self.max_domain_size == 0 {
            return Err(FinderError::BadConfig("max domain size must be at least 1".into()));
        }
        if self.time_budget.is_zero() {
            return Err(FinderError::BadConfig("time budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    /// Smallest model found; no smaller size admits one.
    Model(FiniteModel),
    /// No model of any size up to and including `n`.
    ExhaustedUpTo(usize),
    /// Budget ran out; sizes up to `exhausted_up_to` have no model.
    Timeout { exhausted_up_to: usize },
}

impl SearchResult {
    pub fn model(&self) -> Option<&FiniteModel> {
        match self {
            SearchResult::Model(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeOutcome {
    Model,
    NoModel,
    Timeout,
}

/// What happened at one domain size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub size: usize,
    pub variables: u32,
    pub clauses: usize,
    pub outcome: SizeOutcome,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub result: SearchResult,
    pub sizes: Vec<SizeReport>,
}

/// The symbols a search has to interpret.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    /// In order of first appearance; symmetry breaking follows this order.
    constants: Vec<Name>,
    functions: BTreeMap<Name, usize>,
    predicates: BTreeMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    fn add_symbol(&mut self, s: &Symbol) -> Result<(), FinderError> {
        let clash = |first, second| FinderError::InconsistentArity {
            name: s.name().clone(),
            first,
            second,
        };
        if s.is_constant() {
            if let Some(&a) = self.functions.get(s.name()) {
                return Err(clash(a, 0));
            }
            if !self.constants.contains(s.name()) {
                self.constants.push(s.name().clone());
            }
        } else {
            if self.constants.contains(s.name()) {
                return Err(clash(0, s.arity()));
            }
            match self.functions.get(s.name()) {
                Some(&a) if a != s.arity() => return Err(clash(a, s.arity())),
                Some(_) => {}
                None => {
                    self.functions.insert(s.name().clone(), s.arity());
                }
            }
        }
        Ok(())
    }

    fn add_predicate(&mut self, p: &PredicateSymbol) -> Result<(), FinderError> {
        match self.predicates.get(p.name()) {
            Some(&a) if a != p.arity() => Err(FinderError::InconsistentArity {
                name: p.name().clone(),
                first: a,
                second: p.arity(),
            }),
            _ => {
                self.predicates.insert(p.name().clone(), p.arity());
                Ok(())
            }
        }
    }

    fn add_term_symbols(&mut self, t: &Term) -> Result<(), FinderError> {
        if let Term::App(f, args) = t {
            self.add_symbol(f)?;
            for a in args {
                self.add_term_symbols(a)?;
            }
        }
        Ok(())
    }

    pub fn add_formula(&mut self, f: &Formula) -> Result<(), FinderError> {
        let mut result = Ok(());
        f.visit_atoms(&mut |p, args| {
            if result.is_ok() {
                result = self.add_predicate(p).and_then(|_| {
                    args.iter().try_for_each(|a| self.add_term_symbols(a))
                });
            }
        });
        result
    }

    pub fn add_vocabulary(&mut self, v: &Vocabulary) -> Result<(), FinderError> {
        v.symbols().try_for_each(|s| self.add_symbol(&s))
    }

    pub fn from_sentences<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Result<Self, FinderError> {
        let mut sig = Signature::new();
        for s in sentences {
            sig.add_formula(s.formula())?;
        }
        Ok(sig)
    }
}

/// A term instantiated over domain elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum GTerm {
    Elem(usize),
    App(u32, Vec<GTerm>),
}

/// The value of a ground term: a known element, or one of `n` variables
/// starting at `base` (variable `base + v` says the value is `v`).
#[derive(Clone, Copy, Debug)]
enum Val {
    Elem(usize),
    Vars(Var),
}

struct Interrupted;

/// Clauses for one domain size.
pub struct Grounding {
    pub size: usize,
    pub cnf: Cnf,
    constants: Vec<(Name, Var)>,
    functions: Vec<(Name, usize, Var)>,
    predicates: Vec<(Name, usize, Var)>,
}

struct Encoder<'a> {
    n: usize,
    cnf: Cnf,
    symbol_ids: HashMap<Name, u32>,
    /// Per symbol id: arity and first variable of its table.
    tables: Vec<(usize, Var)>,
    predicates: HashMap<Name, (usize, Var)>,
    term_cache: HashMap<GTerm, Val>,
    atom_cache: HashMap<(Name, Vec<GTerm>, bool), Lit>,
    budget: Budget,
    ticks: u32,
    sig: &'a Signature,
}

impl<'a> Encoder<'a> {
    fn new(sig: &'a Signature, n: usize, budget: Budget) -> Self {
        let mut enc = Encoder {
            n,
            cnf: Cnf::new(),
            symbol_ids: HashMap::new(),
            tables: Vec::new(),
            predicates: HashMap::new(),
            term_cache: HashMap::new(),
            atom_cache: HashMap::new(),
            budget,
            ticks: 0,
            sig,
        };
        let syms: Vec<(Name, usize)> = sig
            .constants
            .iter()
            .map(|c| (c.clone(), 0))
            .chain(sig.functions.iter().map(|(f, &a)| (f.clone(), a)))
            .collect();
        for (name, arity) in syms {
            let rows = n.pow(arity as u32);
            let base = enc.alloc(rows * n);
            for r in 0..rows {
                let row: Vec<Lit> = (0..n).map(|v| Lit::pos(base + (r * n + v) as Var)).collect();
                enc.exactly_one(&row);
            }
            enc.symbol_ids.insert(name, enc.tables.len() as u32);
            enc.tables.push((arity, base));
        }
        for (p, &arity) in &sig.predicates {
            let base = enc.alloc(n.pow(arity as u32));
            enc.predicates.insert(p.clone(), (arity, base));
        }
        enc
    }

    fn alloc(&mut self, count: usize) -> Var {
        let base = self.cnf.num_vars;
        self.cnf.num_vars += count as u32;
        base
    }

    fn exactly_one(&mut self, lits: &[Lit]) {
        self.cnf.add(lits.to_vec());
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                self.cnf.add(vec![!lits[i], !lits[j]]);
            }
        }
    }

    fn tick(&mut self) -> Result<(), Interrupted> {
        self.ticks += 1;
        if self.ticks % 4096 == 0 && self.budget.expired() {
            return Err(Interrupted);
        }
        Ok(())
    }

    /// Least-number constraint: constant `i` takes value `v > 0` only if an
    /// earlier constant takes `v - 1`.
    fn break_symmetry(&mut self) {
        let consts: Vec<Var> = self
            .sig
            .constants
            .iter()
            .map(|c| self.tables[self.symbol_ids[c] as usize].1)
            .collect();
        for (i, &base) in consts.iter().enumerate() {
            for v in 1..self.n {
                let mut clause = vec![Lit::neg(base + v as Var)];
                clause.extend(consts[..i].iter().map(|&b| Lit::pos(b + (v - 1) as Var)));
                self.cnf.add(clause);
            }
        }
    }

    fn instantiate(&self, t: &Term, env: &[(Name, usize)]) -> Result<GTerm, FinderError> {
        match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|&(_, d)| GTerm::Elem(d))
                .ok_or_else(|| FinderError::FreeVariable(x.clone())),
            Term::App(f, args) => Ok(GTerm::App(
                self.symbol_ids[f.name()],
                args.iter().map(|a| self.instantiate(a, env)).collect::<Result<_, _>>()?,
            )),
        }
    }

    fn value_lit(&self, val: Val, v: usize) -> Option<Lit> {
        match val {
            Val::Elem(_) => None,
            Val::Vars(base) => Some(Lit::pos(base + v as Var)),
        }
    }

    /// Every combination of values for the given ground-term values: fixed
    /// elements stay, variable values range over the domain.
    fn combinations(&self, vals: &[Val]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(vals.len())];
        for val in vals {
            out = match *val {
                Val::Elem(d) => out
                    .into_iter()
                    .map(|mut c| {
                        c.push(d);
                        c
                    })
                    .collect(),
                Val::Vars(_) => out
                    .into_iter()
                    .flat_map(|c| {
                        (0..self.n).map(move |v| {
                            let mut c = c.clone();
                            c.push(v);
                            c
                        })
                    })
                    .collect(),
            };
        }
        out
    }

    fn term_value(&mut self, t: &GTerm) -> Val {
        match t {
            GTerm::Elem(d) => Val::Elem(*d),
            GTerm::App(id, args) => {
                if let Some(&v) = self.term_cache.get(t) {
                    return v;
                }
                let (_, table) = self.tables[*id as usize];
                let vals: Vec<Val> = args.iter().map(|a| self.term_value(a)).collect();
                let fixed: Option<Vec<usize>> = vals
                    .iter()
                    .map(|v| match v {
                        Val::Elem(d) => Some(*d),
                        Val::Vars(_) => None,
                    })
                    .collect();
                let val = match fixed {
                    Some(elems) => {
                        Val::Vars(table + (tuple_index(self.n, &elems) * self.n) as Var)
                    }
                    None => {
                        let base = self.alloc(self.n);
                        for combo in self.combinations(&vals) {
                            let row = tuple_index(self.n, &combo);
                            let premise: Vec<Lit> = vals
                                .iter()
                                .zip(&combo)
                                .filter_map(|(val, &u)| self.value_lit(*val, u))
                                .map(|l| !l)
                                .collect();
                            for v in 0..self.n {
                                let mut clause = premise.clone();
                                clause.push(Lit::neg(table + (row * self.n + v) as Var));
                                clause.push(Lit::pos(base + v as Var));
                                self.cnf.add(clause);
                            }
                        }
                        Val::Vars(base)
                    }
                };
                self.term_cache.insert(t.clone(), val);
                val
            }
        }
    }

    /// A literal that, when true, forces the atom to have truth `positive`.
    fn atom_lit(&mut self, pred: &Name, args: Vec<GTerm>, positive: bool) -> Lit {
        let (_, base) = self.predicates[pred];
        let vals: Vec<Val> = args.iter().map(|a| self.term_value(a)).collect();
        if vals.iter().all(|v| matches!(v, Val::Elem(_))) {
            let elems: Vec<usize> = vals
                .iter()
                .map(|v| match v {
                    Val::Elem(d) => *d,
                    Val::Vars(_) => unreachable!(),
                })
                .collect();
            return Lit::new(base + tuple_index(self.n, &elems) as Var, positive);
        }
        let key = (pred.clone(), args, positive);
        if let Some(&l) = self.atom_cache.get(&key) {
            return l;
        }
        let aux = self.alloc(1);
        for combo in self.combinations(&vals) {
            let mut clause = vec![Lit::neg(aux)];
            clause.extend(
                vals.iter()
                    .zip(&combo)
                    .filter_map(|(val, &u)| self.value_lit(*val, u))
                    .map(|l| !l),
            );
            clause.push(Lit::new(base + tuple_index(self.n, &combo) as Var, positive));
            self.cnf.add(clause);
        }
        self.atom_cache.insert(key, Lit::pos(aux));
        Lit::pos(aux)
    }

    /// Emits clauses making `f` (or its negation when `!positive`) true,
    /// each clause weakened by `guard`.
    fn top(
        &mut self,
        f: &Formula,
        env: &mut Vec<(Name, usize)>,
        positive: bool,
        guard: Option<Lit>,
    ) -> Result<Result<(), FinderError>, Interrupted> {
        self.tick()?;
        match (f, positive) {
            (Formula::Not(g), _) => self.top(g, env, !positive, guard),
            (Formula::And(fs), true) | (Formula::Or(fs), false) => {
                for g in fs {
                    if let Err(e) = self.top(g, env, positive, guard)? {
                        return Ok(Err(e));
                    }
                }
                Ok(Ok(()))
            }
            (Formula::Implies(a, b), false) => {
                if let Err(e) = self.top(a, env, true, guard)? {
                    return Ok(Err(e));
                }
                self.top(b, env, false, guard)
            }
            (Formula::ForAll(x, body), true) | (Formula::Exists(x, body), false) => {
                for d in 0..self.n {
                    env.push((x.clone(), d));
                    let r = self.top(body, env, positive, guard);
                    env.pop();
                    if let Err(e) = r? {
                        return Ok(Err(e));
                    }
                }
                Ok(Ok(()))
            }
            _ => {
                let mut clause: Vec<Lit> = guard.into_iter().collect();
                if let Err(e) = self.disj(f, env, positive, &mut clause)? {
                    return Ok(Err(e));
                }
                self.cnf.add(clause);
                Ok(Ok(()))
            }
        }
    }

    /// Collects into `clause` literals whose disjunction implies `f` (or its
    /// negation).
    fn disj(
        &mut self,
        f: &Formula,
        env: &mut Vec<(Name, usize)>,
        positive: bool,
        clause: &mut Vec<Lit>,
    ) -> Result<Result<(), FinderError>, Interrupted> {
        self.tick()?;
        match (f, positive) {
            (Formula::Atom(p, args), _) => {
                let args: Result<Vec<GTerm>, _> = args.iter().map(|a| self.instantiate(a, env)).collect();
                match args {
                    Ok(args) => {
                        let l = self.atom_lit(p.name(), args, positive);
                        clause.push(l);
                        Ok(Ok(()))
                    }
                    Err(e) => Ok(Err(e)),
                }
            }
            (Formula::Not(g), _) => self.disj(g, env, !positive, clause),
            (Formula::Or(fs), true) | (Formula::And(fs), false) => {
                for g in fs {
                    if let Err(e) = self.disj(g, env, positive, clause)? {
                        return Ok(Err(e));
                    }
                }
                Ok(Ok(()))
            }
            (Formula::Implies(a, b), true) => {
                if let Err(e) = self.disj(a, env, false, clause)? {
                    return Ok(Err(e));
                }
                self.disj(b, env, true, clause)
            }
            (Formula::Exists(x, body), true) | (Formula::ForAll(x, body), false) => {
                for d in 0..self.n {
                    env.push((x.clone(), d));
                    let r = self.disj(body, env, positive, clause);
                    env.pop();
                    if let Err(e) = r? {
                        return Ok(Err(e));
                    }
                }
                Ok(Ok(()))
            }
            _ => {
                let aux = self.alloc(1);
                clause.push(Lit::pos(aux));
                self.top(f, env, positive, Some(Lit::neg(aux)))
            }
        }
    }

    fn finish(self) -> Grounding {
        let constants = self
            .sig
            .constants
            .iter()
            .map(|c| (c.clone(), self.tables[self.symbol_ids[c] as usize].1))
            .collect();
        let functions = self
            .sig
            .functions
            .iter()
            .map(|(f, &a)| (f.clone(), a, self.tables[self.symbol_ids[f] as usize].1))
            .collect();
        let predicates = self
            .sig
            .predicates
            .iter()
            .map(|(p, &a)| (p.clone(), a, self.predicates[p].1))
            .collect();
        Grounding {
            size: self.n,
            cnf: self.cnf,
            constants,
            functions,
            predicates,
        }
    }
}

fn tuple_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

impl Grounding {
    fn decode(&self, assignment: &[bool]) -> FiniteModel {
        let n = self.size;
        let pick = |base: Var| (0..n).find(|&v| assignment[base as usize + v]).unwrap_or(0);
        let mut m = FiniteModel::new(n).expect("positive size");
        for (c, base) in &self.constants {
            m.set_constant(c.clone(), pick(*base)).unwrap();
        }
        for (f, arity, base) in &self.functions {
            let rows = n.pow(*arity as u32);
            let values = (0..rows).map(|r| pick(base + (r * n) as Var)).collect();
            m.set_function(f.clone(), *arity, values).unwrap();
        }
        for (p, arity, base) in &self.predicates {
            let rows = n.pow(*arity as u32);
            let tuples = (0..rows)
                .filter(|&r| assignment[*base as usize + r])
                .map(|r| crate::model::tuple_at(n, *arity, r));
            m.set_relation(p.clone(), *arity, tuples).unwrap();
        }
        m
    }
}

/// Clauses whose models are exactly the size-`size` models of `sentences`
/// (up to the symmetry-breaking constraint).
pub fn ground(
    signature: &Signature,
    sentences: &[Sentence],
    size: usize,
    symmetry_breaking: bool,
) -> Result<Grounding, FinderError> {
    match ground_until(signature, sentences, size, symmetry_breaking, Budget::unlimited()) {
        Ok(g) => g,
        Err(Interrupted) => unreachable!("unlimited budget"),
    }
}

fn ground_until(
    signature: &Signature,
    sentences: &[Sentence],
    size: usize,
    symmetry_breaking: bool,
    budget: Budget,
) -> Result<Result<Grounding, FinderError>, Interrupted> {
    let mut enc = Encoder::new(signature, size, budget);
    if symmetry_breaking {
        enc.break_symmetry();
    }
    let mut env = Vec::new();
    for s in sentences {
        if let Err(e) = enc.top(s.formula(), &mut env, true, None)? {
            return Ok(Err(e));
        }
    }
    Ok(Ok(enc.finish()))
}

/// Model search over the symbols occurring in the sentences plus any extra
/// ones registered on the signature.
pub struct ModelSearch<'a> {
    signature: Signature,
    sentences: &'a [Sentence],
    on_grounding: Option<Box<dyn FnMut(&Grounding) + 'a>>,
}

impl<'a> ModelSearch<'a> {
    pub fn new(sentences: &'a [Sentence]) -> Result<Self, FinderError> {
        Ok(ModelSearch {
            signature: Signature::from_sentences(sentences)?,
            sentences,
            on_grounding: None,
        })
    }

    /// Symbols to interpret even if no sentence mentions them.
    pub fn with_vocabulary(
        mut self,
        vocabulary: &Vocabulary,
        predicates: impl IntoIterator<Item = PredicateSymbol>,
    ) -> Result<Self, FinderError> {
        self.signature.add_vocabulary(vocabulary)?;
        for p in predicates {
            self.signature.add_predicate(&p)?;
        }
        Ok(self)
    }

    /// Called with the clause set of every size before it is solved.
    pub fn on_grounding(mut self, f: impl FnMut(&Grounding) + 'a) -> Self {
        self.on_grounding = Some(Box::new(f));
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn try_size(
        signature: &Signature,
        sentences: &[Sentence],
        size: usize,
        config: &SearchConfig,
        budget: Budget,
    ) -> Result<(Option<Grounding>, SizeReport, Option<FiniteModel>), FinderError> {
        let start = Instant::now();
        let report = |outcome, g: Option<&Grounding>| SizeReport {
            size,
            variables: g.map_or(0, |g| g.cnf.num_vars),
            clauses: g.map_or(0, |g| g.cnf.clauses.len()),
            outcome,
            elapsed_ms: start.elapsed().as_millis(),
        };
        let g = match ground_until(signature, sentences, size, config.symmetry_breaking, budget.clone()) {
            Err(Interrupted) => return Ok((None, report(SizeOutcome::Timeout, None), None)),
            Ok(g) => g?,
        };
        let outcome = g.cnf.solve(&budget);
        let (outcome, model) = match outcome {
            SatResult::Sat(assignment) => (SizeOutcome::Model, Some(g.decode(&assignment))),
            SatResult::Unsat => (SizeOutcome::NoModel, None),
            SatResult::Interrupted => (SizeOutcome::Timeout, None),
        };
        let rep = report(outcome, Some(&g));
        Ok((Some(g), rep, model))
    }

    pub fn run(mut self, config: &SearchConfig) -> Result<SearchReport, FinderError> {
        config.validate()?;
        let deadline = Instant::now() + config.time_budget;
        let mut sizes = Vec::new();
        let results: Vec<_> = if config.deterministic_order || config.max_domain_size == 1 {
            Vec::new()
        } else {
            self.race(config, deadline)?
        };
        let mut raced = results.into_iter();
        for size in 1..=config.max_domain_size {
            let (g, rep, model) = match raced.next() {
                Some(r) => r,
                None => Self::try_size(&self.signature, self.sentences, size, config, Budget::until(deadline))?,
            };
            if let (Some(cb), Some(g)) = (self.on_grounding.as_mut(), g.as_ref()) {
                cb(g);
            }
            let outcome = rep.outcome;
            sizes.push(rep);
            match outcome {
                SizeOutcome::Model => {
                    let m = model.expect("model outcome carries a model");
                    self.gate(&m)?;
                    return Ok(SearchReport { result: SearchResult::Model(m), sizes });
                }
                SizeOutcome::NoModel => {}
                SizeOutcome::Timeout => {
                    return Ok(SearchReport {
                        result: SearchResult::Timeout { exhausted_up_to: size - 1 },
                        sizes,
                    })
                }
            }
        }
        Ok(SearchReport {
            result: SearchResult::ExhaustedUpTo(config.max_domain_size),
            sizes,
        })
    }

    /// All sizes at once on scoped threads. A size that finds a model stops
    /// every larger one.
    #[allow(clippy::type_complexity)]
    fn race(
        &self,
        config: &SearchConfig,
        deadline: Instant,
    ) -> Result<Vec<(Option<Grounding>, SizeReport, Option<FiniteModel>)>, FinderError> {
        let stops: Vec<Arc<AtomicBool>> =
            (0..config.max_domain_size).map(|_| Arc::new(AtomicBool::new(false))).collect();
        let (signature, sentences, stops) = (&self.signature, self.sentences, &stops);
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = (1..=config.max_domain_size)
                .map(|size| {
                    scope.spawn(move || {
                        let budget = Budget::until(deadline).with_stop(stops[size - 1].clone());
                        let r = Self::try_size(signature, sentences, size, config, budget);
                        if matches!(&r, Ok((_, rep, _)) if rep.outcome == SizeOutcome::Model) {
                            for s in &stops[size..] {
                                s.store(true, Ordering::Relaxed);
                            }
                        }
                        r
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search thread panicked"))
                .collect::<Vec<_>>()
        });
        results.into_iter().collect()
    }

    fn gate(&self, m: &FiniteModel) -> Result<(), FinderError> {
        for s in self.sentences {
            match m.satisfies(s) {
                Ok(true) => {}
                Ok(false) => return Err(FinderError::GateFailure(format!("{s} is false"))),
                Err(e) => return Err(FinderError::GateFailure(e.to_string())),
            }
        }
        Ok(())
    }
}

/// Smallest model of `sentences` within the configured bounds.
pub fn find_model(sentences: &[Sentence], config: &SearchConfig) -> Result<SearchResult, FinderError> {
    Ok(ModelSearch::new(sentences)?.run(config)?.result)
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Finder(#[from] FinderError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    /// No countermodel up to this size.
    Exhausted(usize),
    Timeout { exhausted_up_to: usize },
    /// A model was found but failed the independent check.
    Rejected(Violation),
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::Exhausted(n) => write!(f, "no countermodel of size up to {n}"),
            UnknownReason::Timeout { exhausted_up_to } => {
                write!(f, "time budget exhausted (no countermodel of size up to {exhausted_up_to})")
            }
            UnknownReason::Rejected(v) => write!(f, "candidate model rejected: {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SafetyVerdict {
    Verified(FiniteModel),
    Unknown(UnknownReason),
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub verdict: SafetyVerdict,
    pub translation: TranslationResult,
    pub sizes: Vec<SizeReport>,
}

/// Translates the problem and searches for a countermodel of the theory and
/// the negated goal.
pub fn verify_safety(problem: &VerificationProblem, config: &SearchConfig) -> Result<Verification, VerifyError> {
    verify_with(problem, config, |_| {})
}

/// As `verify_safety`, passing each size's clause set to `dump`.
pub fn verify_with(
    problem: &VerificationProblem,
    config: &SearchConfig,
    dump: impl FnMut(&Grounding),
) -> Result<Verification, VerifyError> {
    let translation = problem.translate()?;
    let sentences = translation.search_sentences();
    let theory = translation.theory();
    let report = ModelSearch::new(&sentences)?
        .with_vocabulary(theory.vocabulary(), theory.predicates().iter().cloned())?
        .on_grounding(dump)
        .run(config)?;
    let verdict = match report.result {
        SearchResult::Model(m) => match first_violation(&m, theory, &translation.goal) {
            None => {
                debug_assert!(check_countermodel(&m, theory, &translation.goal));
                SafetyVerdict::Verified(m)
            }
            Some(v) => SafetyVerdict::Unknown(UnknownReason::Rejected(v)),
        },
        SearchResult::ExhaustedUpTo(n) => SafetyVerdict::Unknown(UnknownReason::Exhausted(n)),
        SearchResult::Timeout { exhausted_up_to } => {
            SafetyVerdict::Unknown(UnknownReason::Timeout { exhausted_up_to })
        }
    };
    Ok(Verification {
        verdict,
        translation,
        sizes: report.sizes,
    })
}
