//! Finite first-order models over the domain `{0, .., n-1}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::logic::{Formula, PredicateSymbol, Sentence, Theory};
use crate::terms::{Name, Symbol, Term, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("table for `{name}` has an entry {value} outside the domain of size {size}")]
    OutOfRange { name: Name, value: usize, size: usize },
    #[error("table for `{name}` has {found} entries, expected {expected}")]
    TableShape { name: Name, found: usize, expected: usize },
    #[error("no interpretation for `{0}`")]
    Undeclared(Name),
    #[error("`{name}` is interpreted with arity {declared} but used with {found} arguments")]
    ArityMismatch { name: Name, declared: usize, found: usize },
    #[error("variable `{0}` has no value")]
    UnboundVariable(Name),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Value of a `k`-ary function for every argument tuple, tuples ordered
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    arity: usize,
    values: Vec<usize>,
}

impl FunctionTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Truth value of a predicate for every argument tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationTable {
    arity: usize,
    holds: Vec<bool>,
}

impl RelationTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn holds(&self) -> &[bool] {
        &self.holds
    }
}

fn table_len(size: usize, arity: usize) -> usize {
    size.pow(arity as u32)
}

fn tuple_index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// The argument tuple at lexicographic position `index`.
pub fn tuple_at(size: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// A variable assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<Name, usize>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn insert(&mut self, var: impl Into<Name>, value: usize) {
        self.0.insert(var.into(), value);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }
}

impl FromIterator<(Name, usize)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Name, usize)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    size: usize,
    constants: BTreeMap<Name, usize>,
    functions: BTreeMap<Name, FunctionTable>,
    relations: BTreeMap<Name, RelationTable>,
}

/// Variables bound during evaluation, innermost last.
type Env = Vec<(Name, usize)>;

impl FiniteModel {
    pub fn new(size: usize) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        Ok(FiniteModel {
            size,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_value(&self, name: &Name, value: usize) -> Result<(), ModelError> {
        if value >= self.size {
            return Err(ModelError::OutOfRange {
                name: name.clone(),
                value,
                size: self.size,
            });
        }
        Ok(())
    }

    pub fn set_constant(&mut self, name: impl Into<Name>, value: usize) -> Result<(), ModelError> {
        let name = name.into();
        self.check_value(&name, value)?;
        self.constants.insert(name, value);
        Ok(())
    }

    /// `values` lists the results for all argument tuples in lexicographic
    /// order.
    pub fn set_function(
        &mut self,
        name: impl Into<Name>,
        arity: usize,
        values: Vec<usize>,
    ) -> Result<(), ModelError> {
        let name = name.into();
        if arity == 0 {
            let [v] = values[..] else {
                return Err(ModelError::TableShape { name, found: values.len(), expected: 1 });
            };
            return self.set_constant(name, v);
        }
        let expected = table_len(self.size, arity);
        if values.len() != expected {
            return Err(ModelError::TableShape { name, found: values.len(), expected });
        }
        for &v in &values {
            self.check_value(&name, v)?;
        }
        self.functions.insert(name, FunctionTable { arity, values });
        Ok(())
    }

    pub fn set_relation(
        &mut self,
        name: impl Into<Name>,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<(), ModelError> {
        let name = name.into();
        let mut holds = vec![false; table_len(self.size, arity)];
        for t in tuples {
            if t.len() != arity {
                return Err(ModelError::ArityMismatch { name, declared: arity, found: t.len() });
            }
            for &v in &t {
                self.check_value(&name, v)?;
            }
            holds[tuple_index(self.size, &t)] = true;
        }
        self.relations.insert(name, RelationTable { arity, holds });
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn constants(&self) -> &BTreeMap<Name, usize> {
        &self.constants
    }

    pub fn functions(&self) -> &BTreeMap<Name, FunctionTable> {
        &self.functions
    }

    pub fn relations(&self) -> &BTreeMap<Name, RelationTable> {
        &self.relations
    }

    pub fn apply(&self, name: &str, args: &[usize]) -> Result<usize, ModelError> {
        if args.is_empty() {
            return self.constant(name).ok_or_else(|| ModelError::Undeclared(name.into()));
        }
        let table = self.functions.get(name).ok_or_else(|| ModelError::Undeclared(name.into()))?;
        if table.arity != args.len() {
            return Err(ModelError::ArityMismatch {
                name: name.into(),
                declared: table.arity,
                found: args.len(),
            });
        }
        Ok(table.values[tuple_index(self.size, args)])
    }

    pub fn holds(&self, name: &str, args: &[usize]) -> Result<bool, ModelError> {
        let table = self.relations.get(name).ok_or_else(|| ModelError::Undeclared(name.into()))?;
        if table.arity != args.len() {
            return Err(ModelError::ArityMismatch {
                name: name.into(),
                declared: table.arity,
                found: args.len(),
            });
        }
        Ok(table.holds[tuple_index(self.size, args)])
    }

    /// Tuples on which the relation holds, in lexicographic order.
    pub fn relation_tuples(&self, name: &str) -> Option<Vec<Vec<usize>>> {
        let table = self.relations.get(name)?;
        Some(
            table
                .holds
                .iter()
                .enumerate()
                .filter(|(_, &h)| h)
                .map(|(i, _)| tuple_at(self.size, table.arity, i))
                .collect(),
        )
    }

    /// Whether every symbol of the vocabulary and every predicate has a
    /// table of the right arity.
    pub fn interprets(
        &self,
        vocabulary: &Vocabulary,
        predicates: impl IntoIterator<Item = PredicateSymbol>,
    ) -> Result<(), ModelError> {
        for s in vocabulary.symbols() {
            self.check_symbol(&s)?;
        }
        for p in predicates {
            let table = self
                .relations
                .get(p.name())
                .ok_or_else(|| ModelError::Undeclared(p.name().clone()))?;
            if table.arity != p.arity() {
                return Err(ModelError::ArityMismatch {
                    name: p.name().clone(),
                    declared: table.arity,
                    found: p.arity(),
                });
            }
        }
        Ok(())
    }

    fn check_symbol(&self, s: &Symbol) -> Result<(), ModelError> {
        if s.is_constant() {
            self.constant(s.name()).map(|_| ()).ok_or_else(|| ModelError::Undeclared(s.name().clone()))
        } else {
            let t = self
                .functions
                .get(s.name())
                .ok_or_else(|| ModelError::Undeclared(s.name().clone()))?;
            if t.arity != s.arity() {
                return Err(ModelError::ArityMismatch {
                    name: s.name().clone(),
                    declared: t.arity,
                    found: s.arity(),
                });
            }
            Ok(())
        }
    }

    pub fn eval_term(&self, term: &Term, valuation: &Valuation) -> Result<usize, ModelError> {
        let env: Env = valuation.0.iter().map(|(k, &v)| (k.clone(), v)).collect();
        self.eval_in(term, &env)
    }

    fn eval_in(&self, term: &Term, env: &Env) -> Result<usize, ModelError> {
        match term {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|&(_, v)| v)
                .ok_or_else(|| ModelError::UnboundVariable(x.clone())),
            Term::App(f, args) if args.is_empty() => self.apply(f.name(), &[]),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.eval_in(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.apply(f.name(), &vals)
            }
        }
    }

    /// Truth of a formula whose free variables are covered by `valuation`.
    pub fn eval(&self, formula: &Formula, valuation: &Valuation) -> Result<bool, ModelError> {
        let mut env: Env = valuation.0.iter().map(|(k, &v)| (k.clone(), v)).collect();
        self.eval_formula(formula, &mut env)
    }

    pub fn satisfies(&self, sentence: &Sentence) -> Result<bool, ModelError> {
        self.eval_formula(sentence.formula(), &mut Vec::new())
    }

    fn eval_formula(&self, formula: &Formula, env: &mut Env) -> Result<bool, ModelError> {
        Ok(match formula {
            Formula::Atom(p, args) => {
                let vals = args.iter().map(|a| self.eval_in(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.holds(p.name(), &vals)?
            }
            Formula::Not(f) => !self.eval_formula(f, env)?,
            Formula::And(fs) => {
                for f in fs {
                    if !self.eval_formula(f, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if self.eval_formula(f, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval_formula(a, env)? || self.eval_formula(b, env)?,
            Formula::ForAll(x, body) => self.quantify(x, body, env, false)?,
            Formula::Exists(x, body) => self.quantify(x, body, env, true)?,
        })
    }

    /// Universal when `want` is false: searches for an element making the
    /// body evaluate to `want`.
    fn quantify(&self, x: &Name, body: &Formula, env: &mut Env, want: bool) -> Result<bool, ModelError> {
        env.push((x.clone(), 0));
        let mut found = false;
        for d in 0..self.size {
            env.last_mut().unwrap().1 = d;
            match self.eval_formula(body, env) {
                Ok(v) if v == want => {
                    found = true;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    env.pop();
                    return Err(e);
                }
            }
        }
        env.pop();
        Ok(if want { found } else { !found })
    }

    /// Plain-text tables; `parse_model` reads them back.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size {}", self.size)?;
        for (name, v) in &self.constants {
            writeln!(f, "const {name} = {v}")?;
        }
        for (name, table) in &self.functions {
            for (i, v) in table.values.iter().enumerate() {
                let args = tuple_at(self.size, table.arity, i);
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                writeln!(f, "fun {name}({}) = {v}", args.join(","))?;
            }
        }
        for (name, table) in &self.relations {
            let tuples: Vec<String> = self
                .relation_tuples(name)
                .unwrap()
                .iter()
                .map(|t| {
                    let t: Vec<String> = t.iter().map(|a| a.to_string()).collect();
                    format!("({})", t.join(","))
                })
                .collect();
            writeln!(f, "rel {name}/{} = {{{}}}", table.arity, tuples.join(", "))?;
        }
        Ok(())
    }
}

/// Parses the format produced by `render`. Function tables must be total and
/// give each argument tuple exactly one value.
pub fn parse_model(text: &str) -> Result<FiniteModel, ModelError> {
    let mut model: Option<FiniteModel> = None;
    let mut rows: BTreeMap<Name, (usize, BTreeMap<Vec<usize>, usize>, usize)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| ModelError::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if kw == "size" {
            if model.is_some() {
                return Err(err("duplicate size line".into()));
            }
            let n = parse_num(rest).map_err(&err)?;
            model = Some(FiniteModel::new(n).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let m = model.as_mut().ok_or_else(|| err("expected `size n` first".into()))?;
        let (lhs, rhs) = rest
            .split_once('=')
            .ok_or_else(|| err(format!("expected `=` in `{line}`")))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        match kw {
            "const" => {
                check_name(lhs).map_err(&err)?;
                if m.constants.contains_key(lhs) {
                    return Err(err(format!("duplicate constant `{lhs}`")));
                }
                let v = parse_num(rhs).map_err(&err)?;
                m.set_constant(lhs, v).map_err(|e| err(e.to_string()))?;
            }
            "fun" => {
                let open = lhs.find('(').ok_or_else(|| err("expected `name(args)`".into()))?;
                let name = lhs[..open].trim();
                check_name(name).map_err(&err)?;
                let args_text = lhs[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| err("expected `)`".into()))?;
                let args = parse_list(args_text).map_err(&err)?;
                if args.is_empty() {
                    return Err(err("function rows need arguments; use `const`".into()));
                }
                let v = parse_num(rhs).map_err(&err)?;
                let entry = rows.entry(name.into()).or_insert((args.len(), BTreeMap::new(), line_no));
                if entry.0 != args.len() {
                    return Err(err(format!("`{name}` used with {} and {} arguments", entry.0, args.len())));
                }
                if args.iter().chain([&v]).any(|&a| a >= m.size) {
                    return Err(err(format!("value outside the domain of size {}", m.size)));
                }
                if entry.1.insert(args, v).is_some() {
                    return Err(err(format!("duplicate row for `{name}`")));
                }
            }
            "rel" => {
                let (name, arity) = lhs
                    .split_once('/')
                    .ok_or_else(|| err("expected `name/arity`".into()))?;
                let name = name.trim();
                check_name(name).map_err(&err)?;
                if m.relations.contains_key(name) {
                    return Err(err(format!("duplicate relation `{name}`")));
                }
                let arity = parse_num(arity.trim()).map_err(&err)?;
                let body = rhs
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| err("expected `{...}`".into()))?
                    .trim();
                let mut tuples = Vec::new();
                let mut rest = body;
                while !rest.is_empty() {
                    let inner = rest
                        .strip_prefix('(')
                        .ok_or_else(|| err("expected `(`".into()))?;
                    let close = inner.find(')').ok_or_else(|| err("expected `)`".into()))?;
                    tuples.push(parse_list(&inner[..close]).map_err(&err)?);
                    rest = inner[close + 1..].trim_start();
                    if let Some(r) = rest.strip_prefix(',') {
                        rest = r.trim_start();
                        if rest.is_empty() {
                            return Err(err("trailing `,`".into()));
                        }
                    } else if !rest.is_empty() {
                        return Err(err("expected `,` between tuples".into()));
                    }
                }
                m.set_relation(name, arity, tuples).map_err(|e| err(e.to_string()))?;
            }
            other => return Err(err(format!("unknown entry `{other}`"))),
        }
    }
    let mut model = model.ok_or(ModelError::Parse { line: 0, message: "missing `size` line".into() })?;
    for (name, (arity, table, line)) in rows {
        let expected = table_len(model.size, arity);
        if table.len() != expected {
            return Err(ModelError::Parse {
                line,
                message: format!("table for `{name}` has {} rows, expected {expected}", table.len()),
            });
        }
        if model.constants.contains_key(&name) {
            return Err(ModelError::Parse { line, message: format!("`{name}` is also a constant") });
        }
        model.set_function(name, arity, table.into_values().collect())?;
    }
    Ok(model)
}

fn parse_num(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("expected a number, found `{}`", s.trim()))
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_num).collect()
}

fn check_name(s: &str) -> Result<(), String> {
    if s.is_empty() || !s.chars().all(crate::syntax::is_ident_char) {
        return Err(format!("bad symbol name `{s}`"));
    }
    Ok(())
}

/// What makes a model fail to be a countermodel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A theory sentence is false, by index.
    Sentence { index: usize, sentence: String },
    /// The goal holds.
    Goal { goal: String },
    /// A symbol has no interpretation.
    Incomplete { reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Sentence { index, sentence } => write!(f, "sentence {index} is false: {sentence}"),
            Violation::Goal { goal } => write!(f, "goal holds: {goal}"),
            Violation::Incomplete { reason } => write!(f, "{reason}"),
        }
    }
}

/// The first reason `model` is not a model of `theory` falsifying `goal`.
pub fn first_violation(model: &FiniteModel, theory: &Theory, goal: &Sentence) -> Option<Violation> {
    let incomplete = |e: ModelError| Violation::Incomplete { reason: e.to_string() };
    let mut predicates: Vec<PredicateSymbol> = theory.predicates().iter().cloned().collect();
    predicates.extend(goal.formula().predicates());
    if let Err(e) = model.interprets(theory.vocabulary(), predicates) {
        return Some(incomplete(e));
    }
    for (index, s) in theory.sentences().iter().enumerate() {
        match model.satisfies(s) {
            Ok(true) => {}
            Ok(false) => return Some(Violation::Sentence { index, sentence: s.to_string() }),
            Err(e) => return Some(incomplete(e)),
        }
    }
    match model.satisfies(goal) {
        Ok(false) => None,
        Ok(true) => Some(Violation::Goal { goal: goal.to_string() }),
        Err(e) => Some(incomplete(e)),
    }
}

/// Whether `model` satisfies every sentence of `theory` and falsifies `goal`.
pub fn check_countermodel(model: &FiniteModel, theory: &Theory, goal: &Sentence) -> bool {
    first_violation(model, theory, goal).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_ground_term};

    fn parity_model() -> FiniteModel {
        let mut m = FiniteModel::new(2).unwrap();
        m.set_constant("0", 0).unwrap();
        m.set_constant("s0", 1).unwrap();
        m.set_constant("q0", 0).unwrap();
        m.set_function("even", 1, vec![1, 0]).unwrap();
        m.set_function("square", 1, vec![0, 1]).unwrap();
        m.set_relation("R", 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        m
    }

    fn sentence(s: &str) -> Sentence {
        Sentence::new(parse_formula(s).unwrap()).unwrap()
    }

    #[test]
    fn term_evaluation() {
        let m = parity_model();
        let t = parse_ground_term("even(square(0))").unwrap();
        assert_eq!(m.eval_term(&t, &Valuation::new()), Ok(1));
        assert_eq!(m.eval_term(&Term::constant("s0"), &Valuation::new()), Ok(1));

        let mut rw = FiniteModel::new(3).unwrap();
        rw.set_constant("0", 0).unwrap();
        rw.set_function("s", 1, vec![1, 2, 2]).unwrap();
        let t = parse_ground_term("s(s(s(0)))").unwrap();
        assert_eq!(rw.eval_term(&t, &Valuation::new()), Ok(2));

        assert_eq!(
            m.eval_term(&Term::var("x"), &Valuation::new()),
            Err(ModelError::UnboundVariable("x".into()))
        );
        let mut v = Valuation::new();
        v.insert("x", 1);
        assert_eq!(m.eval_term(&Term::app("even", vec![Term::var("x")]), &v), Ok(0));
    }

    #[test]
    fn satisfaction() {
        let m = parity_model();
        let goal = sentence("exists x y. R(x,s0) & R(x,y) & R(y,q0)");
        assert_eq!(m.satisfies(&goal.negate()), Ok(true));

        let mut one = FiniteModel::new(1).unwrap();
        one.set_relation("R", 2, vec![vec![0, 0]]).unwrap();
        let trans = sentence("forall x y z. R(x,y) & R(y,z) -> R(x,z)");
        assert_eq!(one.satisfies(&trans), Ok(true));

        assert!(matches!(m.satisfies(&sentence("P(0)")), Err(ModelError::Undeclared(_))));
        assert!(matches!(
            m.satisfies(&sentence("R(0)")),
            Err(ModelError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn quantifiers_shadow() {
        let m = parity_model();
        // inner x ranges independently of the outer one
        let s = sentence("forall x. exists x. R(x,s0)");
        assert_eq!(m.satisfies(&s), Ok(true));
        let s = sentence("exists x. forall y. R(x,y)");
        assert_eq!(m.satisfies(&s), Ok(false));
    }

    #[test]
    fn countermodel_check() {
        let m = parity_model();
        let v = Vocabulary::from_symbols([Symbol::new("0", 0), Symbol::new("s0", 0)]).unwrap();
        let mut th = Theory::new(v, [PredicateSymbol::new("R", 2)]);
        th.push(sentence("R(0,0)")).unwrap();
        let goal = sentence("R(s0,0)");
        assert!(check_countermodel(&m, &th, &goal));
        assert_eq!(
            first_violation(&m, &th, &sentence("R(s0,s0)")),
            Some(Violation::Goal { goal: "R(s0,s0)".into() })
        );

        let mut empty = m.clone();
        empty.set_relation("R", 2, vec![]).unwrap();
        assert!(matches!(
            first_violation(&empty, &th, &goal),
            Some(Violation::Sentence { index: 0, .. })
        ));

        let mut missing = FiniteModel::new(2).unwrap();
        missing.set_relation("R", 2, vec![vec![0, 0]]).unwrap();
        assert!(matches!(
            first_violation(&missing, &th, &goal),
            Some(Violation::Incomplete { .. })
        ));
    }

    #[test]
    fn render_and_parse() {
        let m = parity_model();
        let text = m.render();
        assert_eq!(
            text,
            "size 2\nconst 0 = 0\nconst q0 = 0\nconst s0 = 1\n\
             fun even(0) = 1\nfun even(1) = 0\nfun square(0) = 0\nfun square(1) = 1\n\
             rel R/2 = {(0,0), (1,1)}\n"
        );
        assert_eq!(parse_model(&text), Ok(m));

        let mut one = FiniteModel::new(1).unwrap();
        one.set_function("f", 2, vec![0]).unwrap();
        one.set_relation("P", 1, vec![]).unwrap();
        assert_eq!(one.render(), "size 1\nfun f(0,0) = 0\nrel P/1 = {}\n");
        assert_eq!(parse_model(&one.render()), Ok(one));
    }

    #[test]
    fn parse_rejects_partial_tables() {
        let bad = |text: &str| matches!(parse_model(text), Err(ModelError::Parse { .. }));
        assert!(bad("size 2\nfun s(0) = 1\n"));
        assert!(bad("size 2\nfun s(0) = 1\nfun s(0) = 0\nfun s(1) = 0\n"));
        assert!(bad("size 2\nconst a = 2\n"));
        assert!(bad("const a = 0\n"));
        assert!(bad("size 2\nrel R/2 = {(0,0),}\n"));
        assert!(bad("size 2\nrel R/2 = {(0)}\n"));
        assert!(bad("size 0\n"));
        assert!(bad(""));
        assert!(!bad("size 2\n# comment\nrel R/1 = {(1)}\n"));
    }
}
