//! Test support: random generators and independent reference
//! implementations shared by the property and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use fcm_core::automaton::{State, Transition, TreeAutomaton};
use fcm_core::logic::Sentence;
use fcm_core::model::FiniteModel;
use fcm_core::syntax::parse_formula;
use fcm_core::terms::{RewriteRule, Symbol, Term, Trs, Vocabulary};

pub const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// A signature for reference formulas: names with arities.
#[derive(Clone, Debug)]
pub struct Sig {
    pub consts: Vec<&'static str>,
    pub funs: Vec<(&'static str, usize)>,
    pub preds: Vec<(&'static str, usize)>,
}

#[derive(Clone, Debug)]
pub enum RTerm {
    Var(usize),
    Const(usize),
    Fun(usize, Vec<RTerm>),
}

#[derive(Clone, Debug)]
pub enum RF {
    True,
    False,
    Atom(usize, Vec<RTerm>),
    Not(Box<RF>),
    And(Box<RF>, Box<RF>),
    Or(Box<RF>, Box<RF>),
    Imp(Box<RF>, Box<RF>),
    All(usize, Box<RF>),
    Ex(usize, Box<RF>),
}

pub fn random_term(rng: &mut impl Rng, sig: &Sig, scope: &[usize], depth: usize) -> RTerm {
    let leaf = depth == 0 || sig.funs.is_empty() || rng.gen_bool(0.5);
    if !leaf {
        let (i, &(_, arity)) = sig.funs.iter().enumerate().collect::<Vec<_>>()[rng.gen_range(0..sig.funs.len())];
        return RTerm::Fun(i, (0..arity).map(|_| random_term(rng, sig, scope, depth - 1)).collect());
    }
    let choices = scope.len() + sig.consts.len();
    if choices == 0 {
        // only reachable when a function exists
        let (i, &(_, arity)) = sig.funs.iter().enumerate().next().expect("some symbol");
        return RTerm::Fun(i, (0..arity).map(|_| random_term(rng, sig, scope, 0)).collect());
    }
    let k = rng.gen_range(0..choices);
    if k < scope.len() {
        RTerm::Var(scope[k])
    } else {
        RTerm::Const(k - scope.len())
    }
}

/// Random formula whose free variables are among `scope`.
pub fn random_formula(rng: &mut impl Rng, sig: &Sig, scope: &mut Vec<usize>, depth: usize) -> RF {
    let pick = if depth == 0 { rng.gen_range(0..10) } else { rng.gen_range(0..22) };
    match pick {
        0 => RF::True,
        1 => RF::False,
        2..=9 => {
            let p = rng.gen_range(0..sig.preds.len());
            let arity = sig.preds[p].1;
            RF::Atom(p, (0..arity).map(|_| random_term(rng, sig, scope, 2)).collect())
        }
        10..=11 => RF::Not(Box::new(random_formula(rng, sig, scope, depth - 1))),
        12..=13 => RF::And(
            Box::new(random_formula(rng, sig, scope, depth - 1)),
            Box::new(random_formula(rng, sig, scope, depth - 1)),
        ),
        14..=15 => RF::Or(
            Box::new(random_formula(rng, sig, scope, depth - 1)),
            Box::new(random_formula(rng, sig, scope, depth - 1)),
        ),
        16..=17 => RF::Imp(
            Box::new(random_formula(rng, sig, scope, depth - 1)),
            Box::new(random_formula(rng, sig, scope, depth - 1)),
        ),
        _ => {
            let v = rng.gen_range(0..VAR_NAMES.len());
            scope.push(v);
            let body = Box::new(random_formula(rng, sig, scope, depth - 1));
            scope.pop();
            if pick % 2 == 0 {
                RF::All(v, body)
            } else {
                RF::Ex(v, body)
            }
        }
    }
}

/// Random closed formula; the top is a quantifier block most of the time.
pub fn random_sentence(rng: &mut impl Rng, sig: &Sig, depth: usize) -> RF {
    let mut scope = Vec::new();
    random_formula(rng, sig, &mut scope, depth)
}

pub fn render_term(sig: &Sig, t: &RTerm) -> String {
    match t {
        RTerm::Var(v) => VAR_NAMES[*v].to_string(),
        RTerm::Const(c) => sig.consts[*c].to_string(),
        RTerm::Fun(f, args) => {
            let parts: Vec<String> = args.iter().map(|a| render_term(sig, a)).collect();
            format!("{}({})", sig.funs[*f].0, parts.join(", "))
        }
    }
}

/// Fully parenthesized text in the formula syntax.
pub fn render(sig: &Sig, f: &RF) -> String {
    match f {
        RF::True => "$true".into(),
        RF::False => "$false".into(),
        RF::Atom(p, args) => {
            let parts: Vec<String> = args.iter().map(|a| render_term(sig, a)).collect();
            if parts.is_empty() {
                sig.preds[*p].0.to_string()
            } else {
                format!("{}({})", sig.preds[*p].0, parts.join(", "))
            }
        }
        RF::Not(g) => format!("~({})", render(sig, g)),
        RF::And(a, b) => format!("(({}) & ({}))", render(sig, a), render(sig, b)),
        RF::Or(a, b) => format!("(({}) | ({}))", render(sig, a), render(sig, b)),
        RF::Imp(a, b) => format!("(({}) -> ({}))", render(sig, a), render(sig, b)),
        RF::All(v, g) => format!("(forall {}. ({}))", VAR_NAMES[*v], render(sig, g)),
        RF::Ex(v, g) => format!("(exists {}. ({}))", VAR_NAMES[*v], render(sig, g)),
    }
}

pub fn to_sentence(sig: &Sig, f: &RF) -> Sentence {
    let text = render(sig, f);
    Sentence::new(parse_formula(&text).unwrap_or_else(|e| panic!("{text}: {e}"))).unwrap()
}

/// A structure in plain tables: row-major function and predicate tables.
#[derive(Clone, Debug)]
pub struct RModel {
    pub n: usize,
    pub consts: Vec<usize>,
    pub funs: Vec<Vec<usize>>,
    pub preds: Vec<Vec<bool>>,
}

fn row(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

pub fn random_model(rng: &mut impl Rng, sig: &Sig, n: usize) -> RModel {
    RModel {
        n,
        consts: sig.consts.iter().map(|_| rng.gen_range(0..n)).collect(),
        funs: sig.funs.iter().map(|&(_, a)| (0..n.pow(a as u32)).map(|_| rng.gen_range(0..n)).collect()).collect(),
        preds: sig.preds.iter().map(|&(_, a)| (0..n.pow(a as u32)).map(|_| rng.gen_bool(0.5)).collect()).collect(),
    }
}

/// Every structure of size `n` over `sig`.
pub fn all_models(sig: &Sig, n: usize) -> Vec<RModel> {
    // One digit per table cell; digits for predicates range over {0,1}.
    let mut radices = Vec::new();
    radices.extend(sig.consts.iter().map(|_| n));
    for &(_, a) in &sig.funs {
        radices.extend(std::iter::repeat(n).take(n.pow(a as u32)));
    }
    for &(_, a) in &sig.preds {
        radices.extend(std::iter::repeat(2).take(n.pow(a as u32)));
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; radices.len()];
    loop {
        let mut it = digits.iter().copied();
        let consts = sig.consts.iter().map(|_| it.next().unwrap()).collect();
        let funs = sig
            .funs
            .iter()
            .map(|&(_, a)| (0..n.pow(a as u32)).map(|_| it.next().unwrap()).collect())
            .collect();
        let preds = sig
            .preds
            .iter()
            .map(|&(_, a)| (0..n.pow(a as u32)).map(|_| it.next().unwrap() == 1).collect())
            .collect();
        out.push(RModel { n, consts, funs, preds });
        let mut k = 0;
        loop {
            if k == digits.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < radices[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

pub fn to_finite_model(sig: &Sig, m: &RModel) -> FiniteModel {
    let mut fm = FiniteModel::new(m.n).unwrap();
    for (i, c) in sig.consts.iter().enumerate() {
        fm.set_constant(*c, m.consts[i]).unwrap();
    }
    for (i, &(f, a)) in sig.funs.iter().enumerate() {
        fm.set_function(f, a, m.funs[i].clone()).unwrap();
    }
    for (i, &(p, a)) in sig.preds.iter().enumerate() {
        let tuples: Vec<Vec<usize>> = (0..m.n.pow(a as u32))
            .filter(|&r| m.preds[i][r])
            .map(|r| {
                let mut t = vec![0; a];
                let mut r = r;
                for k in (0..a).rev() {
                    t[k] = r % m.n;
                    r /= m.n;
                }
                t
            })
            .collect();
        fm.set_relation(p, a, tuples).unwrap();
    }
    fm
}

pub fn eval_term_ref(m: &RModel, t: &RTerm, env: &[Option<usize>; 4]) -> usize {
    match t {
        RTerm::Var(v) => env[*v].expect("bound variable"),
        RTerm::Const(c) => m.consts[*c],
        RTerm::Fun(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval_term_ref(m, a, env)).collect();
            m.funs[*f][row(m.n, &vals)]
        }
    }
}

/// Direct recursive evaluation.
pub fn eval_ref(m: &RModel, f: &RF, env: &mut [Option<usize>; 4]) -> bool {
    match f {
        RF::True => true,
        RF::False => false,
        RF::Atom(p, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval_term_ref(m, a, env)).collect();
            m.preds[*p][row(m.n, &vals)]
        }
        RF::Not(g) => !eval_ref(m, g, env),
        RF::And(a, b) => {
            let x = eval_ref(m, a, env);
            let y = eval_ref(m, b, env);
            x && y
        }
        RF::Or(a, b) => {
            let x = eval_ref(m, a, env);
            let y = eval_ref(m, b, env);
            x || y
        }
        RF::Imp(a, b) => {
            let x = eval_ref(m, a, env);
            let y = eval_ref(m, b, env);
            !x || y
        }
        RF::All(v, g) | RF::Ex(v, g) => {
            let saved = env[*v];
            let mut results = Vec::with_capacity(m.n);
            for d in 0..m.n {
                env[*v] = Some(d);
                results.push(eval_ref(m, g, env));
            }
            env[*v] = saved;
            if matches!(f, RF::All(..)) {
                results.iter().all(|&r| r)
            } else {
                results.iter().any(|&r| r)
            }
        }
    }
}

pub fn holds(m: &RModel, f: &RF) -> bool {
    eval_ref(m, f, &mut [None; 4])
}

/// Constants a, b; unary g; binary h.
pub fn small_vocab() -> Vocabulary {
    Vocabulary::from_symbols([
        Symbol::new("a", 0),
        Symbol::new("b", 0),
        Symbol::new("g", 1),
        Symbol::new("h", 2),
    ])
    .unwrap()
}

pub fn random_ground_term(rng: &mut impl Rng, vocab: &Vocabulary, depth: usize) -> Term {
    let symbols: Vec<Symbol> = if depth == 0 {
        vocab.constants().collect()
    } else {
        vocab.symbols().collect()
    };
    let s = symbols.choose(rng).unwrap().clone();
    let args = (0..s.arity()).map(|_| random_ground_term(rng, vocab, depth - 1)).collect();
    Term::App(s, args)
}

pub fn random_pattern(rng: &mut impl Rng, vocab: &Vocabulary, vars: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        if !vars.is_empty() && rng.gen_bool(0.6) {
            return Term::var(*vars.choose(rng).unwrap());
        }
        let c: Vec<Symbol> = vocab.constants().collect();
        return Term::App(c.choose(rng).unwrap().clone(), vec![]);
    }
    let fs: Vec<Symbol> = vocab.functions().collect();
    let f = fs.choose(rng).unwrap().clone();
    let args = (0..f.arity()).map(|_| random_pattern(rng, vocab, vars, depth - 1)).collect();
    Term::App(f, args)
}

/// A rule whose left side is not a variable and whose right side only
/// uses variables of the left side.
pub fn random_rule(rng: &mut impl Rng, vocab: &Vocabulary, ground: bool) -> RewriteRule {
    let vars: &[&str] = if ground { &[] } else { &["x", "y"] };
    loop {
        let lhs = random_pattern(rng, vocab, vars, 2);
        if lhs.is_var() {
            continue;
        }
        let lv: Vec<String> = lhs.vars().iter().map(|v| v.to_string()).collect();
        let lv: Vec<&str> = lv.iter().map(|s| s.as_str()).collect();
        let rhs = random_pattern(rng, vocab, &lv, 2);
        if let Ok(r) = RewriteRule::new(lhs, rhs) {
            return r;
        }
    }
}

pub fn random_trs(rng: &mut impl Rng, vocab: &Vocabulary, rules: usize, ground: bool) -> Trs {
    let rules = (0..rules).map(|_| random_rule(rng, vocab, ground)).collect();
    Trs::new(vocab.clone(), rules).unwrap()
}

/// Deterministic automaton accepting exactly `terms`, with one state
/// `{prefix}{i}` per distinct subterm.
pub fn exact_automaton(vocab: &Vocabulary, terms: &[Term], prefix: &str) -> TreeAutomaton {
    let mut ids: BTreeMap<Term, usize> = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    fn visit(
        t: &Term,
        ids: &mut BTreeMap<Term, usize>,
        transitions: &mut BTreeSet<Transition>,
        prefix: &str,
    ) -> State {
        let Term::App(f, args) = t else { panic!("ground terms only") };
        let qs: Vec<State> = args.iter().map(|a| visit(a, ids, transitions, prefix)).collect();
        let next = ids.len();
        let id = *ids.entry(t.clone()).or_insert(next);
        let q = State::new(format!("{prefix}{id}"));
        transitions.insert(Transition::normalized(f.clone(), qs, q.clone()));
        q
    }
    let finals: Vec<State> = terms.iter().map(|t| visit(t, &mut ids, &mut transitions, prefix)).collect();
    TreeAutomaton::from_transitions(vocab.clone(), finals, transitions).unwrap()
}
