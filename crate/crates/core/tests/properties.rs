mod common;

use std::collections::BTreeSet;
use std::time::Duration;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use fcm_core::automaton::{State, Transition, TreeAutomaton};
use fcm_core::finder::{find_model, verify_safety, SafetyVerdict, SearchConfig, SearchResult};
use fcm_core::logic::{Formula, PredicateSymbol, Sentence};
use fcm_core::model::{check_countermodel, parse_model, Valuation, Violation};
use fcm_core::problem::{parse_problem, print_problem};
use fcm_core::run::{replay, run, Command, RunConfig, Verdict};
use fcm_core::syntax::parse_formula;
use fcm_core::terms::{
    bounded_reachable, enumerate_ground_terms, match_term, one_step_successors, outermost_successors,
    RewriteRule, Strategy as Rewriting, Substitution, Symbol, Term, Trs, Vocabulary,
};
use fcm_core::translate::{
    build_basic, build_finitely_based, build_monadic_outermost, translate_automaton, translate_trs, Provenance,
    TermSet, TranslationOptions, VerificationProblem, REACH,
};
use fcm_core::witness::{check_hypotheses, product_countermodel, ProductModel, WitnessError};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_config(max: usize) -> SearchConfig {
    SearchConfig {
        max_domain_size: max,
        time_budget: Duration::from_secs(30),
        ..SearchConfig::default()
    }
}

fn reach(a: Term, b: Term) -> Formula {
    Formula::atom(PredicateSymbol::new(REACH, 2), vec![a, b]).unwrap()
}

fn tiny_vocab() -> Vocabulary {
    Vocabulary::from_symbols([Symbol::new("a", 0), Symbol::new("g", 1), Symbol::new("h", 2)]).unwrap()
}

/// Random automaton with up to three states and some epsilon transitions.
fn random_automaton(rng: &mut ChaCha8Rng, vocab: &Vocabulary) -> TreeAutomaton {
    let states: Vec<State> = (0..rng.gen_range(1..=3)).map(|i| State::new(format!("q{i}"))).collect();
    let mut ts = Vec::new();
    for s in vocab.symbols() {
        for _ in 0..rng.gen_range(0..=3) {
            let args = (0..s.arity()).map(|_| states.choose(rng).unwrap().clone()).collect();
            ts.push(Transition::normalized(s.clone(), args, states.choose(rng).unwrap().clone()));
        }
    }
    if rng.gen_bool(0.3) {
        ts.push(Transition::epsilon(states.choose(rng).unwrap().clone(), states.choose(rng).unwrap().clone()));
    }
    let finals: Vec<State> = states.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    TreeAutomaton::new(vocab.clone(), states, finals, ts).unwrap()
}

fn arb_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::constant("a")), Just(Term::constant("b")), Just(Term::var("x")), Just(Term::var("y"))];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("g", vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Term::app("h", vec![l, r])),
        ]
    })
}

fn arb_ground(depth: u32) -> impl Strategy<Value = Term> {
    arb_term(depth).prop_map(|t| {
        let mut s = Substitution::new();
        s.insert("x", Term::constant("a"));
        s.insert("y", Term::constant("b"));
        s.apply(&t)
    })
}

// terms

proptest! {
    #[test]
    fn substitution_is_a_homomorphism(t in arb_term(3), sx in arb_term(2), sy in arb_term(2)) {
        let mut s = Substitution::new();
        s.insert("x", sx);
        s.insert("y", sy);
        if let Term::App(f, args) = &t {
            let mapped = Term::App(f.clone(), args.iter().map(|a| s.apply(a)).collect());
            prop_assert_eq!(s.apply(&t), mapped);
        }
    }

    #[test]
    fn outermost_steps_are_steps(seed in any::<u64>(), t in arb_ground(3)) {
        let trs = random_trs(&mut rng(seed), &small_vocab(), 3, false);
        let any = one_step_successors(&t, &trs).unwrap();
        let outer = outermost_successors(&t, &trs).unwrap();
        prop_assert!(outer.is_subset(&any));
    }

    #[test]
    fn each_step_rewrites_one_position(seed in any::<u64>(), t in arb_ground(3)) {
        let trs = random_trs(&mut rng(seed), &small_vocab(), 3, false);
        for succ in one_step_successors(&t, &trs).unwrap() {
            let explained = t.positions().iter().any(|p| {
                let (Some(before), Some(after)) = (t.subterm(p), succ.subterm(p)) else { return false };
                t.replace_at(p, after.clone()).as_ref() == Some(&succ)
                    && trs.rules().iter().any(|r| {
                        match_term(r.lhs(), before).is_some_and(|s| &s.apply(r.rhs()) == after)
                    })
            });
            prop_assert!(explained, "{} -> {}", t, succ);
        }
    }

    #[test]
    fn reachability_grows_with_bounds(seed in any::<u64>(), t in arb_ground(2), k in 0usize..3) {
        let trs = random_trs(&mut rng(seed), &small_vocab(), 2, false);
        let small = bounded_reachable(&t, &trs, k, 12, Rewriting::Any).unwrap().into_set();
        let deeper = bounded_reachable(&t, &trs, k + 1, 12, Rewriting::Any).unwrap().into_set();
        let wider = bounded_reachable(&t, &trs, k, 20, Rewriting::Any).unwrap().into_set();
        prop_assert!(small.is_subset(&deeper));
        prop_assert!(small.is_subset(&wider));
    }

    #[test]
    fn malformed_rules_are_rejected(l in arb_term(2), r in arb_term(2)) {
        let ok = RewriteRule::new(l.clone(), r.clone()).is_ok();
        prop_assert_eq!(ok, !l.is_var() && r.vars().is_subset(&l.vars()));
    }
}

// automata

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn acceptance_matches_run_states(seed in any::<u64>()) {
        let a = random_automaton(&mut rng(seed), &tiny_vocab());
        for t in enumerate_ground_terms(&tiny_vocab(), 2) {
            let states = a.reachable_states(&t).unwrap();
            prop_assert_eq!(a.accepts(&t).unwrap(), states.iter().any(|q| a.finals().contains(q)));
        }
    }

    #[test]
    fn determinization_preserves_language(seed in any::<u64>()) {
        let a = random_automaton(&mut rng(seed), &tiny_vocab());
        let d = a.determinize();
        prop_assert!(d.is_deterministic_complete());
        for t in enumerate_ground_terms(&tiny_vocab(), 3) {
            prop_assert_eq!(d.accepts(&t).unwrap(), a.accepts(&t).unwrap(), "{}", t);
        }
        // exactly one transition per symbol and argument tuple
        let n = d.states().len();
        for s in tiny_vocab().symbols() {
            let count = d.transitions().filter(|t| matches!(t, Transition::Normalized { symbol, .. } if *symbol == s)).count();
            prop_assert_eq!(count, n.pow(s.arity() as u32));
        }
    }

    #[test]
    fn product_is_intersection(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_automaton(&mut rng(s1), &tiny_vocab());
        let b = random_automaton(&mut rng(s2), &tiny_vocab()).rename_states(|q| State::new(format!("p{}", q.name())));
        let p = a.product(&b).unwrap();
        for t in enumerate_ground_terms(&tiny_vocab(), 2) {
            prop_assert_eq!(p.accepts(&t).unwrap(), a.accepts(&t).unwrap() && b.accepts(&t).unwrap());
        }
    }

    #[test]
    fn emptiness_matches_bounded_enumeration(seed in any::<u64>()) {
        let a = random_automaton(&mut rng(seed), &tiny_vocab());
        // a nonempty language has a member no taller than the number of states
        let bound = a.states().len();
        prop_assert_eq!(a.is_empty(), a.enumerate_language(bound).is_empty());
    }
}

// logic

proptest! {
    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let sig = Sig { consts: vec!["a", "b"], funs: vec![("f", 1), ("g", 2)], preds: vec![("P", 1), ("Q", 2)] };
        let mut r = rng(seed);
        let f = to_sentence(&sig, &random_sentence(&mut r, &sig, 4)).into_formula();
        let again = parse_formula(&f.to_string()).unwrap();
        prop_assert_eq!(&again, &f, "{}", f);
    }

    #[test]
    fn universal_closure_is_closed(seed in any::<u64>()) {
        let sig = Sig { consts: vec!["a"], funs: vec![("f", 1)], preds: vec![("Q", 2)] };
        let mut r = rng(seed);
        let f = random_formula(&mut r, &sig, &mut vec![0, 1, 2], 3);
        let vars: BTreeSet<_> = ["x", "y", "z"].iter().map(|v| (*v).into()).collect();
        let parsed = fcm_core::syntax::parse_formula_with_vars(&render(&sig, &f), &vars).unwrap();
        prop_assert!(parsed.universal_closure().formula().free_vars().is_empty());
        prop_assert!(parsed.existential_closure().formula().free_vars().is_empty());
    }
}

#[test]
fn atoms_check_arity() {
    assert!(Formula::atom(PredicateSymbol::new("R", 2), vec![Term::constant("a")]).is_err());
    assert!(Formula::atom(PredicateSymbol::new("R", 1), vec![Term::constant("a")]).is_ok());
}

// translation

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Models of the rewriting theory make R true of every reachable pair.
    #[test]
    fn rewriting_theory_entails_reachability(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = small_vocab();
        let trs = random_trs(&mut r, &vocab, 2, false);
        let t1 = random_ground_term(&mut r, &vocab, 2);
        let reached: Vec<Term> = bounded_reachable(&t1, &trs, 3, 16, Rewriting::Any).unwrap().into_set().into_iter().collect();
        let t2 = reached.choose(&mut r).unwrap().clone();
        let theory = translate_trs(&trs, &TranslationOptions::default()).unwrap();
        let (u, v) = (random_ground_term(&mut r, &vocab, 1), random_ground_term(&mut r, &vocab, 1));
        let mut sentences = theory.theory.sentences().to_vec();
        sentences.push(Sentence::new(reach(u.clone(), v.clone()).not()).unwrap());
        // mention t1 and t2 so the model interprets their symbols
        let mention = reach(t1.clone(), t2.clone());
        sentences.push(Sentence::new(Formula::or(vec![mention.clone(), mention.not()])).unwrap());
        match find_model(&sentences, &small_config(3)).unwrap() {
            SearchResult::Model(m) => {
                let goal = Sentence::new(reach(t1.clone(), t2.clone())).unwrap();
                prop_assert!(m.satisfies(&goal).unwrap(), "R({}, {}) false", t1, t2);
                let uv_reached = bounded_reachable(&u, &trs, 3, 16, Rewriting::Any).unwrap().contains(&v);
                prop_assert!(!uv_reached);
            }
            SearchResult::ExhaustedUpTo(_) | SearchResult::Timeout { .. } => {}
        }
    }

    /// Models of an automaton's theory relate accepted terms to final states.
    #[test]
    fn automaton_theory_is_adequate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = tiny_vocab();
        let a = random_automaton(&mut r, &vocab);
        prop_assume!(!a.finals().is_empty());
        let theory = translate_automaton(&a).unwrap();
        let mut sentences = theory.theory.sentences().to_vec();
        sentences.extend(translate_trs(&Trs::empty(vocab.clone()), &TranslationOptions::default()).unwrap().theory.sentences().iter().cloned());
        if let SearchResult::Model(m) = find_model(&sentences, &small_config(3)).unwrap() {
            for t in a.enumerate_language(3) {
                // finals without incoming transitions never occur in the theory
                let used = a.finals().iter().filter(|q| m.constant(q.name()).is_some());
                let some_final = Formula::or(used.map(|q| reach(t.clone(), Term::constant(q.name().clone()))).collect());
                prop_assert!(m.satisfies(&Sentence::new(some_final).unwrap()).unwrap(), "{}", t);
            }
        }
    }

    #[test]
    fn goals_are_closed_and_counts_follow_the_schema(seed in any::<u64>(), reflexive in any::<bool>()) {
        let mut r = rng(seed);
        let vocab = small_vocab();
        let trs = random_trs(&mut r, &vocab, 3, false);
        let options = TranslationOptions { include_reflexivity: reflexive, ..Default::default() };
        let a_i = exact_automaton(&vocab, &[random_ground_term(&mut r, &vocab, 2)], "i");
        let a_u = exact_automaton(&vocab, &[random_ground_term(&mut r, &vocab, 2)], "u");
        let basis = |r: &mut ChaCha8Rng| vec![random_pattern(r, &vocab, &["x"], 2)];
        let results = [
            build_basic(&a_i, &trs, &a_u, &options).unwrap(),
            build_finitely_based(&basis(&mut r), &trs, &basis(&mut r), &options).unwrap(),
        ];
        for res in &results {
            prop_assert!(res.goal.formula().free_vars().is_empty());
            let th = &res.theory;
            prop_assert_eq!(th.provenance.len(), th.theory.len());
            let distinct_rules: BTreeSet<String> = trs.rules().iter().map(|r| r.to_string()).collect();
            prop_assert!(th.count(Provenance::RuleAtom) <= distinct_rules.len());
            prop_assert_eq!(th.count(Provenance::Transitivity), 1);
            prop_assert_eq!(th.count(Provenance::Reflexivity), reflexive as usize);
            prop_assert_eq!(th.count(Provenance::Congruence), 1 + 2);
        }
        let ground: Vec<Term> = vec![random_ground_term(&mut r, &vocab, 1)];
        let mono = build_monadic_outermost(&ground, &trs, &basis(&mut r)).unwrap();
        prop_assert!(mono.goal.formula().free_vars().is_empty());
    }
}

// models

proptest! {
    #[test]
    fn evaluation_commutes_with_substitution(seed in any::<u64>(), t in arb_term(3), sx in arb_term(2), sy in arb_term(2)) {
        let sig = Sig { consts: vec!["a", "b"], funs: vec![("g", 1), ("h", 2)], preds: vec![] };
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let m = to_finite_model(&sig, &random_model(&mut r, &sig, n));
        let mut v = Valuation::new();
        v.insert("x", r.gen_range(0..n));
        v.insert("y", r.gen_range(0..n));
        let mut s = Substitution::new();
        s.insert("x", sx.clone());
        s.insert("y", sy.clone());
        let mut shifted = Valuation::new();
        shifted.insert("x", m.eval_term(&sx, &v).unwrap());
        shifted.insert("y", m.eval_term(&sy, &v).unwrap());
        prop_assert_eq!(m.eval_term(&s.apply(&t), &v).unwrap(), m.eval_term(&t, &shifted).unwrap());
    }

    #[test]
    fn satisfies_matches_reference(seed in any::<u64>()) {
        let sig = Sig { consts: vec!["a"], funs: vec![("f", 1)], preds: vec![("P", 1), ("Q", 2)] };
        let mut r = rng(seed);
        let f = random_sentence(&mut r, &sig, 5);
        let n = r.gen_range(1..=3);
        let m = random_model(&mut r, &sig, n);
        prop_assert_eq!(to_finite_model(&sig, &m).satisfies(&to_sentence(&sig, &f)).unwrap(), holds(&m, &f));
    }
}

// finder

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_models_satisfy_input_and_are_reproducible(seed in any::<u64>()) {
        let sig = Sig { consts: vec!["a", "b"], funs: vec![("f", 1)], preds: vec![("P", 2)] };
        let mut r = rng(seed);
        let sentences: Vec<Sentence> = (0..3).map(|_| to_sentence(&sig, &random_sentence(&mut r, &sig, 3))).collect();
        let first = find_model(&sentences, &small_config(3)).unwrap();
        let second = find_model(&sentences, &small_config(3)).unwrap();
        prop_assert_eq!(&first, &second);
        if let SearchResult::Model(m) = &first {
            for s in &sentences {
                prop_assert!(m.satisfies(s).unwrap());
            }
            let parallel = SearchConfig { deterministic_order: false, ..small_config(3) };
            let raced = find_model(&sentences, &parallel).unwrap();
            prop_assert_eq!(raced.model().map(|m| m.size()), Some(m.size()));
        }
    }
}

/// Problems over a, b, g, h with exact automata for both sides.
fn random_problem(r: &mut ChaCha8Rng) -> VerificationProblem {
    let vocab = small_vocab();
    let trs = random_trs(r, &vocab, 2, false);
    let i: Vec<Term> = (0..2).map(|_| random_ground_term(r, &vocab, 2)).collect();
    let u: Vec<Term> = (0..2).map(|_| random_ground_term(r, &vocab, 2)).collect();
    VerificationProblem::new(
        trs,
        TermSet::Automaton(exact_automaton(&vocab, &i, "i")),
        TermSet::Automaton(exact_automaton(&vocab, &u, "u")),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Verified problems have no bounded counterexample, every sentence
    /// holds on its own, and the rendered model checks again after parsing.
    #[test]
    fn verified_problems_are_safe(seed in any::<u64>()) {
        let p = random_problem(&mut rng(seed));
        let v = verify_safety(&p, &small_config(3)).unwrap();
        if let SafetyVerdict::Verified(m) = v.verdict {
            let (TermSet::Automaton(a_i), TermSet::Automaton(a_u)) = (&p.initial, &p.unsafe_terms) else { unreachable!() };
            for t1 in a_i.enumerate_language(3) {
                let reached = bounded_reachable(&t1, &p.trs, 3, 30, Rewriting::Any).unwrap();
                for t2 in a_u.enumerate_language(3) {
                    prop_assert!(!reached.contains(&t2), "{} reaches {}", t1, t2);
                }
            }
            let th = v.translation.theory();
            prop_assert!(check_countermodel(&m, th, &v.translation.goal));
            for s in th.sentences() {
                prop_assert!(m.satisfies(s).unwrap());
            }
            let back = parse_model(&m.render()).unwrap();
            let checked = run(Command::Check(back), &p, &RunConfig::default()).unwrap();
            prop_assert_eq!(checked.verdict, Some(Verdict::Verified));
        }
    }

    /// Verification reports a model or a trace, never both, and traces replay.
    #[test]
    fn verify_reports_are_consistent(seed in any::<u64>()) {
        let p = random_problem(&mut rng(seed));
        let config = RunConfig { search: small_config(3), oracle_depth: 3, ..Default::default() };
        let r = run(Command::Verify, &p, &config).unwrap();
        prop_assert!(!(r.model.is_some() && r.oracle_witness.is_some()));
        match r.verdict {
            Some(Verdict::Refuted) => prop_assert!(replay(&p, r.oracle_witness.as_ref().unwrap())),
            Some(Verdict::Verified) => prop_assert!(r.model.is_some()),
            _ => {}
        }
    }
}

// product countermodels

fn random_witness_instance(r: &mut ChaCha8Rng) -> Option<(TreeAutomaton, TreeAutomaton, TreeAutomaton, Trs)> {
    let vocab = small_vocab();
    let linear = r.gen_bool(0.5);
    let trs = random_trs(r, &vocab, 2, linear);
    let starts = vec![random_ground_term(r, &vocab, 1)];
    let reach = bounded_reachable(&starts[0], &trs, 6, 12, Rewriting::Any).ok()?;
    if !reach.is_complete() || reach.len() > 8 {
        return None;
    }
    let reached = reach.into_set();
    let u: Vec<Term> = vec![random_ground_term(r, &vocab, 1)];
    if reached.contains(&u[0]) {
        return None;
    }
    let a_i = exact_automaton(&vocab, &starts, "i");
    let a_u = exact_automaton(&vocab, &u, "u");
    let star = exact_automaton(&vocab, &reached.into_iter().collect::<Vec<_>>(), "p").determinize();
    Some((a_i, a_u, star, trs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_models_follow_the_construction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some((a_i, a_u, star, trs)) = random_witness_instance(&mut r) else { return Ok(()) };
        let cert = check_hypotheses(&a_i, &a_u, &star, &trs, 6).unwrap();
        prop_assert!(cert.holds());
        let pm: ProductModel = match product_countermodel(&a_i, &a_u, &star, &trs, &TranslationOptions::default()) {
            Ok(pm) => pm,
            // The theory holds even in rejected models; only the goal can fail.
            Err(WitnessError::GateFailure { violation, rejected }) => {
                prop_assert!(matches!(violation, Violation::Goal { .. }), "{}", violation);
                *rejected
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let m = &pm.model;
        let none = Valuation::new();
        for t in enumerate_ground_terms(&small_vocab(), 2) {
            let e = m.eval_term(&t, &none).unwrap();
            let [i, s, u] = pm.components(e);
            prop_assert_eq!(i, &a_i.reachable_states(&t).unwrap());
            prop_assert_eq!(s, &star.reachable_states(&t).unwrap());
            prop_assert_eq!(u, &a_u.reachable_states(&t).unwrap());
            if pm.restricted {
                continue;
            }
            for t2 in bounded_reachable(&t, &trs, 3, 12, Rewriting::Any).unwrap().terms() {
                let e2 = m.eval_term(t2, &none).unwrap();
                prop_assert!(m.holds(REACH, &[e, e2]).unwrap(), "{} =>* {}", t, t2);
            }
        }
        if pm.restricted {
            // every element of the restricted model is denoted by a ground term
            let mut denoted: BTreeSet<usize> = m.constants().values().copied().collect();
            loop {
                let before = denoted.len();
                let pool: Vec<usize> = denoted.iter().copied().collect();
                for (f, table) in m.functions() {
                    let k = table.arity();
                    for i in 0..pool.len().pow(k as u32) {
                        let args: Vec<usize> = fcm_core::model::tuple_at(pool.len(), k, i).iter().map(|&j| pool[j]).collect();
                        denoted.insert(m.apply(f, &args).unwrap());
                    }
                }
                if denoted.len() == before {
                    break;
                }
            }
            prop_assert_eq!(denoted.len(), m.size());
        }
    }
}

// benchmark files

#[test]
fn benchmarks_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("benchmarks");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let p = parse_problem(&text).unwrap();
        let printed = print_problem(&p);
        assert_eq!(parse_problem(&printed).unwrap(), p, "{}", path.display());
        seen += 1;
    }
    assert_eq!(seen, 4);
}
