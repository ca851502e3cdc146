//! Commands over a parsed problem and the reports they produce.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::automaton::TreeAutomaton;
use crate::finder::{verify_with, SafetyVerdict, SearchConfig, SizeOutcome, SizeReport, VerifyError};
use crate::model::{first_violation, FiniteModel};
use crate::terms::{
    bounded_reachable_from, enumerate_ground_terms, is_rewrite_step, match_term, Name, Substitution, Term,
    TermError,
};
use crate::translate::{TermSet, TranslateError, TranslationResult, VerificationProblem};
use crate::witness::{check_hypotheses, product_countermodel, CompletionCertificate, WitnessError};

/// Exit code for unreadable or invalid input.
pub const INPUT_ERROR: i32 = 3;

/// Largest term (in nodes) the oracle keeps while exploring.
pub const ORACLE_SIZE_CAP: usize = 64;

/// Most start terms the oracle draws from the initial set.
pub const ORACLE_START_LIMIT: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Unknown,
    Refuted,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Unknown => 1,
            Verdict::Refuted => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Unknown => "unknown",
            Verdict::Refuted => "refuted",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("cannot write clauses: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub enum Command {
    Verify,
    Translate,
    Oracle,
    /// Build the product countermodel from this overapproximating automaton.
    Witness(TreeAutomaton),
    /// Re-check this model against the problem.
    Check(FiniteModel),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Translate => "translate",
            Command::Oracle => "oracle",
            Command::Witness(_) => "witness",
            Command::Check(_) => "check",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub search: SearchConfig,
    /// Rewrite steps explored by the oracle; 0 skips the pre-pass of `verify`.
    pub oracle_depth: usize,
    /// Directory receiving one DIMACS file per domain size tried.
    pub dump_clauses: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            search: SearchConfig::default(),
            oracle_depth: 4,
            dump_clauses: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Statistics {
    pub sizes: Vec<SizeReport>,
    pub sentences: usize,
    pub oracle_terms: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: &'static str,
    /// None for `translate`, which only prints.
    pub verdict: Option<Verdict>,
    pub model: Option<FiniteModel>,
    /// Rewrite sequence from an initial to an unsafe term.
    pub oracle_witness: Option<Vec<Term>>,
    pub reason: Option<String>,
    pub theory_dump: Option<String>,
    pub certificate: Option<CompletionCertificate>,
    pub statistics: Statistics,
}

impl RunReport {
    fn new(command: &'static str) -> Self {
        RunReport {
            command,
            verdict: None,
            model: None,
            oracle_witness: None,
            reason: None,
            theory_dump: None,
            certificate: None,
            statistics: Statistics::default(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.map_or(0, Verdict::exit_code)
    }

    pub fn to_json(&self) -> Value {
        let certificate = self.certificate.as_ref().map(|c| {
            json!({
                "disjointness": c.disjointness,
                "coverage_depth": c.coverage_depth,
                "coverage_counterexample": c.coverage_counterexample.as_ref().map(|t| strings(t)),
                "terms_checked": c.terms_checked,
                "exhaustive": c.exhaustive,
            })
        });
        json!({
            "command": self.command,
            "verdict": self.verdict,
            "reason": self.reason,
            "model": self.model.as_ref().map(|m| json!({ "size": m.size(), "text": m.render() })),
            "oracle_witness": self.oracle_witness.as_ref().map(|t| strings(t)),
            "certificate": certificate,
            "statistics": self.statistics,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report values serialize")
    }

    /// Human-readable report.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(dump) = &self.theory_dump {
            out.push_str(dump);
        }
        if let Some(v) = self.verdict {
            let _ = writeln!(out, "verdict: {}", v.as_str());
        }
        if let Some(r) = &self.reason {
            let _ = writeln!(out, "reason: {r}");
        }
        if let Some(trace) = &self.oracle_witness {
            let _ = writeln!(out, "trace:");
            for (i, t) in trace.iter().enumerate() {
                let _ = writeln!(out, "  {} {t}", if i == 0 { "  " } else { "=>" });
            }
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(out, "disjointness: {}", c.disjointness);
            match &c.coverage_counterexample {
                None => {
                    let _ = writeln!(
                        out,
                        "coverage: {} reachable terms accepted (depth {}{})",
                        c.terms_checked,
                        c.coverage_depth,
                        if c.exhaustive { ", exhaustive" } else { "" }
                    );
                }
                Some(t) => {
                    let _ = writeln!(out, "coverage: fails at {}", t.last().unwrap());
                }
            }
        }
        if let Some(m) = &self.model {
            let _ = writeln!(out, "model of size {}:", m.size());
            out.push_str(&m.render());
            if !out.ends_with('\n') {
                out.push('\n');
            }
        }
        for s in &self.statistics.sizes {
            let outcome = match s.outcome {
                SizeOutcome::Model => "model",
                SizeOutcome::NoModel => "no model",
                SizeOutcome::Timeout => "timeout",
            };
            let _ = writeln!(
                out,
                "size {}: {outcome} ({} variables, {} clauses, {} ms)",
                s.size, s.variables, s.clauses, s.elapsed_ms
            );
        }
        if self.verdict.is_some() {
            let _ = writeln!(
                out,
                "sentences: {}, elapsed: {} ms",
                self.statistics.sentences, self.statistics.elapsed_ms
            );
        }
        out
    }
}

fn strings(terms: &[Term]) -> Vec<String> {
    terms.iter().map(|t| t.to_string()).collect()
}

/// Theory and goal, one sentence per line, with a comment line before each
/// run of sentences of the same origin.
pub fn render_translation(translation: &TranslationResult) -> String {
    let mut out = String::new();
    let mut last = None;
    for (s, tag) in translation.theory.iter() {
        if last != Some(tag) {
            let _ = writeln!(out, "# {tag}");
            last = Some(tag);
        }
        let _ = writeln!(out, "{s}");
    }
    let _ = writeln!(out, "# goal");
    let _ = writeln!(out, "{}", translation.goal);
    out
}

fn instances(patterns: &[Term], pool: &[Term], limit: usize) -> (Vec<Term>, bool) {
    let mut out = Vec::new();
    for p in patterns {
        let vars: Vec<Name> = p.vars().into_iter().collect();
        let mut choice = vec![0usize; vars.len()];
        loop {
            if out.len() >= limit {
                return (out, false);
            }
            let mut subst = Substitution::new();
            for (v, &i) in vars.iter().zip(&choice) {
                subst.insert(v.clone(), pool[i].clone());
            }
            out.push(subst.apply(p));
            // odometer over the pool
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < pool.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    (out, true)
}

/// Initial terms of depth at most `depth` (for a basis: instances with
/// arguments of depth at most `min(depth, 2)`), at most
/// [`ORACLE_START_LIMIT`] of them. The flag is false when the list was cut.
pub fn initial_terms(problem: &VerificationProblem, depth: usize) -> (Vec<Term>, bool) {
    match &problem.initial {
        TermSet::Automaton(a) => {
            let all = a.enumerate_language(depth);
            let complete = all.len() <= ORACLE_START_LIMIT;
            (all.into_iter().take(ORACLE_START_LIMIT).collect(), complete)
        }
        TermSet::Basis(b) => {
            let pool: Vec<Term> = enumerate_ground_terms(problem.vocabulary(), depth.min(2)).into_iter().collect();
            if pool.is_empty() {
                return (b.iter().filter(|t| t.is_ground()).cloned().collect(), true);
            }
            instances(b, &pool, ORACLE_START_LIMIT)
        }
    }
}

fn in_set(set: &TermSet, t: &Term) -> bool {
    match set {
        TermSet::Automaton(a) => a.accepts(t).unwrap_or(false),
        TermSet::Basis(b) => b.iter().any(|p| match_term(p, t).is_some()),
    }
}

pub fn is_initial(problem: &VerificationProblem, t: &Term) -> bool {
    t.is_ground() && in_set(&problem.initial, t)
}

pub fn is_unsafe(problem: &VerificationProblem, t: &Term) -> bool {
    t.is_ground() && in_set(&problem.unsafe_terms, t)
}

/// Whether `trace` starts at an initial term, ends at an unsafe one and
/// each step is a rewrite step under the problem's strategy.
pub fn replay(problem: &VerificationProblem, trace: &[Term]) -> bool {
    let (Some(first), Some(last)) = (trace.first(), trace.last()) else {
        return false;
    };
    is_initial(problem, first)
        && is_unsafe(problem, last)
        && trace
            .windows(2)
            .all(|w| is_rewrite_step(&w[0], &w[1], &problem.trs, problem.strategy))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Shortest rewrite sequence found from an initial to an unsafe term.
    pub trace: Option<Vec<Term>>,
    pub explored: usize,
    /// True when no bound (start terms, steps, term size) cut the search.
    pub complete: bool,
}

/// Breadth-first search for an unsafe term within `depth` rewrite steps.
pub fn oracle_search(problem: &VerificationProblem, depth: usize) -> Result<OracleResult, RunError> {
    let (starts, all_starts) = initial_terms(problem, depth);
    let reach = bounded_reachable_from(starts, &problem.trs, depth, ORACLE_SIZE_CAP, problem.strategy)?;
    let trace = reach
        .terms()
        .filter(|t| is_unsafe(problem, t))
        .filter_map(|t| reach.trace_to(t))
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(OracleResult {
        trace,
        explored: reach.len(),
        complete: all_starts && reach.is_complete() && matches!(problem.initial, TermSet::Automaton(_)),
    })
}

/// Runs `command` on `problem`.
pub fn run(command: Command, problem: &VerificationProblem, config: &RunConfig) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut report = RunReport::new(command.name());
    match command {
        Command::Translate => {
            let translation = problem.translate()?;
            report.statistics.sentences = translation.theory().len();
            report.theory_dump = Some(render_translation(&translation));
        }
        Command::Oracle => {
            let found = oracle_search(problem, config.oracle_depth)?;
            report.statistics.oracle_terms = found.explored;
            refute_or(&mut report, found, |r, complete| {
                r.verdict = Some(Verdict::Unknown);
                r.reason = Some(if complete {
                    "no unsafe term is reachable".into()
                } else {
                    format!("no unsafe term within {} steps", config.oracle_depth)
                });
            });
        }
        Command::Verify => {
            if config.oracle_depth > 0 {
                let found = oracle_search(problem, config.oracle_depth)?;
                report.statistics.oracle_terms = found.explored;
                if found.trace.is_some() {
                    refute_or(&mut report, found, |_, _| {});
                    report.statistics.elapsed_ms = start.elapsed().as_millis();
                    return Ok(report);
                }
            }
            let mut io_error = None;
            let verification = verify_with(problem, &config.search, |g| {
                if let (Some(dir), None) = (&config.dump_clauses, &io_error) {
                    let path = dir.join(format!("size-{}.cnf", g.size));
                    if let Err(e) = std::fs::write(path, g.cnf.to_dimacs()) {
                        io_error = Some(e);
                    }
                }
            })?;
            if let Some(e) = io_error {
                return Err(e.into());
            }
            report.statistics.sentences = verification.translation.theory().len();
            report.statistics.sizes = verification.sizes;
            match verification.verdict {
                SafetyVerdict::Verified(m) => {
                    report.verdict = Some(Verdict::Verified);
                    report.model = Some(m);
                }
                SafetyVerdict::Unknown(reason) => {
                    report.verdict = Some(Verdict::Unknown);
                    report.reason = Some(reason.to_string());
                }
            }
        }
        Command::Check(model) => {
            let translation = problem.translate()?;
            report.statistics.sentences = translation.theory().len();
            match first_violation(&model, translation.theory(), &translation.goal) {
                None => {
                    report.verdict = Some(Verdict::Verified);
                    report.model = Some(model);
                }
                Some(v) => {
                    report.verdict = Some(Verdict::Unknown);
                    report.reason = Some(v.to_string());
                }
            }
        }
        Command::Witness(a_star) => {
            let (TermSet::Automaton(a_i), TermSet::Automaton(a_u)) = (&problem.initial, &problem.unsafe_terms) else {
                return Err(RunError::Invalid(
                    "the witness construction needs automata for the initial and unsafe sets".into(),
                ));
            };
            let a_star = a_star
                .with_vocabulary(problem.vocabulary().clone())
                .map_err(|e| RunError::Invalid(e.to_string()))?;
            let depth = config.oracle_depth.max(1);
            let certificate = match check_hypotheses(a_i, a_u, &a_star, &problem.trs, depth) {
                Ok(c) => c,
                Err(e) => return Err(RunError::Invalid(e.to_string())),
            };
            report.certificate = Some(certificate);
            match product_countermodel(a_i, a_u, &a_star, &problem.trs, &problem.options) {
                Ok(pm) => {
                    report.statistics.sentences = pm.translation.theory().len();
                    report.verdict = Some(Verdict::Verified);
                    if pm.restricted {
                        report.reason = Some("model restricted to elements denoted by ground terms".into());
                    }
                    report.model = Some(pm.model);
                }
                Err(e @ (WitnessError::GateFailure { .. } | WitnessError::TooLarge(_))) => {
                    report.verdict = Some(Verdict::Unknown);
                    report.reason = Some(e.to_string());
                }
                Err(e) => return Err(RunError::Invalid(e.to_string())),
            }
        }
    }
    report.statistics.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn refute_or(report: &mut RunReport, found: OracleResult, otherwise: impl FnOnce(&mut RunReport, bool)) {
    match found.trace {
        Some(trace) => {
            report.verdict = Some(Verdict::Refuted);
            report.reason = Some(format!("unsafe term reached in {} steps", trace.len() - 1));
            report.oracle_witness = Some(trace);
        }
        None => otherwise(report, found.complete),
    }
}
