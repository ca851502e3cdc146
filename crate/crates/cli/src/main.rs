//! `fcm`: safety verification of term rewriting systems by finite
//! countermodels.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use fcm_core::finder::SearchConfig;
use fcm_core::model::parse_model;
use fcm_core::problem::{parse_automaton_text, parse_problem};
use fcm_core::run::{run, Command, RunConfig, INPUT_ERROR};
use fcm_core::syntax::parse_formula;
use fcm_core::terms::Strategy;
use fcm_core::translate::{CongruenceOmission, VerificationProblem};

#[derive(Parser)]
#[command(name = "fcm", version, about = "Prove safety of term rewriting systems with finite countermodels")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a countermodel, after a bounded search for a counterexample
    Verify(Common),
    /// Print the theory and goal
    Translate(Common),
    /// Only search for a rewrite sequence reaching an unsafe term
    Oracle(Common),
    /// Build a countermodel from an automaton overapproximating the reachable terms
    Witness {
        #[command(flatten)]
        common: Common,
        /// Automaton file (States, Final and Transitions lines)
        automaton: PathBuf,
    },
    /// Check a model file against a problem
    Check {
        #[command(flatten)]
        common: Common,
        /// Model in the text format printed by `verify`
        model: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Problem file
    problem: PathBuf,
    /// Largest domain size to try
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Time budget for the model search
    #[arg(long, env = "FCM_TIMEOUT_SECS", default_value_t = 60)]
    timeout_secs: u64,
    /// Rewriting strategy (any|outermost); overrides the problem file
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Leave out the reflexivity axiom
    #[arg(long)]
    no_reflexivity: bool,
    /// Leave out congruence axioms for a symbol or one of its positions (sym or sym:pos)
    #[arg(long, value_name = "SYM[:POS]")]
    omit_congruence: Vec<CongruenceOmission>,
    /// Rewrite steps for the counterexample search; 0 disables it in `verify`
    #[arg(long, default_value_t = 4)]
    oracle_depth: usize,
    /// Write the clause set of every domain size tried into this directory
    #[arg(long, value_name = "DIR")]
    dump_clauses: Option<PathBuf>,
    /// Use this sentence as the goal instead of the generated one
    #[arg(long, value_name = "FORMULA")]
    raw_goal: Option<String>,
    /// Search domain sizes in parallel
    #[arg(long)]
    parallel: bool,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
    /// Also write the model, if any, to this file
    #[arg(long, value_name = "FILE")]
    model_out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

impl Common {
    fn problem(&self) -> Result<VerificationProblem, String> {
        let text = read(&self.problem)?;
        let mut p = parse_problem(&text).map_err(|e| format!("{}:{e}", self.problem.display()))?;
        if let Some(s) = self.strategy {
            p.strategy = s;
        }
        if self.no_reflexivity {
            p.options.include_reflexivity = false;
        }
        for o in &self.omit_congruence {
            match p.vocabulary().arity(&o.symbol) {
                Some(a) if a > 0 && o.position.map_or(true, |q| q <= a) => {
                    p.options.omitted_congruence.insert(o.clone());
                }
                _ => return Err(format!("--omit-congruence {o}: no such argument position")),
            }
        }
        if let Some(goal) = &self.raw_goal {
            p.raw_goal = Some(parse_formula(goal).map_err(|e| format!("--raw-goal: {e}"))?);
        }
        Ok(p)
    }

    fn config(&self) -> RunConfig {
        RunConfig {
            search: SearchConfig {
                max_domain_size: self.max_size,
                time_budget: Duration::from_secs(self.timeout_secs),
                deterministic_order: !self.parallel,
                ..SearchConfig::default()
            },
            oracle_depth: self.oracle_depth,
            dump_clauses: self.dump_clauses.clone(),
        }
    }
}

fn execute(cli: Cli) -> Result<i32, String> {
    let (common, make): (&Common, Box<dyn Fn(&VerificationProblem) -> Result<Command, String>>) = match &cli.command {
        Cmd::Verify(c) => (c, Box::new(|_| Ok(Command::Verify))),
        Cmd::Translate(c) => (c, Box::new(|_| Ok(Command::Translate))),
        Cmd::Oracle(c) => (c, Box::new(|_| Ok(Command::Oracle))),
        Cmd::Witness { common, automaton } => (
            common,
            Box::new(move |p| {
                let text = read(automaton)?;
                let a = parse_automaton_text(&text, p.vocabulary())
                    .map_err(|e| format!("{}:{e}", automaton.display()))?;
                Ok(Command::Witness(a))
            }),
        ),
        Cmd::Check { common, model } => (
            common,
            Box::new(move |_| {
                let text = read(model)?;
                let m = parse_model(&text).map_err(|e| format!("{}: {e}", model.display()))?;
                Ok(Command::Check(m))
            }),
        ),
    };
    if common.max_size == 0 || common.timeout_secs == 0 {
        return Err("--max-size and --timeout-secs must be positive".into());
    }
    if let Some(dir) = &common.dump_clauses {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let problem = common.problem()?;
    let command = make(&problem)?;
    let report = run(command, &problem, &common.config()).map_err(|e| e.to_string())?;
    if common.json {
        println!("{}", report.to_json_string());
    } else {
        print!("{}", report.render());
    }
    if let (Some(path), Some(m)) = (&common.model_out, &report.model) {
        std::fs::write(path, m.render()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR as u8 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR as u8)
        }
    }
}
