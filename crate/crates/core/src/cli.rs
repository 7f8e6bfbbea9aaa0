//! Command-line front end. Every command prints one JSON manifest on
//! stdout; exit codes are 0 for No/Equivalent/unsat, 1 for
//! Yes/Counterexample/sat, 2 for an exhausted budget and 3 for errors.

use crate::alphabet::{Alphabet, Word};
use crate::automata::{Dfa, WeightedAutomaton};
use crate::compiler::{
    attach_output_gadget, compile_two_stack, simulate, tm_to_two_stack, CompiledRnn, Machine,
};
use crate::decision::{
    bounded_consensus_search, bounded_cutpoint_intersection, decide_tchebychev_gt, eq_finite,
    finite_support_distance, sat_via_distance_report, DistanceOutcome, EqOutcome, SearchOptions,
};
use crate::error::{Error, Result};
use crate::language::{Weight, WeightedLanguage};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reduction::{
    build_reduction_pfa, build_toy_rnn, parse_dimacs, reduction_threshold, ReductionParams,
};
use crate::rnn::RnnLm;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(
    name = "rnnfsm",
    version,
    about = "Weighted automata, RNN language models and the decision procedures between them"
)]
pub struct Cli {
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight of a word under a weighted automaton.
    EvalWfa {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Weight of a word under an RNN language model.
    EvalRnn {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Compile a Turing or two-stack machine into a ReLU RNN.
    Compile {
        #[arg(long)]
        machine: PathBuf,
        /// Initial tape (Turing machine) or stack-1 contents, top first.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        out: PathBuf,
        /// Attach the halting output layer, giving a weighted language over {a}.
        #[arg(long)]
        gadget: bool,
    },
    /// Run a compiled network and report each machine-step boundary.
    Simulate {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 50)]
        boundaries: usize,
    },
    /// Build the reduction PFA and toy RNN for a DIMACS formula.
    ReduceSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        #[arg(long)]
        slack: Option<String>,
        #[arg(long)]
        out_pfa: PathBuf,
        #[arg(long)]
        out_rnn: PathBuf,
        /// Also print the decision threshold c as a bare line on stderr.
        #[arg(long)]
        print_threshold: bool,
    },
    /// Decide whether some word has |f(w) - g(w)| > c.
    DistanceDecide {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Maximum of |f(w) - g(w)| over words of length at most N.
    DistanceFinite {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long = "N", alias = "n")]
        n: usize,
    },
    /// Compare f and g on every word of length at most m.
    EqFinite {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// First word of length at most max-len with f(w) > c.
    Consensus {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        max_len: usize,
    },
    /// First word accepted by a DFA with f(w) >= c.
    Cutpoint {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Satisfiability of a DIMACS formula through the distance reduction.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
    },
    /// Run the built-in check suite.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

/// Either kind of model stored on disk.
#[derive(Clone, Debug)]
pub enum Model {
    Wfa(WeightedAutomaton),
    Rnn(RnnLm),
}

#[derive(Clone, Debug)]
pub enum ModelPrefix {
    Wfa(<WeightedAutomaton as WeightedLanguage>::Prefix),
    Rnn(<RnnLm as WeightedLanguage>::Prefix),
}

impl Model {
    /// Reads a WFA/PFA document or an RNN document (compiled networks
    /// included), telling them apart by the `N` field.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        if v.get("N").is_some() {
            Ok(Model::Rnn(RnnLm::from_json(text)?))
        } else {
            Ok(Model::Wfa(WeightedAutomaton::from_json(text)?))
        }
    }
}

impl WeightedLanguage for Model {
    type Prefix = ModelPrefix;

    fn alphabet(&self) -> &Alphabet {
        match self {
            Model::Wfa(a) => a.alphabet(),
            Model::Rnn(r) => r.alphabet(),
        }
    }

    fn declared_consistent(&self) -> bool {
        match self {
            Model::Wfa(a) => a.declared_consistent(),
            Model::Rnn(r) => r.declared_consistent(),
        }
    }

    fn precision_bits(&self) -> u32 {
        match self {
            Model::Wfa(a) => a.precision_bits(),
            Model::Rnn(r) => r.precision_bits(),
        }
    }

    fn start(&self, bits: u32) -> Result<ModelPrefix> {
        Ok(match self {
            Model::Wfa(a) => ModelPrefix::Wfa(a.start(bits)?),
            Model::Rnn(r) => ModelPrefix::Rnn(r.start(bits)?),
        })
    }

    fn extend(&self, prefix: &ModelPrefix, symbol: usize, bits: u32) -> Result<ModelPrefix> {
        Ok(match (self, prefix) {
            (Model::Wfa(a), ModelPrefix::Wfa(p)) => ModelPrefix::Wfa(a.extend(p, symbol, bits)?),
            (Model::Rnn(r), ModelPrefix::Rnn(p)) => ModelPrefix::Rnn(r.extend(p, symbol, bits)?),
            _ => unreachable!("prefix belongs to another model"),
        })
    }

    fn finish(&self, prefix: &ModelPrefix) -> Result<Weight> {
        match (self, prefix) {
            (Model::Wfa(a), ModelPrefix::Wfa(p)) => a.finish(p),
            (Model::Rnn(r), ModelPrefix::Rnn(p)) => r.finish(p),
            _ => unreachable!("prefix belongs to another model"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// What every command prints.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Value,
    pub inputs: Vec<InputDigest>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub masses: Option<Value>,
    pub result: Value,
    pub wall_time_ms: u128,
}

pub const EXIT_NO: i32 = 0;
pub const EXIT_YES: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

struct Ctx {
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    fn model(&mut self, path: &Path) -> Result<Model> {
        let text = self.read(path)?;
        Model::from_json(&text)
    }
}

struct Outcome {
    code: i32,
    verdict: String,
    witness: Option<String>,
    masses: Option<Value>,
    result: Value,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Outcome {
            code: EXIT_NO,
            verdict: "ok".into(),
            witness: None,
            masses: None,
            result,
        }
    }
}

fn rational_arg(text: &str) -> Result<Rational> {
    parse_rational(text)
}

fn bits_arg(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidArgument(format!(
                "stack input must be binary, found `{c}`"
            ))),
        })
        .collect()
}

fn render(lang: &impl WeightedLanguage, w: &Word) -> String {
    lang.alphabet().render(w)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn arguments(command: &Command) -> (String, Value) {
    let dbg = format!("{command:?}");
    let name = dbg.split([' ', '{']).next().unwrap_or_default();
    let kebab: String = name
        .chars()
        .enumerate()
        .flat_map(|(i, c)| {
            if c.is_uppercase() && i > 0 {
                vec!['-', c.to_ascii_lowercase()]
            } else {
                vec![c.to_ascii_lowercase()]
            }
        })
        .collect();
    let args = match command {
        Command::EvalWfa { machine, word } | Command::EvalRnn { machine, word } => {
            json!({"machine": machine, "word": word})
        }
        Command::Compile {
            machine,
            input,
            out,
            gadget,
        } => {
            json!({"machine": machine, "input": input, "out": out, "gadget": gadget})
        }
        Command::Simulate {
            machine,
            boundaries,
        } => json!({"machine": machine, "boundaries": boundaries}),
        Command::ReduceSat {
            cnf,
            epsilon,
            slack,
            out_pfa,
            out_rnn,
            print_threshold,
        } => json!({
            "cnf": cnf, "epsilon": epsilon, "slack": slack, "out_pfa": out_pfa, "out_rnn": out_rnn,
            "print_threshold": print_threshold,
        }),
        Command::DistanceDecide { f, g, c, budget } => {
            json!({"f": f, "g": g, "c": c, "budget": budget})
        }
        Command::DistanceFinite { f, g, n } => json!({"f": f, "g": g, "N": n}),
        Command::EqFinite { f, g, m } => json!({"f": f, "g": g, "m": m}),
        Command::Consensus { f, c, max_len } => json!({"f": f, "c": c, "max_len": max_len}),
        Command::Cutpoint { f, c, dfa, max_len } => {
            json!({"f": f, "c": c, "dfa": dfa, "max_len": max_len})
        }
        Command::Sat { cnf, epsilon } => json!({"cnf": cnf, "epsilon": epsilon}),
        Command::Verify { suite, only } => json!({"suite": suite, "only": only}),
    };
    (kebab, args)
}

fn execute(cmd: &Command, opts: &SearchOptions, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        Command::EvalWfa { machine, word } => {
            let text = ctx.read(machine)?;
            let a = WeightedAutomaton::from_json(&text)?;
            let w = a.alphabet().parse_word(word)?;
            let x = a.weight(&w)?;
            Ok(Outcome::plain(
                json!({"word": word, "weight": x.to_string()}),
            ))
        }
        Command::EvalRnn { machine, word } => {
            let text = ctx.read(machine)?;
            let r = RnnLm::from_json(&text)?;
            let w = r.alphabet().parse_word(word)?;
            let x = r.weight(&w)?;
            Ok(Outcome::plain(
                json!({"word": word, "weight": x.to_string(), "exact": x.is_exact()}),
            ))
        }
        Command::Compile {
            machine,
            input,
            out,
            gadget,
        } => {
            let text = ctx.read(machine)?;
            let (two, stack, extra) = match Machine::from_json(&text)? {
                Machine::TwoStack(m) => (m, bits_arg(input)?, json!({})),
                Machine::Tm(tm) => {
                    let ids = tm.parse_input(input)?;
                    let conv = tm_to_two_stack(&tm, &ids)?;
                    let extra = json!({"block_width": conv.block_width, "two_stack_states": conv.machine.num_states()});
                    (conv.machine, conv.initial_stack, extra)
                }
            };
            let mut compiled = compile_two_stack(&two, &stack)?;
            if *gadget {
                compiled = attach_output_gadget(&compiled)?;
            }
            write_file(out, &compiled.to_json())?;
            Ok(Outcome::plain(json!({
                "out": out,
                "hidden_dim": compiled.hidden_dim(),
                "halting_neuron": compiled.halting_neuron,
                "stack_neurons": [compiled.stack_neurons.0, compiled.stack_neurons.1],
                "step_dilation": compiled.step_dilation,
                "aux_neuron": compiled.aux_neuron,
                "conversion": extra,
            })))
        }
        Command::Simulate {
            machine,
            boundaries,
        } => {
            let text = ctx.read(machine)?;
            let c = CompiledRnn::from_json(&text)?;
            let trace = simulate(&c, *boundaries)?;
            let halted_at = trace
                .iter()
                .find(|t| t.halting != Rational::from_integer(0.into()))
                .map(|t| t.boundary);
            let rows: Vec<Value> = trace
                .iter()
                .map(|t| {
                    json!({
                        "boundary": t.boundary,
                        "halting": format_rational(&t.halting),
                        "stacks": [format_rational(&t.stacks.0), format_rational(&t.stacks.1)],
                        "state": t.state.map(|s| c.state_names[s].clone()),
                    })
                })
                .collect();
            let verdict = if halted_at.is_some() {
                "halted"
            } else {
                "running"
            };
            Ok(Outcome {
                code: if halted_at.is_some() {
                    EXIT_YES
                } else {
                    EXIT_NO
                },
                verdict: verdict.into(),
                witness: None,
                masses: None,
                result: json!({"halted_at": halted_at, "step_dilation": c.step_dilation, "trace": rows}),
            })
        }
        Command::ReduceSat {
            cnf,
            epsilon,
            slack,
            out_pfa,
            out_rnn,
            print_threshold,
        } => {
            let f = parse_dimacs(&ctx.read(cnf)?)?;
            let mut p = ReductionParams::new(rational_arg(epsilon)?)?;
            if let Some(s) = slack {
                p = p.with_slack(rational_arg(s)?);
            }
            let pfa = build_reduction_pfa(&f, &p);
            let rnn = build_toy_rnn(&p);
            write_file(out_pfa, &pfa.to_json())?;
            write_file(out_rnn, &rnn.to_json())?;
            let threshold = format_rational(&reduction_threshold(&f, &p)?);
            if *print_threshold {
                eprintln!("{threshold}");
            }
            Ok(Outcome::plain(json!({
                "variables": f.num_vars(),
                "clauses": f.num_clauses(),
                "pfa_states": pfa.num_states(),
                "threshold": threshold,
                "support_bound": f.num_vars() + 1,
            })))
        }
        Command::DistanceDecide { f, g, c, budget } => {
            let (mf, mg) = (ctx.model(f)?, ctx.model(g)?);
            let c = rational_arg(c)?;
            let opts = SearchOptions {
                budget: *budget,
                ..*opts
            };
            let v = decide_tchebychev_gt(&mf, &mg, &c, &opts)?;
            let (code, verdict, witness) = match &v.outcome {
                DistanceOutcome::Yes(w) => (EXIT_YES, "yes", Some(render(&mf, w))),
                DistanceOutcome::No => (EXIT_NO, "no", None),
                DistanceOutcome::BudgetExhausted => (EXIT_BUDGET, "budget_exhausted", None),
            };
            let mut result =
                json!({"words_examined": v.words_examined, "last_length": v.last_length});
            if let DistanceOutcome::Yes(w) = &v.outcome {
                result["distance"] = json!(mf.weight(w)?.sub(&mg.weight(w)?).abs().to_string());
            }
            Ok(Outcome {
                code,
                verdict: verdict.into(),
                witness,
                masses: Some(json!({"f": v.mass_f.to_string(), "g": v.mass_g.to_string()})),
                result,
            })
        }
        Command::DistanceFinite { f, g, n } => {
            let (mf, mg) = (ctx.model(f)?, ctx.model(g)?);
            let rep = finite_support_distance(&mf, &mg, *n, opts)?;
            Ok(Outcome {
                code: EXIT_NO,
                verdict: "ok".into(),
                witness: Some(render(&mf, &rep.argmax)),
                masses: None,
                result: json!({"distance": rep.distance.to_string(), "support_bound": rep.support_bound}),
            })
        }
        Command::EqFinite { f, g, m } => {
            let (mf, mg) = (ctx.model(f)?, ctx.model(g)?);
            Ok(match eq_finite(&mf, &mg, *m, opts)? {
                EqOutcome::Equivalent => Outcome {
                    code: EXIT_NO,
                    verdict: "equivalent".into(),
                    witness: None,
                    masses: None,
                    result: json!({"m": m}),
                },
                EqOutcome::Counterexample { word, f, g } => Outcome {
                    code: EXIT_YES,
                    verdict: "counterexample".into(),
                    witness: Some(render(&mf, &word)),
                    masses: None,
                    result: json!({"m": m, "f": f.to_string(), "g": g.to_string()}),
                },
            })
        }
        Command::Consensus { f, c, max_len } => {
            let mf = ctx.model(f)?;
            let hit = bounded_consensus_search(&mf, &rational_arg(c)?, *max_len, opts)?;
            found(&mf, hit)
        }
        Command::Cutpoint { f, c, dfa, max_len } => {
            let mf = ctx.model(f)?;
            let d = Dfa::from_json(&ctx.read(dfa)?)?;
            let hit = bounded_cutpoint_intersection(&mf, &rational_arg(c)?, &d, *max_len, opts)?;
            found(&mf, hit)
        }
        Command::Sat { cnf, epsilon } => {
            let f = parse_dimacs(&ctx.read(cnf)?)?;
            let p = ReductionParams::new(rational_arg(epsilon)?)?;
            let rep = sat_via_distance_report(&f, &p, opts)?;
            Ok(Outcome {
                code: if rep.satisfiable { EXIT_YES } else { EXIT_NO },
                verdict: if rep.satisfiable { "sat" } else { "unsat" }.into(),
                witness: Some(Alphabet::binary().render(&rep.argmax)),
                masses: None,
                result: json!({
                    "distance": format_rational(&rep.distance),
                    "threshold": format_rational(&rep.threshold),
                    "support_bound": rep.support_bound,
                }),
            })
        }
        Command::Verify { suite, only } => {
            if suite != "paper" {
                return Err(Error::InvalidArgument(format!("unknown suite `{suite}`")));
            }
            let ids: Vec<u8> = if only.is_empty() {
                crate::verify::criterion_ids().collect()
            } else {
                only.clone()
            };
            let mut results = Vec::new();
            for id in ids {
                let r = crate::verify::run_criterion(id, opts)?;
                eprintln!("{r}");
                results.push(r);
            }
            let all = results.iter().all(|r| r.passed);
            Ok(Outcome {
                code: if all { EXIT_NO } else { EXIT_YES },
                verdict: if all { "pass" } else { "fail" }.into(),
                witness: None,
                masses: None,
                result: serde_json::to_value(&results)?,
            })
        }
    }
}

fn found(f: &Model, hit: Option<Word>) -> Result<Outcome> {
    Ok(match hit {
        Some(w) => Outcome {
            code: EXIT_YES,
            verdict: "found".into(),
            witness: Some(render(f, &w)),
            masses: None,
            result: json!({"weight": f.weight(&w)?.to_string()}),
        },
        None => Outcome {
            code: EXIT_NO,
            verdict: "none".into(),
            witness: None,
            masses: None,
            result: json!({}),
        },
    })
}

/// Runs a parsed command, returning the exit code and the JSON document
/// for stdout.
pub fn run(cli: &Cli) -> (i32, Value) {
    let (command, arguments) = arguments(&cli.command);
    let opts = SearchOptions {
        budget: None,
        workers: Some(cli.workers.max(1)),
    };
    let mut ctx = Ctx { inputs: Vec::new() };
    let t = Instant::now();
    match execute(&cli.command, &opts, &mut ctx) {
        Ok(o) => {
            let m = RunManifest {
                command,
                arguments,
                inputs: ctx.inputs,
                verdict: o.verdict,
                witness: o.witness,
                masses: o.masses,
                result: o.result,
                wall_time_ms: t.elapsed().as_millis(),
            };
            (o.code, serde_json::to_value(m).expect("serializable"))
        }
        Err(e) => (
            EXIT_ERROR,
            json!({"command": command, "error": {"kind": error_kind(&e), "message": e.to_string()}}),
        ),
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{'])
        .next()
        .unwrap_or("Error")
        .to_string()
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    let (code, doc) = run(&cli);
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    );
    code
}
