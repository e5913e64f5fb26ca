use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;

use qwom::model::DEFAULT_TOLERANCE;
use qwom::sim::{decide, decide_exact, ClassicalSimulator, DecisionCriterion, Simulator};
use qwom::zoo::{self, LanguageId};
use qwom::{all_words, MachineSpec};

use crate::{fmt, load, write_output, Failure, Outcome};

pub const HEADER: &str = "input,length,accept_prob,reject_prob,oracle,verdict,max_wom_cells,branches";

#[derive(Args)]
pub struct SweepArgs {
    file: String,
    /// One input per line; `#` starts a comment and `EPS` stands for the empty input.
    #[arg(long, required_unless_present = "all_upto", conflicts_with = "all_upto")]
    corpus: Option<PathBuf>,
    /// Every input up to this length over `--alphabet`.
    #[arg(long, requires = "alphabet")]
    all_upto: Option<usize>,
    /// Comma-separated input symbols for `--all-upto`.
    #[arg(long, value_delimiter = ',', requires = "all_upto")]
    alphabet: Option<Vec<String>>,
    /// strict:x, nonstrict:x, bounded:e, one-sided-pos:p or one-sided-neg:p
    #[arg(long, value_parser = parse_criterion)]
    criterion: Option<DecisionCriterion>,
    /// Built-in language whose membership fills the oracle column.
    #[arg(long, value_parser = parse_language)]
    oracle: Option<LanguageId>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Largest isometry deviation and probability leak tolerated per run.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

fn parse_criterion(s: &str) -> Result<DecisionCriterion, String> {
    s.parse().map_err(|e: qwom::ParseError| e.to_string())
}

fn parse_language(s: &str) -> Result<LanguageId, String> {
    s.parse().map_err(|e: qwom::Error| e.to_string())
}

fn corpus(path: &PathBuf) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| if l == "EPS" { String::new() } else { l.to_string() })
        .collect())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

enum Engine<'a> {
    Quantum(Simulator<'a>),
    Classical(ClassicalSimulator<'a>),
}

struct Sweep<'a> {
    spec: &'a MachineSpec,
    engine: Engine<'a>,
    args: &'a SweepArgs,
}

impl Sweep<'_> {
    fn row(&self, input: &str) -> Result<String, String> {
        let word = self.spec.tokenize(input).map_err(|e| e.to_string())?;
        let oracle = match &self.args.oracle {
            Some(id) => {
                let member = zoo::membership(id, input).map_err(|e| format!("oracle {id}: {e}"))?;
                if member { "member" } else { "nonmember" }
            }
            None => "",
        };
        let (accept, reject, verdict, cells, branches) = match &self.engine {
            Engine::Quantum(sim) => {
                let r = sim.run(&word).map_err(|e| e.to_string())?;
                if r.max_isometry_deviation > self.args.tol || r.conservation_error() > self.args.tol {
                    return Err(format!(
                        "input {input:?}: isometry deviation {:.3e}, |accept + reject - 1| = {:.3e}",
                        r.max_isometry_deviation,
                        r.conservation_error()
                    ));
                }
                let verdict = self.args.criterion.map(|c| decide(r.accept_prob, r.reject_prob, &c).verdict);
                (fmt::prob(r.accept_prob), fmt::prob(r.reject_prob), verdict, r.max_wom_cells_used, r.peak_branch_count)
            }
            Engine::Classical(sim) => {
                let r = sim.run(&word).map_err(|e| e.to_string())?;
                let verdict = self.args.criterion.map(|c| decide_exact(&r.accept, &c));
                (fmt::exact(&r.accept), fmt::exact(&r.reject), verdict, r.max_wom_cells_used, r.peak_support)
            }
        };
        let verdict = verdict.map(|v| v.to_string()).unwrap_or_default();
        Ok(format!(
            "{},{},{accept},{reject},{oracle},{verdict},{cells},{branches}",
            csv_field(input),
            word.len()
        ))
    }
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    let spec = load(&args.file)?;
    let mut inputs: Vec<(usize, String)> = match (&args.corpus, args.all_upto, &args.alphabet) {
        (Some(path), _, _) => corpus(path)?
            .into_iter()
            .map(|s| Ok((spec.tokenize(&s)?.len(), s)))
            .collect::<Result<_, qwom::SimError>>()?,
        (None, Some(n), Some(symbols)) => {
            all_words(symbols.len(), n).into_iter().map(|w| (w.len(), w.iter().map(|&i| symbols[i].as_str()).collect())).collect()
        }
        _ => return Err(Failure("give --corpus or --all-upto with --alphabet".into())),
    };
    inputs.sort();

    let engine = if spec.is_quantum() {
        Engine::Quantum(Simulator::new(&spec)?)
    } else {
        Engine::Classical(ClassicalSimulator::new(&spec)?)
    };
    let sweep = Sweep { spec: &spec, engine, args };
    let rows: Vec<Result<String, String>> = inputs.par_iter().map(|(_, s)| sweep.row(s)).collect();

    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    let mut failure = None;
    for row in rows {
        match row {
            Ok(r) => writeln!(out, "{r}").unwrap(),
            Err(e) => {
                writeln!(out, "# error: {e}").unwrap();
                failure = Some(e);
                break;
            }
        }
    }
    write_output(args.output.as_deref(), &out)?;
    match failure {
        Some(e) => Err(Failure(e)),
        None => Ok(()),
    }
}
