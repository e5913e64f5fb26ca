use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qwom::construct::Transform;
use qwom::sim::{ClassicalSimulator, Simulator};
use qwom::zoo::{self, LanguageId};
use qwom::{check_local_wellformedness, parse_machine, serialize_machine, MachineSpec};

mod fmt;
mod sweep;

/// Simulate and transform realtime quantum automata with write-only memory.
#[derive(Parser)]
#[command(name = "qwom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check structure and local well-formedness; exit 0 iff both pass.
    Validate {
        /// Machine file, or `-` for standard input.
        file: String,
        #[arg(long, default_value_t = qwom::model::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Run one input and print the acceptance and rejection probabilities.
    Run {
        file: String,
        input: String,
        /// Print one line of diagnostics per step.
        #[arg(long)]
        trace: bool,
        /// Largest isometry deviation and probability leak tolerated.
        #[arg(long, default_value_t = qwom::model::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Run many inputs and write one CSV row per input.
    Sweep(sweep::SweepArgs),
    /// Apply a transformation and write the resulting machine.
    Construct {
        /// lift, scale:m, freivalds:eps, d1bca-ioc:m, q1bca-ioc:m, nq1bca-ioc or onerev-ioc
        transform: String,
        input: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a built-in machine.
    Zoo {
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the membership verdict of a built-in language.
    Oracle { id: String, input: String },
}

/// A failure after the arguments were understood; exits with status 1.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
}

fn load(path: &str) -> Result<MachineSpec, Failure> {
    let text = read_source(path)?;
    parse_machine(&text).map_err(|e| Failure(format!("{path}: {e}")))
}

fn write_output(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn validate(file: &str, tol: f64) -> Outcome {
    let spec = load(file)?;
    if spec.is_quantum() {
        let report = check_local_wellformedness(&spec, tol)?;
        if !report.passed() {
            return Err(Failure(format!("not well-formed:\n  {}", report.describe(&spec).join("\n  "))));
        }
        println!("ok: {} states, max Gram deviation {:.3e}", spec.states.len(), report.max_deviation());
    } else {
        println!("ok: {} states", spec.states.len());
    }
    Ok(())
}

fn run(file: &str, input: &str, trace: bool, tol: f64) -> Outcome {
    let spec = load(file)?;
    let word = spec.tokenize(input)?;
    if !spec.is_quantum() {
        let r = ClassicalSimulator::new(&spec)?.run(&word)?;
        if trace {
            for (i, n) in r.trace.iter().enumerate() {
                println!("step {i} support {n}");
            }
        }
        println!("accept_prob {}", fmt::exact(&r.accept));
        println!("reject_prob {}", fmt::exact(&r.reject));
        println!("accept_exact {}", r.accept);
        println!("peak_support {}", r.peak_support);
        println!("max_wom_cells {}", r.max_wom_cells_used);
        return Ok(());
    }
    let sim = Simulator::new(&spec)?;
    let (r, steps) = sim.run_traced(&word)?;
    if trace {
        for (i, d) in steps.iter().enumerate() {
            println!(
                "step {i} {} branches {} configs {} wom_cells {} isometry_deviation {:.3e} pruned {:.3e}",
                spec.symbol_name(d.symbol),
                d.branches,
                d.configs,
                d.wom_cells,
                d.isometry_deviation,
                d.pruned
            );
        }
    }
    println!("accept_prob {}", fmt::prob(r.accept_prob));
    println!("reject_prob {}", fmt::prob(r.reject_prob));
    println!("max_isometry_deviation {:.3e}", r.max_isometry_deviation);
    println!("norm_drift {:.3e}", r.norm_drift);
    println!("peak_branches {}", r.peak_branch_count);
    println!("max_wom_cells {}", r.max_wom_cells_used);
    if r.max_isometry_deviation > tol || r.conservation_error() > tol {
        return Err(Failure(format!(
            "conservation violated: isometry deviation {:.3e}, |accept + reject - 1| = {:.3e}, tolerance {tol:e}",
            r.max_isometry_deviation,
            r.conservation_error()
        )));
    }
    Ok(())
}

fn construct(transform: &str, input: &str, output: &Path) -> Outcome {
    let t: Transform = transform.parse()?;
    let spec = load(input)?;
    let c = t.apply(&spec)?;
    write_output(Some(output), &serialize_machine(&c.spec))?;
    println!("{}: {} states, {} transitions; {}", output.display(), c.spec.states.len(), c.spec.transitions.len(), c.guarantee);
    Ok(())
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Validate { file, tol } => validate(&file, tol),
        Command::Run { file, input, trace, tol } => run(&file, &input, trace, tol),
        Command::Sweep(args) => sweep::sweep(&args),
        Command::Construct { transform, input, output } => construct(&transform, &input, &output),
        Command::Zoo { id, output } => write_output(output.as_deref(), &serialize_machine(&zoo::build_machine(&id)?)),
        Command::Oracle { id, input } => {
            let id: LanguageId = id.parse()?;
            println!("{}", if zoo::membership(&id, &input)? { "member" } else { "nonmember" });
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
