//! `kripke-min`: minimize, compare, unfold and model-check Kripke structures.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
//! usage and input errors. Verdicts are printed as a single `RESULT:` line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use kripke_min::bisim::{are_equivalent, bisimilar_states};
use kripke_min::ctl::{check_initial, parse_formula};
use kripke_min::grammar::{fold, parse_grammar, unfold, GraphGrammar};
use kripke_min::kripke::{export_dot, parse_kripke_with, serialize_kripke, ParseOptions};
use kripke_min::minimize::minimize_detailed;
use kripke_min::unwind::unwind_tree;
use kripke_min::KripkeStructure;

#[derive(Parser, Debug)]
#[command(name = "kripke-min", version, about = "Bisimulation minimization of Kripke structures")]
struct Cli {
    /// Give states without successors a self-loop instead of rejecting the input.
    #[arg(long, global = true)]
    complete_selfloops: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a structure.
    Validate { file: PathBuf },
    /// Compute the smallest connected, reduced equivalent structure.
    Minimize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also report which input states each quotient state stands for.
        #[arg(long)]
        map: bool,
        /// Report sizes, refinement rounds and wall time on stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Decide whether two structures are bisimulation equivalent.
    Bisim { left: PathBuf, right: PathBuf },
    /// Decide whether two states of one structure are bisimilar.
    Bisimilar { file: PathBuf, s: String, t: String },
    /// Fold a graph grammar into a finite structure.
    Fold {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Unfold a graph grammar a fixed number of times.
    Unfold {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the canonical unwinding tree of a state.
    Unwind {
        file: PathBuf,
        #[arg(long)]
        state: String,
        /// Defaults to the number of states.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Check a CTL formula on every initial state.
    Check {
        file: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Export a structure as Graphviz DOT.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// An input or I/O error, reported on stderr with exit code 2.
struct Failure(String);

type Outcome = Result<bool, Failure>;

fn fail(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(path, e))
}

fn write_output(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| fail(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parsed structure plus comment lines describing any completed self-loops.
fn load(path: &Path, complete: bool) -> Result<(KripkeStructure, String), Failure> {
    let options = ParseOptions { complete_selfloops: complete };
    let parsed = parse_kripke_with(&read(path)?, options).map_err(|e| fail(path, e))?;
    let mut notes = String::new();
    for s in &parsed.completed {
        eprintln!("{}: added self-loop {s} -> {s}", path.display());
        notes.push_str(&format!("# added self-loop {s} -> {s}\n"));
    }
    Ok((parsed.structure, notes))
}

fn load_grammar(path: &Path) -> Result<GraphGrammar, Failure> {
    parse_grammar(&read(path)?).map_err(|e| fail(path, e))
}

fn verdict(value: bool) -> Outcome {
    println!("RESULT: {value}");
    Ok(value)
}

fn run(cli: Cli) -> Outcome {
    let complete = cli.complete_selfloops;
    match cli.command {
        Command::Validate { file } => {
            let (k, notes) = load(&file, complete)?;
            print!("{notes}");
            println!(
                "RESULT: valid states={} transitions={} initial={}",
                k.num_states(),
                k.num_transitions(),
                k.initial().len()
            );
            Ok(true)
        }
        Command::Minimize { file, output, map, stats } => {
            let (k, notes) = load(&file, complete)?;
            let start = Instant::now();
            let m = minimize_detailed(&k);
            let elapsed = start.elapsed();
            let mut text = notes;
            text.push_str(&serialize_kripke(&m.quotient));
            if map {
                let report = m.block_map_report();
                match &output {
                    Some(out) => {
                        let mut sidecar = out.clone().into_os_string();
                        sidecar.push(".map");
                        let sidecar = PathBuf::from(sidecar);
                        fs::write(&sidecar, &report).map_err(|e| fail(&sidecar, e))?;
                    }
                    None => {
                        for line in report.lines() {
                            text.push_str(&format!("# {line}\n"));
                        }
                    }
                }
            }
            write_output(output.as_deref(), &text)?;
            if stats {
                eprintln!("states before: {}", k.num_states());
                eprintln!("states reachable: {}", m.reachable.num_states());
                eprintln!("states after: {}", m.quotient.num_states());
                eprintln!("refinement rounds: {}", m.rounds);
                eprintln!("wall time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
            }
            Ok(true)
        }
        Command::Bisim { left, right } => {
            let (a, _) = load(&left, complete)?;
            let (b, _) = load(&right, complete)?;
            let eq = are_equivalent(&a, &b)
                .map_err(|e| Failure(format!("{} vs {}: {e}", left.display(), right.display())))?;
            verdict(eq)
        }
        Command::Bisimilar { file, s, t } => {
            let (k, _) = load(&file, complete)?;
            verdict(bisimilar_states(&k, &s, &t).map_err(|e| fail(&file, e))?)
        }
        Command::Fold { file, output } => {
            let k = fold(&load_grammar(&file)?).map_err(|e| fail(&file, e))?;
            write_output(output.as_deref(), &serialize_kripke(&k))?;
            Ok(true)
        }
        Command::Unfold { file, depth, output } => {
            let k = unfold(&load_grammar(&file)?, depth).map_err(|e| fail(&file, e))?;
            write_output(output.as_deref(), &serialize_kripke(&k))?;
            Ok(true)
        }
        Command::Unwind { file, state, depth } => {
            let (k, _) = load(&file, complete)?;
            let depth = depth.unwrap_or(k.num_states());
            let tree = unwind_tree(&k, &state, depth).map_err(|e| fail(&file, e))?;
            print!("{}", tree.render());
            Ok(true)
        }
        Command::Check { file, formula } => {
            let (k, _) = load(&file, complete)?;
            let f = parse_formula(&formula)
                .map_err(|e| Failure(format!("formula `{formula}`: {e}")))?;
            let results = check_initial(&k, &f).map_err(|e| fail(&file, e))?;
            for (s, holds) in &results {
                println!("{s}: {holds}");
            }
            verdict(results.iter().all(|(_, holds)| *holds))
        }
        Command::Dot { file, output } => {
            let (k, _) = load(&file, complete)?;
            write_output(output.as_deref(), &export_dot(&k))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
