//! `dc`: ground, solve, verify, enumerate, generate and benchmark DC
//! theories.
//!
//! Exit codes: 10 satisfiable or verified, 20 unsatisfiable or refuted,
//! 0 for other successful runs (including a decision limit being hit),
//! 1 for usage errors, 2 for input, parse and grounding errors.

mod bench;
mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dc_core::bench::{
    coloring_source, hamilton_source, nqueens_source, pigeonhole_source, random_digraph,
    random_graph, schur_source, Digraph, Graph,
};
use dc_core::format::{parse_theory, serialize_theory};
use dc_core::ground::{compute_ranges, ground, parse_program};
use dc_core::model::{is_answer_set, CandidateSet, Verdict};
use dc_core::solve::{Solver, SolverConfig, DEFAULT_LOOKAHEAD};
use dc_core::Theory;

use report::{read_model, RunReport};

#[derive(Parser)]
#[command(
    name = "dc",
    version,
    about = "DATALOG with constraints: grounder and answer-set solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolveOpts {
    /// Atoms tested in both polarities at every search node.
    #[arg(long, default_value_t = DEFAULT_LOOKAHEAD as u64, value_parser = clap::value_parser!(u64).range(1..))]
    lookahead: u64,
    /// Stop after this many branching decisions and report UNKNOWN.
    #[arg(long)]
    max_decisions: Option<u64>,
}

impl SolveOpts {
    fn config(&self) -> SolverConfig {
        let mut config = SolverConfig::default()
            .with_lookahead(self.lookahead as usize)
            .with_invariant_checks(false);
        config.max_decisions = self.max_decisions;
        config
    }
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Print only the status and answer-set lines.
    #[arg(long)]
    quiet: bool,
    /// Print the run report as JSON instead of text.
    #[arg(long)]
    stats_json: bool,
    /// Leave wall-clock times out of the output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a theory and print one answer set.
    Solve {
        /// Theory file, `-` for standard input.
        theory: String,
        #[command(flatten)]
        solver: SolveOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Print up to k answer sets.
    Enumerate {
        theory: String,
        /// Maximum number of answer sets; 0 means all.
        #[arg(short, default_value_t = 0)]
        k: usize,
        #[command(flatten)]
        solver: SolveOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Ground a predicate program into a theory.
    Ground {
        program: String,
        /// Output file, `-` for standard output.
        #[arg(short, default_value = "-")]
        o: String,
    },
    /// Check whether a set of atoms is an answer set.
    Verify {
        theory: String,
        /// Atom names, or the output of `solve`.
        model: String,
        #[arg(long)]
        quiet: bool,
    },
    /// Print a benchmark program.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Generate and solve a batch of instances, printing CSV.
    Bench(bench::BenchArgs),
}

#[derive(Args, Clone)]
struct GraphSource {
    /// Read the graph from a file (`n m` then `u v` lines).
    #[arg(long, conflicts_with_all = ["n", "m"])]
    graph: Option<String>,
    /// Vertices of a random graph.
    #[arg(required_unless_present = "graph")]
    n: Option<u32>,
    /// Edges of a random graph.
    #[arg(required_unless_present = "graph")]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Schur numbers: 1..n into b sum-free bins.
    Schur { b: u32, n: u32 },
    /// p pigeons into h holes.
    Pigeonhole { p: u32, h: u32 },
    /// n non-attacking queens.
    Nqueens { n: u32 },
    /// Hamilton cycles of a directed graph.
    Hamilton {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, default_value_t = 1)]
        start: u32,
    },
    /// k-colorings of an undirected graph.
    Coloring {
        k: u32,
        #[command(flatten)]
        graph: GraphSource,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        io::stdout()
            .write_all(text.as_bytes())
            .context("writing standard output")
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}

/// A failure already reported on stderr that maps to exit code 2.
#[derive(Debug)]
struct InputError;

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("invalid input")
    }
}

impl std::error::Error for InputError {}

fn load_theory(path: &str) -> Result<Theory> {
    let text = read_input(path)?;
    parse_theory(&text).map_err(|diags| {
        for d in diags {
            eprintln!("{path}:{d}");
        }
        InputError.into()
    })
}

fn emit_report(report: &RunReport, enumerating: bool, output: &OutputOpts) -> Result<u8> {
    let text = if output.stats_json {
        let mut s = serde_json::to_string_pretty(report)?;
        s.push('\n');
        s
    } else {
        report.render(enumerating, output.quiet)
    };
    write_output("-", &text)?;
    Ok(report.status.exit_code())
}

fn graph_text(source: &GraphSource, directed: bool) -> Result<String> {
    if let Some(path) = &source.graph {
        return read_input(path);
    }
    let (n, m) = (source.n.unwrap_or(0), source.m.unwrap_or(0));
    Ok(if directed {
        random_digraph(n, m, source.seed)?.to_text()
    } else {
        random_graph(n, m, source.seed)?.to_text()
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve {
            theory,
            solver,
            output,
        } => {
            let theory = load_theory(&theory)?;
            let outcome = Solver::new(&theory, solver.config()).solve();
            let sets = outcome
                .witness
                .iter()
                .map(|(m, _)| m.names(&theory))
                .collect();
            let report = RunReport::new(
                outcome.status,
                sets,
                &outcome.stats,
                &theory,
                !output.no_timing,
            );
            emit_report(&report, false, &output)
        }
        Command::Enumerate {
            theory,
            k,
            solver,
            output,
        } => {
            let theory = load_theory(&theory)?;
            let k = if k == 0 { usize::MAX } else { k };
            let found = Solver::new(&theory, solver.config()).enumerate(k);
            let sets = found.models.iter().map(|m| m.names(&theory)).collect();
            let report =
                RunReport::new(found.status, sets, &found.stats, &theory, !output.no_timing);
            emit_report(&report, true, &output)
        }
        Command::Ground { program, o } => {
            let text = read_input(&program)?;
            let program_ast = parse_program(&text).map_err(|diags| {
                for d in diags {
                    eprintln!("{program}:{d}");
                }
                anyhow::Error::from(InputError)
            })?;
            for w in compute_ranges(&program_ast).warnings {
                eprintln!("{program}:{w}");
            }
            let theory = ground(&program_ast).map_err(|e| {
                eprintln!("{program}: error: {e}");
                anyhow::Error::from(InputError)
            })?;
            write_output(&o, &serialize_theory(&theory))?;
            Ok(0)
        }
        Command::Verify {
            theory,
            model,
            quiet,
        } => {
            let theory = load_theory(&theory)?;
            let names = read_model(&read_input(&model)?);
            let candidate = CandidateSet::from_names(&theory, names.iter().map(String::as_str))
                .and_then(|m| is_answer_set(&theory, &m).map(|v| (m, v)));
            let (_, verdict) = match candidate {
                Ok(x) => x,
                Err(e) => {
                    eprintln!("{model}: error: {e}");
                    bail!(InputError);
                }
            };
            let (code, text) = match verdict {
                Verdict::Yes(closure) => {
                    let mut derived: Vec<&str> = closure
                        .derived
                        .iter()
                        .map(|&a| theory.atoms().name(a))
                        .collect();
                    derived.sort_unstable();
                    let mut text = String::from("s VERIFIED\n");
                    if !quiet {
                        for d in derived {
                            text.push_str("c derived ");
                            text.push_str(d);
                            text.push('\n');
                        }
                    }
                    (10, text)
                }
                Verdict::No(violation) => (20, format!("s REFUTED\nc {violation}\n")),
            };
            write_output("-", &text)?;
            Ok(code)
        }
        Command::Gen { family } => {
            let text = match family {
                GenFamily::Schur { b, n } => {
                    ensure_positive(&[b, n])?;
                    schur_source(b, n)
                }
                GenFamily::Pigeonhole { p, h } => {
                    ensure_positive(&[p, h])?;
                    pigeonhole_source(p, h)
                }
                GenFamily::Nqueens { n } => {
                    ensure_positive(&[n])?;
                    nqueens_source(n)
                }
                GenFamily::Hamilton { graph, start } => {
                    let g = Digraph::parse(&graph_text(&graph, true)?)?;
                    if start == 0 || start > g.n() {
                        bail!("start vertex {start} is outside 1..={}", g.n());
                    }
                    hamilton_source(&g, start)
                }
                GenFamily::Coloring { k, graph } => {
                    ensure_positive(&[k])?;
                    coloring_source(&Graph::parse(&graph_text(&graph, false)?)?, k)
                }
            };
            write_output("-", &text)?;
            Ok(0)
        }
        Command::Bench(args) => bench::run(&args),
    }
}

fn ensure_positive(values: &[u32]) -> Result<()> {
    if values.contains(&0) {
        bail!("parameters must be positive");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if e.downcast_ref::<InputError>().is_none() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}
