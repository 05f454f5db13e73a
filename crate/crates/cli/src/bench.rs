use std::fmt::Write as _;
use std::ops::RangeInclusive;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use dc_core::bench::{crossover_edges, gen_nqueens, gen_pigeonhole, gen_schur, RandomFamily};
use dc_core::ground::ground;
use dc_core::solve::{solve, Status};
use dc_core::Theory;

use super::{write_output, SolveOpts};

pub const CSV_HEADER: &str = "family,size,seed,status,decisions,millis";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Schur,
    Pigeonhole,
    Nqueens,
    Hamilton,
    Coloring,
}

#[derive(Args, Clone)]
pub struct BenchArgs {
    family: Family,
    /// Instance sizes as `a..b` (inclusive) or a single number.
    #[arg(long, value_parser = parse_sizes)]
    sizes: RangeInclusive<u32>,
    /// Instances per size; random families use seeds `seed..seed+count`.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bins for schur.
    #[arg(long, default_value_t = 3)]
    bins: u32,
    /// Colors for coloring.
    #[arg(long, default_value_t = 3)]
    colors: u32,
    /// Pigeons beyond the number of holes for pigeonhole.
    #[arg(long, default_value_t = 1)]
    extra_pigeons: u32,
    /// Edge count for random families; found by bisection on the
    /// satisfiable fraction when omitted.
    #[arg(long)]
    edges: Option<usize>,
    #[command(flatten)]
    solver: SolveOpts,
    /// Write 0 in the millis column.
    #[arg(long)]
    no_timing: bool,
}

fn parse_sizes(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if a == 0 || a > b {
        return Err(format!("`{s}` is not a non-empty range of positive sizes"));
    }
    Ok(a..=b)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Schur => "schur",
        Family::Pigeonhole => "pigeonhole",
        Family::Nqueens => "nqueens",
        Family::Hamilton => "hamilton",
        Family::Coloring => "coloring",
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Sat => "SAT",
        Status::Unsat => "UNSAT",
        Status::LimitReached => "UNKNOWN",
    }
}

pub fn run(args: &BenchArgs) -> Result<u8> {
    let config = args.solver.config();
    let random = match args.family {
        Family::Hamilton => Some(RandomFamily::Hamilton),
        Family::Coloring => Some(RandomFamily::Coloring(args.colors)),
        _ => None,
    };
    if args.bins == 0 || args.colors == 0 {
        bail!("bins and colors must be positive");
    }
    let mut jobs: Vec<(u32, u64, Theory)> = Vec::new();
    for size in args.sizes.clone() {
        let edges = match (random, args.edges) {
            (Some(family), None) => {
                let m = crossover_edges(family, size, args.count.max(1), args.seed, &config)?;
                eprintln!("% size {size}: crossover at {m} edges");
                Some(m)
            }
            (_, m) => m,
        };
        for seed in args.seed..args.seed + args.count {
            let theory = match (args.family, random) {
                (_, Some(family)) => family
                    .instance(size, edges.unwrap_or(0), seed)
                    .with_context(|| format!("size {size}, seed {seed}"))?,
                (Family::Schur, _) => ground(&gen_schur(args.bins, size))?,
                (Family::Pigeonhole, _) => {
                    ground(&gen_pigeonhole(size + args.extra_pigeons, size))?
                }
                (Family::Nqueens, _) => ground(&gen_nqueens(size))?,
                _ => unreachable!("random families handled above"),
            };
            jobs.push((size, seed, theory));
        }
    }
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|(size, seed, theory)| {
            let outcome = solve(theory, &config);
            let millis = if args.no_timing {
                0
            } else {
                outcome.stats.elapsed.as_millis()
            };
            format!(
                "{},{size},{seed},{},{},{millis}",
                family_name(args.family),
                status_name(outcome.status),
                outcome.stats.decisions
            )
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{CSV_HEADER}");
    for row in rows {
        let _ = writeln!(out, "{row}");
    }
    write_output("-", &out)?;
    Ok(0)
}
