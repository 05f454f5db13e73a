//! Benchmark families as predicate programs, plus random graphs.
//!
//! Each `*_source` function returns program text in the predicate language
//! and the matching `gen_*` function parses it. Grounding the result gives a
//! propositional theory whose answer sets are exactly the solutions:
//!
//! ```
//! use dc_core::bench::gen_pigeonhole;
//! use dc_core::ground::ground;
//! use dc_core::solve::{enumerate, SolverConfig};
//!
//! let theory = ground(&gen_pigeonhole(3, 3)).unwrap();
//! let all = enumerate(&theory, usize::MAX, &SolverConfig::default());
//! assert_eq!(all.models.len(), 6);
//! ```

mod graph;

use std::fmt::Write as _;

use thiserror::Error;

use crate::ground::{ground, parse_program, PredicateProgram};
use crate::model::{Atom, AtomKind, Theory, TheoryBuilder};
use crate::solve::{solve, SolverConfig, Status};

pub use graph::{random_digraph, random_graph, Digraph, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("{m} edges requested but only {max} fit on {n} vertices")]
    TooManyEdges { n: u32, m: usize, max: usize },
    #[error("vertex {vertex} is outside 1..={n}")]
    InvalidVertex { vertex: u32, n: u32 },
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_generated(source: &str) -> PredicateProgram {
    match parse_program(source) {
        Ok(p) => p,
        Err(errors) => panic!("generated program does not parse: {errors:?}\n{source}"),
    }
}

/// Hamilton cycles of `g`. Every vertex must be reachable from `start`
/// along chosen edges, with at most one chosen edge into and out of each
/// vertex.
pub fn hamilton_source(g: &Digraph, start: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% hamilton cycle, {} vertices, start {start}", g.n());
    let _ = writeln!(out, "#domain vertex = {{1..{}}}.", g.n());
    out.push_str("#var X, Y, Z : vertex.\n");
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge({u},{v}).");
    }
    let _ = writeln!(out, "start({start}).");
    out.push_str(
        "c: -hc(Y,X) | -hc(Z,X) :- edge(Y,X), edge(Z,X), Y < Z.\n\
         c: -hc(X,Y) | -hc(X,Z) :- edge(X,Y), edge(X,Z), Y < Z.\n\
         h: hc(X,Y) -> vstd(Y) :- start(X), edge(X,Y).\n\
         h: vstd(X), hc(X,Y) -> vstd(Y) :- edge(X,Y), not start(X).\n\
         p: vstd(X).\n",
    );
    out
}

pub fn gen_hamilton(g: &Digraph, start: u32) -> PredicateProgram {
    assert!(
        (1..=g.n()).contains(&start),
        "start vertex outside the graph"
    );
    parse_generated(&hamilton_source(g, start))
}

/// The ground Hamilton theory built directly, without the grounder.
pub fn hamilton_theory(g: &Digraph, start: u32) -> Theory {
    let mut b = Theory::builder();
    let atom =
        |b: &mut TheoryBuilder, name: String, kind| b.intern(&name, kind).expect("fresh names");
    let n = g.n();
    for x in 1..=n {
        let ins: Vec<u32> = g.edges().iter().filter(|e| e.1 == x).map(|e| e.0).collect();
        let outs: Vec<u32> = g.edges().iter().filter(|e| e.0 == x).map(|e| e.1).collect();
        for (list, incoming) in [(ins, true), (outs, false)] {
            for (i, &y) in list.iter().enumerate() {
                for &z in &list[i + 1..] {
                    let name = |w: u32| {
                        if incoming {
                            format!("hc({w},{x})")
                        } else {
                            format!("hc({x},{w})")
                        }
                    };
                    let a = atom(&mut b, name(y), AtomKind::Constraint);
                    let c = atom(&mut b, name(z), AtomKind::Constraint);
                    b.constraint([a.negative(), c.negative()])
                        .expect("constraint atoms");
                }
            }
        }
    }
    for &(u, v) in g.edges() {
        let hc = atom(&mut b, format!("hc({u},{v})"), AtomKind::Constraint);
        let head = atom(&mut b, format!("vstd({v})"), AtomKind::Horn);
        let body: Vec<Atom> = if u == start {
            vec![hc]
        } else {
            vec![atom(&mut b, format!("vstd({u})"), AtomKind::Horn), hc]
        };
        b.rule(body, head).expect("horn head");
    }
    for v in 1..=n {
        let a = atom(&mut b, format!("vstd({v})"), AtomKind::Horn);
        b.post([a.positive()]).expect("post");
    }
    b.build()
}

/// Proper `k`-colorings of `g`.
pub fn coloring_source(g: &Graph, k: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% {k}-coloring, {} vertices", g.n());
    let _ = writeln!(out, "#domain vertex = {{1..{}}}.", g.n());
    let _ = writeln!(out, "#domain color = {{1..{k}}}.");
    out.push_str("#var X, Y : vertex.\n#var C : color.\n");
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge({u},{v}).");
    }
    out.push_str(
        "s: 1 1 C : color(X,C).\n\
         c: -color(X,C) | -color(Y,C) :- edge(X,Y).\n",
    );
    out
}

pub fn gen_coloring(g: &Graph, k: u32) -> PredicateProgram {
    assert!(k >= 1, "at least one color");
    parse_generated(&coloring_source(g, k))
}

/// Non-attacking placements of `n` queens. Diagonals are numbered so that
/// `q(R,C)` lies on diagonal `R - C + n` and anti-diagonal `R + C`; only
/// those holding at least two squares get a select.
pub fn nqueens_source(n: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% {n} queens");
    let _ = writeln!(out, "#domain idx = {{1..{n}}}.");
    let _ = writeln!(out, "#domain diag = {{2..{}}}.", 2 * n as i64 - 2);
    let _ = writeln!(out, "#domain anti = {{3..{}}}.", 2 * n as i64 - 1);
    out.push_str("#var R, C : idx.\n#var D : diag.\n#var E : anti.\n");
    out.push_str("s: 1 1 C : q(R,C).\n");
    out.push_str("s: 0 1 R : q(R,C).\n");
    let _ = writeln!(out, "s: 0 1 R, C : q(R,C) :- R + {n} = C + D.");
    out.push_str("s: 0 1 R, C : q(R,C) :- R + C = E.\n");
    out
}

pub fn gen_nqueens(n: u32) -> PredicateProgram {
    assert!(n >= 1, "board must be non-empty");
    parse_generated(&nqueens_source(n))
}

/// Placements of `1..=n` into `b` bins with no bin containing `x`, `y` and
/// `x + y`; `x` and `y` may coincide.
pub fn schur_source(b: u32, n: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% schur, {b} bins, numbers 1..{n}");
    let _ = writeln!(out, "#domain num = {{1..{n}}}.");
    let _ = writeln!(out, "#domain bin = {{1..{b}}}.");
    out.push_str("#var X, Y : num.\n#var K : bin.\n");
    out.push_str("s: 1 1 K : inbin(X,K).\n");
    let _ = writeln!(
        out,
        "c: -inbin(X,K) | -inbin(Y,K) | -inbin(X+Y,K) :- X <= Y, X + Y <= {n}."
    );
    out
}

pub fn gen_schur(b: u32, n: u32) -> PredicateProgram {
    assert!(b >= 1 && n >= 1, "need at least one bin and one number");
    parse_generated(&schur_source(b, n))
}

/// Injections of `p` pigeons into `h` holes.
pub fn pigeonhole_source(p: u32, h: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% pigeonhole, {p} pigeons, {h} holes");
    let _ = writeln!(out, "#domain pigeon = {{1..{p}}}.");
    let _ = writeln!(out, "#domain hole = {{1..{h}}}.");
    out.push_str("#var I : pigeon.\n#var J : hole.\n");
    out.push_str("s: 1 1 J : at(I,J).\n");
    out.push_str("s: 0 1 I : at(I,J).\n");
    out
}

pub fn gen_pigeonhole(p: u32, h: u32) -> PredicateProgram {
    assert!(p >= 1 && h >= 1, "need pigeons and holes");
    parse_generated(&pigeonhole_source(p, h))
}

/// Random families whose satisfiable fraction moves monotonically with
/// the edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomFamily {
    /// Hamilton cycles in random digraphs, starting at vertex 1; more edges
    /// make cycles likelier.
    Hamilton,
    /// `k`-colorings of random graphs; more edges make colorings rarer.
    Coloring(u32),
}

impl RandomFamily {
    pub fn max_edges(self, n: u32) -> usize {
        let n = n as usize;
        match self {
            RandomFamily::Hamilton => n * n.saturating_sub(1),
            RandomFamily::Coloring(_) => n * n.saturating_sub(1) / 2,
        }
    }

    /// The ground theory of instance `(n, m, seed)`.
    pub fn instance(self, n: u32, m: usize, seed: u64) -> Result<Theory, BenchError> {
        Ok(match self {
            RandomFamily::Hamilton => hamilton_theory(&random_digraph(n, m, seed)?, 1),
            RandomFamily::Coloring(k) => ground(&gen_coloring(&random_graph(n, m, seed)?, k))
                .expect("coloring programs ground"),
        })
    }
}

/// Satisfiable fraction among instances with seeds `seed..seed + samples`.
/// Instances hitting the decision limit count as unsatisfiable.
pub fn sat_fraction(
    family: RandomFamily,
    n: u32,
    m: usize,
    samples: u64,
    seed: u64,
    config: &SolverConfig,
) -> Result<f64, BenchError> {
    let mut sat = 0;
    for s in seed..seed + samples {
        if solve(&family.instance(n, m, s)?, config).status == Status::Sat {
            sat += 1;
        }
    }
    Ok(sat as f64 / samples.max(1) as f64)
}

/// Edge count at which about half of the random instances are
/// satisfiable: the least `m` whose satisfiable fraction has reached one
/// half (Hamilton) or dropped to one half (coloring), found by bisection.
pub fn crossover_edges(
    family: RandomFamily,
    n: u32,
    samples: u64,
    seed: u64,
    config: &SolverConfig,
) -> Result<usize, BenchError> {
    let past = |m: usize| -> Result<bool, BenchError> {
        let f = sat_fraction(family, n, m, samples, seed, config)?;
        Ok(match family {
            RandomFamily::Hamilton => f >= 0.5,
            RandomFamily::Coloring(_) => f <= 0.5,
        })
    };
    let (mut lo, mut hi) = (0, family.max_edges(n));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if past(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::validate_theory;
    use crate::model::brute_force_answer_sets;
    use crate::solve::enumerate;

    fn answer_sets(t: &Theory) -> usize {
        enumerate(t, usize::MAX, &SolverConfig::default())
            .models
            .len()
    }

    fn clean(t: &Theory) {
        let errors: Vec<_> = validate_theory(t)
            .into_iter()
            .filter(|d| d.is_error())
            .collect();
        assert!(errors.is_empty(), "{errors:?}");
    }

    #[test]
    fn hamilton_triangle() {
        let g = Digraph::cycle(3);
        let t = ground(&gen_hamilton(&g, 1)).unwrap();
        assert_eq!(
            (t.constraints().len(), t.horn().len(), t.post().len()),
            (0, 3, 3)
        );
        assert_eq!(t.canonical(), hamilton_theory(&g, 1).canonical());
        let all = brute_force_answer_sets(&t, usize::MAX).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].names(&t), ["hc(1,2)", "hc(2,3)", "hc(3,1)"]);
    }

    #[test]
    fn hamilton_complete_three() {
        let t = ground(&gen_hamilton(&Digraph::complete(3), 1)).unwrap();
        assert_eq!(t.constraints().len(), 6);
        assert_eq!(brute_force_answer_sets(&t, usize::MAX).unwrap().len(), 2);
        clean(&t);
    }

    #[test]
    fn hamilton_path_is_unsat() {
        let g = Digraph::new(3, [(1, 2), (2, 3)]).unwrap();
        let t = ground(&gen_hamilton(&g, 1)).unwrap();
        assert!(brute_force_answer_sets(&t, usize::MAX).unwrap().is_empty());
    }

    #[test]
    fn coloring_examples() {
        let triangle = Graph::complete(3);
        assert_eq!(
            answer_sets(&ground(&gen_coloring(&triangle, 3)).unwrap()),
            6
        );
        let k4 = ground(&gen_coloring(&Graph::complete(4), 3)).unwrap();
        assert_eq!(solve(&k4, &SolverConfig::default()).status, Status::Unsat);
        let single = Graph::new(1, []).unwrap();
        assert_eq!(answer_sets(&ground(&gen_coloring(&single, 3)).unwrap()), 3);
    }

    #[test]
    fn queens_examples() {
        assert_eq!(answer_sets(&ground(&gen_nqueens(4)).unwrap()), 2);
        assert_eq!(answer_sets(&ground(&gen_nqueens(3)).unwrap()), 0);
        assert_eq!(answer_sets(&ground(&gen_nqueens(1)).unwrap()), 1);
    }

    #[test]
    fn schur_examples() {
        let t = ground(&gen_schur(3, 13)).unwrap();
        assert_eq!(t.constraints().len(), 126);
        assert_eq!(t.selects().len(), 13);
        assert_eq!(t.constraint_atoms().len(), 39);
        clean(&t);
        assert_eq!(
            solve(&ground(&gen_schur(1, 2)).unwrap(), &SolverConfig::default()).status,
            Status::Unsat
        );
    }

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(answer_sets(&ground(&gen_pigeonhole(3, 3)).unwrap()), 6);
        assert_eq!(answer_sets(&ground(&gen_pigeonhole(4, 3)).unwrap()), 0);
        let one = ground(&gen_pigeonhole(1, 1)).unwrap();
        let all = enumerate(&one, 10, &SolverConfig::default()).models;
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].names(&one), ["at(1,1)"]);
    }

    #[test]
    fn crossover_on_small_graphs() {
        let config = SolverConfig::default();
        let m = crossover_edges(RandomFamily::Hamilton, 6, 10, 1, &config).unwrap();
        assert!((6..=30).contains(&m), "{m}");
        assert!(sat_fraction(RandomFamily::Hamilton, 6, m, 10, 1, &config).unwrap() >= 0.5);
        let m = crossover_edges(RandomFamily::Coloring(3), 8, 10, 1, &config).unwrap();
        assert!(sat_fraction(RandomFamily::Coloring(3), 8, m, 10, 1, &config).unwrap() <= 0.5);
    }
}
