use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BenchError;

/// A directed graph on vertices `1..=n` without loops or parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: u32,
    edges: Vec<(u32, u32)>,
}

/// An undirected graph on vertices `1..=n`. Edges are stored as `(u, v)`
/// with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(u32, u32)>,
}

fn check_endpoints(n: u32, u: u32, v: u32) -> Result<(), BenchError> {
    for vertex in [u, v] {
        if vertex == 0 || vertex > n {
            return Err(BenchError::InvalidVertex { vertex, n });
        }
    }
    if u == v {
        return Err(BenchError::SelfLoop(u));
    }
    Ok(())
}

impl Digraph {
    /// Edges keep their given order; duplicates are dropped.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, BenchError> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            check_endpoints(n, u, v)?;
            if !out.contains(&(u, v)) {
                out.push((u, v));
            }
        }
        Ok(Digraph { n, edges: out })
    }

    /// The directed cycle `1 → 2 → … → n → 1`.
    pub fn cycle(n: u32) -> Self {
        Digraph {
            n,
            edges: (1..=n)
                .map(|u| (u, u % n + 1))
                .filter(|(u, v)| u != v)
                .collect(),
        }
    }

    /// Every ordered pair of distinct vertices.
    pub fn complete(n: u32) -> Self {
        let edges = (1..=n)
            .flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph { n, edges }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Reads `n m` followed by `m` lines `u v`.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let (n, edges) = parse_edge_list(text)?;
        Digraph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        edge_list_text(self.n, &self.edges)
    }
}

impl Graph {
    /// Each pair is normalised to `(min, max)`; duplicates are dropped.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, BenchError> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            check_endpoints(n, u, v)?;
            let e = (u.min(v), u.max(v));
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(Graph { n, edges: out })
    }

    pub fn complete(n: u32) -> Self {
        let edges = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        Graph { n, edges }
    }

    /// The Petersen graph: outer 5-cycle on 1..5, inner pentagram on 6..10,
    /// spokes `i` to `i+5`.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i + 1, (i + 1) % 5 + 1));
            edges.push((i + 6, (i + 2) % 5 + 6));
            edges.push((i + 1, i + 6));
        }
        Graph::new(10, edges).expect("valid graph")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Reads `n m` followed by `m` lines `u v`, in either orientation.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let (n, edges) = parse_edge_list(text)?;
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        edge_list_text(self.n, &self.edges)
    }
}

fn parse_edge_list(text: &str) -> Result<(u32, Vec<(u32, u32)>), BenchError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let pair = |line: usize, l: &str| -> Result<(u32, u32), BenchError> {
        let bad = || BenchError::Parse {
            line,
            message: format!("expected two non-negative integers, found `{l}`"),
        };
        let mut it = l.split_whitespace();
        let a = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let b = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        if it.next().is_some() {
            return Err(bad());
        }
        Ok((a, b))
    };
    let (line, header) = lines.next().ok_or(BenchError::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = pair(line, header)?;
    let edges = lines
        .map(|(i, l)| pair(i, l))
        .collect::<Result<Vec<_>, _>>()?;
    if edges.len() != m as usize {
        return Err(BenchError::Parse {
            line,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

fn edge_list_text(n: u32, edges: &[(u32, u32)]) -> String {
    let mut out = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// `m` distinct directed non-loop edges drawn uniformly with a ChaCha8
/// generator seeded by `seed`, sorted lexicographically.
pub fn random_digraph(n: u32, m: usize, seed: u64) -> Result<Digraph, BenchError> {
    let slots = n as usize * (n as usize).saturating_sub(1);
    if m > slots {
        return Err(BenchError::TooManyEdges { n, m, max: slots });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = sample(&mut rng, slots, m)
        .into_iter()
        .map(|k| {
            let u = (k / (n as usize - 1)) as u32;
            let mut v = (k % (n as usize - 1)) as u32;
            if v >= u {
                v += 1;
            }
            (u + 1, v + 1)
        })
        .collect();
    edges.sort_unstable();
    Ok(Digraph { n, edges })
}

/// `m` distinct undirected edges drawn uniformly, sorted.
pub fn random_graph(n: u32, m: usize, seed: u64) -> Result<Graph, BenchError> {
    let pairs: Vec<(u32, u32)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    if m > pairs.len() {
        return Err(BenchError::TooManyEdges {
            n,
            m,
            max: pairs.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = sample(&mut rng, pairs.len(), m)
        .into_iter()
        .map(|k| pairs[k])
        .collect();
    edges.sort_unstable();
    Ok(Graph { n, edges })
}
