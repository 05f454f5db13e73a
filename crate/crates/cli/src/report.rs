use std::fmt::Write as _;

use dc_core::solve::{SolveStats, Status};
use dc_core::Theory;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ReportStatus {
    Sat,
    Unsat,
    Unknown,
}

impl From<Status> for ReportStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Sat => ReportStatus::Sat,
            Status::Unsat => ReportStatus::Unsat,
            Status::LimitReached => ReportStatus::Unknown,
        }
    }
}

impl ReportStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportStatus::Sat => "SAT",
            ReportStatus::Unsat => "UNSAT",
            ReportStatus::Unknown => "UNKNOWN",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            ReportStatus::Sat => 10,
            ReportStatus::Unsat => 20,
            ReportStatus::Unknown => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheorySize {
    pub atoms: usize,
    pub clauses: usize,
    pub rules: usize,
    pub selects: usize,
    pub posts: usize,
}

impl TheorySize {
    pub fn of(theory: &Theory) -> Self {
        TheorySize {
            atoms: theory.atoms().len(),
            clauses: theory.constraints().len(),
            rules: theory.horn().len(),
            selects: theory.selects().len(),
            posts: theory.post().len(),
        }
    }
}

/// Outcome of a `solve` or `enumerate` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub status: ReportStatus,
    /// Answer sets found, each as sorted atom names.
    pub answer_sets: Vec<Vec<String>>,
    pub decisions: u64,
    pub propagations: u64,
    pub lookahead_tests: u64,
    pub backtracks: u64,
    /// Wall time of the search alone; absent under `--no-timing`.
    pub elapsed_ms: Option<f64>,
    pub theory: TheorySize,
}

impl RunReport {
    pub fn new(
        status: Status,
        answer_sets: Vec<Vec<String>>,
        stats: &SolveStats,
        theory: &Theory,
        timing: bool,
    ) -> Self {
        RunReport {
            status: status.into(),
            answer_sets,
            decisions: stats.decisions,
            propagations: stats.propagations,
            lookahead_tests: stats.lookahead_tests,
            backtracks: stats.backtracks,
            elapsed_ms: timing.then_some(stats.elapsed.as_secs_f64() * 1000.0),
            theory: TheorySize::of(theory),
        }
    }

    /// Plain-text rendering: a status line, one `v` line per atom for a
    /// single answer set or one `a` line per answer set when enumerating,
    /// then `c` statistics lines.
    pub fn render(&self, enumerating: bool, quiet: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "s {}", self.status.as_str());
        if enumerating {
            for set in &self.answer_sets {
                out.push('a');
                for name in set {
                    out.push(' ');
                    out.push_str(name);
                }
                out.push('\n');
            }
        } else if let Some(set) = self.answer_sets.first() {
            for name in set {
                let _ = writeln!(out, "v {name}");
            }
        }
        if quiet {
            return out;
        }
        if enumerating {
            let _ = writeln!(out, "c answer_sets: {}", self.answer_sets.len());
        }
        let t = &self.theory;
        let _ = writeln!(
            out,
            "c theory: {} atoms, {} clauses, {} rules, {} selects, {} posts",
            t.atoms, t.clauses, t.rules, t.selects, t.posts
        );
        let _ = writeln!(out, "c decisions: {}", self.decisions);
        let _ = writeln!(out, "c propagations: {}", self.propagations);
        let _ = writeln!(out, "c lookahead_tests: {}", self.lookahead_tests);
        let _ = writeln!(out, "c backtracks: {}", self.backtracks);
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "c elapsed_ms: {ms:.3}");
        }
        out
    }
}

/// Atom names from a model file. Text containing a status line is read as
/// `solve` output and only its `v` lines count; anything else is a list of
/// names separated by whitespace, with `%` comments.
pub fn read_model(text: &str) -> Vec<String> {
    let lines = text.lines().map(str::trim);
    if text.lines().any(|l| l.trim_start().starts_with("s ")) {
        return lines
            .filter_map(|l| l.strip_prefix("v "))
            .flat_map(str::split_whitespace)
            .map(str::to_string)
            .collect();
    }
    lines
        .map(|l| l.split('%').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_files() {
        let solve_output = "s SAT\nv hc(1,2)\nv hc(2,3)\nc decisions: 0\n";
        assert_eq!(read_model(solve_output), ["hc(1,2)", "hc(2,3)"]);
        assert_eq!(read_model("c b % note\nd\n"), ["c", "b", "d"]);
    }
}
