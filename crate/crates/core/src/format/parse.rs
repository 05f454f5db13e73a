use crate::diagnostic::{Diagnostic, DiagnosticKind, Location};
use crate::model::{Atom, AtomKind, Literal, Theory, TheoryBuilder, TheoryError};

use super::{is_atom_name, HEADER};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    column: c + 1,
                });
            }
        } else if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &line[b..],
            column: c + 1,
        });
    }
    tokens
}

struct Parser {
    builder: TheoryBuilder,
    diagnostics: Vec<Diagnostic>,
    line: usize,
}

impl Parser {
    fn error(&mut self, kind: DiagnosticKind, column: usize, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(
            kind,
            Some(Location {
                line: self.line,
                column,
            }),
            message,
        ));
    }

    fn theory_error(&mut self, column: usize, err: TheoryError) {
        let kind = match err {
            TheoryError::DuplicateAtom(_) => DiagnosticKind::DuplicateDecl,
            TheoryError::UndeclaredAtom(_) | TheoryError::UnknownAtom(_) => {
                DiagnosticKind::UndeclaredAtom
            }
            TheoryError::InvalidSelect { .. } => DiagnosticKind::Syntax,
            _ => DiagnosticKind::Kind,
        };
        self.error(kind, column, err.to_string());
    }

    fn atom(&mut self, token: &Token<'_>, kind: Option<AtomKind>) -> Option<Atom> {
        if !is_atom_name(token.text) {
            self.error(
                DiagnosticKind::Syntax,
                token.column,
                format!("`{}` is not a valid atom name", token.text),
            );
            return None;
        }
        let Some(atom) = self.builder.atoms().lookup(token.text) else {
            self.error(
                DiagnosticKind::UndeclaredAtom,
                token.column,
                format!("atom `{}` is used before it is declared", token.text),
            );
            return None;
        };
        if let Some(kind) = kind {
            let found = self.builder.atoms().kind(atom);
            if found != kind {
                self.error(
                    DiagnosticKind::Kind,
                    token.column,
                    format!("atom `{}` has kind {found}, expected {kind}", token.text),
                );
                return None;
            }
        }
        Some(atom)
    }

    fn literals(&mut self, tokens: &[Token<'_>], kind: Option<AtomKind>) -> Option<Vec<Literal>> {
        let mut literals = Vec::with_capacity(tokens.len());
        let mut ok = true;
        for token in tokens {
            let (positive, text) = match token.text.strip_prefix('-') {
                Some(rest) => (false, rest),
                None => (true, token.text),
            };
            let name = Token {
                text,
                column: token.column + usize::from(!positive),
            };
            match self.atom(&name, kind) {
                Some(atom) => literals.push(Literal::new(atom, positive)),
                None => ok = false,
            }
        }
        ok.then_some(literals)
    }

    fn count(&mut self, token: Option<&Token<'_>>, what: &str, column: usize) -> Option<usize> {
        match token.map(|t| (t.text.parse::<usize>(), t.column)) {
            Some((Ok(n), _)) => Some(n),
            Some((Err(_), c)) => {
                self.error(
                    DiagnosticKind::Syntax,
                    c,
                    format!("expected {what} as a nonnegative integer"),
                );
                None
            }
            None => {
                self.error(DiagnosticKind::Syntax, column, format!("missing {what}"));
                None
            }
        }
    }

    fn declarations(&mut self, tokens: &[Token<'_>]) {
        let kind = match tokens.get(1).map(|t| t.text) {
            Some("c:") => AtomKind::Constraint,
            Some("h:") => AtomKind::Horn,
            _ => {
                let column = tokens.get(1).map_or(tokens[0].column, |t| t.column);
                self.error(
                    DiagnosticKind::Syntax,
                    column,
                    "expected `c:` or `h:` after `#atoms`",
                );
                return;
            }
        };
        for token in &tokens[2..] {
            if !is_atom_name(token.text) {
                self.error(
                    DiagnosticKind::Syntax,
                    token.column,
                    format!("`{}` is not a valid atom name", token.text),
                );
                continue;
            }
            if let Err(err) = self.builder.declare(token.text, kind) {
                self.theory_error(token.column, err);
            }
        }
    }

    fn rule(&mut self, tokens: &[Token<'_>]) {
        let arrows: Vec<usize> = (1..tokens.len())
            .filter(|&i| tokens[i].text == "->")
            .collect();
        let [arrow] = arrows[..] else {
            self.error(
                DiagnosticKind::Syntax,
                tokens[0].column,
                "a rule needs exactly one `->`",
            );
            return;
        };
        let [ref head] = tokens[arrow + 1..] else {
            self.error(
                DiagnosticKind::Syntax,
                tokens[arrow].column,
                "a rule needs exactly one head atom after `->`",
            );
            return;
        };
        let mut body = Vec::new();
        let mut ok = true;
        for token in &tokens[1..arrow] {
            match self.atom(token, None) {
                Some(a) => body.push(a),
                None => ok = false,
            }
        }
        let head_atom = self.atom(head, None);
        if let (true, Some(head_atom)) = (ok, head_atom) {
            if let Err(err) = self.builder.rule(body, head_atom) {
                self.theory_error(head.column, err);
            }
        }
    }

    fn select(&mut self, tokens: &[Token<'_>]) {
        let tag = tokens[0].column;
        let Some(lower) = self.count(tokens.get(1), "lower bound", tag) else {
            return;
        };
        let Some(upper) = self.count(tokens.get(2), "upper bound", tag) else {
            return;
        };
        if tokens.get(3).map(|t| t.text) != Some(":") {
            let column = tokens.get(3).map_or(tag, |t| t.column);
            self.error(
                DiagnosticKind::Syntax,
                column,
                "expected `:` before the select scope",
            );
            return;
        }
        if lower > upper {
            self.error(
                DiagnosticKind::Syntax,
                tokens[1].column,
                format!("select lower bound {lower} exceeds upper bound {upper}"),
            );
            return;
        }
        let mut scope = Vec::new();
        let mut ok = true;
        for token in &tokens[4..] {
            match self.atom(token, Some(AtomKind::Constraint)) {
                Some(a) => scope.push(a),
                None => ok = false,
            }
        }
        if ok {
            if let Err(err) = self.builder.select(lower, upper, scope) {
                self.theory_error(tag, err);
            }
        }
    }

    fn line(&mut self, tokens: &[Token<'_>]) {
        match tokens[0].text {
            "#atoms" => self.declarations(tokens),
            "c:" => {
                if let Some(lits) = self.literals(&tokens[1..], Some(AtomKind::Constraint)) {
                    if let Err(err) = self.builder.constraint(lits) {
                        self.theory_error(tokens[0].column, err);
                    }
                }
            }
            "p:" => {
                if let Some(lits) = self.literals(&tokens[1..], None) {
                    if let Err(err) = self.builder.post(lits) {
                        self.theory_error(tokens[0].column, err);
                    }
                }
            }
            "h:" => self.rule(tokens),
            "s:" => self.select(tokens),
            other => self.error(
                DiagnosticKind::Syntax,
                tokens[0].column,
                format!("unknown line tag `{other}`"),
            ),
        }
    }
}

/// Parses the propositional text format. Any error diagnostic rejects the
/// whole input; all errors found are reported, in source order.
pub fn parse_theory(text: &str) -> Result<Theory, Vec<Diagnostic>> {
    let mut parser = Parser {
        builder: Theory::builder(),
        diagnostics: Vec::new(),
        line: 0,
    };
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        parser.line = i + 1;
        let content = raw.split('%').next().unwrap_or("");
        let tokens = tokenize(content);
        if tokens.is_empty() {
            continue;
        }
        if !seen_header {
            seen_header = true;
            let words: Vec<&str> = tokens.iter().map(|t| t.text).collect();
            if words != HEADER.split(' ').collect::<Vec<_>>() {
                parser.error(
                    DiagnosticKind::Syntax,
                    tokens[0].column,
                    format!("expected header `{HEADER}`"),
                );
            }
            continue;
        }
        parser.line(&tokens);
    }
    if !seen_header {
        parser.diagnostics.push(Diagnostic::error(
            DiagnosticKind::Syntax,
            Some(Location { line: 1, column: 1 }),
            format!("missing header `{HEADER}`"),
        ));
    }
    if parser.diagnostics.is_empty() {
        Ok(parser.builder.build())
    } else {
        Err(parser.diagnostics)
    }
}
