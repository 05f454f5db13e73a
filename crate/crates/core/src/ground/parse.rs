//! Lexer and recursive-descent parser for predicate programs.

use std::collections::HashSet;

use crate::diagnostic::{Diagnostic, DiagnosticKind, Location};
use crate::model::AtomKind;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    /// Lower-case identifier: predicate, symbol, domain name, or keyword.
    Ident(String),
    /// Upper-case identifier.
    Var(String),
    Int(i64),
    Directive(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Dot,
    DotDot,
    Colon,
    If,
    Arrow,
    Bar,
    Plus,
    Minus,
    Star,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Directive(d) => format!("`#{d}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    loc: Location,
}

fn lex(text: &str) -> Result<Vec<Spanned>, Diagnostic> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let loc = Location {
                line: l + 1,
                column: i + 1,
            };
            if c == '%' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let peek = chars.get(i + 1).copied();
            let (tok, width) = match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                ',' => (Tok::Comma, 1),
                '|' => (Tok::Bar, 1),
                '+' => (Tok::Plus, 1),
                '*' => (Tok::Star, 1),
                '.' if peek == Some('.') => (Tok::DotDot, 2),
                '.' => (Tok::Dot, 1),
                ':' if peek == Some('-') => (Tok::If, 2),
                ':' => (Tok::Colon, 1),
                '-' if peek == Some('>') => (Tok::Arrow, 2),
                '-' => (Tok::Minus, 1),
                '=' => (Tok::Cmp(CmpOp::Eq), 1),
                '!' if peek == Some('=') => (Tok::Cmp(CmpOp::Ne), 2),
                '<' if peek == Some('=') => (Tok::Cmp(CmpOp::Le), 2),
                '<' => (Tok::Cmp(CmpOp::Lt), 1),
                '>' if peek == Some('=') => (Tok::Cmp(CmpOp::Ge), 2),
                '>' => (Tok::Cmp(CmpOp::Gt), 1),
                '#' | 'a'..='z' | 'A'..='Z' | '_' => {
                    let start = if c == '#' { i + 1 } else { i };
                    let mut j = start;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[start..j].iter().collect();
                    let tok = if c == '#' {
                        Tok::Directive(word)
                    } else if c.is_ascii_uppercase() {
                        Tok::Var(word)
                    } else {
                        Tok::Ident(word)
                    };
                    (tok, j - i)
                }
                '0'..='9' => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let digits: String = chars[i..j].iter().collect();
                    let n = digits.parse::<i64>().map_err(|_| {
                        Diagnostic::error(
                            DiagnosticKind::Overflow,
                            Some(loc),
                            format!("integer `{digits}` is too large"),
                        )
                    })?;
                    (Tok::Int(n), j - i)
                }
                other => {
                    return Err(Diagnostic::error(
                        DiagnosticKind::Syntax,
                        Some(loc),
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
            out.push(Spanned { tok, loc });
            i += width;
        }
    }
    let end = Location {
        line: text.lines().count().max(1),
        column: 1,
    };
    out.push(Spanned {
        tok: Tok::Eof,
        loc: end,
    });
    Ok(out)
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn loc(&self) -> Location {
        self.toks[self.pos].loc
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::error(
            DiagnosticKind::Syntax,
            Some(self.loc()),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn var(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("a variable"),
        }
    }

    fn count(&mut self, what: &str) -> PResult<usize> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n as usize)
            }
            _ => self.fail(what),
        }
    }

    fn constant(&mut self) -> PResult<Const> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Const::Int(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Const::Sym(s))
            }
            _ => self.fail("a constant"),
        }
    }

    /// Constant list with `a..b` integer ranges.
    fn constants(&mut self, close: Tok) -> PResult<Vec<Const>> {
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            let c = self.constant()?;
            if self.eat(&Tok::DotDot) {
                let loc = self.loc();
                let (Const::Int(lo), Const::Int(hi)) = (c, self.constant()?) else {
                    return Err(Diagnostic::error(
                        DiagnosticKind::Type,
                        Some(loc),
                        "ranges need integer endpoints",
                    ));
                };
                out.extend((lo..=hi).map(Const::Int));
            } else {
                out.push(c);
            }
            if self.eat(&close) {
                return Ok(out);
            }
            self.expect(Tok::Comma, "`,`")?;
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Expr::Var(v))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Const(Const::Int(n)))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Const(Const::Sym(s)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.fail("an expression"),
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        while self.eat(&Tok::Star) {
            e = Expr::Binary(ArithOp::Mul, Box::new(e), Box::new(self.primary()?));
        }
        Ok(e)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut e = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(e),
            };
            self.bump();
            e = Expr::Binary(op, Box::new(e), Box::new(self.term()?));
        }
    }

    fn atom(&mut self) -> PResult<PredAtom> {
        let pred = self.ident("a predicate name")?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.expr()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `)`")?;
            }
        }
        Ok(PredAtom { pred, args })
    }

    fn literals(&mut self) -> PResult<Vec<SchemaLiteral>> {
        let mut out = Vec::new();
        loop {
            let positive = !self.eat(&Tok::Minus);
            out.push(SchemaLiteral {
                atom: self.atom()?,
                positive,
            });
            if !self.eat(&Tok::Bar) {
                return Ok(out);
            }
        }
    }

    fn guard_item(&mut self) -> PResult<GuardItem> {
        if *self.peek() == Tok::Ident("not".into()) && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            return Ok(GuardItem::Edb {
                atom: self.atom()?,
                negated: true,
            });
        }
        if let Tok::Ident(_) = self.peek() {
            if matches!(self.peek_at(1), Tok::LParen | Tok::Comma | Tok::Dot) {
                return Ok(GuardItem::Edb {
                    atom: self.atom()?,
                    negated: false,
                });
            }
        }
        let left = self.expr()?;
        let op = match self.peek() {
            Tok::Cmp(op) => *op,
            _ => return self.fail("a comparison operator"),
        };
        self.bump();
        let right = self.expr()?;
        Ok(GuardItem::Compare { left, op, right })
    }

    fn guard(&mut self) -> PResult<Guard> {
        let mut out = Vec::new();
        if !self.eat(&Tok::If) || *self.peek() == Tok::Dot {
            return Ok(out);
        }
        loop {
            out.push(self.guard_item()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn schema(&mut self, tag: &str, line: usize) -> PResult<Schema> {
        self.bump();
        self.bump(); // tag and colon
        let body = match tag {
            "c" => SchemaBody::Clause(self.literals()?),
            "p" => SchemaBody::Post(self.literals()?),
            "h" => {
                let mut body = Vec::new();
                if *self.peek() != Tok::Arrow {
                    loop {
                        body.push(self.atom()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::Arrow, "`->`")?;
                SchemaBody::Horn {
                    body,
                    head: self.atom()?,
                }
            }
            _ => {
                let bounds_at = self.loc();
                let lower = self.count("a lower bound")?;
                let upper = self.count("an upper bound")?;
                if lower > upper {
                    return Err(Diagnostic::error(
                        DiagnosticKind::Syntax,
                        Some(bounds_at),
                        format!("select lower bound {lower} exceeds upper bound {upper}"),
                    ));
                }
                let mut bound = Vec::new();
                if *self.peek() != Tok::Colon {
                    loop {
                        bound.push(self.var()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::Colon, "`:`")?;
                SchemaBody::Select {
                    lower,
                    upper,
                    bound,
                    target: self.atom()?,
                }
            }
        };
        let guard = self.guard()?;
        self.expect(Tok::Dot, "`.`")?;
        Ok(Schema { body, guard, line })
    }
}

enum Statement {
    Domain(String, DomainSource),
    Vars(Vec<String>, String),
    Fact(String, Vec<Const>),
    Schema(Schema),
}

fn statement(p: &mut Parser) -> PResult<Statement> {
    let line = p.loc().line;
    match p.peek().clone() {
        Tok::Directive(d) if d == "domain" => {
            p.bump();
            let name = p.ident("a domain name")?;
            p.expect(Tok::Cmp(CmpOp::Eq), "`=`")?;
            let source = if p.eat(&Tok::LBrace) {
                DomainSource::Explicit(p.constants(Tok::RBrace)?)
            } else {
                let pred = p.ident("`{` or a predicate name")?;
                p.expect(Tok::LBracket, "`[`")?;
                let column = p.count("a column number")?;
                p.expect(Tok::RBracket, "`]`")?;
                DomainSource::Column { pred, column }
            };
            p.expect(Tok::Dot, "`.`")?;
            Ok(Statement::Domain(name, source))
        }
        Tok::Directive(d) if d == "var" => {
            p.bump();
            let mut vars = vec![p.var()?];
            while p.eat(&Tok::Comma) {
                vars.push(p.var()?);
            }
            p.expect(Tok::Colon, "`:`")?;
            let domain = p.ident("a domain name")?;
            p.expect(Tok::Dot, "`.`")?;
            Ok(Statement::Vars(vars, domain))
        }
        Tok::Directive(d) => Err(Diagnostic::error(
            DiagnosticKind::Syntax,
            Some(p.loc()),
            format!("unknown directive `#{d}`"),
        )),
        Tok::Ident(tag)
            if matches!(tag.as_str(), "c" | "h" | "p" | "s") && *p.peek_at(1) == Tok::Colon =>
        {
            p.schema(&tag, line).map(Statement::Schema)
        }
        Tok::Ident(_) => {
            let pred = p.ident("a predicate")?;
            let args = if p.eat(&Tok::LParen) {
                p.constants(Tok::RParen)?
            } else {
                Vec::new()
            };
            p.expect(Tok::Dot, "`.`")?;
            Ok(Statement::Fact(pred, args))
        }
        _ => p.fail("a statement"),
    }
}

/// Skips to just past the next `.` so parsing can resume after an error.
fn recover(p: &mut Parser) {
    loop {
        match p.bump() {
            Tok::Dot | Tok::Eof => return,
            _ => {}
        }
    }
}

/// Parses a predicate program and checks it for declaration, arity and kind
/// errors. All errors are collected before giving up.
pub fn parse_program(text: &str) -> Result<PredicateProgram, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    let mut program = PredicateProgram::default();
    let mut errors = Vec::new();
    let mut var_lines = Vec::new();
    let mut domain_lines = Vec::new();
    while *p.peek() != Tok::Eof {
        let loc = p.loc();
        match statement(&mut p) {
            Ok(Statement::Domain(name, source)) => {
                if program.domains.insert(name.clone(), source).is_some() {
                    errors.push(Diagnostic::error(
                        DiagnosticKind::DuplicateDecl,
                        Some(loc),
                        format!("domain `{name}` is declared twice"),
                    ));
                }
                domain_lines.push((name, loc));
            }
            Ok(Statement::Vars(vars, domain)) => {
                for v in vars {
                    if program
                        .var_decls
                        .insert(v.clone(), domain.clone())
                        .is_some()
                    {
                        errors.push(Diagnostic::error(
                            DiagnosticKind::DuplicateDecl,
                            Some(loc),
                            format!("variable `{v}` is declared twice"),
                        ));
                    }
                }
                var_lines.push((domain, loc));
            }
            Ok(Statement::Fact(pred, args)) => {
                let arity = args.len();
                if !program.edb.insert(&pred, args) {
                    errors.push(Diagnostic::error(
                        DiagnosticKind::ArityMismatch,
                        Some(loc),
                        format!(
                            "fact `{pred}` has {arity} arguments, earlier facts have {}",
                            program.edb.arity(&pred).unwrap_or(0)
                        ),
                    ));
                }
            }
            Ok(Statement::Schema(schema)) => program.idb.push(schema),
            Err(d) => {
                errors.push(d);
                recover(&mut p);
            }
        }
    }
    for (domain, loc) in var_lines {
        if !program.domains.contains_key(&domain) {
            errors.push(Diagnostic::error(
                DiagnosticKind::UndeclaredVariable,
                Some(loc),
                format!("domain `{domain}` is not declared"),
            ));
        }
    }
    check_program(&mut program, &domain_lines, &mut errors);
    if errors.is_empty() {
        Ok(program)
    } else {
        errors.sort_by_key(|d| d.location);
        Err(errors)
    }
}

fn check_program(
    program: &mut PredicateProgram,
    domain_lines: &[(String, Location)],
    errors: &mut Vec<Diagnostic>,
) {
    let at = |line: usize| Some(Location { line, column: 1 });

    for (name, loc) in domain_lines {
        if let Some(DomainSource::Column { pred, column }) = program.domains.get(name) {
            let arity = program.edb.arity(pred);
            if *column == 0 || arity.is_some_and(|n| *column > n) {
                errors.push(Diagnostic::error(
                    DiagnosticKind::ArityMismatch,
                    Some(*loc),
                    format!("`{pred}` has no column {column}"),
                ));
            }
        }
    }

    let horn_heads: HashSet<&str> = program
        .idb
        .iter()
        .filter_map(|s| match &s.body {
            SchemaBody::Horn { head, .. } => Some(head.pred.as_str()),
            _ => None,
        })
        .collect();

    let mut idb_preds: indexmap::IndexMap<String, (AtomKind, usize)> = indexmap::IndexMap::new();
    for schema in &program.idb {
        for v in schema.variables() {
            if !program.var_decls.contains_key(v) {
                errors.push(Diagnostic::error(
                    DiagnosticKind::UndeclaredVariable,
                    at(schema.line),
                    format!("variable `{v}` is not declared"),
                ));
            }
        }
        for atom in schema.atoms() {
            let kind = if horn_heads.contains(atom.pred.as_str()) {
                AtomKind::Horn
            } else {
                AtomKind::Constraint
            };
            if program.edb.arity(&atom.pred).is_some() {
                errors.push(Diagnostic::error(
                    DiagnosticKind::Kind,
                    at(schema.line),
                    format!("EDB predicate `{}` may only appear in guards", atom.pred),
                ));
            }
            match idb_preds.get(&atom.pred) {
                Some(&(_, n)) if n != atom.args.len() => errors.push(Diagnostic::error(
                    DiagnosticKind::ArityMismatch,
                    at(schema.line),
                    format!(
                        "`{}` used with {} arguments, earlier with {n}",
                        atom.pred,
                        atom.args.len()
                    ),
                )),
                Some(_) => {}
                None => {
                    idb_preds.insert(atom.pred.clone(), (kind, atom.args.len()));
                }
            }
        }
        match &schema.body {
            SchemaBody::Clause(lits) => {
                for lit in lits {
                    if horn_heads.contains(lit.atom.pred.as_str()) {
                        errors.push(Diagnostic::error(
                            DiagnosticKind::Kind,
                            at(schema.line),
                            format!("constraint clause uses Horn predicate `{}`", lit.atom.pred),
                        ));
                    }
                }
            }
            SchemaBody::Select { target, .. } if horn_heads.contains(target.pred.as_str()) => {
                errors.push(Diagnostic::error(
                    DiagnosticKind::Kind,
                    at(schema.line),
                    format!("select ranges over Horn predicate `{}`", target.pred),
                ));
            }
            _ => {}
        }
    }

    for schema in &program.idb {
        for item in &schema.guard {
            if let GuardItem::Edb { atom, .. } = item {
                if idb_preds.contains_key(&atom.pred) {
                    errors.push(Diagnostic::error(
                        DiagnosticKind::Kind,
                        at(schema.line),
                        format!("guard refers to IDB predicate `{}`", atom.pred),
                    ));
                } else if let Some(n) = program.edb.arity(&atom.pred) {
                    if n != atom.args.len() {
                        errors.push(Diagnostic::error(
                            DiagnosticKind::ArityMismatch,
                            at(schema.line),
                            format!(
                                "`{}` used with {} arguments, facts have {n}",
                                atom.pred,
                                atom.args.len()
                            ),
                        ));
                    }
                }
            }
        }
    }
    program.idb_preds = idb_preds;
}
