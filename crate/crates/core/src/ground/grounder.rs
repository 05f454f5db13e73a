use crate::model::{Atom, AtomKind, Theory, TheoryBuilder};

use super::ast::*;
use super::eval::{compute_ranges, eval_guard_item, ground_atom_name, Ranges, Substitution};
use super::GroundError;

/// Enumerates substitutions for `order` in lexicographic domain order.
/// Guard conjuncts are checked as soon as their last variable is bound, which
/// yields the same instances as filtering the full cross product.
struct Enumerator<'a> {
    order: Vec<&'a str>,
    /// `stages[d]` holds the conjuncts decided once `order[..d]` is bound.
    stages: Vec<Vec<&'a GuardItem>>,
    ranges: &'a Ranges,
    edb: &'a Edb,
}

impl<'a> Enumerator<'a> {
    fn new(order: Vec<&'a str>, items: &[&'a GuardItem], ranges: &'a Ranges, edb: &'a Edb) -> Self {
        let mut stages = vec![Vec::new(); order.len() + 1];
        for &item in items {
            let mut depth = 0;
            item.visit_vars(&mut |v| {
                if let Some(p) = order.iter().position(|&o| o == v) {
                    depth = depth.max(p + 1);
                }
            });
            stages[depth].push(item);
        }
        Enumerator {
            order,
            stages,
            ranges,
            edb,
        }
    }

    fn run(
        &self,
        sub: &mut Substitution,
        emit: &mut dyn FnMut(&Substitution) -> Result<(), GroundError>,
    ) -> Result<(), GroundError> {
        self.descend(0, sub, emit)
    }

    fn descend(
        &self,
        depth: usize,
        sub: &mut Substitution,
        emit: &mut dyn FnMut(&Substitution) -> Result<(), GroundError>,
    ) -> Result<(), GroundError> {
        for item in &self.stages[depth] {
            if !eval_guard_item(item, sub, self.edb)? {
                return Ok(());
            }
        }
        let Some(&var) = self.order.get(depth) else {
            return emit(sub);
        };
        let values = self.ranges.vars.get(var).map(Vec::as_slice).unwrap_or(&[]);
        for value in values {
            sub.bind(var, value.clone());
            self.descend(depth + 1, sub, emit)?;
        }
        sub.unbind(var);
        Ok(())
    }
}

struct Emitter<'a> {
    program: &'a PredicateProgram,
    builder: TheoryBuilder,
    line: usize,
}

impl Emitter<'_> {
    fn atom(&mut self, atom: &PredAtom, sub: &Substitution) -> Result<Atom, GroundError> {
        let kind = self
            .program
            .idb_preds
            .get(&atom.pred)
            .map_or(AtomKind::Constraint, |&(k, _)| k);
        let name = ground_atom_name(atom, sub)?;
        let line = self.line;
        self.builder
            .intern(&name, kind)
            .map_err(|source| GroundError::Theory { line, source })
    }

    fn literals(
        &mut self,
        lits: &[SchemaLiteral],
        sub: &Substitution,
    ) -> Result<Vec<crate::model::Literal>, GroundError> {
        lits.iter()
            .map(|l| {
                Ok(crate::model::Literal::new(
                    self.atom(&l.atom, sub)?,
                    l.positive,
                ))
            })
            .collect()
    }
}

/// Grounds `program` into a propositional theory. Instances are emitted
/// schema by schema, each in substitution order, so the result is
/// deterministic.
pub fn ground(program: &PredicateProgram) -> Result<Theory, GroundError> {
    let ranges = compute_ranges(program);
    let mut out = Emitter {
        program,
        builder: Theory::builder(),
        line: 0,
    };
    for schema in &program.idb {
        out.line = schema.line;
        let line = schema.line;
        let wrap = |source| GroundError::Theory { line, source };
        let vars = schema.variables();
        let items: Vec<&GuardItem> = schema.guard.iter().collect();
        match &schema.body {
            SchemaBody::Clause(lits) => {
                Enumerator::new(vars, &items, &ranges, &program.edb).run(
                    &mut Substitution::new(),
                    &mut |sub| {
                        let lits = out.literals(lits, sub)?;
                        out.builder.constraint(lits).map_err(wrap)?;
                        Ok(())
                    },
                )?;
            }
            SchemaBody::Post(lits) => {
                Enumerator::new(vars, &items, &ranges, &program.edb).run(
                    &mut Substitution::new(),
                    &mut |sub| {
                        let lits = out.literals(lits, sub)?;
                        out.builder.post(lits).map_err(wrap)?;
                        Ok(())
                    },
                )?;
            }
            SchemaBody::Horn { body, head } => {
                Enumerator::new(vars, &items, &ranges, &program.edb).run(
                    &mut Substitution::new(),
                    &mut |sub| {
                        let body = body
                            .iter()
                            .map(|a| out.atom(a, sub))
                            .collect::<Result<Vec<_>, _>>()?;
                        let head = out.atom(head, sub)?;
                        out.builder.rule(body, head).map_err(wrap)?;
                        Ok(())
                    },
                )?;
            }
            SchemaBody::Select {
                lower,
                upper,
                bound,
                target,
            } => {
                let free: Vec<&str> = vars
                    .iter()
                    .copied()
                    .filter(|v| !bound.iter().any(|b| b == v))
                    .collect();
                let mentions_bound = |item: &GuardItem| {
                    let mut hit = false;
                    item.visit_vars(&mut |v| hit |= bound.iter().any(|b| b == v));
                    hit
                };
                let (inner, outer): (Vec<&GuardItem>, Vec<&GuardItem>) =
                    items.iter().copied().partition(|i| mentions_bound(i));
                let scopes = Enumerator::new(free, &outer, &ranges, &program.edb);
                let members = Enumerator::new(
                    bound.iter().map(String::as_str).collect(),
                    &inner,
                    &ranges,
                    &program.edb,
                );
                scopes.run(&mut Substitution::new(), &mut |sub| {
                    let mut scope = Vec::new();
                    members.run(&mut sub.clone(), &mut |full| {
                        scope.push(out.atom(target, full)?);
                        Ok(())
                    })?;
                    out.builder.select(*lower, *upper, scope).map_err(wrap)?;
                    Ok(())
                })?;
            }
        }
    }
    Ok(out.builder.build())
}

#[cfg(test)]
mod tests {
    use super::super::parse_program;
    use super::*;
    use crate::format::validate_theory;

    const TRIANGLE: &str = "
        #domain vertex = edge[1].
        #var X, Y, Z : vertex.
        edge(1,2). edge(2,3). edge(3,1).
        start(1).
        c: -hc(Y,X) | -hc(Z,X) :- edge(Y,X), edge(Z,X), Y < Z.
        c: -hc(X,Y) | -hc(X,Z) :- edge(X,Y), edge(X,Z), Y < Z.
        h: hc(X,Y) -> vstd(Y) :- start(X), edge(X,Y).
        h: vstd(X), hc(X,Y) -> vstd(Y) :- edge(X,Y), not start(X).
        p: vstd(X).
    ";

    #[test]
    fn hamilton_triangle_counts() {
        let program = parse_program(TRIANGLE).unwrap();
        assert_eq!(
            program.count_schemas(|b| matches!(b, SchemaBody::Clause(_))),
            2
        );
        assert_eq!(
            program.count_schemas(|b| matches!(b, SchemaBody::Horn { .. })),
            2
        );
        assert_eq!(
            program.count_schemas(|b| matches!(b, SchemaBody::Post(_))),
            1
        );
        let theory = ground(&program).unwrap();
        assert_eq!(theory.constraints().len(), 0);
        assert_eq!(theory.horn().len(), 3);
        let posts: Vec<String> = theory
            .post()
            .iter()
            .map(|c| theory.atoms().name(c.literals()[0].atom()).to_string())
            .collect();
        assert_eq!(posts, ["vstd(1)", "vstd(2)", "vstd(3)"]);
        assert!(validate_theory(&theory).is_empty());
    }

    #[test]
    fn coloring_selects() {
        let src = "
            #domain vertex = {1,2}.
            #domain color = {r,g,b}.
            #var X : vertex.
            #var C : color.
            s: 1 1 C : color(X,C) :- .
        ";
        let theory = ground(&parse_program(src).unwrap()).unwrap();
        assert_eq!(theory.selects().len(), 2);
        assert!(theory
            .selects()
            .iter()
            .all(|s| s.scope().len() == 3 && s.lower() == 1 && s.upper() == 1));
        assert_eq!(
            theory.atoms().name(theory.selects()[0].scope()[1]),
            "color(1,g)"
        );
    }

    #[test]
    fn select_guard_split() {
        // X-only conjunct decides whether a select exists; mixed conjuncts
        // filter its scope.
        let src = "
            #domain n = {1..4}.
            #var X, Y : n.
            s: 0 1 Y : q(X,Y) :- X <= 2, Y > X.
        ";
        let theory = ground(&parse_program(src).unwrap()).unwrap();
        let sizes: Vec<usize> = theory.selects().iter().map(|s| s.scope().len()).collect();
        assert_eq!(sizes, [3, 2]);
    }

    #[test]
    fn type_errors_carry_the_substitution() {
        let src = "
            #domain d = {a}.
            #var X : d.
            c: q(X) :- X + 1 = 2.
        ";
        let err = ground(&parse_program(src).unwrap()).unwrap_err();
        match err {
            GroundError::Type { substitution, .. } => assert_eq!(substitution, "{X→a}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_domain_grounds_to_nothing() {
        let src = "
            #domain d = edge[1].
            #var X : d.
            c: q(X).
        ";
        let program = parse_program(src).unwrap();
        assert_eq!(compute_ranges(&program).warnings.len(), 1);
        let theory = ground(&program).unwrap();
        assert!(theory.constraints().is_empty());
    }

    #[test]
    fn arithmetic_in_atom_arguments() {
        let src = "
            #domain n = {1..3}.
            #var X, Y : n.
            c: -p(X) | -p(Y) | -p(X+Y) :- X <= Y, X + Y <= 3.
        ";
        let theory = ground(&parse_program(src).unwrap()).unwrap();
        let clauses: Vec<usize> = theory.constraints().iter().map(|c| c.len()).collect();
        // (1,1) collapses to two literals, (1,2) keeps three
        assert_eq!(clauses, [2, 3]);
    }
}
