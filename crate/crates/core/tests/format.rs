mod common;

use common::small_theory;
use dc_core::diagnostic::DiagnosticKind;
use dc_core::format::{parse_theory, serialize_theory, validate_theory};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialized_theories_parse_back(r in small_theory()) {
        let t = r.build();
        let text = serialize_theory(&t);
        let back = parse_theory(&text).unwrap();
        prop_assert_eq!(back.canonical(), t.canonical());
        prop_assert_eq!(serialize_theory(&back), text);
    }

    #[test]
    fn built_theories_have_no_kind_errors(r in small_theory()) {
        prop_assert!(validate_theory(&r.build()).iter().all(|d| !d.is_error()));
    }
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let t = parse_theory("dc 1.0\n% header comment\n\n#atoms c: a b % two atoms\n#atoms h: x\nc: a b\nh: a -> x\np: x % closing\n")
        .unwrap();
    assert_eq!(t.constraints().len(), 1);
    assert_eq!(t.horn().len(), 1);
    assert_eq!(t.post().len(), 1);
}

#[test]
fn errors_carry_locations() {
    let errs = parse_theory("dc 1.0\n#atoms c: a\n#atoms h:\nc: a b\n").unwrap_err();
    let e = errs
        .iter()
        .find(|d| d.kind == DiagnosticKind::UndeclaredAtom)
        .unwrap();
    assert_eq!(e.location.unwrap().line, 4);
}

#[test]
fn horn_atoms_are_rejected_in_constraint_clauses() {
    let errs = parse_theory("dc 1.0\n#atoms c: a\n#atoms h: x\nc: a x\n").unwrap_err();
    assert!(errs.iter().any(|d| d.kind == DiagnosticKind::Kind));
}

#[test]
fn constraint_atoms_cannot_head_rules() {
    let errs = parse_theory("dc 1.0\n#atoms c: a b\n#atoms h:\nh: a -> b\n").unwrap_err();
    assert!(errs.iter().any(|d| d.kind == DiagnosticKind::Kind));
}

#[test]
fn duplicate_declarations_are_errors() {
    let errs = parse_theory("dc 1.0\n#atoms c: a a\n#atoms h:\n").unwrap_err();
    assert!(errs.iter().any(|d| d.kind == DiagnosticKind::DuplicateDecl));
}
