use std::path::PathBuf;

use proptest::prelude::*;

use mutdafny_core::mutate::generate_all;
use mutdafny_core::resolve::{resolve, Binding};
use mutdafny_core::scan::{scan, OperatorId, Rewrite};
use mutdafny_core::span::SourceSpan;
use mutdafny_core::syntax::ast::*;
use mutdafny_core::syntax::{parse_program, print_program};

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "dfy"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(p).unwrap())
        })
        .collect()
}

fn spec_spans(decls: &[Decl], out: &mut Vec<SourceSpan>) {
    fn stmts(ss: &[Stmt], out: &mut Vec<SourceSpan>) {
        for s in ss {
            match &s.kind {
                StmtKind::While { specs, body, .. } | StmtKind::For { specs, body, .. } => {
                    out.extend(specs.iter().map(|c| c.span));
                    if let Some(b) = body {
                        stmts(&b.stmts, out);
                    }
                }
                StmtKind::If(i) => {
                    stmts(&i.then_block.stmts, out);
                    match &i.else_branch {
                        Some(ElseBranch::Block(b)) => stmts(&b.stmts, out),
                        Some(ElseBranch::If(n)) => stmts(std::slice::from_ref(&**n), out),
                        None => {}
                    }
                }
                StmtKind::Match { cases, .. } => cases.iter().for_each(|c| stmts(&c.body, out)),
                StmtKind::Block(b) => stmts(&b.stmts, out),
                _ => {}
            }
        }
    }
    for d in decls {
        match d {
            Decl::Callable(c) => {
                out.extend(c.specs.iter().map(|s| s.span));
                if let Some(CallableBody::Block(b)) = &c.body {
                    stmts(&b.stmts, out);
                }
            }
            Decl::Class(k) => spec_spans(&k.members, out),
            Decl::Datatype(k) => spec_spans(&k.members, out),
            Decl::Module(m) => spec_spans(&m.decls, out),
            _ => {}
        }
    }
}

#[test]
fn scanning_is_deterministic() {
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        let a = scan(&resolve(&tree), &OperatorId::ALL);
        let b = scan(&resolve(&parse_program(&src).unwrap()), &OperatorId::ALL);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn no_mutant_equals_original() {
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        for m in generate_all(&resolve(&tree), &OperatorId::ALL).unwrap() {
            assert_ne!(m.text, src, "{name} {}", m.id);
        }
    }
}

#[test]
fn spec_clauses_are_never_edited_partially() {
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        let mut specs = Vec::new();
        spec_spans(&tree.decls, &mut specs);
        for t in scan(&resolve(&tree), &OperatorId::ALL) {
            for e in t.edits(&src) {
                for s in &specs {
                    let inside = s.start <= e.span.start && e.span.end <= s.end && s.start < e.span.end;
                    let partial = e.span.overlaps(s) && !e.span.contains(s);
                    assert!(!inside && !partial, "{name} {} touches spec at {s}", t.operator);
                }
            }
        }
    }
}

#[test]
fn replace_targets_differ_in_one_region() {
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        for m in generate_all(&resolve(&tree), &OperatorId::ALL).unwrap() {
            if !matches!(m.target.rewrite, Rewrite::Replace(_)) {
                continue;
            }
            let span = m.target.span;
            let rebuilt = format!("{}{}{}", &src[..span.start], m.replacement, &src[span.end..]);
            assert_eq!(rebuilt, m.text, "{name} {}", m.id);
        }
    }
}

#[test]
fn every_mutant_parses() {
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        for m in generate_all(&resolve(&tree), &OperatorId::ALL).unwrap() {
            if let Err(e) = parse_program(&m.text) {
                panic!("{name} {}: {e}\n{}", m.id, m.text);
            }
        }
    }
}

#[test]
fn mutant_ids_are_unique() {
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        let ms = generate_all(&resolve(&tree), &OperatorId::ALL).unwrap();
        let mut ids: Vec<&str> = ms.iter().map(|m| m.id.as_str()).collect();
        ids.sort();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n, "{name}");
    }
}

/// Type-constrained replacements keep the type of the replaced expression.
#[test]
fn typed_replacements_keep_types() {
    use OperatorId::*;
    for (name, src) in corpus() {
        let tree = parse_program(&src).unwrap();
        let prog = resolve(&tree);
        for m in generate_all(&prog, &[VER, FAR, MCR, DCR, MVR, TAR, SAR, MAP, MNR]).unwrap() {
            let Ok(mtree) = parse_program(&m.text) else {
                panic!("{name} {}", m.id);
            };
            let mprog = resolve(&mtree);
            let before = find_at(&tree, m.target.span.start).map(|e| prog.type_of(e).clone());
            let after = find_at(&mtree, m.target.span.start).map(|e| mprog.type_of(e).clone());
            if let (Some(b), Some(a)) = (before, after) {
                if !b.is_unknown() && m.operator != SAR {
                    assert!(a.same_as(&b), "{name} {}: {b:?} became {a:?}", m.id);
                }
            }
            if m.operator == DCR || m.operator == MCR {
                let bound = find_at(&mtree, m.target.span.start)
                    .and_then(|e| mprog.binding(e))
                    .is_some_and(|b| matches!(b, Binding::Ctor { .. } | Binding::Callable(_)));
                assert!(bound || find_at(&mtree, m.target.span.start).is_none(), "{name} {}", m.id);
            }
        }
    }
}

/// The outermost expression starting at `offset` inside a callable body.
fn find_at(tree: &SyntaxTree, offset: usize) -> Option<&Expr> {
    fn in_expr(e: &Expr, at: usize) -> Option<&Expr> {
        if e.span.start == at {
            return Some(e);
        }
        e.children().into_iter().find_map(|c| in_expr(c, at))
    }
    fn in_stmts(ss: &[Stmt], at: usize) -> Option<&Expr> {
        ss.iter().find_map(|s| {
            s.exprs()
                .into_iter()
                .find_map(|e| in_expr(e, at))
                .or_else(|| s.child_blocks().into_iter().find_map(|b| in_stmts(b, at)))
        })
    }
    fn in_decls(ds: &[Decl], at: usize) -> Option<&Expr> {
        ds.iter().find_map(|d| match d {
            Decl::Callable(c) => match &c.body {
                Some(CallableBody::Block(b)) => in_stmts(&b.stmts, at),
                Some(CallableBody::Expr { expr, .. }) => in_expr(expr, at),
                _ => None,
            },
            Decl::Class(k) => in_decls(&k.members, at),
            Decl::Datatype(k) => in_decls(&k.members, at),
            Decl::Module(m) => in_decls(&m.decls, at),
            _ => None,
        })
    }
    in_decls(&tree.decls, offset)
}

fn int_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("a".to_string()),
        Just("b".to_string()),
        (0u32..20).prop_map(|n| n.to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "%"]), inner.clone())
                .prop_map(|(l, o, r)| format!("{l} {o} {r}")),
            inner.clone().prop_map(|e| format!("({e})")),
            inner.prop_map(|e| format!("-{e}")),
        ]
    })
}

fn bool_expr() -> impl Strategy<Value = String> {
    let cmp = (int_expr(), prop::sample::select(vec!["<", "<=", ">", ">=", "==", "!="]), int_expr())
        .prop_map(|(l, o, r)| format!("{l} {o} {r}"));
    let leaf = prop_oneof![Just("p".to_string()), Just("true".to_string()), cmp];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["&&", "||", "==>", "<==>"]), inner.clone())
                .prop_map(|(l, o, r)| format!("({l}) {o} ({r})")),
            inner.prop_map(|e| format!("!({e})")),
        ]
    })
}

fn program(ie: &str, be: &str) -> String {
    format!(
        "method M(a: int, b: int, p: bool) returns (r: int)\n  requires a > 0\n{{\n  var t := {be};\n  r := {ie};\n  if t {{\n    r := r + 1;\n  }}\n}}\n"
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_programs_round_trip(ie in int_expr(), be in bool_expr()) {
        let src = program(&ie, &be);
        let tree = parse_program(&src).unwrap();
        prop_assert_eq!(print_program(&tree), src);
    }

    #[test]
    fn generated_mutants_parse_and_differ(ie in int_expr(), be in bool_expr()) {
        let src = program(&ie, &be);
        let tree = parse_program(&src).unwrap();
        let prog = resolve(&tree);
        let ms = generate_all(&prog, &OperatorId::ALL).unwrap();
        prop_assert!(!ms.is_empty());
        for m in &ms {
            prop_assert_ne!(&m.text, &src);
            prop_assert!(parse_program(&m.text).is_ok(), "{}: {}", m.id, m.text);
            prop_assert!(m.text.contains("requires a > 0"));
        }
        let again = generate_all(&resolve(&parse_program(&src).unwrap()), &OperatorId::ALL).unwrap();
        prop_assert_eq!(ms, again);
    }
}
