//! Worked examples for individual operators.

use std::path::PathBuf;

use mutdafny_core::mutate::{generate_all, Mutant};
use mutdafny_core::resolve::{resolve, TypeRef};
use mutdafny_core::scan::OperatorId::{self, *};
use mutdafny_core::syntax::parse_program;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn mutants(src: &str, op: OperatorId) -> Vec<Mutant> {
    let tree = parse_program(src).unwrap();
    let prog = resolve(&tree);
    generate_all(&prog, &[op]).unwrap()
}

fn replacements(src: &str, op: OperatorId) -> Vec<String> {
    let mut v: Vec<String> = mutants(src, op).into_iter().map(|m| m.replacement).collect();
    v.sort();
    v
}

fn texts(src: &str, op: OperatorId) -> Vec<String> {
    mutants(src, op).into_iter().map(|m| m.text).collect()
}

fn in_method(body: &str) -> String {
    format!(
        "method M(a: int, b: int, x: int, y: int, p: bool, q: bool, s: seq<int>, n: int) returns (r: int)\n{{\n  {body}\n}}\n"
    )
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

#[test]
fn bor_groups() {
    assert_eq!(replacements(&in_method("r := a + b;"), BOR), sorted(&["-", "a * b"]));
    assert_eq!(replacements(&in_method("r := x / y;"), BOR), ["%"]);
    let imp = replacements(&in_method("var t := p ==> q;"), BOR);
    assert_eq!(imp.len(), 4);
    for op in ["&&", "||", "<==", "<==>"] {
        assert!(imp.iter().any(|r| r.contains(op)), "{op} missing from {imp:?}");
    }
}

#[test]
fn bbr_relational() {
    assert_eq!(replacements(&in_method("var t := a < b;"), BBR), ["false", "true"]);
    let listing = fixture("listing1_shared_elements.dfy");
    let guard: Vec<_> = mutants(&listing, BBR)
        .into_iter()
        .filter(|m| m.target.original == "InArray(b, a[i]) && a[i] !in res")
        .collect();
    assert_eq!(guard.len(), 2);
}

#[test]
fn uoi_and_uod() {
    let src = in_method("r := a + b;");
    let r = replacements(&src, UOI);
    assert_eq!(r, sorted(&["-(a)", "-(b)", "-(a + b)"]));
    assert_eq!(replacements(&in_method("var t := p;"), UOI), ["!(p)"]);
    assert_eq!(replacements(&in_method("r := -a;"), UOD), ["a"]);
    for t in texts(&src, UOI) {
        parse_program(&t).unwrap();
    }
}

#[test]
fn lvr_values() {
    assert_eq!(replacements(&in_method("var t := true;"), LVR), ["false"]);
    assert_eq!(replacements(&in_method("r := 0;"), LVR), sorted(&["1", "-1"]));
    assert_eq!(replacements(&in_method("r := 10;"), LVR), sorted(&["0", "1", "-1", "11", "9"]));
}

#[test]
fn evr_positions() {
    let far = fixture("far_item.dfy");
    assert_eq!(replacements(&far, EVR), sorted(&["0", "1", "-1"]));
    assert!(replacements(&in_method("r := 5;"), EVR).is_empty());
    let listing = fixture("listing1_shared_elements.dfy");
    let args: Vec<_> = mutants(&listing, EVR)
        .into_iter()
        .filter(|m| m.target.original == "a[i]")
        .map(|m| m.replacement)
        .collect();
    assert_eq!(args, ["0", "1", "-1"]);
}

#[test]
fn mrr_map_sar_on_sum() {
    let src = fixture("mcr_sum_multiply.dfy");
    let mrr = texts(&src, MRR);
    assert_eq!(mrr.len(), 1);
    assert!(mrr[0].contains("var n := 0;"));
    assert_eq!(replacements(&src, MAP), sorted(&["10", "20"]));
    let sar = texts(&src, SAR);
    assert_eq!(sar.len(), 1);
    assert!(sar[0].contains("Sum(20, 10)"));
}

#[test]
fn map_on_two_params() {
    let src = "function Multiply(a: int, b: int): int { a * b }\nmethod M(a: int, b: int) returns (r: int) { r := Multiply(a, b); }\n";
    assert_eq!(replacements(src, MAP), sorted(&["a", "b"]));
}

#[test]
fn cir_displays() {
    let cbe = fixture("cbe_triple.dfy");
    assert_eq!(replacements(&cbe, CIR), ["[]"]);
    let dcr = fixture("dcr_quantifier.dfy");
    assert_eq!(replacements(&dcr, CIR), ["{}"]);
}

#[test]
fn lsr_in_method_with_outs() {
    let src = in_method("while r < 10 { r := r + 1; break; }");
    assert_eq!(replacements(&src, LSR), ["continue"]);
    let void = "method V(n: int) { var i := 0; while i < n { i := i + 1; break; } }\n";
    assert_eq!(replacements(void, LSR), sorted(&["continue", "return;"]));
}

#[test]
fn lbi_once_per_loop() {
    let listing = fixture("listing1_shared_elements.dfy");
    assert_eq!(mutants(&listing, LBI).len(), 1);
}

#[test]
fn cbr_three_cases() {
    let src = "datatype T = A | B | C\nmethod M(t: T) returns (r: int) {\n  match t {\n    case A => r := 1;\n    case B => r := 2;\n    case _ => r := 3;\n  }\n}\n";
    assert_eq!(mutants(src, CBR).len(), 3);
}

#[test]
fn sdl_listing_one() {
    let listing = fixture("listing1_shared_elements.dfy");
    let ms = mutants(&listing, SDL);
    let lines: Vec<&str> = listing.lines().collect();
    let without_if: Vec<&str> = lines[..15].iter().chain(&lines[18..]).copied().collect();
    let whole_if = ms
        .iter()
        .find(|m| m.target.original.starts_with("if InArray"))
        .expect("whole-if deletion");
    let got: Vec<&str> = whole_if.text.lines().filter(|l| !l.trim().is_empty()).collect();
    let want: Vec<&str> = without_if.into_iter().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(got, want);
    assert!(ms.iter().any(|m| m.target.original == "res := res + [a[i]];"));
    assert!(!ms.iter().any(|m| m.target.span.line == 9));
}

#[test]
fn mnr_receiver() {
    let src = "class S {\n  function Normalize(): S { this }\n}\nmethod M(s: S) returns (t: S) { t := s.Normalize(); }\n";
    assert_eq!(replacements(src, MNR), ["s"]);
}

#[test]
fn sld_bounds() {
    let src = in_method("var t := s[1..n];");
    assert_eq!(texts(&src, SLD).len(), 2);
    let t = texts(&src, SLD);
    assert!(t.iter().any(|x| x.contains("s[..n]")));
    assert!(t.iter().any(|x| x.contains("s[1..]")));
}

#[test]
fn odl_collapses_both() {
    let src = in_method("r := a + b + x;");
    let t = texts(&src, ODL);
    assert_eq!(t.len(), 2);
    assert!(t.iter().all(|x| !x.contains('+')));
}

#[test]
fn prv_listing() {
    let src = fixture("prv_shapes.dfy");
    let t = texts(&src, PRV);
    assert_eq!(t.len(), 1);
    assert!(t[0].contains("shape := triangle;"));

    let tree = parse_program(&src).unwrap();
    let prog = resolve(&tree);
    let mut kids = prog.children_of_trait("Shape");
    kids.sort();
    assert_eq!(kids, ["Rectangle", "Triangle"]);
}

#[test]
fn accessor_swaps() {
    let src = fixture("amr_getters.dfy");
    assert_eq!(mutants(&src, AMR).len(), 2);
}

#[test]
fn this_insertion_and_deletion() {
    let src = "class Item {\n  var price: int\n  method SetPrice(price: int)\n    modifies this\n  {\n    this.price := price;\n  }\n}\n";
    assert_eq!(replacements(src, THI), ["this.price"]);
    assert!(mutants(src, THD).is_empty());
}

#[test]
fn far_listing() {
    let src = fixture("far_item.dfy");
    let t = texts(&src, FAR);
    assert!(t.iter().any(|x| x.contains("profit := item.price * item.price;")));
}

#[test]
fn mcr_listing() {
    let src = fixture("mcr_sum_multiply.dfy");
    let t = texts(&src, MCR);
    assert!(t.iter().any(|x| x.contains("var n := Multiply(10, 20);")));
}

#[test]
fn dcr_listing() {
    let src = fixture("dcr_quantifier.dfy");
    let t = texts(&src, DCR);
    assert_eq!(t.len(), 1);
    assert!(t[0].contains("var selection := All({1, 2, 3, 4});"));
}

#[test]
fn swv_listing() {
    let src = fixture("swv_circle.dfy");
    let t = texts(&src, SWV);
    assert_eq!(t.len(), 1);
    assert!(t[0].contains("var perimeter := radius * radius * 3.14;\n  var area := 2.0 * radius * 3.14;"));
}

#[test]
fn cbe_listing() {
    let src = fixture("cbe_triple.dfy");
    let r = replacements(&src, CBE);
    assert_eq!(r.len(), 2);
    assert!(r.contains(&"[]".to_string()));
    assert!(r.iter().any(|x| x.starts_with("var b, c := a + a, a * a;") && x.ends_with("[a, b, c]")));
}

#[test]
fn type_equivalence() {
    let seq = TypeRef::Seq(Box::new(TypeRef::Int));
    assert!(seq.same_as(&TypeRef::Seq(Box::new(TypeRef::Int))));
    assert!(TypeRef::String.same_as(&TypeRef::Seq(Box::new(TypeRef::Char))));
    assert!(!TypeRef::Nat.same_as(&TypeRef::Int));
    assert!(!TypeRef::Unknown.same_as(&TypeRef::Unknown));
}
