use std::fs;
use std::path::PathBuf;

use mutdafny_core::syntax::{parse_program, print_program};

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "dfy"))
        .collect();
    files.sort();
    files
}

#[test]
fn every_fixture_round_trips() {
    let files = corpus();
    assert!(files.len() >= 25, "corpus has {} files", files.len());
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let tree = parse_program(&text).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        assert_eq!(print_program(&tree), text, "{}", f.display());
    }
}
