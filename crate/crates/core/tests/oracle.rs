//! Scanner target counts compared with the independent oracle on every
//! corpus file.

use std::path::PathBuf;

use mutdafny_core::resolve::resolve;
use mutdafny_core::scan::{targets, OperatorId};
use mutdafny_core::syntax::parse_program;

#[path = "support/oracle.rs"]
mod oracle;

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "dfy"))
        .collect();
    files.sort();
    files
}

#[test]
fn scanner_counts_match_oracle() {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for path in corpus() {
        let src = std::fs::read_to_string(&path).unwrap();
        let tree = parse_program(&src).unwrap();
        let prog = resolve(&tree);
        for op in OperatorId::ALL {
            let expected = oracle::expected(&prog, op);
            let got = targets(&prog, op).len();
            total += got;
            if expected != got {
                mismatches.push(format!(
                    "{} {op}: oracle {expected}, scanner {got}",
                    path.file_name().unwrap().to_string_lossy()
                ));
            }
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
    assert!(total > 500);
}
