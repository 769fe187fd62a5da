use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mutdafny"));
    c.env_remove("MUTDAFNY_VERIFIER");
    c
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

/// A stand-in verifier: kills mutants that lost the `if`, hangs on
/// `SWS` mutants and verifies everything else.
fn fake_verifier(dir: &Path) -> PathBuf {
    let p = dir.join("fake-dafny.sh");
    std::fs::write(
        &p,
        r#"#!/bin/sh
case "$2" in
  *SWS-*) sleep 5 ;;
esac
if grep -q "if InArray" "$2"; then
  echo "Dafny program verifier finished with 3 verified, 0 errors"
else
  echo "x.dfy(7,0): Error: a postcondition could not be proved"
  echo "Dafny program verifier finished with 2 verified, 1 error"
fi
"#,
    )
    .unwrap();
    std::fs::set_permissions(&p, std::fs::Permissions::from_mode(0o755)).unwrap();
    p
}

#[test]
fn scan_listing_sdl() {
    let out = bin()
        .args(["scan", fixture("listing1_shared_elements.dfy").to_str().unwrap(), "--operators", "SDL"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("SDL 16:9 delete `if InArray"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dfy");
    std::fs::write(&bad, "method M( {").unwrap();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["scan", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["scan", fixture("empty.dfy").to_str().unwrap()]), 0);
    assert_eq!(code(&["scan", fixture("empty.dfy").to_str().unwrap(), "--operators", "NOPE"]), 3);
    assert_eq!(code(&["scan", "/no/such/file.dfy"]), 4);

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let listing = fixture("listing1_shared_elements.dfy");
    let out = blocker.join("sub");
    assert_eq!(code(&["mutate", listing.to_str().unwrap(), "--out", out.to_str().unwrap()]), 4);
}

#[test]
fn mutate_is_reproducible() {
    let listing = fixture("listing1_shared_elements.dfy");
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let st = bin()
            .args(["mutate", listing.to_str().unwrap(), "--out", d.path().to_str().unwrap()])
            .output()
            .unwrap();
        assert!(st.status.success());
    }
    let ma = std::fs::read(a.path().join("manifest.json")).unwrap();
    let mb = std::fs::read(b.path().join("manifest.json")).unwrap();
    assert_eq!(ma, mb);
    let manifest: Value = serde_json::from_slice(&ma).unwrap();
    let scan = bin()
        .args(["scan", listing.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    let scanned: Value = serde_json::from_slice(&scan.stdout).unwrap();
    assert_eq!(manifest["count"], scanned["count"]);
    for m in manifest["mutants"].as_array().unwrap() {
        let rel = m["path"].as_str().unwrap();
        let x = std::fs::read(a.path().join(rel)).unwrap();
        let y = std::fs::read(b.path().join(rel)).unwrap();
        assert_eq!(x, y, "{rel}");
    }
}

#[test]
fn run_with_process_verifier() {
    let dir = tempfile::tempdir().unwrap();
    let fake = fake_verifier(dir.path());
    let config = dir.path().join("verifier.json");
    let cfg = serde_json::json!({ "command": [fake.to_str().unwrap(), "verify", "{file}"], "timeout_seconds": 1 });
    std::fs::write(&config, cfg.to_string()).unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args([
            "run",
            fixture("listing1_shared_elements.dfy").to_str().unwrap(),
            "--operators",
            "SDL,SWS",
            "--verifier-config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--format",
            "json,csv",
            "--jobs",
            "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    let verdict = |id: &str| {
        report["mutants"]
            .as_array()
            .unwrap()
            .iter()
            .find(|m| m["id"] == id)
            .map(|m| m["verdict"].as_str().unwrap().to_string())
    };
    assert_eq!(verdict("SDL-16-9-1").as_deref(), Some("killed"));
    assert_eq!(verdict("SDL-17-13-1").as_deref(), Some("alive"));
    assert_eq!(verdict("SWS-10-6-1").as_deref(), Some("timedout"));
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("operator,generated,killed,survived,invalid,timedout\n"));
    let totals = &report["totals"];
    let sum: u64 = ["killed", "survived", "invalid", "timedout"].iter().map(|k| totals[k].as_u64().unwrap()).sum();
    assert_eq!(sum, totals["generated"].as_u64().unwrap());
    let survivors = report["survivors_with_postconditions"].as_array().unwrap();
    assert!(survivors.iter().any(|s| s == "SDL-17-13-1"));
}

#[test]
fn env_overrides_command_and_original_must_verify() {
    let dir = tempfile::tempdir().unwrap();
    let fake = fake_verifier(dir.path());
    let out = bin()
        .env("MUTDAFNY_VERIFIER", format!("{} verify", fake.display()))
        .args(["run", fixture("swv_circle.dfy").to_str().unwrap(), "--operators", "SWV"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5), "{}", String::from_utf8_lossy(&out.stderr));

    let missing = bin()
        .env("MUTDAFNY_VERIFIER", "/no/such/verifier")
        .args(["run", fixture("swv_circle.dfy").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(4));
}
