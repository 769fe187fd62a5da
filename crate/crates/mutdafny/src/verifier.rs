//! Running the external verifier and classifying its output.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use mutdafny_core::score::Status;
use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wait_timeout::ChildExt;

pub const DEFAULT_TIMEOUT_SECS: u64 = 20;
pub const VERIFIER_ENV: &str = "MUTDAFNY_VERIFIER";

#[derive(Debug, thiserror::Error)]
pub enum VerifierError {
    #[error("cannot start verifier `{program}`: {source}")]
    Spawn {
        program: String,
        source: std::io::Error,
    },
    #[error("verifier command is empty")]
    EmptyCommand,
    #[error("bad pattern `{0}`: {1}")]
    Pattern(String, regex::Error),
    #[error("cannot read verifier config {path}: {msg}")]
    Config { path: PathBuf, msg: String },
}

/// Regular expressions over the verifier's combined stdout and stderr.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Patterns {
    pub invalid: String,
    pub killed: String,
    pub timed_out: String,
    pub verified: String,
}

impl Default for Patterns {
    fn default() -> Self {
        Patterns {
            invalid: r"\d+ (parse|resolution/type) errors? detected".into(),
            killed: r"finished with \d+ verified, [1-9]\d* errors?".into(),
            timed_out: r"finished with \d+ verified, 0 errors?, [1-9]\d* time ?outs?".into(),
            verified: r"finished with [1-9]\d* verified, 0 errors?\s*$".into(),
        }
    }
}

/// Exit-code lists used when `classify_by` is `exit_code`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ExitCodes {
    pub alive: Vec<i32>,
    pub killed: Vec<i32>,
    pub invalid: Vec<i32>,
}

impl Default for ExitCodes {
    fn default() -> Self {
        ExitCodes {
            alive: vec![0],
            killed: vec![4],
            invalid: vec![1, 2, 3],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifyBy {
    #[default]
    Output,
    ExitCode,
}

/// The JSON adapter config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifierConfig {
    pub command: Vec<String>,
    pub timeout_seconds: u64,
    pub patterns: Patterns,
    pub classify_by: ClassifyBy,
    pub exit_codes: ExitCodes,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        VerifierConfig {
            command: vec!["dafny".into(), "verify".into(), "{file}".into()],
            timeout_seconds: DEFAULT_TIMEOUT_SECS,
            patterns: Patterns::default(),
            classify_by: ClassifyBy::Output,
            exit_codes: ExitCodes::default(),
        }
    }
}

impl VerifierConfig {
    pub fn load(path: &Path) -> Result<Self, VerifierError> {
        let err = |msg: String| VerifierError::Config {
            path: path.to_owned(),
            msg,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| err(e.to_string()))
    }

    /// Replaces the command with the whitespace-separated value of
    /// `MUTDAFNY_VERIFIER` when it is set.
    pub fn apply_env(&mut self) {
        if let Ok(v) = std::env::var(VERIFIER_ENV) {
            let words: Vec<String> = v.split_whitespace().map(String::from).collect();
            if !words.is_empty() {
                self.command = words;
            }
        }
    }
}

/// One classification.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub exit_code: Option<i32>,
    /// sha256 of the captured output, hex.
    pub output_digest: String,
    pub seconds: f64,
    /// Set when the output matched no pattern.
    pub diagnostic: Option<String>,
}

impl Verdict {
    pub fn fixed(status: Status) -> Self {
        Verdict {
            status,
            exit_code: None,
            output_digest: String::new(),
            seconds: 0.0,
            diagnostic: None,
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Anything that can produce a verdict for a mutant file.
pub trait Classifier: Sync {
    fn classify(&self, id: &str, file: &Path) -> Result<Verdict, VerifierError>;
}

pub struct VerifierAdapter {
    command: Vec<String>,
    timeout: Duration,
    invalid: Regex,
    killed: Regex,
    timed_out: Regex,
    verified: Regex,
    classify_by: ClassifyBy,
    exit_codes: ExitCodes,
}

impl VerifierAdapter {
    pub fn new(config: &VerifierConfig) -> Result<Self, VerifierError> {
        if config.command.is_empty() {
            return Err(VerifierError::EmptyCommand);
        }
        let re = |p: &str| {
            regex::RegexBuilder::new(p)
                .multi_line(true)
                .build()
                .map_err(|e| VerifierError::Pattern(p.into(), e))
        };
        Ok(VerifierAdapter {
            command: config.command.clone(),
            timeout: Duration::from_secs(config.timeout_seconds),
            invalid: re(&config.patterns.invalid)?,
            killed: re(&config.patterns.killed)?,
            timed_out: re(&config.patterns.timed_out)?,
            verified: re(&config.patterns.verified)?,
            classify_by: config.classify_by,
            exit_codes: config.exit_codes.clone(),
        })
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    fn argv(&self, file: &Path) -> Vec<String> {
        let f = file.to_string_lossy();
        let mut argv: Vec<String> = self.command.iter().map(|a| a.replace("{file}", &f)).collect();
        if !self.command.iter().any(|a| a.contains("{file}")) {
            argv.push(f.into_owned());
        }
        argv
    }

    /// Status for a finished run. `None` means nothing matched.
    pub fn classify_output(&self, output: &str, exit_code: Option<i32>) -> Option<Status> {
        if self.classify_by == ClassifyBy::ExitCode {
            let code = exit_code?;
            let ec = &self.exit_codes;
            return if ec.invalid.contains(&code) {
                Some(Status::Invalid)
            } else if ec.killed.contains(&code) {
                Some(Status::Killed)
            } else if ec.alive.contains(&code) {
                Some(Status::Alive)
            } else {
                None
            };
        }
        if self.invalid.is_match(output) {
            Some(Status::Invalid)
        } else if self.killed.is_match(output) {
            Some(Status::Killed)
        } else if self.timed_out.is_match(output) {
            Some(Status::TimedOut)
        } else if self.verified.is_match(output) {
            Some(Status::Alive)
        } else {
            None
        }
    }
}

impl Classifier for VerifierAdapter {
    fn classify(&self, _id: &str, file: &Path) -> Result<Verdict, VerifierError> {
        let argv = self.argv(file);
        let start = Instant::now();
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| VerifierError::Spawn {
                program: argv[0].clone(),
                source,
            })?;
        let out = child.stdout.take();
        let err = child.stderr.take();
        let readers = [out.map(reader), err.map(reader)];
        let waited = child.wait_timeout(self.timeout);
        let timed_out = matches!(waited, Ok(None));
        if timed_out {
            let _ = child.kill();
        }
        let status = match waited {
            Ok(Some(s)) => Some(s),
            _ => child.wait().ok(),
        };
        let seconds = start.elapsed().as_secs_f64();
        let mut output = Vec::new();
        if !timed_out {
            for r in readers.into_iter().flatten() {
                output.extend(r.join().unwrap_or_default());
            }
        }
        let exit_code = if timed_out { None } else { status.and_then(|s| s.code()) };
        let text = String::from_utf8_lossy(&output);
        let (status, diagnostic) = if timed_out {
            (Status::TimedOut, None)
        } else {
            match self.classify_output(&text, exit_code) {
                Some(s) => (s, None),
                None => (Status::Invalid, Some(unclassified(&text, exit_code))),
            }
        };
        Ok(Verdict {
            status,
            exit_code,
            output_digest: digest(&output),
            seconds,
            diagnostic,
        })
    }
}

fn reader<R: Read + Send + 'static>(mut r: R) -> std::thread::JoinHandle<Vec<u8>> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        buf
    })
}

fn unclassified(output: &str, code: Option<i32>) -> String {
    let last = output.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or("");
    match code {
        Some(c) => format!("unrecognised verifier output (exit {c}): {last}"),
        None => format!("unrecognised verifier output: {last}"),
    }
}

/// Verdicts read from a JSON object mapping mutant ids to status names.
/// The key `original` covers the unmutated file, which is alive unless
/// listed, and `*` every mutant id not listed.
#[derive(Clone, Debug, Default)]
pub struct StubVerdicts {
    map: BTreeMap<String, Status>,
}

impl StubVerdicts {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: BTreeMap<String, String> = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut map = BTreeMap::new();
        for (k, v) in raw {
            let s: Status = v.parse().map_err(|_| format!("unknown verdict `{v}` for `{k}`"))?;
            map.insert(k, s);
        }
        Ok(StubVerdicts { map })
    }

    pub fn load(path: &Path) -> Result<Self, VerifierError> {
        let err = |msg: String| VerifierError::Config {
            path: path.to_owned(),
            msg,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        Self::from_json(&text).map_err(err)
    }

    pub fn insert(&mut self, id: &str, status: Status) {
        self.map.insert(id.into(), status);
    }
}

impl Classifier for StubVerdicts {
    fn classify(&self, id: &str, _file: &Path) -> Result<Verdict, VerifierError> {
        let found = match id {
            "original" => self.map.get(id),
            _ => self.map.get(id).or_else(|| self.map.get("*")),
        };
        Ok(match (found, id) {
            (Some(s), _) => Verdict::fixed(*s),
            (None, "original") => Verdict::fixed(Status::Alive),
            (None, _) => Verdict {
                diagnostic: Some("no stub verdict".into()),
                ..Verdict::fixed(Status::Invalid)
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adapter() -> VerifierAdapter {
        VerifierAdapter::new(&VerifierConfig::default()).unwrap()
    }

    #[test]
    fn summary_lines() {
        let a = adapter();
        let alive = "\nDafny program verifier finished with 3 verified, 0 errors\n";
        assert_eq!(a.classify_output(alive, Some(0)), Some(Status::Alive));
        let killed = "x.dfy(4,0): Error: a postcondition could not be proved\n\nDafny program verifier finished with 2 verified, 1 error\n";
        assert_eq!(a.classify_output(killed, Some(4)), Some(Status::Killed));
        let killed2 = "Dafny program verifier finished with 2 verified, 1 errors";
        assert_eq!(a.classify_output(killed2, Some(4)), Some(Status::Killed));
        let parse = "x.dfy(3,4): Error: invalid UpdateStmt\n1 parse errors detected in x.dfy\n";
        assert_eq!(a.classify_output(parse, Some(2)), Some(Status::Invalid));
        let res = "2 resolution/type errors detected in x.dfy";
        assert_eq!(a.classify_output(res, Some(2)), Some(Status::Invalid));
        let to = "Dafny program verifier finished with 1 verified, 0 errors, 1 time out";
        assert_eq!(a.classify_output(to, Some(4)), Some(Status::TimedOut));
        let none = "Dafny program verifier finished with 0 verified, 0 errors";
        assert_eq!(a.classify_output(none, Some(0)), None);
    }

    #[test]
    fn exit_code_mode() {
        let cfg = VerifierConfig {
            classify_by: ClassifyBy::ExitCode,
            ..VerifierConfig::default()
        };
        let a = VerifierAdapter::new(&cfg).unwrap();
        assert_eq!(a.classify_output("", Some(0)), Some(Status::Alive));
        assert_eq!(a.classify_output("", Some(4)), Some(Status::Killed));
        assert_eq!(a.classify_output("", Some(2)), Some(Status::Invalid));
        assert_eq!(a.classify_output("", Some(9)), None);
    }

    #[test]
    fn file_placeholder() {
        let a = adapter();
        assert_eq!(a.argv(Path::new("m.dfy")), ["dafny", "verify", "m.dfy"]);
        let cfg = VerifierConfig {
            command: vec!["check".into()],
            ..VerifierConfig::default()
        };
        let b = VerifierAdapter::new(&cfg).unwrap();
        assert_eq!(b.argv(Path::new("m.dfy")), ["check", "m.dfy"]);
    }

    #[test]
    fn config_defaults_fill_in() {
        let cfg: VerifierConfig = serde_json::from_str(r#"{"timeout_seconds": 5}"#).unwrap();
        assert_eq!(cfg.timeout_seconds, 5);
        assert_eq!(cfg.command[0], "dafny");
    }

    #[test]
    fn stub_lookup() {
        let s = StubVerdicts::from_json(r#"{"A-1-1-1": "killed", "*": "survived"}"#).unwrap();
        let p = Path::new("x");
        assert_eq!(s.classify("A-1-1-1", p).unwrap().status, Status::Killed);
        assert_eq!(s.classify("B-1-1-1", p).unwrap().status, Status::Alive);
        assert!(StubVerdicts::from_json(r#"{"x": "maybe"}"#).is_err());
    }
}
