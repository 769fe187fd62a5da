//! Campaign reports in text, JSON and CSV.

use std::collections::BTreeMap;
use std::fmt::Write;

use mutdafny_core::mutate::Mutant;
use mutdafny_core::scan::OperatorId;
use mutdafny_core::score::{MutationScore, Status};
use serde_json::{json, Value};

use crate::output::{entry, ManifestEntry, SCHEMA_VERSION};
use crate::verifier::{digest, Verdict};

pub const CSV_HEADER: &str = "operator,generated,killed,survived,invalid,timedout";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Runtime {
    pub scan: f64,
    pub mutate: f64,
    pub analyze: f64,
}

impl Runtime {
    pub fn total(&self) -> f64 {
        self.scan + self.mutate + self.analyze
    }
}

#[derive(Clone, Debug)]
pub struct MutantResult {
    pub entry: ManifestEntry,
    pub callable: String,
    pub callable_has_postcondition: bool,
    pub text_digest: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub file: String,
    pub operators: Vec<OperatorId>,
    pub mutants: Vec<MutantResult>,
    pub runtime: Runtime,
}

fn pct(n: usize, d: usize) -> Option<f64> {
    (d > 0).then(|| (n as f64 * 10000.0 / d as f64).round() / 100.0)
}

impl CampaignReport {
    /// `verdicts` pairs with `mutants` by position.
    pub fn new(
        file: &str,
        operators: &[OperatorId],
        mutants: &[Mutant],
        verdicts: Vec<(String, Verdict)>,
        runtime: Runtime,
    ) -> Self {
        let mutants = mutants
            .iter()
            .zip(verdicts)
            .map(|(m, (id, verdict))| {
                debug_assert_eq!(m.id, id);
                MutantResult {
                    entry: entry(&m.id, &m.target, &m.replacement),
                    callable: m.target.callable.clone(),
                    callable_has_postcondition: m.target.callable_has_postcondition,
                    text_digest: digest(m.text.as_bytes()),
                    verdict,
                }
            })
            .collect();
        let mut operators = operators.to_vec();
        operators.sort();
        operators.dedup();
        CampaignReport {
            file: file.into(),
            operators,
            mutants,
            runtime,
        }
    }

    pub fn rows(&self) -> Vec<(OperatorId, MutationScore)> {
        self.operators
            .iter()
            .map(|&op| {
                let s = MutationScore::from_statuses(
                    self.mutants
                        .iter()
                        .filter(|m| m.entry.operator == op.as_str())
                        .map(|m| m.verdict.status),
                );
                (op, s)
            })
            .collect()
    }

    pub fn totals(&self) -> MutationScore {
        let mut t = MutationScore::default();
        for (_, s) in self.rows() {
            t.merge(&s);
        }
        t
    }

    /// Alive mutants inside callables that have an `ensures` clause.
    pub fn survivors_with_postconditions(&self) -> Vec<&MutantResult> {
        self.mutants
            .iter()
            .filter(|m| m.verdict.status == Status::Alive && m.callable_has_postcondition)
            .collect()
    }

    /// Groups of mutant ids whose texts are identical.
    pub fn duplicate_texts(&self) -> Vec<Vec<String>> {
        let mut by: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for m in &self.mutants {
            by.entry(&m.text_digest).or_default().push(m.entry.id.clone());
        }
        let mut groups: Vec<Vec<String>> = by.into_values().filter(|g| g.len() > 1).collect();
        groups.sort();
        groups
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Value {
        let row = |name: &str, s: &MutationScore| {
            let m = s.total();
            json!({
                "operator": name,
                "generated": m,
                "killed": s.killed,
                "survived": s.survived,
                "invalid": s.invalid,
                "timedout": s.timed_out,
                "killed_pct": pct(s.killed, m),
                "survived_pct": pct(s.survived, m),
                "invalid_pct": pct(s.invalid, m),
                "timedout_pct": pct(s.timed_out, m),
            })
        };
        let rows: Vec<Value> = self.rows().iter().map(|(op, s)| row(op.as_str(), s)).collect();
        let t = self.totals();
        let mutants: Vec<Value> = self
            .mutants
            .iter()
            .map(|m| {
                json!({
                    "id": m.entry.id,
                    "operator": m.entry.operator,
                    "line": m.entry.line,
                    "column": m.entry.column,
                    "original": m.entry.original,
                    "replacement": m.entry.replacement,
                    "callable": m.callable,
                    "verdict": m.verdict.status.as_str(),
                    "exit_code": m.verdict.exit_code,
                    "output_digest": m.verdict.output_digest,
                    "seconds": m.verdict.seconds,
                    "diagnostic": m.verdict.diagnostic,
                })
            })
            .collect();
        let survivors: Vec<&str> = self
            .survivors_with_postconditions()
            .iter()
            .map(|m| m.entry.id.as_str())
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "file": self.file,
            "rows": rows,
            "totals": row("total", &t),
            "mutation_score": t.score(),
            "killed_ratio": t.killed_ratio(),
            "runtime": {
                "scan_seconds": self.runtime.scan,
                "mutate_seconds": self.runtime.mutate,
                "analyze_seconds": self.runtime.analyze,
                "total_seconds": self.runtime.total(),
            },
            "survivors_with_postconditions": survivors,
            "duplicate_texts": self.duplicate_texts(),
            "mutants": mutants,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let line = |out: &mut String, name: &str, s: &MutationScore| {
            let _ = writeln!(
                out,
                "{name},{},{},{},{},{}",
                s.total(),
                s.killed,
                s.survived,
                s.invalid,
                s.timed_out
            );
        };
        for (op, s) in self.rows() {
            line(&mut out, op.as_str(), &s);
        }
        line(&mut out, "total", &self.totals());
        out
    }

    pub fn to_text(&self) -> String {
        let cell = |n: usize, m: usize| match pct(n, m) {
            Some(p) => format!("{n} ({p:.2}%)"),
            None => n.to_string(),
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.file);
        let _ = writeln!(
            out,
            "{:<8} {:>9} {:>16} {:>16} {:>16} {:>16}",
            "operator", "generated", "killed", "survived", "invalid", "timedout"
        );
        let mut line = |name: &str, s: &MutationScore| {
            let m = s.total();
            let _ = writeln!(
                out,
                "{:<8} {:>9} {:>16} {:>16} {:>16} {:>16}",
                name,
                m,
                cell(s.killed, m),
                cell(s.survived, m),
                cell(s.invalid, m),
                cell(s.timed_out, m)
            );
        };
        for (op, s) in self.rows() {
            if s.total() > 0 {
                line(op.as_str(), &s);
            }
        }
        let t = self.totals();
        line("total", &t);
        let show = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.4}"));
        let _ = writeln!(out, "mutation score K/(K+S): {}", show(t.score()));
        let _ = writeln!(out, "killed ratio K/M:       {}", show(t.killed_ratio()));
        let r = self.runtime;
        let _ = writeln!(
            out,
            "runtime: scan {:.3}s, mutate {:.3}s, analyze {:.3}s, total {:.3}s",
            r.scan,
            r.mutate,
            r.analyze,
            r.total()
        );
        let survivors = self.survivors_with_postconditions();
        if !survivors.is_empty() {
            let _ = writeln!(out, "survivors in callables with postconditions:");
            for m in survivors {
                let _ = writeln!(out, "  {} in {}: {}", m.entry.id, m.callable, m.entry.description);
            }
        }
        for g in self.duplicate_texts() {
            let _ = writeln!(out, "identical mutants: {}", g.join(", "));
        }
        out
    }
}
