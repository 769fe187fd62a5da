//! Mutant files on disk and the manifest that lists them.

use std::fs;
use std::path::{Path, PathBuf};

use mutdafny_core::mutate::Mutant;
use mutdafny_core::scan::MutationTarget;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub operator: String,
    pub line: u32,
    pub column: u32,
    pub original: String,
    pub replacement: String,
    pub description: String,
    /// Multi-span edit (swaps and deletions spread over several places).
    pub structured: bool,
    /// Relative to the output directory.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub file: String,
    pub count: usize,
    pub mutants: Vec<ManifestEntry>,
}

#[derive(Debug, thiserror::Error)]
#[error("{what} {}: {source}", path.display())]
pub struct EmitError {
    pub what: String,
    pub path: PathBuf,
    pub source: std::io::Error,
}

pub fn entry(id: &str, target: &MutationTarget, replacement: &str) -> ManifestEntry {
    ManifestEntry {
        id: id.into(),
        operator: target.operator.to_string(),
        line: target.span.line,
        column: target.span.column,
        original: target.original.clone(),
        replacement: replacement.into(),
        description: target.description.clone(),
        structured: !matches!(target.rewrite, mutdafny_core::scan::Rewrite::Replace(_)),
        path: None,
    }
}

pub fn stem(file: &Path) -> String {
    file.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "program".into())
}

/// Where a mutant goes: `<operator>/<stem>.<id>.dfy`.
pub fn relative_path(file: &Path, m: &Mutant) -> PathBuf {
    PathBuf::from(m.operator.as_str()).join(format!("{}.{}.dfy", stem(file), m.id))
}

/// Writes every mutant and `manifest.json` under `out`.
pub fn write_mutants(out: &Path, file: &Path, mutants: &[Mutant]) -> Result<Manifest, EmitError> {
    let io = |what: &str, path: &Path| {
        let what = what.to_string();
        let path = path.to_owned();
        move |source| EmitError { what, path, source }
    };
    fs::create_dir_all(out).map_err(io("cannot create", out))?;
    let mut entries = Vec::with_capacity(mutants.len());
    for m in mutants {
        let rel = relative_path(file, m);
        let full = out.join(&rel);
        let dir = full.parent().unwrap_or(out);
        fs::create_dir_all(dir).map_err(io("cannot create", dir))?;
        fs::write(&full, &m.text).map_err(io(&format!("mutant {}: cannot write", m.id), &full))?;
        let mut e = entry(&m.id, &m.target, &m.replacement);
        e.path = Some(rel.to_string_lossy().replace('\\', "/"));
        entries.push(e);
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        file: file.to_string_lossy().into_owned(),
        count: entries.len(),
        mutants: entries,
    };
    let path = out.join("manifest.json");
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    fs::write(&path, json).map_err(io("cannot write", &path))?;
    Ok(manifest)
}
