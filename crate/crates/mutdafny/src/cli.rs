//! The `mutdafny` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mutdafny_core::mutate::{apply_target, ordinals, Mutant};
use mutdafny_core::resolve::resolve;
use mutdafny_core::scan::{scan, OperatorId};
use mutdafny_core::score::Status;
use mutdafny_core::syntax::parse_program;

use crate::campaign::{run_campaign, Job};
use crate::output::{entry, write_mutants, Manifest, SCHEMA_VERSION};
use crate::report::{CampaignReport, Format, Runtime};
use crate::verifier::{Classifier, StubVerdicts, VerifierAdapter, VerifierConfig, VerifierError};

#[derive(Parser, Debug)]
#[command(name = "mutdafny", version, about = "Mutation testing for Dafny programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List mutation targets.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write one file per mutant plus manifest.json.
    Mutate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "mutants")]
        out: PathBuf,
    },
    /// Generate mutants, verify them and report.
    Run {
        #[command(flatten)]
        common: Common,
        /// Keep mutants and reports here instead of a temporary directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Per-mutant verifier timeout in seconds.
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "text")]
        format: Vec<Format>,
        #[arg(long)]
        verifier_config: Option<PathBuf>,
        /// JSON map from mutant id to verdict, used instead of a verifier.
        #[arg(long)]
        stub_verdicts: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    file: PathBuf,
    /// Comma-separated operator names; all operators when absent.
    #[arg(long)]
    operators: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{file}: {msg}")]
    Parse { file: String, msg: String },
    #[error("unknown operator `{0}`; valid operators: {names}", names = operator_names())]
    Operator(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Verifier(#[from] VerifierError),
    #[error("original program is not verified ({status}){detail}")]
    Original { status: Status, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Operator(_) => 3,
            CliError::Io(_) | CliError::Verifier(_) => 4,
            CliError::Original { .. } => 5,
        }
    }
}

fn operator_names() -> String {
    OperatorId::ALL.iter().map(|o| o.as_str()).collect::<Vec<_>>().join(", ")
}

pub fn parse_operators(list: Option<&str>) -> Result<Vec<OperatorId>, CliError> {
    let Some(list) = list else {
        return Ok(OperatorId::ALL.to_vec());
    };
    let mut ops = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        ops.push(name.parse().map_err(|_| CliError::Operator(name.into()))?);
    }
    ops.sort();
    ops.dedup();
    Ok(ops)
}

struct Loaded {
    path: PathBuf,
    source: String,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(Loaded {
        path: path.to_owned(),
        source,
    })
}

/// Scans and applies every target, timing both phases.
fn generate(l: &Loaded, ops: &[OperatorId]) -> Result<(Vec<Mutant>, f64, f64), CliError> {
    let t0 = Instant::now();
    let tree = parse_program(&l.source).map_err(|e| CliError::Parse {
        file: l.path.display().to_string(),
        msg: e.to_string(),
    })?;
    let prog = resolve(&tree);
    let targets = scan(&prog, ops);
    let scan_secs = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let mutants = ordinals(&targets)
        .into_iter()
        .zip(&targets)
        .map(|(n, t)| apply_target(&l.source, t, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok((mutants, scan_secs, t1.elapsed().as_secs_f64()))
}

fn cmd_scan(common: &Common, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let ops = parse_operators(common.operators.as_deref())?;
    let l = load(&common.file)?;
    let (mutants, _, _) = generate(&l, &ops)?;
    let text = match format {
        Format::Json => {
            let manifest = Manifest {
                schema_version: SCHEMA_VERSION,
                file: l.path.display().to_string(),
                count: mutants.len(),
                mutants: mutants.iter().map(|m| entry(&m.id, &m.target, &m.replacement)).collect(),
            };
            let mut s = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            s.push('\n');
            s
        }
        _ => {
            let mut s = String::new();
            for m in &mutants {
                let t = &m.target;
                s.push_str(&format!(
                    "{} {}:{} {}\n",
                    t.operator, t.span.line, t.span.column, t.description
                ));
            }
            s.push_str(&format!("{} targets\n", mutants.len()));
            s
        }
    };
    write_out(out, &text)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write output: {e}")))
}

fn counts(mutants: &[Mutant], ops: &[OperatorId]) -> String {
    let mut s = String::new();
    for op in ops {
        let n = mutants.iter().filter(|m| m.operator == *op).count();
        if n > 0 {
            s.push_str(&format!("{op} {n}\n"));
        }
    }
    s.push_str(&format!("total {}\n", mutants.len()));
    s
}

fn cmd_mutate(common: &Common, dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let ops = parse_operators(common.operators.as_deref())?;
    let l = load(&common.file)?;
    let (mutants, _, _) = generate(&l, &ops)?;
    write_mutants(dir, &l.path, &mutants).map_err(|e| CliError::Io(e.to_string()))?;
    write_out(out, &counts(&mutants, &ops))
}

pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub timeout: Option<u64>,
    pub formats: Vec<Format>,
    pub verifier_config: Option<PathBuf>,
    pub stub_verdicts: Option<PathBuf>,
}

fn classifier(o: &RunOptions) -> Result<Box<dyn Classifier>, CliError> {
    if let Some(p) = &o.stub_verdicts {
        return Ok(Box::new(StubVerdicts::load(p)?));
    }
    let mut cfg = match &o.verifier_config {
        Some(p) => VerifierConfig::load(p)?,
        None => VerifierConfig::default(),
    };
    cfg.apply_env();
    if let Some(t) = o.timeout {
        cfg.timeout_seconds = t;
    }
    Ok(Box::new(VerifierAdapter::new(&cfg)?))
}

/// The whole pipeline for one file.
pub fn run_pipeline(file: &Path, ops: &[OperatorId], o: &RunOptions) -> Result<CampaignReport, CliError> {
    let l = load(file)?;
    let (mutants, scan_secs, mut mutate_secs) = generate(&l, ops)?;
    let classifier = classifier(o)?;
    let tmp;
    let dir = match &o.out {
        Some(d) => d.clone(),
        None => {
            tmp = tempfile::tempdir().map_err(|e| CliError::Io(format!("cannot create temporary directory: {e}")))?;
            tmp.path().to_owned()
        }
    };
    let t = Instant::now();
    write_mutants(&dir, &l.path, &mutants).map_err(|e| CliError::Io(e.to_string()))?;
    mutate_secs += t.elapsed().as_secs_f64();

    let t = Instant::now();
    let original = classifier.classify("original", &l.path)?;
    if original.status != Status::Alive {
        let detail = original.diagnostic.map(|d| format!(": {d}")).unwrap_or_default();
        return Err(CliError::Original {
            status: original.status,
            detail,
        });
    }
    let jobs: Vec<Job> = mutants
        .iter()
        .map(|m| Job {
            id: m.id.clone(),
            path: dir.join(crate::output::relative_path(&l.path, m)),
        })
        .collect();
    let verdicts = run_campaign(&jobs, classifier.as_ref(), o.jobs)?;
    let runtime = Runtime {
        scan: scan_secs,
        mutate: mutate_secs,
        analyze: t.elapsed().as_secs_f64(),
    };
    Ok(CampaignReport::new(&l.path.display().to_string(), ops, &mutants, verdicts, runtime))
}

fn cmd_run(common: &Common, o: &RunOptions, out: &mut dyn Write) -> Result<(), CliError> {
    let ops = parse_operators(common.operators.as_deref())?;
    let report = run_pipeline(&common.file, &ops, o)?;
    match &o.out {
        Some(dir) => {
            for f in &o.formats {
                let path = dir.join(format!("report.{}", f.extension()));
                std::fs::write(&path, report.render(*f))
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            write_out(out, &report.to_text())
        }
        None => {
            for f in &o.formats {
                write_out(out, &report.render(*f))?;
            }
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Scan { common, format } => cmd_scan(common, *format, out),
        Command::Mutate { common, out: dir } => cmd_mutate(common, dir, out),
        Command::Run {
            common,
            out: dir,
            jobs,
            timeout,
            format,
            verifier_config,
            stub_verdicts,
        } => {
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let o = RunOptions {
                out: dir.clone(),
                jobs: jobs.max(1),
                timeout: *timeout,
                formats: format.clone(),
                verifier_config: verifier_config.clone(),
                stub_verdicts: stub_verdicts.clone(),
            };
            cmd_run(common, &o, out)
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "mutdafny: {e}");
            e.exit_code()
        }
    }
}
