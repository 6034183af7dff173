//! The operations behind the `flowdup` command line.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::dot::{occurrence_dot, occurrence_file_name};
use crate::flow::{parse_corpus, Corpus, IngestError};
use crate::generator::{generate, GenError, GenSpec};
use crate::pipeline::{corpus_stats, mine_corpus, CorpusStats};
use crate::report::{MiningConfig, Report};
use crate::weight::Weight;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Ingest(#[from] IngestError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Gen(#[from] GenError),
    #[error("malformed report {path}: {message}")]
    Report { path: String, message: String },
    #[error("report names flow {0:?}, which the corpus does not contain")]
    UnknownFlow(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn read_corpus(path: &Path) -> Result<Corpus, CliError> {
    let bytes = fs::read(path).map_err(io_error(path))?;
    Ok(parse_corpus(&bytes)?)
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_error(path))?;
    tmp.write_all(contents).map_err(io_error(path))?;
    tmp.persist(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e.error })?;
    Ok(())
}

pub fn cmd_mine(config: &MiningConfig, corpus: &Path, output: &Path) -> Result<Report, CliError> {
    config.validate().map_err(CliError::Config)?;
    let corpus = read_corpus(corpus)?;
    let report = mine_corpus(&corpus, config)?;
    write_atomic(output, report.to_json().as_bytes())?;
    Ok(report)
}

pub fn cmd_stats(corpus: &Path, beta: f64) -> Result<CorpusStats, CliError> {
    let beta = Weight::from_f64(beta).ok_or_else(|| CliError::Config(format!("invalid beta {beta}")))?;
    corpus_stats(&read_corpus(corpus)?, beta).map_err(CliError::from)
}

/// Writes the corpus to `output` and, when given, the planting manifest to
/// `manifest`.
pub fn cmd_gen(spec: &GenSpec, output: &Path, manifest: Option<&Path>) -> Result<(), CliError> {
    let generated = generate(spec)?;
    let mut text = serde_json::to_string_pretty(&generated.corpus).expect("corpus serializes");
    text.push('\n');
    write_atomic(output, text.as_bytes())?;
    if let Some(path) = manifest {
        let mut text = serde_json::to_string_pretty(&generated.manifest).expect("manifest serializes");
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
    }
    Ok(())
}

/// Writes one DOT file per pattern occurrence into `out_dir` and returns
/// their paths.
pub fn cmd_export_dot(report: &Path, corpus: &Path, out_dir: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    let text = fs::read_to_string(report).map_err(io_error(report))?;
    let report = Report::from_json(&text)
        .map_err(|e| CliError::Report { path: report.display().to_string(), message: e.to_string() })?;
    let corpus = read_corpus(corpus)?;
    let mut jobs = Vec::new();
    for p in &report.patterns {
        for flow_id in p.occurrences.keys() {
            let flow = corpus.flows.iter().find(|f| &f.id == flow_id).ok_or_else(|| CliError::UnknownFlow(flow_id.clone()))?;
            jobs.push((out_dir.join(occurrence_file_name(p.id, flow_id)), occurrence_dot(flow, p)));
        }
    }
    if !jobs.is_empty() {
        fs::create_dir_all(out_dir).map_err(io_error(out_dir))?;
    }
    for (path, dot) in &jobs {
        write_atomic(path, dot.as_bytes())?;
    }
    Ok(jobs.into_iter().map(|(p, _)| p).collect())
}
