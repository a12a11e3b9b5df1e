use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ejnet::broadcast::{Algorithm, HalfDuplexViolation};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ejnet::Error),
    #[error("half-duplex check failed: {0}")]
    HalfDuplex(#[from] HalfDuplexViolation),
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(ejnet::Error::BudgetExceeded { .. }) => 3,
            CliError::Core(ejnet::Error::Invariant(_)) | CliError::HalfDuplex(_) => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// `runs/t.csv` becomes `runs/t-improved.csv`.
pub fn with_algorithm(path: &Path, algorithm: Algorithm) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{}.{}", algorithm.name(), ext.to_string_lossy()),
        None => format!("{stem}-{}", algorithm.name()),
    };
    path.with_file_name(name)
}

/// Writes `bytes` to `path`, or to stdout when there is no path.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV");
    for r in rows {
        w.write_record(r).expect("in-memory CSV");
    }
    w.into_inner().expect("in-memory CSV")
}
