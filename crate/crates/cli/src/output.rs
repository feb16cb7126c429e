//! File emission.
//!
//! Data files never carry timestamps. JSON documents get a `meta` block and
//! CSV tables a `<stem>.meta.json` companion, both suppressed by `--no-meta`,
//! so two runs with `--no-meta` are byte-identical.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::CliError;
use crate::{Format, Sink};

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated_unix_s: u64,
    pub threads: usize,
}

impl Meta {
    pub fn now(threads: usize) -> Self {
        Meta {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            generated_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            threads,
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a Meta>,
    #[serde(flatten)]
    body: &'a T,
}

pub fn json_string<T: Serialize>(body: &T, meta: Option<&Meta>) -> String {
    let mut s = serde_json::to_string_pretty(&Document { meta, body }).expect("output serialises");
    s.push('\n');
    s
}

pub fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Config(format!("csv error: {e}")))
}

/// `<stem>.<suffix>` next to `path`.
pub fn companion(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Config(format!("{}: cannot write: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Writes a table as CSV, or the JSON document when `--format json`.
pub fn emit<R: Serialize, J: Serialize>(sink: &Sink, rows: &[R], document: &J) -> Result<(), CliError> {
    let path = sink.out.as_deref();
    match sink.format {
        Format::Csv => {
            write_to(path, &csv_bytes(rows)?)?;
            if let (Some(p), Some(meta)) = (path, &sink.meta) {
                let mut text = serde_json::to_string_pretty(meta).expect("meta serialises");
                text.push('\n');
                write_to(Some(&companion(p, "meta.json")), text.as_bytes())?;
            }
            Ok(())
        }
        Format::Json => write_to(path, json_string(document, sink.meta.as_ref()).as_bytes()),
    }
}

/// Writes a JSON document regardless of `--format`.
pub fn emit_json<J: Serialize>(path: Option<&Path>, document: &J, meta: Option<&Meta>) -> Result<(), CliError> {
    write_to(path, json_string(document, meta).as_bytes())
}
