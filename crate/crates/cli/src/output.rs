//! Writing command results to stdout or an output directory.

use std::fs;

use thiserror::Error;

use crate::{Format, Output};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] liexp_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// One command result: a JSON document and its LaTeX rendering.
pub struct Artifact {
    pub stem: String,
    pub json: serde_json::Value,
    pub latex: String,
}

pub fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// With `--out`, writes `<stem>.json` / `<stem>.tex` and prints `summary`;
/// otherwise prints the selected formats and sends `summary` to stderr.
pub fn emit(out: &Output, artifact: &Artifact, summary: &str) -> CliResult<()> {
    let json = matches!(out.format, Format::Json | Format::Both);
    let latex = matches!(out.format, Format::Latex | Format::Both);
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            if json {
                fs::write(dir.join(format!("{}.json", artifact.stem)), pretty(&artifact.json))?;
            }
            if latex {
                fs::write(dir.join(format!("{}.tex", artifact.stem)), &artifact.latex)?;
            }
            print!("{summary}");
        }
        None => {
            if json {
                print!("{}", pretty(&artifact.json));
            }
            if latex {
                print!("{}", artifact.latex);
            }
            eprint!("{summary}");
        }
    }
    Ok(())
}
