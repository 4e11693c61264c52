//! Output plumbing: atomic file writes (temp-then-rename) and the exit-code
//! contract. 0 = success, 2 = parse/input error, 3 = domain error from a
//! core operation, 4 = a campaign produced a confirmed candidate.

use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: files, JSON, flag values. Exit code 2.
    Parse(String),
    /// A core operation rejected the input. Exit code 3, message verbatim.
    Domain(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "input error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

pub fn parse_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Parse(e.to_string())
}

pub fn domain_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

/// Write bytes atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir).map_err(parse_err)?;
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(parse_err)?;
    std::fs::write(tmp.path(), contents).map_err(parse_err)?;
    tmp.persist(path).map_err(parse_err)?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Which report formats to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}
