use std::path::PathBuf;

use serde::Serialize;

/// Front-end failure with a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Domain(weylkit_core::Error),
    #[error(transparent)]
    Solver(weylkit_core::Error),
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl From<weylkit_core::Error> for CliError {
    fn from(e: weylkit_core::Error) -> Self {
        match e {
            weylkit_core::Error::Parse(msg) => CliError::Parse(msg),
            e if e.is_solver() => CliError::Solver(e),
            e => CliError::Domain(e),
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::FileNotFound(path)
        } else {
            CliError::Io { path, source }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Domain(_) => "domain",
            CliError::Solver(_) => "solver",
            CliError::FileNotFound(_) => "file_not_found",
            CliError::Io { .. } => "io",
        }
    }

    /// 2 parse, 3 domain, 4 solver, 5 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Solver(_) => 4,
            CliError::FileNotFound(_) | CliError::Io { .. } => 5,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            exit_code: u8,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        let w = Wrapper { error: Body { kind: self.kind(), message: self.to_string(), exit_code: self.exit_code() } };
        serde_json::to_string(&w).expect("error JSON")
    }
}
