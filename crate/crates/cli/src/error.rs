use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("body spec {spec:?} at position {pos}: {msg}")]
    Parse { spec: String, pos: usize, msg: String },
    #[error("invalid body: {0}")]
    Body(affsurf::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("polytope file {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] affsurf::Error),
}

impl CliError {
    /// 2 for anything the user can fix on the command line, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            _ => 2,
        }
    }

    /// Stable identifier for error rows: the variant name, with library
    /// errors qualified by their own variant.
    pub fn code(&self) -> String {
        match self {
            CliError::Parse { .. } => "parse".into(),
            CliError::Body(e) => format!("body.{}", variant(e)),
            CliError::Io { .. } => "io".into(),
            CliError::Json { .. } => "json".into(),
            CliError::Usage(_) => "usage".into(),
            CliError::Numeric(e) => format!("numeric.{}", variant(e)),
        }
    }
}

fn variant(e: &affsurf::Error) -> String {
    let dbg = format!("{e:?}");
    let end = dbg.find(|c: char| !c.is_alphanumeric()).unwrap_or(dbg.len());
    dbg[..end].to_string()
}
