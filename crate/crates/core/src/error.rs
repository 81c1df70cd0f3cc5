use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid spec field {path}: {message}")]
    SpecField { path: String, message: String },

    #[error("spec `{name}` rejected: {check} residual {max_residual:.3e} exceeds {threshold:.1e}")]
    SpecRejected {
        name: String,
        check: &'static str,
        max_residual: f64,
        threshold: f64,
    },

    #[error("unknown surface `{0}` (not a catalog name or readable spec file)")]
    UnknownSurface(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate frame: {0}")]
    Frame(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("evaluation failed at node {index} ({u:.6}, {v:.6}): {source}")]
    Node {
        index: usize,
        u: f64,
        v: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for a violated invariant, 2 for input, domain and I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 1,
            Error::Node { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
