use std::fmt;

/// Errors raised by the library. The variants map onto the CLI exit codes
/// (see [`Error::exit_code`]).
#[derive(Debug)]
pub enum Error {
    /// A caller violated an operation precondition (dimension mismatch,
    /// parameter out of range, ...).
    Contract(String),
    /// Incompatible or invalid configuration (oracle/instance mismatch,
    /// degenerate instance data, unknown names).
    Configuration(String),
    /// The instance is outside the domain of an operation (e.g. a tour on
    /// fewer than three cities).
    Domain(String),
    /// A size cap was exceeded (DP table, Held-Karp city limit, grid budget).
    Resource(String),
    /// A run exceeded its time budget.
    Timeout,
    /// A solution encoding violates a constraint of the instance.
    Feasibility(String),
    /// The measured envelope is positive where the reference envelope is
    /// zero, so the indicator ratio is unbounded.
    UnboundedIndicator(String),
    /// An internal invariant failed; always a bug.
    Internal(String),
    /// Malformed input text.
    Parse(String),
    Io(std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) | Error::Timeout => 3,
            Error::Feasibility(_) => 4,
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Contract(m) => write!(f, "contract violation: {m}"),
            Error::Configuration(m) => write!(f, "configuration error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Resource(m) => write!(f, "resource limit: {m}"),
            Error::Timeout => write!(f, "time budget exceeded"),
            Error::Feasibility(m) => write!(f, "infeasible solution: {m}"),
            Error::UnboundedIndicator(m) => write!(f, "unbounded indicator: {m}"),
            Error::Internal(m) => write!(f, "internal invariant violated: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
