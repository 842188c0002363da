use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative probability mass {value} at flat index {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("table not normalized: total mass {sum}")]
    NotNormalized { sum: f64 },
    #[error("shape mismatch: expected {expected} cells, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("table of {cells} cells exceeds the dense cap of {cap}")]
    TableTooLarge { cells: u128, cap: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),
    #[error("empty argument: {0}")]
    EmptyArgument(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid variable: {0}")]
    InvalidVariable(String),

    #[error("factorization graph contains a cycle through `{0}`")]
    CyclicStructure(String),

    #[error("equality has zero coefficient on `{0}`")]
    ZeroCoefficient(String),
    #[error("slack variable `{0}` already present in the system")]
    DuplicateSlackName(String),
    #[error("region is unbounded in the nonnegative orthant")]
    UnboundedRegion,
    #[error("vertex enumeration limited to dimension {max}, got {dim}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("system has a symbolic right-hand side; instantiate it first")]
    SymbolicRhs,
    #[error("script step {step} ({label}) diverges: {detail}")]
    ScriptStepMismatch { step: usize, label: String, detail: String },

    #[error("channel is not degraded")]
    NotDegraded,
    #[error("auxiliary joint inconsistent: {0}")]
    InconsistentAux(String),
    #[error("unknown corollary `{0}`")]
    UnknownCorollary(String),
    #[error("negative rate {0}")]
    NegativeRate(f64),
    #[error("sampling budget must be at least 1")]
    BudgetZero,

    #[error("{what} is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { what: String, eigenvalue: f64 },
    #[error("covariance exceeds the input cap (eigenvalue of S - K: {eigenvalue:e})")]
    CapExceeded { eigenvalue: f64 },
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("conditional covariance is singular")]
    SingularConditionalCovariance,

    #[error("finite-difference step too large: halving ratio {ratio}")]
    StepTooLarge { ratio: f64 },
    #[error("no sign change of the interpolation function on [0,1] (f(0)-c={f0:e}, f(1)-c={f1:e})")]
    NoRoot { f0: f64, f1: f64 },
    #[error("quadrature did not converge (Richardson gap {gap:e})")]
    QuadratureNonConvergent { gap: f64 },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
