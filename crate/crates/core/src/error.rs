use std::fmt;
use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the statistics, sampling and simulation layers.
#[derive(Debug)]
pub enum Error {
    /// An observation is zero or negative, outside the support of a log-symmetric law.
    NonPositiveValue { index: usize, value: f64 },
    /// An observation is NaN or infinite.
    NonFiniteValue { index: usize },
    /// Fewer than two observations were supplied.
    TooFewObservations { n: usize },
    /// The sample is too short for the requested kernel degree or jackknife.
    SampleTooSmall { n: usize, required: usize },
    /// `kernel_h` received the wrong number of points.
    WrongArity { expected: usize, got: usize },
    /// An argument lies outside its mathematical domain.
    DomainError(String),
    /// A distribution parameter is invalid.
    InvalidParameter(String),
    /// The pseudo-values all have the same sign, so zero is outside their convex hull.
    Infeasible,
    /// The jackknife variance is zero; the normal approximation is undefined.
    DegenerateVariance,
    /// All observations are equal; no scale can be estimated.
    DegenerateSample,
    /// A simulation or CLI configuration is inconsistent.
    Config(String),
    /// A data file line could not be parsed.
    Parse { line: usize, message: String },
    Io(io::Error),
    Csv(csv::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveValue { index, value } => write!(
                f,
                "observation {} is {value}; log-symmetry requires strictly positive data",
                index + 1
            ),
            Error::NonFiniteValue { index } => {
                write!(f, "observation {} is not a finite number", index + 1)
            }
            Error::TooFewObservations { n } => {
                write!(f, "at least 2 observations are required, got {n}")
            }
            Error::SampleTooSmall { n, required } => {
                write!(f, "sample size {n} is too small: at least {required} observations required")
            }
            Error::WrongArity { expected, got } => {
                write!(f, "kernel expects {expected} points, got {got}")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Infeasible => write!(
                f,
                "empirical likelihood is infeasible: zero is not inside the convex hull of the constraint values"
            ),
            Error::DegenerateVariance => write!(f, "jackknife variance estimate is zero"),
            Error::DegenerateSample => write!(f, "all observations are equal"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::Io(err) => write!(f, "I/O error: {err}"),
            Error::Csv(err) => write!(f, "CSV error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            Error::Csv(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err)
    }
}
