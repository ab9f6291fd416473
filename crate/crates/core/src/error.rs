use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    DegreeCapExceeded { degree: u32, cap: u32 },
    DuplicateMonomial,
    EmptyInput(&'static str),
    InvalidArgument(String),
    /// The construction needs `n < s`.
    ActiveCountEqualsSize { n: usize, s: usize },
    /// The oracle could not decide a query within its configured limits.
    OracleUnknown(String),
    /// A certified query contradicted a precondition (for example `alpha >= 1`).
    CertificationFailed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DegreeCapExceeded { degree, cap } => {
                write!(f, "total degree {degree} exceeds the configured cap {cap}")
            }
            Error::DuplicateMonomial => f.write_str("duplicate exponent vector"),
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::ActiveCountEqualsSize { n, s } => write!(
                f,
                "at most {n} constraints are active at a point, but the system has only {s} \
                 polynomials; the reduction requires n < s"
            ),
            Error::OracleUnknown(msg) => write!(f, "oracle could not decide: {msg}"),
            Error::CertificationFailed(msg) => write!(f, "certification failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
