use std::fmt;

/// Errors shared across the crate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    /// A polynomial was evaluated without a value for one of its parameters.
    MissingParameter(String),
    /// Root counting was asked for the zero polynomial.
    ZeroPolynomial,
    /// Root isolation was asked for a polynomial with no real roots.
    NoRealRoot,
    /// Row/column selections or operand shapes do not line up.
    DimensionMismatch(String),
    NotSymmetric,
    IndexOutOfRange {
        index: (usize, usize),
        rows: usize,
        cols: usize,
    },
    /// Parameters outside the domain of a constructor or formula.
    BadParams(String),
    /// Claimed rank exceeds what the shape allows.
    BadRank { claimed: usize, max: usize },
    ShapeMismatch(String),
    SingularMatrix,
    /// An entry has total degree above what the operation admits.
    DegreeTooHigh { row: usize, col: usize, degree: u32 },
    /// A polynomial identity that must hold did not; indicates a bug.
    IdentityFails(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingParameter(p) => write!(f, "missing value for parameter `{p}`"),
            Error::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            Error::NoRealRoot => write!(f, "polynomial has no real root"),
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::IndexOutOfRange { index, rows, cols } => write!(
                f,
                "index ({}, {}) out of range for a {rows}x{cols} matrix",
                index.0, index.1
            ),
            Error::BadParams(msg) => write!(f, "bad parameters: {msg}"),
            Error::BadRank { claimed, max } => {
                write!(f, "claimed rank {claimed} exceeds maximum possible rank {max}")
            }
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::DegreeTooHigh { row, col, degree } => write!(
                f,
                "entry ({row}, {col}) has degree {degree}, expected at most 1"
            ),
            Error::IdentityFails(msg) => write!(f, "identity check failed: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
