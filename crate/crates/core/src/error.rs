use alloc::string::String;
use core::fmt;

/// Crate-wide error type. Parse errors carry a position; everything else
/// carries enough context to be actionable from the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// DSL syntax or validation error with 1-based line/column.
    Parse { line: usize, col: usize, msg: String },
    /// A symbol was applied to the wrong number of children.
    ArityMismatch { symbol: String, expected: u8, got: u8 },
    /// Leaf labels of a tree are not a bijection onto 1..n.
    BadLeafLabels { detail: String },
    /// A relation mixes arities or weights.
    NotHomogeneous { detail: String },
    /// Permutation degree does not match the object it acts on.
    DegreeMismatch { expected: u8, got: u8 },
    /// Weight of a weak composition does not match the polynomial.
    WeightMismatch { expected: u32, got: u32 },
    /// Vectors of different dimensions were mixed.
    DimensionMismatch { left: usize, right: usize },
    /// The pairing passed to an orthogonal-complement computation is singular.
    DegeneratePairing,
    /// Requested builtin presentation does not exist.
    UnknownBuiltin(String),
    /// Generator arity outside the supported range for the requested operation.
    UnsupportedArity { symbol: String, arity: u8, max: u8 },
    /// Koszul/Manin operations require quadratic relations.
    NotQuadratic { detail: String },
    /// A sigma choice is malformed (wrong shape or degree).
    MalformedSigma { detail: String },
    /// A sigma choice violates the S_n-invariance admissibility condition.
    InadmissibleSigma { detail: String },
    /// A monomial was not found in the supplied basis.
    MonomialOutsideBasis { monomial: String },
    /// A soft resource guard was exceeded.
    ResourceGuard { detail: String },
    /// Anything else.
    Invalid { detail: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            Error::ArityMismatch { symbol, expected, got } => {
                write!(f, "arity mismatch: {symbol} takes {expected} arguments, got {got}")
            }
            Error::BadLeafLabels { detail } => write!(f, "bad leaf labels: {detail}"),
            Error::NotHomogeneous { detail } => write!(f, "relation not homogeneous: {detail}"),
            Error::DegreeMismatch { expected, got } => {
                write!(f, "permutation degree {got} does not match arity {expected}")
            }
            Error::WeightMismatch { expected, got } => {
                write!(f, "weak composition weight {got} does not match weight {expected}")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::DegeneratePairing => write!(f, "pairing matrix is degenerate"),
            Error::UnknownBuiltin(name) => write!(f, "unknown builtin operad: {name}"),
            Error::UnsupportedArity { symbol, arity, max } => {
                write!(f, "generator {symbol} has arity {arity}; at most {max} is supported here")
            }
            Error::NotQuadratic { detail } => write!(f, "not quadratic: {detail}"),
            Error::MalformedSigma { detail } => write!(f, "malformed sigma choice: {detail}"),
            Error::InadmissibleSigma { detail } => write!(f, "inadmissible sigma choice: {detail}"),
            Error::MonomialOutsideBasis { monomial } => {
                write!(f, "monomial {monomial} does not appear in the basis")
            }
            Error::ResourceGuard { detail } => write!(f, "resource guard exceeded: {detail}"),
            Error::Invalid { detail } => write!(f, "{detail}"),
        }
    }
}
