use alloc::string::String;
use core::fmt;

/// Errors surfaced by the exact kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Composite characteristic passed to a field constructor.
    InvalidCharacteristic(u64),
    /// The defining polynomial is reducible, so the quotient is not a field.
    NotAField(String),
    /// Shape mismatch in a matrix or tensor operation.
    DimensionMismatch { expected: usize, got: usize },
    /// Mixed arithmetic between GF(p) and rational scalars, or two different p.
    FieldMismatch(String),
    /// A linear system has no solution.
    NoSolution,
    /// No invertible bimodule map M -> M** was found.
    NoSymmetricDualsWitness,
    /// A trace pairing needed by a constructor is degenerate.
    TraceFormDegenerate,
    /// The chosen witness fails an action axiom it was required to satisfy.
    WitnessIncompatible(String),
    /// A degree or word-dimension guard was exceeded.
    DegreeCap(String),
    /// Internal consistency failure; indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidCharacteristic(c) => write!(f, "invalid characteristic {c}"),
            Error::NotAField(why) => write!(f, "not a field: {why}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::FieldMismatch(why) => write!(f, "field mismatch: {why}"),
            Error::NoSolution => write!(f, "linear system has no solution"),
            Error::NoSymmetricDualsWitness => write!(f, "no symmetric-duals witness"),
            Error::TraceFormDegenerate => write!(f, "trace form degenerate"),
            Error::WitnessIncompatible(why) => write!(f, "witness incompatible: {why}"),
            Error::DegreeCap(why) => write!(f, "degree cap: {why}"),
            Error::Internal(why) => write!(f, "internal error: {why}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
