use alloc::string::String;
use core::fmt;

use crate::halfint::HalfInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A character used as a representation has a negative coefficient.
    NegativeCoefficient { exponent: HalfInt },
    /// A spinor character was requested for an empty list of torus weights.
    EmptySpinor,
    /// `resolve_character` was asked for a λ-power the case does not declare.
    LambdaNotDeclared { case: String, lambda: u32 },
    /// The exponent divisor does not divide a weight with nonzero coefficient.
    IndivisibleWeight { exponent: HalfInt, divisor: u32 },
    /// Relation generation needs integer exponents.
    HalfIntegerExponent { exponent: HalfInt },
    /// An Adams multiplier is zero or not coprime to the prime.
    NotCoprime { k: i64, prime: u64 },
    /// A relation exponent is not divisible by the rescaling divisor.
    IndivisibleRelation { provenance: String, exponent: i64, divisor: u32 },
    /// A case failed validation; `path` names the offending field.
    InvalidCase { path: String, message: String },
    /// A relation refers to a generator outside the matrix window.
    OutsideWindow { provenance: String, exponent: i64 },
    /// The requested multiple of the target is not in the row span.
    NotInSpan,
    /// Malformed textual input.
    Parse { position: usize, message: String },
    UnknownCase(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeCoefficient { exponent } => {
                write!(f, "not a character: negative coefficient at exponent {exponent}")
            }
            Error::EmptySpinor => f.write_str("spinor character needs at least one torus weight"),
            Error::LambdaNotDeclared { case, lambda } => {
                write!(f, "case {case} does not declare lambda power {lambda}")
            }
            Error::IndivisibleWeight { exponent, divisor } => {
                write!(f, "exponent divisor {divisor} does not divide weight {exponent}")
            }
            Error::HalfIntegerExponent { exponent } => {
                write!(f, "unresolved half-integer exponent {exponent}")
            }
            Error::NotCoprime { k, prime } => {
                write!(f, "Adams multiplier k={k} shares factor with p={prime}")
            }
            Error::IndivisibleRelation { provenance, exponent, divisor } => write!(
                f,
                "relation `{provenance}`: exponent {exponent} is not divisible by {divisor}"
            ),
            Error::InvalidCase { path, message } => write!(f, "{path}: {message}"),
            Error::OutsideWindow { provenance, exponent } => write!(
                f,
                "relation `{provenance}` uses t^{exponent} outside the generator window"
            ),
            Error::NotInSpan => f.write_str("requested multiple of the target is not in the row span"),
            Error::Parse { position, message } => write!(f, "parse error at {position}: {message}"),
            Error::UnknownCase(name) => write!(f, "unknown case `{name}`"),
        }
    }
}

impl core::error::Error for Error {}
