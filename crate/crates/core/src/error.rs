use alloc::string::String;

use thiserror::Error;

use crate::arrangement::Subset;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial is not divisible")]
    NotDivisible,

    #[error("arrangement is not generic: hyperplanes {0} meet outside the origin")]
    NotGeneric(Subset),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("operator #{index} is not in D^({order})(A)")]
    NotInDmA { index: usize, order: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("(n, r, m) = ({n}, {r}, {m}) is not a free case")]
    NotFree { n: usize, r: usize, m: usize },

    #[error("could not find a generic extension after {attempts} attempts")]
    ExtensionFailed { attempts: usize },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
