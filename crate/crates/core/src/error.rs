use thiserror::Error;

use crate::scalar::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: expected an odd prime below 2^32")]
    InvalidModulus(u64),

    #[error("invalid field tag {0:?}: expected \"Q\" or \"Fp:<p>\"")]
    BadField(String),

    #[error("invalid scalar {0:?}")]
    BadScalar(String),

    #[error("reduction mod {prime} undefined (a denominator is divisible by {prime}); choose a different prime")]
    BadReduction { prime: u64 },

    #[error("cannot move data from field {from} to field {to}")]
    ModulusConflict { from: Field, to: Field },

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("basis matrices are linearly dependent")]
    DependentBasis,

    #[error("matrix space needs at least one basis matrix")]
    EmptyBasis,

    #[error("matrix is singular")]
    Singular,

    #[error("evaluation point is zero")]
    ZeroPoint,

    #[error("rank-2 procedure inapplicable: generic rank is {0}")]
    RankTooLarge(usize),

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("operation requires a prime field")]
    NotPrimeField,

    #[error("symbolic minors refused at this size ({0}); pass --force to override")]
    DeskScaleExceeded(String),

    #[error("invalid bracket: {0}")]
    BadBracket(String),

    #[error("invalid representation: {0}")]
    BadRepresentation(String),

    #[error("negative degree {0}: bundle is not generated by global sections")]
    NegativeDegree(i64),

    #[error("correspondence check failed: {0}")]
    CorrespondenceViolated(String),

    #[error("no point of the field attains the generic rank {0}")]
    RankUnattained(usize),

    #[error("at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}
