//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at hbar = 0")]
    PoleAtZero,
    #[error("numeric inverse failed: {0}")]
    SingularInverse(String),
    #[error("element of the central subalgebra K(t,rho)[A] is not invertible")]
    NonInvertibleCentral,
    #[error("matrix entries do not pairwise commute")]
    NonCommutingEntries,
    #[error("determinant is zero")]
    SingularDeterminant,
    #[error("cannot invert: {0}")]
    CannotInvert(String),
    #[error("zero denominator in fraction")]
    ZeroDenominator,
    #[error("irregular test function: {0}")]
    IrregularTestFunction(String),
    #[error("direction vector is not a unit vector")]
    NonUnitVector,
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("parse error at byte {offset}: expected {}", expected.join(", "))]
    Parse { offset: usize, expected: Vec<String> },
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
