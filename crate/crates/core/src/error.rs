use thiserror::Error;

use crate::differential::ValidationReport;
use crate::transform::TransformKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("differential is not valid: {0}")]
    InvalidDifferential(ValidationReport),

    #[error("invalid {kind} transform: {reason}")]
    InvalidTransform { kind: TransformKind, reason: String },

    #[error("operands live on different triples")]
    TripleMismatch,

    #[error("operands use different coefficient fields")]
    FieldMismatch,

    #[error("conjugation leaves the admissible class: {0}")]
    LeavesClass(ValidationReport),

    #[error("input is not {0}")]
    WrongForm(&'static str),

    #[error("index set is not closed under the differential (element `{0}` maps outside)")]
    NotClosed(String),

    #[error("bad index window ({n}, {m}] for {len} elements")]
    BadWindow { m: usize, n: usize, len: usize },

    #[error("entry ({boundary}, {interior}) cannot be classified")]
    Unclassifiable { interior: String, boundary: String },

    #[error("elimination contract violated: {0}")]
    ContractViolation(String),

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("no admissible differential found after {0} attempts")]
    RetryBudgetExhausted(usize),

    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("# precondition violated: {0}")]
    Sharp(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("malformed witness: {0}")]
    Witness(String),
}

impl Error {
    /// True for failures that indicate a defect in the library rather than in its input.
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::Integrity(_) | Error::ContractViolation(_))
    }
}
