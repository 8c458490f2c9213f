use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element encoding {value} out of range for field of order {order}")]
    InvalidElement { value: u32, order: u32 },
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("bilinear form is degenerate or not symmetric")]
    DegenerateForm,
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("operation requires a non-zero code")]
    ZeroCode,
    #[error("matrix is not a codeword of the code")]
    NotInCode,
    #[error("operation requires a q-matroid (integral rank table)")]
    NotQMatroid,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
