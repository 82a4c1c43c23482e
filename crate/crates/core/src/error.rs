use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("square class of zero undefined")]
    ZeroSquareClass,
    #[error("square class not computable: {0}")]
    SquareClassTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero polynomial: {0}")]
    ZeroPolynomial(&'static str),
    #[error("polynomial precondition failed: {0}")]
    PolyPrecondition(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("bilinear space precondition failed: {0}")]
    Space(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("cyclic vector required: {0}")]
    NotCyclic(String),
    #[error("synthesis precondition failed: {0}")]
    Synthesis(String),
    #[error("spinor norm precondition failed: {0}")]
    Spinor(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("eigenvalues outside field: {0}")]
    EigenvaluesOutsideField(String),
    #[error("infeasible Jordan form: {0}")]
    InfeasibleJordan(String),
    #[error("invalid Jordan specification: {0}")]
    JordanSpec(String),
    #[error("lattice precondition failed: {0}")]
    Lattice(String),
}
