use thiserror::Error;

use super::{Sort, TypeTag};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {message}")]
    Malformed { line: usize, col: usize, message: String },
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("the equality symbol `=` is built in and cannot be redeclared")]
    RedeclaredEquality,
    #[error("{kind} must have type agt or obj")]
    SortRequired { kind: &'static str },
    #[error("`{0}` is a reserved identifier")]
    Reserved(String),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("type violation: argument {position} of `{symbol}` has type {found}, and {found} ⪯ {expected} fails")]
    TypeViolation {
        symbol: String,
        position: usize,
        found: Sort,
        expected: TypeTag,
    },
    #[error("modal index must have type agt (found {0})")]
    ModalIndex(Sort),
    #[error("`{0}` is not a variable")]
    NotAVariable(String),
    #[error("cannot substitute a term of type {term} for `{var}` of type {var_sort}")]
    TypeMismatch { var: String, var_sort: Sort, term: Sort },
    #[error("capture risk: `{0}` occurs in the substituted term and is bound in the formula")]
    CaptureRisk(String),
}
