use thiserror::Error;

/// Errors raised by constructions and solvers in this crate.
///
/// Axiom violations found by the `verify_*` / `validate_*` checkers are not
/// errors; they are returned as [`crate::report::Report`] data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("validation error: {what} (witness {witness:?})")]
    Validation { what: String, witness: Vec<usize> },

    #[error("size error: {what} is {size}, cap is {cap}")]
    Size {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("containment error: {0}")]
    Containment(String),

    #[error("not an exact factorization: |G|={g}, |Gamma|={gamma}, |G ∩ Gamma|={intersection}, |Sigma|={sigma}")]
    Factorization {
        g: usize,
        gamma: usize,
        intersection: usize,
        sigma: usize,
    },

    #[error("axiom error: {0}")]
    Axiom(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("splitting error: {0}")]
    Splitting(String),

    #[error("rigidity error: {0}")]
    Rigidity(String),

    #[error("subring error: {0}")]
    Subring(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("isomorphism search undecided after {nodes} nodes")]
    Timeout { nodes: u64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(what: impl Into<String>, witness: Vec<usize>) -> Self {
        Error::Validation {
            what: what.into(),
            witness,
        }
    }
}
