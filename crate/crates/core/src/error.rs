use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A raw table or map failed a structural check.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("size bound exceeded: {what} has size {size}, bound is {bound}")]
    Size {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("scale error: {0}")]
    Scale(String),

    /// A floating-point step could not be certified at the configured tolerance.
    #[error("numeric certification failed: {0}")]
    Certification(String),

    /// Two independent routes disagreed on a statement that must hold.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
