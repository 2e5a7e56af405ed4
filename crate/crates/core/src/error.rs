use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("range error: [{lo}, {hi}] is outside the span ({span_lo}, {span_hi}]")]
    Range {
        lo: f64,
        hi: f64,
        span_lo: f64,
        span_hi: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("inadmissible space: {0}")]
    Spec(String),

    #[error("no closed-form associate space for {0}")]
    UnsupportedDuality(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at `{token}`: expected {rule}")]
    Parse { token: String, rule: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(token: impl Into<String>, rule: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            rule: rule.into(),
        }
    }
}
