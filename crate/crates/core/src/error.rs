use thiserror::Error;

/// Errors raised by the (q,w)-calculus routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QwError {
    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid drag parameters: {0}")]
    InvalidDrag(String),

    /// The stopping rule did not fire before `max_terms` terms or factors.
    #[error("no convergence within {max_terms} terms")]
    NonConvergent { max_terms: usize },

    /// Factor `index` of a q-shifted factorial vanishes, so the product is zero.
    #[error("factor {index} of the q-shifted factorial vanishes")]
    ZeroFactor { index: usize },

    /// The deformed exponential has a pole: factor `index` of its defining product vanishes.
    #[error("pole of the (q,w)-exponential (factor {index} vanishes)")]
    PoleEncountered { index: usize },

    #[error("|x|(1-q) = {scaled} is outside the radius of convergence of e_q")]
    OutOfRadius { scaled: f64 },

    #[error("overflow while evaluating {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, QwError>;
