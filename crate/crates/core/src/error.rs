use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpectraError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectraError {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("structural error: {what} vanishes at index {index}")]
    Structural { what: &'static str, index: usize },

    #[error("continued fraction hit a pole at level {level}")]
    PoleProximity { level: usize },

    #[error("degenerate terminator: b_inf = 0")]
    DegenerateTerminator,

    #[error("imaginary basis parameter: m² + Ĉ {sign} C = {radicand} < 0 for m = {m}")]
    ImaginaryParameter { m: i32, sign: char, radicand: f64 },

    #[error("no bound states: {0}")]
    NoBoundStates(String),

    #[error("quantum numbers (n = {n}, m = {m}) not admitted: {reason}")]
    QuantumNumber { n: usize, m: i32, reason: String },

    #[error("no bound state below the barrier for (n = {n}, m = {m}): |γ + ½| = {lhs} < ζ|b| = {rhs}")]
    BelowBarrier { n: usize, m: i32, lhs: f64, rhs: f64 },

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

impl SpectraError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SpectraError::ParameterDomain(msg.into())
    }

    /// True for failures caused by floating-point breakdown rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, SpectraError::PoleProximity { .. } | SpectraError::NonFinite(_))
    }
}
