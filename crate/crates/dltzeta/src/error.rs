//! Crate-wide error type with stable machine-readable codes.

use thiserror::Error;

/// A single validation violation: the offending field and the rule it breaks.
///
/// Violations are data, not failures; `model::validate` returns a list of
/// them and never aborts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent denominator {den} does not divide the extension index {r}")]
    ExponentDenominator { den: i64, r: u32 },

    #[error("no value supplied for symbol [{0}]")]
    MissingSymbol(String),

    #[error("L-value {value} has no rational {r}-th root required by fractional exponents")]
    IrrationalRoot { value: String, r: u32 },

    #[error("zero base raised to a negative power")]
    ZeroToNegativePower,

    #[error("forbidden divisor data: (N, v) = (0, 0)")]
    ForbiddenZeroPair,

    #[error("series expansion requires every factor to have N > 0 (s-free factor with v = {v} remains)")]
    ConstantFactorInSeries { v: String },

    #[error("expression has fractional exponents; specialization needs integral data")]
    FractionalExponent,

    #[error("model failed validation:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<Violation>),

    #[error("model file error: {0}")]
    Schema(String),

    #[error("wrong model kind: expected {expected}, found {found}")]
    Kind { expected: String, found: String },

    #[error("payload not specializable: {0}")]
    Specialize(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("enumeration budget exceeded: level {level} needs {needed} tuples, budget is {budget}")]
    Budget { level: u32, needed: String, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "E_PARSE",
            Error::ExponentDenominator { .. } => "E_EXPONENT",
            Error::MissingSymbol(_) => "E_MISSING_SYMBOL",
            Error::IrrationalRoot { .. } => "E_IRRATIONAL_ROOT",
            Error::ZeroToNegativePower => "E_ZERO_POWER",
            Error::ForbiddenZeroPair => "E_ZERO_PAIR",
            Error::ConstantFactorInSeries { .. } => "E_CONST_FACTOR",
            Error::FractionalExponent => "E_FRACTIONAL",
            Error::Validation(_) => "E_VALIDATION",
            Error::Schema(_) => "E_SCHEMA",
            Error::Kind { .. } => "E_KIND",
            Error::Specialize(_) => "E_SPECIALIZE",
            Error::Domain(_) => "E_DOMAIN",
            Error::InvalidFan(_) => "E_FAN",
            Error::InvalidCone(_) => "E_CONE",
            Error::Budget { .. } => "E_BUDGET",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
