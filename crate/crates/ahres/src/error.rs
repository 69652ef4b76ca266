//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, AhError>;

#[derive(Debug, Error)]
pub enum AhError {
    /// A coordinate or parameter left its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration rejected before any numerics ran.
    #[error("validation error: {0}")]
    Validation(String),

    /// A matrix factorization or iteration failed.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An operand touched the branch cut of the principal square root.
    #[error("branch error: {0}")]
    Branch(String),

    /// A certified construction (phase weight, absorber) could not satisfy
    /// its defining inequality; carries the violating sample.
    #[error("construction error: {0}")]
    Construction(String),

    /// Linear solve hit a singular-to-tolerance matrix. Carries the condition
    /// estimate; near a resonance this is expected and informative.
    #[error("matrix singular to tolerance (condition estimate {cond:.3e}); likely near a pole")]
    NearPole { cond: f64 },

    #[error("evaluation produced a non-finite value: {0}")]
    NonFinite(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error at `{pointer}`: {message}")]
    ConfigParse { pointer: String, message: String },
}

impl AhError {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            AhError::Validation(_) | AhError::ConfigParse { .. } => 2,
            _ => 1,
        }
    }
}
