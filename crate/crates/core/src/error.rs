use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar has {0} graded terms; only monomials are invertible")]
    NonMonomial(usize),
    #[error("negative determinant with non-integral twist exponent {0}")]
    NegativeDetFractionalPower(String),
    #[error("twist exponent {exponent} needs an irrational root of {det}")]
    IrrationalRoot { det: String, exponent: String },
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(i64, i64),
    #[error("twist mismatch: {0} vs {1}")]
    TwistMismatch(String, String),
    #[error("omega needs a sign structure (+ or -)")]
    UnspecifiedSignStructure,
    #[error("K-type {0} lies outside the discrete series of weight {1}")]
    NotInDiscreteSeries(i64, i64),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("determinant must be positive")]
    NonPositiveDet,
    #[error("finite-difference extrapolation diverged at step {0}")]
    StepTooLarge(f64),
    #[error("eta product is not a q-integral cusp form: {0}")]
    NonIntegralExpansion(String),
    #[error("target accuracy unreachable at Im(tau) = {imag}; {required} terms needed, {available} stored")]
    AccuracyUnreachable { imag: f64, required: usize, available: usize },
    #[error("need {needed} coefficients, only {available} stored")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("prime {p} divides the level {level}")]
    LevelNotCoprime { p: u64, level: u64 },
    #[error("form is not cuspidal, cannot integrate to a cusp")]
    NonCuspidalAtCusp,
    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,
    #[error("matrix {0:?} is not in the group")]
    NotInGroup([i64; 4]),
    #[error("generator set is not closed under omega-conjugation")]
    NotOmegaStable,
    #[error("form has non-real coefficients; parity operations need real ones")]
    NonRealCoefficients,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
