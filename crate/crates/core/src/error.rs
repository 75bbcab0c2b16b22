use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("bad prior: {0}")]
    BadPrior(String),
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("infeasible scheme: type {type_index} carries total mass {mass} > 1")]
    InfeasibleScheme { type_index: usize, mass: String },
    #[error("signal has zero probability")]
    ZeroProbabilitySignal,
    #[error("malformed LP: {0}")]
    MalformedProblem(String),
    #[error("numerically unstable: {0}")]
    NumericallyUnstable(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("LP solution is not optimal")]
    NotOptimal,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("unsupported signal: {0}")]
    UnsupportedSignal(String),
    #[error("bad k = {0}: expected an even integer >= 2")]
    BadK(i64),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}
