use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart mismatch: operands live on different charts")]
    ChartMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("order too high: {what} has order {order}, at most {max} allowed")]
    OrderTooHigh { what: String, order: u32, max: u32 },
    #[error("operator not normalized: {0}")]
    NotNormalized(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
